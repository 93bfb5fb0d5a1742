"""
Pole Set Membership
Classifies exponent vectors against the hyperplanes where zeta_q has simple poles
"""

import logging
from typing import Any, Dict, List, Optional, Sequence, Tuple

from mpmath import mp, mpc, mpf

from models.data_models import PoleCondition, PoleReport, QParam, make_svec
from qcore.arithmetic import precision_scope

logger = logging.getLogger(__name__)


def lattice_spacing(qp: QParam) -> mpf:
    """Spacing 2 pi / |log q| of the imaginary period lattice of q^s"""
    return 2 * mp.pi / abs(qp.log_q)


def _nearest(x: mpc, spacing: mpf, real_cap: int, nonzero_imag: bool) -> Tuple[int, int, mpf]:
    """Nearest point m + i n spacing with m <= real_cap (and n != 0 when asked)"""
    m = min(int(mp.nint(x.real)), real_cap)
    n = int(mp.nint(x.imag / spacing))
    if nonzero_imag and n == 0:
        n = 1 if x.imag >= 0 else -1
    distance = abs(x - mpc(m, n * spacing))
    return m, n, distance


def _candidates(s: Sequence[mpc], spacing: mpf) -> List[Tuple[PoleCondition, int, Tuple[int, int], mpf]]:
    d = len(s)
    out = []
    # s_d in 1 + lattice
    n = int(mp.nint(s[-1].imag / spacing))
    out.append((PoleCondition.LAST_AT_ONE, d, (1, n), abs(s[-1] - mpc(1, n * spacing))))
    # s_d in Z_{<=0} + nonzero lattice
    m, n, dist = _nearest(s[-1], spacing, 0, True)
    out.append((PoleCondition.LAST_NONPOSITIVE_SHIFTED, d, (m, n), dist))
    # s_j + ... + s_d in Z_{<= d-j+1} + lattice, j < d
    for j in range(d - 1):
        partial = sum(s[j:], mpc(0))
        m, n, dist = _nearest(partial, spacing, d - j, False)
        out.append((PoleCondition.PARTIAL_SUM_INTEGER, j + 1, (m, n), dist))
    return out


def pole_report(s: Sequence[Any], qp: QParam) -> PoleReport:
    """
    Distance from s to the pole set of zeta_q and the nearest matching condition.

    A point is in the set when its distance falls below qp.threshold in the
    relevant linear functional; the reported distance is the minimum over all conditions.
    """
    with precision_scope(qp):
        vec = make_svec(s)
        candidates = _candidates(vec, lattice_spacing(qp))
        condition, index, witness, distance = min(candidates, key=lambda c: c[3])
        threshold = qp.threshold
        if distance < threshold:
            logger.debug("point %s on pole set: %s (j=%d, witness=%s)", vec, condition.value, index, witness)
            return PoleReport(
                in_pole_set=True,
                matched_condition=condition,
                index=index,
                witness=witness,
                distance=distance,
                threshold=threshold
            )
        return PoleReport(in_pole_set=False, distance=distance, threshold=threshold)


def polylog_singularity(z: Sequence[Any], qp: QParam) -> Optional[Dict[str, int]]:
    """Witness {j, m} with z_j ... z_d = q^{-m}, or None when z avoids the singular set"""
    with precision_scope(qp):
        vec = make_svec(z)
        tail = mpc(1)
        for j in range(len(vec) - 1, -1, -1):
            tail = tail * vec[j]
            if tail == 0:
                continue
            m = int(mp.nint((-mp.log(tail) / qp.log_q).real))
            if m >= 0 and abs(1 - tail * mp.exp(m * qp.log_q)) < qp.threshold:
                return {"j": j + 1, "m": m}
        return None
