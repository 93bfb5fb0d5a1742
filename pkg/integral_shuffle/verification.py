"""
Integral q-Shuffle Verification
Both sides of the product theorem, the Li-shift expansion and the Jackson shuffle lemma
"""

import logging
from math import comb
from typing import Any, Dict, List, Sequence, Tuple

from mpmath import mp, mpc, mpf

from continuation.meromorphic import qzeta_eval
from integral_shuffle.coefficients import quasi_shuffles
from integral_shuffle.pieces import Aq, Aq_words, Bq
from models.data_models import QParam, SeriesConfig, VerificationRecord
from models.errors import DomainError
from qcalculus.iterated import DoublePoleForm, PoleForm, pole_clearance, q_iterated
from qcore.arithmetic import precision_scope
from qseries.nested_sums import qpolylog_direct
from qseries.special_series import li_shift_series, xi_q

logger = logging.getLogger(__name__)


def combinatorial_identity(sigma: int, e: int) -> bool:
    """sum_{i=0}^{sigma} C(i+e-1, e-1) == C(sigma+e, e), for e >= 1"""
    if sigma < 0 or e < 1:
        raise DomainError(f"combinatorial identity needs sigma >= 0 and e >= 1, got ({sigma}, {e})")
    return sum(comb(i + e - 1, e - 1) for i in range(sigma + 1)) == comb(sigma + e, e)


# ==================== Li-SHIFT ====================

def lemma_li_shift(e: int, gamma: int, qp: QParam, cfg: SeriesConfig, case_index: int = 0) -> VerificationRecord:
    """
    Li_{q;gamma}(q^{e+gamma}) against
        sum_{i=0}^{gamma-2} (q-1)^i C(i+e, e) zeta_q(gamma-i)
        + (q-1)^{gamma-2} sum_{i=0}^{e} C(e-i+gamma-2, gamma-2) (xi_q(i+1) - xi_q(i)).

    The short remainder (q-1)^{gamma-2} (xi_q(e+1) - xi_q(0)) is reported alongside;
    it agrees only when gamma = 2 or e = 0.
    """
    if e < 0 or gamma < 2:
        raise DomainError(f"Li-shift needs e >= 0 and gamma >= 2, got e={e}, gamma={gamma}")
    with precision_scope(qp):
        q1 = qp.q - 1
        direct = qpolylog_direct([gamma], [mp.exp((e + gamma) * qp.log_q)], qp, cfg)
        head = mpc(0)
        head_error = mpf(0)
        for i in range(gamma - 1):
            z = qzeta_eval((gamma - i,), qp, cfg)
            weight = q1 ** i * comb(i + e, e)
            head += weight * z.value
            head_error += abs(weight) * z.error_bound
        xis = [xi_q(i, qp, cfg) for i in range(e + 2)]
        remainder = mp.fsum(
            comb(e - i + gamma - 2, gamma - 2) * (xis[i + 1].value - xis[i].value) for i in range(e + 1)
        )
        short = li_shift_series(e, qp, cfg)
        rhs = head + q1 ** (gamma - 2) * remainder
        printed = head + q1 ** (gamma - 2) * short.value
        bounds = [direct.error_bound, head_error] + [x.error_bound for x in xis]
        return VerificationRecord(
            name="lemma-li-shift",
            case_index=case_index,
            inputs={"e": e, "gamma": gamma, "q": mp.nstr(qp.q, qp.precision)},
            lhs=direct.value,
            rhs=rhs,
            residual=abs(direct.value - rhs),
            tol=cfg.tol,
            error_bound=mp.fsum(bounds),
            terms={
                "zeta_part": head,
                "xi_remainder": remainder,
                "short_remainder": short.value,
                "short_form_residual": abs(direct.value - printed),
            },
            notes=[] if gamma == 2 or e == 0 else ["short remainder form differs for gamma > 2 and e > 0"],
        )


# ==================== PRODUCT THEOREM ====================

def verify_product(m: int, n: int, qp: QParam, cfg: SeriesConfig, case_index: int = 0) -> VerificationRecord:
    """zeta_q(m) zeta_q(n) - A_q(m,n) - A_q(n,m) - B_q(m,n), with every piece retained"""
    if m == n:
        raise DomainError(f"the integral shuffle product needs m != n, got m = n = {m}")
    if m < 2 or n < 2:
        raise DomainError(f"the integral shuffle product needs m, n >= 2, got ({m}, {n})")
    with precision_scope(qp):
        zm = qzeta_eval((m,), qp, cfg)
        zn = qzeta_eval((n,), qp, cfg)
        a_mn = Aq(m, n, qp, cfg)
        a_nm = Aq(n, m, qp, cfg)
        b_mn = Bq(m, n, qp, cfg)
        words_mn = Aq_words(m, n, qp, cfg)
        words_nm = Aq_words(n, m, qp, cfg)
        lhs = zm.value * zn.value
        rhs = a_mn.value + a_nm.value + b_mn.value
        logger.debug("product (%d,%d): lhs %s rhs %s", m, n, mp.nstr(lhs, 12), mp.nstr(rhs, 12))
        return VerificationRecord(
            name="integral-shuffle",
            case_index=case_index,
            inputs={"m": m, "n": n, "q": mp.nstr(qp.q, qp.precision)},
            lhs=lhs,
            rhs=rhs,
            residual=abs(lhs - rhs),
            tol=cfg.tol,
            error_bound=(a_mn.error_bound + a_nm.error_bound + b_mn.error_bound
                         + abs(zm.value) * zn.error_bound + abs(zn.value) * zm.error_bound),
            terms={
                "zeta_q(m)": zm.value,
                "zeta_q(n)": zn.value,
                "A_q(m,n)": a_mn.value,
                "A_q(n,m)": a_nm.value,
                "B_q(m,n)": b_mn.value,
                "A_q(m,n) by words": words_mn.value,
                "A_q(n,m) by words": words_nm.value,
                "A_q(m,n) word residual": abs(a_mn.value - words_mn.value),
                "A_q(n,m) word residual": abs(a_nm.value - words_nm.value),
            },
        )


# ==================== JACKSON SHUFFLE LEMMA ====================

FormWord = Tuple[Any, ...]


def _collapse_terms(a: mpc, b: mpc) -> List[Tuple[mpc, Any]]:
    """t d_qt/((t-a)(t-b)) as a combination of single forms"""
    if a == b:
        return [(mpc(1), PoleForm(a=b)), (mpc(1), DoublePoleForm(b=b))]
    inv = 1 / (b - a)
    return [(b * inv, PoleForm(a=b)), (-a * inv, PoleForm(a=a))]


def _expand(merged: Sequence[Tuple], poles_u: Sequence[mpc], poles_v: Sequence[mpc]) -> List[Tuple[mpc, FormWord]]:
    words: List[Tuple[mpc, FormWord]] = [(mpc(1), ())]
    for letter in merged:
        if letter[0] == "u":
            options = [(mpc(1), PoleForm(a=poles_u[letter[1] - 1]))]
        elif letter[0] == "v":
            options = [(mpc(1), PoleForm(a=poles_v[letter[1] - 1]))]
        else:
            options = _collapse_terms(poles_u[letter[1] - 1], poles_v[letter[2] - 1])
        words = [(c * w, word + (form,)) for c, word in words for w, form in options]
    return words


def verify_qshuffle_lemma(
    poles_u: Sequence[Any],
    poles_v: Sequence[Any],
    upper: Any,
    qp: QParam,
    cfg: SeriesConfig,
    case_index: int = 0
) -> VerificationRecord:
    """
    int_0^upper u_1 o ... o u_r times int_0^upper v_1 o ... o v_s, with u_i = d_qt/(t-a_i)
    and v_j = d_qt/(t-b_j), against the sum over quasi-shuffles weighted by (q-1)^c,
    each collapse <u_i, v_j> = t d_qt/((t-a_i)(t-b_j)) split into single forms.
    """
    with precision_scope(qp):
        u = [mpc(a) for a in poles_u]
        v = [mpc(b) for b in poles_v]
        upper = mpf(upper)
        if not (1 <= len(u) <= 3 and 1 <= len(v) <= 3):
            raise DomainError(f"shuffle lemma check supports 1..3 forms per side, got {len(u)} and {len(v)}")
        if upper <= 0:
            raise DomainError(f"upper limit must be positive, got {mp.nstr(upper, 8)}")
        if any(abs(p) <= upper for p in u + v):
            raise DomainError("every pole must lie outside the disc |t| <= upper")

        left = q_iterated([PoleForm(a=a) for a in u], upper, qp, cfg)
        right = q_iterated([PoleForm(a=b) for b in v], upper, qp, cfg)
        lhs = left.value * right.value

        rhs = mpc(0)
        error = abs(left.value) * right.error_bound + abs(right.value) * left.error_bound
        by_collapses: Dict[int, mpc] = {}
        words = 0
        for c, merged in quasi_shuffles(len(u), len(v)):
            weight = (qp.q - 1) ** c
            for coeff, word in _expand(merged, u, v):
                part = q_iterated(list(word), upper, qp, cfg)
                rhs += weight * coeff * part.value
                error += abs(weight * coeff) * part.error_bound
                by_collapses[c] = by_collapses.get(c, mpc(0)) + weight * coeff * part.value
                words += 1

        clearance = pole_clearance([PoleForm(a=p) for p in u + v], upper, qp)
        return VerificationRecord(
            name="qshuffle-lemma",
            case_index=case_index,
            inputs={"poles_u": u, "poles_v": v, "upper": upper, "q": mp.nstr(qp.q, qp.precision)},
            lhs=lhs,
            rhs=rhs,
            residual=abs(lhs - rhs),
            tol=cfg.tol,
            error_bound=error,
            terms={
                "collapses": {str(c): val for c, val in sorted(by_collapses.items())},
                "form_words": words,
                "lattice_clearance": clearance,
            },
            notes=[] if all(abs(p) <= 1 for p in u + v) else ["poles outside the unit disc"],
        )
