"""
Verification Suites
Named identity suites behind `qzeta verify`, run case by case in a fixed order
"""

import logging
import random
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from mpmath import mp, mpf
from pydantic import BaseModel, ConfigDict, Field

from compliance.audit_logging import AuditLogger
from integral_shuffle.verification import lemma_li_shift, verify_product, verify_qshuffle_lemma
from models.data_models import QParam, SeriesConfig, VerificationRecord
from models.errors import DomainError, VerificationError
from qcalculus.iterated import verify_qdiff
from qcalculus.jackson import q_ftc_check
from qseries.nested_sums import qpolylog_direct
from shuffle.series_shuffle import verify_series_shuffle

logger = logging.getLogger(__name__)


class SuiteRequest(BaseModel):
    """Everything a suite needs: parameters, schedules and suite-specific options"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    qp: QParam
    cfg: SeriesConfig
    options: Dict[str, Any] = Field(default_factory=dict)
    seed: int = 0

    def option(self, key: str, default: Any = None) -> Any:
        value = self.options.get(key)
        return default if value is None else value


SuiteFn = Callable[[SuiteRequest], List[VerificationRecord]]
SUITES: Dict[str, SuiteFn] = {}


def register_suite(name: str) -> Callable[[SuiteFn], SuiteFn]:
    def decorator(fn: SuiteFn) -> SuiteFn:
        SUITES[name] = fn
        return fn
    return decorator


def _letters(text: Any) -> List[str]:
    if isinstance(text, (list, tuple)):
        return [str(x) for x in text]
    return [part.strip() for part in str(text).split(",") if part.strip()]


def _ints(text: Any) -> List[int]:
    return [int(x) for x in _letters(text)]


# ==================== SUITES ====================

@register_suite("series-shuffle")
def series_shuffle_suite(request: SuiteRequest) -> List[VerificationRecord]:
    """Given --w1/--w2, one case; otherwise fixed pairs plus seeded random convergent words"""
    if request.options.get("w1") is not None or request.options.get("w2") is not None:
        pairs = [(_letters(request.option("w1", "")), _letters(request.option("w2", "")))]
    else:
        pairs = [(["3"], ["2"]), (["2"], ["2", "3"]), (["3"], ["2", "4"])]
        rng = random.Random(request.seed)
        for _ in range(int(request.option("cases", 2))):
            w1 = [str(rng.randint(2, 4)) for _ in range(rng.randint(1, 2))]
            w2 = [str(rng.randint(2, 4)) for _ in range(rng.randint(1, 2))]
            pairs.append((w1, w2))
    return [
        verify_series_shuffle(w1, w2, request.qp, request.cfg, case_index=i)
        for i, (w1, w2) in enumerate(pairs)
    ]


@register_suite("integral-shuffle")
def integral_shuffle_suite(request: SuiteRequest) -> List[VerificationRecord]:
    m, n = request.option("m"), request.option("n")
    if m is not None or n is not None:
        if m is None or n is None:
            raise DomainError("integral-shuffle needs both --m and --n")
        if int(m) == int(n):
            raise DomainError(f"integral-shuffle needs m != n, got m = n = {m}")
        cases = [(int(m), int(n))]
    else:
        cases = [(2, 3), (3, 2), (2, 5), (4, 3)]
    return [verify_product(a, b, request.qp, request.cfg, case_index=i) for i, (a, b) in enumerate(cases)]


@register_suite("qdiff")
def qdiff_suite(request: SuiteRequest) -> List[VerificationRecord]:
    if request.options.get("n") is not None:
        cases: List[Tuple[List[int], List[str], int]] = [
            (_ints(request.option("n")), _letters(request.option("z", "")), int(request.option("j", 1)))
        ]
    else:
        cases = [([2], ["0.4"], 1), ([1], ["0.4"], 1), ([1, 2], ["0.3", "0.4"], 1),
                 ([2, 1], ["0.3", "0.5"], 2), ([1, 1, 2], ["0.2", "0.5", "0.4"], 2)]
    return [verify_qdiff(n, z, j, request.qp, request.cfg, case_index=i) for i, (n, z, j) in enumerate(cases)]


@register_suite("qftc")
def qftc_suite(request: SuiteRequest) -> List[VerificationRecord]:
    """Seeded (x, q) pairs; even cases use a cubic, odd cases Li_{q;2}"""
    rng = random.Random(request.seed)
    records = []
    for i in range(int(request.option("cases", 6))):
        x = round(rng.uniform(0.1, 0.9), 6)
        q = round(rng.uniform(0.3, 0.9), 6)
        qp = request.qp.with_q(repr(q))
        if i % 2 == 0:
            def f(t: Any) -> Any:
                return t ** 3 - 2 * t + 1
        else:
            def f(t: Any, qp: QParam = qp) -> Any:
                return qpolylog_direct([2], [t], qp, request.cfg).value if t != 0 else 0
        records.append(q_ftc_check(f, x, qp, request.cfg, case_index=i))
    return records


@register_suite("qshuffle-lemma")
def qshuffle_lemma_suite(request: SuiteRequest) -> List[VerificationRecord]:
    upper = mpf(request.option("upper", 1))
    if request.options.get("poles_u") is not None:
        cases: List[Tuple[Sequence[Any], Sequence[Any]]] = [
            (_letters(request.option("poles_u")), _letters(request.option("poles_v", "")))
        ]
    else:
        with mp.workdps(request.qp.dps):
            q = request.qp.q
            cases = [(["2"], ["3"]), (["2"], ["2"]), (["2", "3"], ["4"]), (["2", "5"], ["3", "2.5"]),
                     ([1 / q], [1 / q ** 2]), ([1 / q ** 2, 1 / q], [1 / q])]
    return [
        verify_qshuffle_lemma([mp.mpmathify(a) for a in u], [mp.mpmathify(b) for b in v], upper,
                              request.qp, request.cfg, case_index=i)
        for i, (u, v) in enumerate(cases)
    ]


@register_suite("lemma-li-shift")
def li_shift_suite(request: SuiteRequest) -> List[VerificationRecord]:
    if request.options.get("e") is not None or request.options.get("gamma") is not None:
        cases = [(int(request.option("e", 0)), int(request.option("gamma", 2)))]
    else:
        cases = [(0, 3), (2, 2), (1, 4), (3, 3)]
    return [lemma_li_shift(e, g, request.qp, request.cfg, case_index=i) for i, (e, g) in enumerate(cases)]


# ==================== RUNNER ====================

class VerificationRunner:
    """Runs a suite, audits every record and fails loudly on any residual above tolerance"""

    def __init__(self, audit: Optional[AuditLogger] = None):
        self.audit = audit

    def run(self, name: str, request: SuiteRequest) -> List[VerificationRecord]:
        """
        Raises:
            DomainError: unknown suite
            VerificationError: at least one case failed (records attached)
        """
        if name not in SUITES:
            raise DomainError(f"unknown verification suite '{name}', choose from {', '.join(sorted(SUITES))}")
        with mp.workdps(request.qp.dps):
            records = sorted(SUITES[name](request), key=lambda r: r.case_index)
        failed = [r for r in records if not r.passed]
        for record in records:
            if self.audit is not None:
                self.audit.log_verification(record)
            logger.debug("%s case %d residual %s", name, record.case_index, mp.nstr(record.residual, 5))
        if failed:
            indices = ", ".join(str(r.case_index) for r in failed)
            raise VerificationError(f"{name}: {len(failed)} of {len(records)} cases failed (cases {indices})",
                                    records=records)
        return records
