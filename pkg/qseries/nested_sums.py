"""
Direct Nested Series
f_q, zeta_q and q-polylogarithms summed inside their convergence regions
"""

import logging
from typing import Any, Callable, List, Sequence

from mpmath import mp, mpc, mpf

from models.data_models import EvalMethod, EvalResult, QParam, SeriesConfig, make_svec
from models.errors import ConvergenceRegionError, DomainError
from qcore.arithmetic import precision_scope

logger = logging.getLogger(__name__)


# ==================== TRUNCATION ====================

class TailMonitor:
    """
    Stopping rule for an outer sum whose terms decay like rho^k.
    The observed term ratio replaces rho while the sequence is still in its transient.
    """

    def __init__(self, rho: Any, tol: Any, depth: int = 1):
        self.rho = mpf(rho)
        self.tol = mpf(tol)
        if self.rho < 1:
            self.k_min = depth + int(mp.ceil(2 / (1 - self.rho))) + 1
        else:
            self.k_min = None
        self.previous = None
        self.bound = mp.inf

    def done(self, k: int, term: Any) -> bool:
        size = abs(term)
        if self.previous is None or self.previous == 0:
            ratio = self.rho if size == 0 else None
        else:
            ratio = max(self.rho, size / self.previous)
        self.previous = size
        if ratio is None or ratio >= 1:
            self.bound = mp.inf
            return False
        self.bound = 2 * size * ratio / (1 - ratio)
        return self.k_min is not None and k >= self.k_min and self.bound < self.tol / 2


def nested_series(
    level_terms: Callable[[int], Sequence[mpc]],
    depth: int,
    rho: Any,
    cfg: SeriesConfig,
    method: EvalMethod = EvalMethod.DIRECT
) -> EvalResult:
    """
    Sum over 0 < k_1 < ... < k_d of prod_j a_j(k_j), where level_terms(k) = [a_1(k), ..., a_d(k)].

    S[j] holds the depth-j partial sum; one pass per k updates the levels top-down,
    so the whole evaluation costs O(d N).
    """
    partial: List[mpc] = [mpc(1)] + [mpc(0)] * depth
    monitor = TailMonitor(rho, cfg.tol, depth)
    for k in range(1, cfg.max_terms + 1):
        a = level_terms(k)
        term = a[depth - 1] * partial[depth - 1]
        for j in range(depth, 0, -1):
            partial[j] += a[j - 1] * partial[j - 1]
        if monitor.done(k, term):
            logger.debug("nested series converged after %d terms (tail %s)", k, mp.nstr(monitor.bound, 5))
            return EvalResult(
                value=partial[depth], error_bound=monitor.bound, terms_used=k, method=method
            )
    logger.warning(
        "nested series hit max_terms=%d with tail estimate %s", cfg.max_terms, mp.nstr(monitor.bound, 5)
    )
    return EvalResult(
        value=partial[depth],
        error_bound=monitor.bound,
        terms_used=cfg.max_terms,
        truncated=True,
        method=method
    )


# ==================== TELESCOPED PRODUCT ====================

def telescoped_product(xs: Sequence[Any]) -> mpc:
    """Closed form of sum_{0<k_1<...<k_d} prod x_j^{k_j}: prod_j y_j/(1 - y_j), y_j = x_j ... x_d"""
    value = mpc(1)
    y = mpc(1)
    for x in reversed([mpc(x) for x in xs]):
        y = y * x
        value = value * y / (1 - y)
    return value


def nested_geometric_sum(xs: Sequence[Any], cfg: SeriesConfig) -> EvalResult:
    """The same sum evaluated term by term"""
    xs = [mpc(x) for x in xs]
    tails = _tail_products(xs)
    if any(abs(y) >= 1 for y in tails):
        raise ConvergenceRegionError("nested geometric sum needs |x_j ... x_d| < 1 for every j")
    return nested_series(lambda k: [x ** k for x in xs], len(xs), max(abs(y) for y in tails), cfg)


def _tail_products(xs: Sequence[mpc]) -> List[mpc]:
    out: List[mpc] = []
    y = mpc(1)
    for x in reversed(xs):
        y = y * x
        out.append(y)
    return list(reversed(out))


# ==================== f_q AND zeta_q ====================

def fq_direct(s: Sequence[Any], t: Sequence[Any], qp: QParam, cfg: SeriesConfig) -> EvalResult:
    """
    f_q(s; t) = sum_{0<k_1<...<k_d} q^{k_1 t_1 + ... + k_d t_d} / prod [k_j]^{s_j}.
    Requires Re(t_j + ... + t_d) > 0 for every j.
    """
    with precision_scope(qp):
        s = make_svec(s)
        t = make_svec(t)
        if len(s) != len(t):
            raise DomainError(f"depth mismatch: s has {len(s)} entries, t has {len(t)}")
        d = len(s)
        tails = [sum(t[j:], mpc(0)) for j in range(d)]
        for j, tail in enumerate(tails):
            if not tail.real > 0:
                raise ConvergenceRegionError(
                    f"f_q series diverges: Re(t_{j + 1} + ... + t_{d}) = {mp.nstr(tail.real, 8)} <= 0"
                )
        if all(x == 0 for x in s):
            value = mpc(1)
            for tail in tails:
                value *= mp.exp(tail * qp.log_q) / (-mp.expm1(tail * qp.log_q))
            return EvalResult(value=value, error_bound=0, terms_used=0, method=EvalMethod.DIRECT)

        log_q = qp.log_q
        log_one_minus_q = mp.log(1 - qp.q)
        rho = mp.exp(min(tail.real for tail in tails) * log_q)

        def level_terms(k: int) -> List[mpc]:
            log_bracket = mp.log(-mp.expm1(k * log_q)) - log_one_minus_q
            return [mp.exp(k * tj * log_q - sj * log_bracket) for sj, tj in zip(s, t)]

        return nested_series(level_terms, d, rho, cfg)


def qzeta_direct(s: Sequence[Any], qp: QParam, cfg: SeriesConfig) -> EvalResult:
    """zeta_q(s) = f_q(s; s - 1), requires Re(s_j + ... + s_d) > d - j + 1"""
    with precision_scope(qp):
        s = make_svec(s)
        d = len(s)
        for j in range(d):
            if not sum(s[j:], mpc(0)).real > d - j:
                raise ConvergenceRegionError(
                    f"zeta_q series diverges: Re(s_{j + 1} + ... + s_{d}) must exceed {d - j}"
                )
        return fq_direct(s, [x - 1 for x in s], qp, cfg)


# ==================== q-POLYLOGARITHMS ====================

def qpolylog_direct(
    n: Sequence[int], z: Sequence[Any], qp: QParam, cfg: SeriesConfig
) -> EvalResult:
    """Li_{q;n}(z) = sum_{0<k_1<...<k_d} prod z_j^{k_j} / [k_j]^{n_j} on the open polydisc"""
    with precision_scope(qp):
        z = make_svec(z)
        n = [int(x) for x in n]
        if len(n) != len(z):
            raise DomainError(f"depth mismatch: {len(n)} weights, {len(z)} arguments")
        if any(x < 1 for x in n):
            raise DomainError(f"polylog weights must be positive integers, got {n}")
        for j, zj in enumerate(z):
            if not abs(zj) < 1:
                raise ConvergenceRegionError(f"|z_{j + 1}| = {mp.nstr(abs(zj), 8)} is not < 1")
        rho = max(abs(y) for y in _tail_products(list(z)))
        one_minus_q = 1 - qp.q
        log_q = qp.log_q

        def level_terms(k: int) -> List[mpc]:
            bracket = -mp.expm1(k * log_q) / one_minus_q
            return [zj ** k / bracket ** nj for zj, nj in zip(z, n)]

        return nested_series(level_terms, len(z), rho, cfg)
