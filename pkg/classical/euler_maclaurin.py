"""
Euler-Maclaurin Oracles
Riemann zeta and Euler-Zagier multiple zeta values at q = 1
"""

import logging
from fractions import Fraction
from typing import Any, Callable, List, Optional, Sequence, Tuple

from mpmath import mp, mpc, mpf

from config.settings import get_settings
from models.data_models import EvalMethod, EvalResult, SeriesConfig, SVec, make_svec
from models.errors import DomainError, PoleError
from qcore.arithmetic import pochhammer, to_cvalue
from qcore.bernoulli import bernoulli, bernoulli_poly_coeffs

logger = logging.getLogger(__name__)


def _frac(value: Fraction) -> mpf:
    return mpf(value.numerator) / value.denominator


def _working_digits(precision: Optional[int]) -> int:
    settings = get_settings()
    return (precision or settings.precision) + settings.guard_digits


def _tolerance(cfg: Optional[SeriesConfig]) -> mpf:
    return mpf(cfg.tol if cfg is not None else get_settings().tol)


def _near_integer(x: mpc) -> Optional[int]:
    eps = mpf(10) ** (-mp.dps // 2)
    n = int(mp.nint(x.real))
    if abs(x - n) < eps:
        return n
    return None


# ==================== REMAINDER INTEGRAL ====================

def _remainder_sum(
    s: mpc,
    M: int,
    start: int,
    weight: Callable[[int], mpc],
    tol: mpf,
    cap: int
) -> Tuple[mpc, mpf]:
    """
    sum_{n >= start} w(n) int_n^{n+1} B_{M+1}({x}) x^{-s-M-1} dx, one unit interval at a time.

    Stops once the bound 4 (M+1)!/(2 pi)^{M+1} |w(n)| n^{-sigma-M}/(sigma+M) on what is left,
    scaled by |(s)_{M+1}|/(M+1)!, falls below tol/10. Returns the sum and that bound.
    """
    coeffs = [_frac(c) for c in bernoulli_poly_coeffs(M + 1)]
    exponent = -s - M - 1
    sigma = s.real
    scale = abs(pochhammer(s, M + 1)) * 4 / (2 * mp.pi) ** (M + 1)
    total = mpc(0)
    remaining = mp.inf
    n = start
    while n < start + cap:
        w = weight(n)
        remaining = scale * abs(w) * mpf(n) ** (-sigma - M) / (sigma + M)
        if remaining < tol / 10:
            break
        piece = mp.quad(
            lambda u: mp.polyval(coeffs, u) * (n + u) ** exponent, [0, 1], method="gauss-legendre"
        )
        total += w * piece
        n += 1
    logger.debug("remainder integral used %d unit intervals from %d", n - start, start)
    return total, remaining


# ==================== RIEMANN ZETA ====================

def riemann_zeta(
    s: Any,
    M: Optional[int] = None,
    cfg: Optional[SeriesConfig] = None,
    precision: Optional[int] = None
) -> EvalResult:
    """
    zeta(s) by Euler-Maclaurin summation with cutoff K = max(10, ceil|Im s| + precision).

    Raises:
        PoleError: s = 1
        DomainError: M <= 1 + |Re s|
    """
    digits = precision or get_settings().precision
    with mp.workdps(_working_digits(precision)):
        s = to_cvalue(s)
        if s == 1:
            raise PoleError("zeta(s) has its pole at s = 1", witness={"s": 1})
        sigma = s.real
        if M is None:
            M = max(digits, int(mp.ceil(1 + abs(sigma))) + 1)
        if not M > 1 + abs(sigma):
            raise DomainError(f"Euler-Maclaurin order M={M} must exceed 1 + |Re s| = {mp.nstr(1 + abs(sigma), 6)}")
        tol = _tolerance(cfg)
        K = max(10, int(mp.ceil(abs(s.imag))) + digits)

        value = mp.fsum(mpf(n) ** -s for n in range(1, K))
        value += mpf(K) ** (1 - s) / (s - 1) + mpf(K) ** -s / 2
        for r in range(1, M + 1):
            b = bernoulli(r + 1)
            if b == 0:
                continue
            value += _frac(b) / mp.factorial(r + 1) * mp.rf(s, r) * mpf(K) ** (-s - r)

        prefactor = mp.rf(s, M + 1) / mp.factorial(M + 1)
        bound = mpf(0)
        if prefactor != 0:
            cap = cfg.max_terms if cfg is not None else get_settings().max_terms
            tail, remaining = _remainder_sum(s, M, K, lambda n: mpc(1), tol, cap)
            value -= prefactor * tail
            bound = remaining
        return EvalResult(value=value, error_bound=bound, terms_used=K, method=EvalMethod.EULER_MACLAURIN)


# ==================== MULTIPLE ZETA ====================

def classical_pole_condition(s: SVec) -> Optional[str]:
    """Which defining condition of the classical singular set s meets, if any"""
    d = len(s)
    if _near_integer(s[-1]) == 1:
        return "s_d = 1"
    if d >= 2:
        pair = _near_integer(s[-2] + s[-1])
        if pair is not None and (pair in (2, 1, 0) or (pair < 0 and pair % 2 == 0)):
            return f"s_{d - 1} + s_d = {pair}"
    for j in range(d - 2):
        partial = _near_integer(sum(s[j:], mpc(0)))
        if partial is not None and partial <= d - j:
            return f"s_{j + 1} + ... + s_d = {partial}"
    return None


def mzv(
    s: Sequence[Any],
    M: Optional[int] = None,
    cfg: Optional[SeriesConfig] = None,
    precision: Optional[int] = None
) -> EvalResult:
    """
    Euler-Zagier zeta(s_1, ..., s_d) continued to all of C^d minus its singular set.

    Peels off the last variable with Euler-Maclaurin:
        zeta(s) = sum_{r=0}^{M+1} B_r/r! (s_d)_{r-1} zeta(s_1, ..., s_{d-1} + s_d + r - 1)
                  - (s_d)_{M+1}/(M+1)! sum_{n>=1} H(n) int_n^{n+1} B_{M+1}({x}) x^{-s_d-M-1} dx
    where H(n) sums prod_{j<d} k_j^{-s_j} over 0 < k_1 < ... < k_{d-1} <= n.
    """
    with mp.workdps(_working_digits(precision)):
        vec = make_svec([to_cvalue(x) for x in s])
        d = len(vec)
        if d == 1:
            return riemann_zeta(vec[0], M, cfg, precision)
        condition = classical_pole_condition(vec)
        if condition is not None:
            raise PoleError(f"zeta({', '.join(mp.nstr(x, 8) for x in vec)}) is singular: {condition}",
                            witness={"condition": condition})
        last, before = vec[-1], vec[-2]
        bound = 1 + abs(last.real) + abs(before.real)
        if M is None:
            M = int(mp.ceil(bound)) + 6
        if not M > bound:
            raise DomainError(f"Euler-Maclaurin order M={M} must exceed 1 + |Re s_d| + |Re s_(d-1)|")
        tol = _tolerance(cfg)

        value = mpc(0)
        error = mpf(0)
        for r in range(M + 2):
            b = bernoulli(r)
            if b == 0:
                continue
            factor = pochhammer(last, r - 1)
            if factor == 0:
                continue
            inner = vec[:-2] + (before + last + r - 1,)
            sub = mzv(inner, None, cfg, precision)
            weight = _frac(b) / mp.factorial(r) * factor
            value += weight * sub.value
            error += abs(weight) * sub.error_bound

        prefactor = mp.rf(last, M + 1) / mp.factorial(M + 1)
        if prefactor != 0:
            head = vec[:-1]
            partial: List[mpc] = [mpc(1)] + [mpc(0)] * len(head)
            reached = [0]

            def harmonic(n: int) -> mpc:
                while reached[0] < n:
                    k = reached[0] + 1
                    for j in range(len(head), 0, -1):
                        partial[j] += mpf(k) ** -head[j - 1] * partial[j - 1]
                    reached[0] = k
                return partial[len(head)]

            cap = cfg.max_terms if cfg is not None else get_settings().max_terms
            tail, remaining = _remainder_sum(last, M, 1, harmonic, tol, cap)
            value -= prefactor * tail
            error += remaining
        return EvalResult(value=value, error_bound=error, terms_used=M + 2, method=EvalMethod.EULER_MACLAURIN)
