"""
Integral q-Shuffle Pieces
A_q, B_q, X_gamma and T^j for zeta_q(m) zeta_q(n) = A_q(m,n) + A_q(n,m) + B_q(m,n)
"""

import logging
from math import comb
from typing import Dict, List, Tuple

from mpmath import mp, mpc, mpf

from continuation.meromorphic import qzeta_eval
from continuation.shifts import shift_expand
from integral_shuffle.coefficients import E_coeff, anchored_coefficient
from models.data_models import EvalMethod, EvalResult, QParam, SeriesConfig
from models.errors import DomainError
from models.zcombo import evaluate_poly
from qcore.arithmetic import precision_scope
from qseries.nested_sums import nested_series
from qseries.special_series import T_series, xi_q
from shuffle.series_shuffle import eval_combo

logger = logging.getLogger(__name__)


class _Accumulator:
    """Running value and error bound over zeta_q sub-evaluations, memoized per call"""

    def __init__(self, qp: QParam, cfg: SeriesConfig):
        self.qp = qp
        self.cfg = cfg
        self.value = mpc(0)
        self.error = mpf(0)
        self.truncated = False
        self._zeta: Dict[Tuple[int, ...], EvalResult] = {}

    def zeta(self, *s: int) -> EvalResult:
        if s not in self._zeta:
            self._zeta[s] = qzeta_eval(s, self.qp, self.cfg)
        return self._zeta[s]

    def add(self, weight, result: EvalResult) -> None:
        self.value += weight * result.value
        self.error += abs(weight) * result.error_bound
        self.truncated = self.truncated or result.truncated

    def result(self) -> EvalResult:
        return EvalResult(value=self.value, error_bound=self.error, terms_used=len(self._zeta),
                          truncated=self.truncated, method=EvalMethod.COMBINATION)


def _check_pair(m: int, n: int) -> None:
    if m < 2 or n < 2:
        raise DomainError(f"integral shuffle needs m, n >= 2, got ({m}, {n})")
    if m == n:
        raise DomainError(f"integral shuffle needs m != n, got m = n = {m}")


# ==================== T^j AND X_gamma ====================

def T_closed(j: int, gamma: int, qp: QParam, cfg: SeriesConfig) -> EvalResult:
    """
    T^j zeta_q(gamma) through zeta_q values and xi_q differences.

    j >= 1: -zeta_q(gamma) + sum_{i=1}^{gamma-2} (q-1)^i C(i+j-1, j-1) zeta_q(gamma-i)/(q^j-1)
            + (q-1)^{gamma-2}/(q^j-1) sum_{i=0}^{j-1} C(j-1-i+gamma-2, gamma-2) (xi_q(i+1) - xi_q(i))
    j = 0:  the defining series
    """
    if gamma < 2:
        raise DomainError(f"T^j zeta_q(gamma) needs gamma >= 2, got {gamma}")
    if j == 0:
        return T_series(0, gamma, qp, cfg)
    if j < 0:
        raise DomainError(f"T^j needs j >= 0, got {j}")
    with precision_scope(qp):
        acc = _Accumulator(qp, cfg)
        q1 = qp.q - 1
        inv = 1 / mp.expm1(j * qp.log_q)
        acc.add(-1, acc.zeta(gamma))
        for i in range(1, gamma - 1):
            acc.add(q1 ** i * comb(i + j - 1, j - 1) * inv, acc.zeta(gamma - i))
        xis = [xi_q(i, qp, cfg) for i in range(j + 1)]
        for i in range(j):
            weight = q1 ** (gamma - 2) * inv * comb(j - 1 - i + gamma - 2, gamma - 2)
            acc.add(weight, xis[i + 1])
            acc.add(-weight, xis[i])
        return acc.result()


def X_gamma(gamma: int, r: int, s: int, qp: QParam, cfg: SeriesConfig) -> EvalResult:
    """
    X_gamma(r, s) = Li_{q;r,gamma}(q^s, q^{gamma-1}) for s >= r >= 1:

    sum_{i=0}^{r-1} (q-1)^i C(i+s-r, s-r) zeta_q(r-i, gamma)
    + (q-1)^r sum_{j=0}^{s-r} C(s-j-1, r-1) T^j zeta_q(gamma)
    """
    if gamma < 2:
        raise DomainError(f"X_gamma needs gamma >= 2, got {gamma}")
    if not s >= r >= 1:
        raise DomainError(f"X_gamma(r, s) needs s >= r >= 1, got r={r}, s={s}")
    with precision_scope(qp):
        acc = _Accumulator(qp, cfg)
        q1 = qp.q - 1
        for i in range(r):
            acc.add(q1 ** i * comb(i + s - r, s - r), acc.zeta(r - i, gamma))
        for j in range(s - r + 1):
            acc.add(q1 ** r * comb(s - j - 1, r - 1), T_closed(j, gamma, qp, cfg))
        return acc.result()


# ==================== A_q AND B_q ====================

def Bq(m: int, n: int, qp: QParam, cfg: SeriesConfig) -> EvalResult:
    """
    (q-1) sum_{c=0}^{min(m,n)-1} E(m-1,n-1;c) [ S^{n-1-c} zeta_q(N)/(q^{m-n}-1)
                                               + S^{m-1-c} zeta_q(N)/(q^{n-m}-1) ],
    N = m+n-1-c.
    """
    _check_pair(m, n)
    with precision_scope(qp):
        value = mpc(0)
        error = mpf(0)
        truncated = False
        inv_mn = 1 / mp.expm1((m - n) * qp.log_q)
        inv_nm = 1 / mp.expm1((n - m) * qp.log_q)
        for c in range(min(m, n)):
            e = evaluate_poly(E_coeff(m - 1, n - 1, c), qp.q)
            N = m + n - 1 - c
            for inv, power in ((inv_mn, n - 1 - c), (inv_nm, m - 1 - c)):
                part = eval_combo(shift_expand((N,), (power,)), qp, cfg)
                weight = (qp.q - 1) * e * inv
                value += weight * part.value
                error += abs(weight) * part.error_bound
                truncated = truncated or part.truncated
        return EvalResult(value=value, error_bound=error, truncated=truncated, method=EvalMethod.COMBINATION)


def _anchored_terms(m: int, n: int) -> List[Tuple[int, int, object]]:
    """(a, c, K(a,n,c)) for every non-zero anchored weight"""
    terms = []
    for a in range(m):
        for c in range(min(a, n) + 1):
            weight = anchored_coefficient(a, n, c)
            if not weight.is_zero:
                terms.append((a, c, weight))
    return terms


def Aq(m: int, n: int, qp: QParam, cfg: SeriesConfig) -> EvalResult:
    """
    sum_a sum_c K(a,n,c) sum_{i=0}^{a-c} C(a-c, i) (1-q)^i L(a, gamma), gamma = n+a-c-i, where
        L = sum_{j=0}^{n-a-1} C(n-a-1, j) (1-q)^j zeta_q(m-a-j, gamma)   (a < n)
        L = X_gamma(m-a, m-n)                                           (a >= n)
    """
    _check_pair(m, n)
    with precision_scope(qp):
        acc = _Accumulator(qp, cfg)
        one_minus_q = 1 - qp.q
        for a, c, poly in _anchored_terms(m, n):
            weight = evaluate_poly(poly, qp.q)
            for i in range(a - c + 1):
                outer = weight * comb(a - c, i) * one_minus_q ** i
                gamma = n + a - c - i
                if a < n:
                    for j in range(n - a):
                        acc.add(outer * comb(n - a - 1, j) * one_minus_q ** j, acc.zeta(m - a - j, gamma))
                else:
                    acc.add(outer, X_gamma(gamma, m - a, m - n, qp, cfg))
        logger.debug("A_q(%d,%d): %d zeta_q values", m, n, len(acc._zeta))
        return acc.result()


def li_two(n1: int, n2: int, z1, z2, qp: QParam, cfg: SeriesConfig) -> EvalResult:
    """
    Li_{q;n1,n2}(z1, z2) = sum_{0<k<l} z1^k z2^l/([k]^n1 [l]^n2).
    Converges whenever |z2| < 1 and |z1 z2| < 1, so z1 may leave the unit disc.
    """
    with precision_scope(qp):
        z1, z2 = mpc(z1), mpc(z2)
        if not (abs(z2) < 1 and abs(z1 * z2) < 1):
            raise DomainError(f"Li_{{q;{n1},{n2}}} series needs |z2| < 1 and |z1 z2| < 1")
        one_minus_q = 1 - qp.q

        def level_terms(k: int) -> List[mpc]:
            bracket = -mp.expm1(k * qp.log_q) / one_minus_q
            return [z1 ** k / bracket ** n1, z2 ** k / bracket ** n2]

        return nested_series(level_terms, 2, max(abs(z1 * z2), abs(z2)), cfg)


def Aq_words(m: int, n: int, qp: QParam, cfg: SeriesConfig) -> EvalResult:
    """A_q(m,n) as sum K(a,n,c) Li_{q;m-a,n+a-c}(q^{m-n}, q^{n-1}) by direct double series"""
    _check_pair(m, n)
    with precision_scope(qp):
        z1 = mp.exp((m - n) * qp.log_q)
        z2 = mp.exp((n - 1) * qp.log_q)
        value = mpc(0)
        error = mpf(0)
        truncated = False
        for a, c, poly in _anchored_terms(m, n):
            weight = evaluate_poly(poly, qp.q)
            part = li_two(m - a, n + a - c, z1, z2, qp, cfg)
            value += weight * part.value
            error += abs(weight) * part.error_bound
            truncated = truncated or part.truncated
        return EvalResult(value=value, error_bound=error, truncated=truncated, method=EvalMethod.DIRECT)
