"""
Closed-Form Special Values
Residues and indeterminate values of zeta_q at non-positive integer lattice points
"""

from fractions import Fraction
from math import comb, factorial

from mpmath import mp, mpf

from classical.double_zeta import zeta_nonpositive
from models.data_models import LimitOrder, QParam
from models.errors import DomainError
from qcore.arithmetic import precision_scope
from qcore.bernoulli import bernoulli


def _inv_qpow_minus_one(qp: QParam, e: int) -> mpf:
    """1/(q^e - 1) without cancellation for small e log q"""
    return 1 / mp.expm1(e * qp.log_q)


# ==================== q-RIEMANN AT NON-POSITIVE INTEGERS ====================

def qzeta_neg_closed(n: int, qp: QParam) -> mpf:
    """zeta_q(-n) = (1-q)^{-n} [ sum_r (-1)^r C(n,r)/(q^{n+1-r}-1) - (-1)^n/((n+1) log q) ]"""
    if n < 0:
        raise DomainError(f"qzeta_neg_closed needs n >= 0, got {n}")
    with precision_scope(qp):
        bracket = mp.fsum((-1) ** r * comb(n, r) * _inv_qpow_minus_one(qp, n + 1 - r) for r in range(n + 1))
        bracket -= mpf((-1) ** n) / ((n + 1) * qp.log_q)
        return (1 - qp.q) ** (-n) * bracket


# ==================== RESIDUES ====================

def res_closed(k: int, n: int, qp: QParam) -> mpf:
    """
    Residue of zeta_q(s1, s2) at (n+2-k, -n), for k <= n+1.

    -(1-q)^{2-k}/log q times
        sum_{r=0}^{k} (-1)^r C(n+1-r, k-r) C(n, r)/(q^{n+1-r} - 1)             (k <= n)
        sum_{r=0}^{n} (-1)^r C(n, r)/(q^{n+1-r} - 1) - (-1)^n/((n+1) log q)     (k = n+1)
    """
    if k < 0 or n < 0:
        raise DomainError(f"res_closed needs k, n >= 0, got k={k}, n={n}")
    if k > n + 1:
        raise DomainError(f"(n+2-k, -n) = ({n + 2 - k}, {-n}) is not a pole: need k <= n+1")
    with precision_scope(qp):
        if k <= n:
            bracket = mp.fsum(
                (-1) ** r * comb(n + 1 - r, k - r) * comb(n, r) * _inv_qpow_minus_one(qp, n + 1 - r)
                for r in range(k + 1)
            )
        else:
            bracket = mp.fsum((-1) ** r * comb(n, r) * _inv_qpow_minus_one(qp, n + 1 - r) for r in range(n + 1))
            bracket -= mpf((-1) ** n) / ((n + 1) * qp.log_q)
        return -(1 - qp.q) ** (2 - k) / qp.log_q * bracket


def res_limit_target(k: int, n: int) -> Fraction:
    """
    q -> 1 limit of res_closed(k, n): the classical residue at (n+2-k, -n).
    k = n+1 gives zeta(-n), the residue at (1, -n).
    """
    if k < 0 or n < 0 or k > n + 1:
        raise DomainError(f"no residue target for k={k}, n={n}")
    if k == 0:
        return Fraction(-1, n + 1)
    if k == n + 1:
        return zeta_nonpositive(n)
    return (-1) ** (k + 1) * bernoulli(k) / k * comb(n, k - 1)


def res_neg3_2(qp: QParam) -> mpf:
    """Residue of zeta_q at (-3, 2): q(q-1)^2/((q+1)(q^2+1)(q^2+q+1) log q) = -res_closed(3, 3)"""
    with precision_scope(qp):
        q = qp.q
        return q * (q - 1) ** 2 / ((q + 1) * (q ** 2 + 1) * (q ** 2 + q + 1) * qp.log_q)


def p_poly(a: int, m: int, q: mpf) -> mpf:
    """P_a(q, m) = sum_{j=0}^{m} q^{aj}"""
    return mp.fsum(q ** (a * j) for j in range(m + 1))


def res_4_4_factored(qp: QParam) -> mpf:
    """Factored residue at (4, -4): -2q^3(3q^2+4q+3)(q-1)/log q / (P_1(q,2) P_1(q,3) P_1(q,4))"""
    with precision_scope(qp):
        q = qp.q
        numerator = -2 * q ** 3 * (3 * q ** 2 + 4 * q + 3) * (q - 1) / qp.log_q
        return numerator / (p_poly(1, q=q, m=2) * p_poly(1, q=q, m=3) * p_poly(1, q=q, m=4))


# ==================== INDETERMINACY ====================

def kgen2_value(m: int, n: int, order: LimitOrder, qp: QParam) -> mpf:
    """zeta_q(-m, -n) (S2_FIRST) or zeta_q^R(-m, -n) (S1_FIRST) in closed form, k = m+n+2"""
    if m < 0 or n < 0:
        raise DomainError(f"kgen2_value needs m, n >= 0, got ({m}, {n})")
    order = LimitOrder(order)
    k = m + n + 2
    with precision_scope(qp):
        L = qp.log_q
        inv = lambda e: _inv_qpow_minus_one(qp, e)  # noqa: E731

        first = mp.fsum(
            mpf((-1) ** (r + n + 1)) / ((n + 1) * L) * comb(m, r) * inv(m + 1 - r) for r in range(m + 1)
        )
        double = mp.fsum(
            (-1) ** (r1 + r2) * comb(m, r1) * comb(n, r2) * inv(n + 1 - r2) * inv(k - r1 - r2)
            for r1 in range(m + 1)
            for r2 in range(n + 1)
        )
        if order == LimitOrder.S2_FIRST:
            corner = mpf((-1) ** k) / ((m + 1) * (n + 1) * L ** 2)
            middle = mp.fsum(
                mpf((-1) ** (r + m + 1)) / L * Fraction(factorial(m) * factorial(n + 1 - r), factorial(k - r))
                * comb(n, r) * inv(n + 1 - r)
                for r in range(n + 1)
            )
            total = corner + first + middle + double
        else:
            middle = mp.fsum(
                mpf((-1) ** (r + n)) / L * comb(k - n - 2, r)
                * Fraction(factorial(n) * factorial(m + 1 - r), factorial(k - r))
                * mp.exp((m + 1 - r) * L) * inv(m + 1 - r)
                for r in range(m + 1)
            )
            total = first + middle + double
        return (1 - qp.q) ** (2 - k) * total


def zeta00_closed(order: LimitOrder, qp: QParam) -> mpf:
    """The two corner values at (0, 0) in their simplified form"""
    order = LimitOrder(order)
    with precision_scope(qp):
        q, L = qp.q, qp.log_q
        head = 1 / ((q ** 2 - 1) * (q - 1))
        if order == LimitOrder.S2_FIRST:
            return head - 3 / (2 * (q - 1) * L) + 1 / L ** 2
        return head - 1 / ((q - 1) * L) + q / (2 * (q - 1) * L)
