"""
Classical Double Zeta Lattice
Exact values, residues and indeterminacy at non-positive integer points
"""

from fractions import Fraction
from math import comb, factorial
from typing import List

import sympy

from models.data_models import LimitOrder, TableEntryKind, TableRow
from models.errors import DomainError
from qcore.bernoulli import bernoulli


def zeta_nonpositive(n: int) -> Fraction:
    """zeta(-n) for n >= 0: -1/2 at n = 0, otherwise -B_{n+1}/(n+1)"""
    if n < 0:
        raise DomainError(f"zeta_nonpositive needs n >= 0, got {n}")
    if n == 0:
        return Fraction(-1, 2)
    return -bernoulli(n + 1) / (n + 1)


def _zeta_exact(x: int) -> sympy.Expr:
    """zeta at an integer other than 1, exactly"""
    if x == 1:
        raise DomainError("zeta(1) is a pole")
    if x <= 0:
        f = zeta_nonpositive(-x)
        return sympy.Rational(f.numerator, f.denominator)
    return sympy.zeta(x)


def _rational(f: Fraction) -> sympy.Rational:
    return sympy.Rational(f.numerator, f.denominator)


def dbzeta_neg(m: int, n: int, order: LimitOrder = LimitOrder.S2_FIRST) -> Fraction:
    """
    zeta(-m, -n) (S2_FIRST) or zeta^R(-m, -n) (S1_FIRST), exactly.

    With k = m + n + 2:
        zeta(-m,-n) = -zeta(1-k)/(n+1) - zeta(2-k)/2 - sum_{r=2}^{n+1} B_r/r C(n,r-1) zeta(r+1-k)
    and zeta^R adds (-1)^n B_k/k! n! (k-n-2)!.
    """
    if m < 0 or n < 0:
        raise DomainError(f"dbzeta_neg needs m, n >= 0, got ({m}, {n})")
    order = LimitOrder(order)
    k = m + n + 2
    value = -zeta_nonpositive(k - 1) / (n + 1) - zeta_nonpositive(k - 2) / 2
    for r in range(2, n + 2):
        b = bernoulli(r)
        if b == 0:
            continue
        value -= b / r * comb(n, r - 1) * zeta_nonpositive(k - r - 1)
    if order == LimitOrder.S1_FIRST:
        value += (-1) ** n * bernoulli(k) / factorial(k) * factorial(n) * factorial(k - n - 2)
    return value


def dbzeta_table(k: int, n: int) -> TableRow:
    """
    Classification of zeta(s1, s2) at (n+2-k, -n).

    Poles carry the residue along s1 + s2 = 2 - k; the other rows carry the
    common value of both iterated limits.
    """
    if k < 0 or n < 0:
        raise DomainError(f"table indices must be non-negative, got k={k}, n={n}")
    point = (n + 2 - k, -n)
    if k == 0:
        return TableRow(k=k, n=n, point=point, kind=TableEntryKind.POLE,
                        value=sympy.Rational(-1, n + 1), rule="k=0")
    if k == 1:
        return TableRow(k=k, n=n, point=point, kind=TableEntryKind.POLE,
                        value=sympy.Rational(-1, 2), rule="k=1")
    if k % 2 == 0:
        if k <= n + 1:
            residue = (-1) ** (k + 1) * bernoulli(k) / k * comb(n, k - 1)
            return TableRow(k=k, n=n, point=point, kind=TableEntryKind.POLE,
                            value=_rational(residue), rule="2|k, 2<=k<=n+1")
        raise DomainError(f"even k={k} > n+1={n + 1}: zeta and zeta^R differ, use dbzeta_neg")
    head = _rational(bernoulli(k - 1) / (k - 1))
    if k > n + 2:
        return TableRow(k=k, n=n, point=point, kind=TableEntryKind.INDETERMINACY,
                        value=head / 2, rule="2!k, k>n+2")
    if k == n + 2:
        return TableRow(k=k, n=n, point=point, kind=TableEntryKind.INDETERMINACY,
                        value=head, rule="2!k, k=n+2")
    value = head / 2
    for r in range(k - 1, n + 2):
        b = bernoulli(r)
        if b == 0:
            continue
        value -= _rational(b / r * comb(n, r - 1)) * _zeta_exact(r + 1 - k)
    return TableRow(k=k, n=n, point=point, kind=TableEntryKind.INDETERMINACY,
                    value=sympy.expand(value),
                    rule="2!k, 3<=k<=n+1")


def table_rows(kmax: int, nmax: int) -> List[TableRow]:
    """Every tabulated (k, n) with k <= kmax, n <= nmax, in (k, n) order"""
    rows = []
    for k in range(kmax + 1):
        for n in range(nmax + 1):
            if k % 2 == 0 and k >= 2 and k > n + 1:
                continue
            rows.append(dbzeta_table(k, n))
    return rows
