"""
Bernoulli Numbers and Polynomials
Exact rational recurrence with a shared memo table
"""

from __future__ import annotations

import threading
from fractions import Fraction
from math import comb
from typing import Any, List

from mpmath import mp, mpf

__all__ = [
    "bernoulli",
    "bernoulli_numbers",
    "bernoulli_poly_coeffs",
    "bernoulli_poly_value",
    "periodic_bernoulli",
    "periodic_bernoulli_bound",
]

_TABLE: List[Fraction] = [Fraction(1)]
_LOCK = threading.Lock()


def bernoulli(k: int) -> Fraction:
    """
    Exact B_k with B_0 = 1, B_1 = -1/2.
    Uses sum_{j=0}^{k} C(k+1, j) B_j = 0 for k >= 1.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    if k < len(_TABLE):
        return _TABLE[k]
    with _LOCK:
        while len(_TABLE) <= k:
            m = len(_TABLE)
            if m >= 3 and m % 2 == 1:
                _TABLE.append(Fraction(0))
                continue
            s = sum((comb(m + 1, j) * _TABLE[j] for j in range(m)), Fraction(0))
            _TABLE.append(-s / (m + 1))
    return _TABLE[k]


def bernoulli_numbers(n: int) -> List[Fraction]:
    """B_0..B_n"""
    bernoulli(n)
    return list(_TABLE[: n + 1])


def bernoulli_poly_coeffs(M: int) -> List[Fraction]:
    """Coefficients of B_M(t), highest degree first: B_M(t) = sum_j C(M,j) B_j t^(M-j)"""
    if M < 0:
        raise ValueError("M must be >= 0")
    return [comb(M, j) * bernoulli(j) for j in range(M + 1)]


def bernoulli_poly_value(M: int, t: Any) -> mpf:
    value = mpf(0)
    t = mpf(t)
    for c in bernoulli_poly_coeffs(M):
        value = value * t + mpf(c.numerator) / c.denominator
    return value


def periodic_bernoulli(M: int, x: Any) -> mpf:
    """B_M({x}) with {x} the fractional part"""
    if M < 2:
        raise ValueError("periodic Bernoulli polynomial needs M >= 2")
    x = mpf(x)
    if x < 1:
        raise ValueError("x must be >= 1")
    return bernoulli_poly_value(M, x - mp.floor(x))


def periodic_bernoulli_bound(M: int) -> mpf:
    """Uniform bound 4 M! / (2 pi)^M"""
    return 4 * mp.factorial(M) / (2 * mp.pi) ** M
