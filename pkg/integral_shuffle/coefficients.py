"""
Collapse Coefficients
Counting quasi-shuffles of two iterated-integral words by number of collapses
"""

from functools import lru_cache
from itertools import combinations
from math import comb, factorial
from typing import Iterator, Tuple

import sympy

from models.errors import DomainError
from models.zcombo import Q_MINUS_ONE, as_poly

# One merged letter: ("u", i), ("v", j) or ("uv", i, j) for a collapse, indices 1-based
MergedLetter = Tuple
Merged = Tuple[MergedLetter, ...]


def _check(r: int, s: int, c: int) -> None:
    if r < 0 or s < 0:
        raise DomainError(f"word lengths must be non-negative, got r={r}, s={s}")
    if c < 0:
        raise DomainError(f"collapse count must be non-negative, got c={c}")


@lru_cache(maxsize=1024)
def _composition_count(r: int, s: int, c: int) -> int:
    total = 0
    for i_idx in combinations(range(1, r + 1), c):
        for j_idx in combinations(range(1, s + 1), c):
            i_seq = (0,) + i_idx + (r + 1,)
            j_seq = (0,) + j_idx + (s + 1,)
            product = 1
            for alpha in range(1, c + 2):
                di = i_seq[alpha] - i_seq[alpha - 1]
                dj = j_seq[alpha] - j_seq[alpha - 1]
                product *= comb(di + dj - 2, di - 1)
            total += product
    return total


def E_coeff(r: int, s: int, c: int) -> sympy.Poly:
    """
    E(r,s;c) = (q-1)^c sum over 1<=i_1<...<i_c<=r, 1<=j_1<...<j_c<=s of
    prod_{alpha=1}^{c+1} C(i_a + j_a - i_{a-1} - j_{a-1} - 2, i_a - i_{a-1} - 1),
    with i_0 = j_0 = 0, i_{c+1} = r+1, j_{c+1} = s+1.

    Zero when c > min(r, s).
    """
    _check(r, s, c)
    if c > min(r, s):
        return as_poly(0)
    return Q_MINUS_ONE ** c * _composition_count(r, s, c)


def collapse_count(r: int, s: int, c: int) -> int:
    """Number of quasi-shuffles with c collapses: (r+s-c)!/(c!(r-c)!(s-c)!)"""
    _check(r, s, c)
    if c > min(r, s):
        return 0
    return factorial(r + s - c) // (factorial(c) * factorial(r - c) * factorial(s - c))


def anchored_coefficient(a: int, n: int, c: int) -> sympy.Poly:
    """
    K(a,n,c) = E(a,n-1;c) + (q-1) E(a-1,n-1;c-1).

    Weight of the quasi-shuffles of a letters with n letters in which the first
    letter of the second word stays outermost, split by whether it collapses.
    """
    if n < 1:
        raise DomainError(f"anchored word needs n >= 1, got {n}")
    _check(a, n, c)
    weight = E_coeff(a, n - 1, c)
    if a >= 1 and c >= 1:
        weight = weight + Q_MINUS_ONE * E_coeff(a - 1, n - 1, c - 1)
    return weight


def quasi_shuffles(r: int, s: int) -> Iterator[Tuple[int, Merged]]:
    """
    Every order-preserving merge of u_1..u_r with v_1..v_s, where a u and a v may
    collapse into one letter. Yields (collapse count, merged letters) innermost first.
    """
    _check(r, s, 0)

    def walk(i: int, j: int) -> Iterator[Tuple[int, Merged]]:
        if i == r and j == s:
            yield 0, ()
            return
        if i < r:
            for c, rest in walk(i + 1, j):
                yield c, (("u", i + 1),) + rest
        if j < s:
            for c, rest in walk(i, j + 1):
                yield c, (("v", j + 1),) + rest
        if i < r and j < s:
            for c, rest in walk(i + 1, j + 1):
                yield c + 1, (("uv", i + 1, j + 1),) + rest

    yield from walk(0, 0)
