"""
Euler-Maclaurin oracles and the classical double-zeta lattice
"""

from fractions import Fraction

import pytest
import sympy
from mpmath import mp, mpc, mpf

from classical.double_zeta import dbzeta_neg, dbzeta_table, table_rows, zeta_nonpositive
from classical.euler_maclaurin import classical_pole_condition, mzv, riemann_zeta
from models.data_models import LimitOrder, SeriesConfig, TableEntryKind
from models.errors import DomainError, PoleError


# ==================== RIEMANN ZETA ====================

def test_riemann_zeta_two() -> None:
    result = riemann_zeta(2, precision=40)
    with mp.workdps(40):
        assert abs(result.value - mp.pi ** 2 / 6) < mpf(10) ** -35


@pytest.mark.parametrize("s, expected", [(-1, Fraction(-1, 12)), (0, Fraction(-1, 2)), (-3, Fraction(1, 120))])
def test_riemann_zeta_nonpositive(s: int, expected: Fraction) -> None:
    value = riemann_zeta(s, precision=30).value
    with mp.workdps(30):
        assert abs(value - mpf(expected.numerator) / expected.denominator) < mpf(10) ** -25


def test_riemann_zeta_critical_line() -> None:
    s = mpc("0.5", "14.1")
    value = riemann_zeta(s, precision=30).value
    with mp.workdps(30):
        assert abs(value - mp.zeta(s)) < mpf(10) ** -20


def test_riemann_zeta_pole() -> None:
    with pytest.raises(PoleError):
        riemann_zeta(1)


def test_riemann_zeta_order_too_small() -> None:
    with pytest.raises(DomainError):
        riemann_zeta(-5, M=3)


# ==================== MULTIPLE ZETA ====================

def test_mzv_stuffle_self_check() -> None:
    cfg = SeriesConfig(tol=1e-25)
    z2 = mzv([2], cfg=cfg, precision=30).value
    z3 = mzv([3], cfg=cfg, precision=30).value
    z23 = mzv([2, 3], cfg=cfg, precision=30).value
    z32 = mzv([3, 2], cfg=cfg, precision=30).value
    z5 = mzv([5], cfg=cfg, precision=30).value
    with mp.workdps(30):
        assert abs(z2 * z3 - (z23 + z32 + z5)) < mpf(10) ** -12


def test_mzv_euler_relation() -> None:
    # zeta(1, 2) = sum_{k1<k2} 1/(k1 k2^2) = zeta(3)
    value = mzv([1, 2], cfg=SeriesConfig(tol=1e-25), precision=30).value
    with mp.workdps(30):
        assert abs(value - mp.zeta(3)) < mpf(10) ** -15


def test_mzv_depth_one_delegates() -> None:
    with mp.workdps(30):
        assert abs(mzv([4], precision=30).value - riemann_zeta(4, precision=30).value) < mpf(10) ** -28


@pytest.mark.parametrize("s, fragment", [([1, 1], "s_d = 1"), ([3, -3], "= 0"), ([1, -3], "= -2")])
def test_classical_pole_conditions(s, fragment: str) -> None:
    condition = classical_pole_condition(tuple(mpc(x) for x in s))
    assert condition is not None and fragment in condition


def test_mzv_pole() -> None:
    with pytest.raises(PoleError):
        mzv([1, 1])


def test_regular_classical_point() -> None:
    assert classical_pole_condition((mpc(-1), mpc(-2))) is None


# ==================== DOUBLE ZETA LATTICE ====================

def test_zeta_nonpositive() -> None:
    assert zeta_nonpositive(0) == Fraction(-1, 2)
    assert zeta_nonpositive(1) == Fraction(-1, 12)
    assert zeta_nonpositive(2) == 0
    with pytest.raises(DomainError):
        zeta_nonpositive(-1)


def test_dbzeta_corner() -> None:
    assert dbzeta_neg(0, 0, LimitOrder.S2_FIRST) == Fraction(1, 3)
    assert dbzeta_neg(0, 0, LimitOrder.S1_FIRST) == Fraction(5, 12)


@pytest.mark.parametrize("m, n", [(0, 1), (1, 0), (2, 1), (1, 2), (3, 2)])
def test_dbzeta_orders_agree_for_odd_k(m: int, n: int) -> None:
    assert (m + n) % 2 == 1
    assert dbzeta_neg(m, n, LimitOrder.S2_FIRST) == dbzeta_neg(m, n, LimitOrder.S1_FIRST)


def test_dbzeta_orders_differ_for_even_k() -> None:
    assert dbzeta_neg(1, 1, LimitOrder.S2_FIRST) != dbzeta_neg(1, 1, LimitOrder.S1_FIRST)


@pytest.mark.parametrize("k, n, expected", [
    (0, 4, sympy.Rational(-1, 5)),
    (1, 3, sympy.Rational(-1, 2)),
    (2, 4, sympy.Rational(-1, 3)),
    (4, 8, sympy.Rational(7, 15)),
    (6, 9, sympy.Rational(-1, 2)),
])
def test_table_residues(k: int, n: int, expected) -> None:
    row = dbzeta_table(k, n)
    assert row.kind == TableEntryKind.POLE
    assert row.value == expected
    assert row.point == (n + 2 - k, -n)


def test_table_odd_rows_match_iterated_values() -> None:
    for row in table_rows(7, 4):
        if row.kind == TableEntryKind.INDETERMINACY and row.k >= row.n + 2:
            m = row.k - row.n - 2
            value = dbzeta_neg(m, row.n)
            assert row.value == sympy.Rational(value.numerator, value.denominator)


def test_table_odd_row_inside_pole_range() -> None:
    # k = 3, n = 2: B_2/4 - B_2/2 C(2,1) zeta(0) - 0
    row = dbzeta_table(3, 2)
    assert row.kind == TableEntryKind.INDETERMINACY
    assert row.value == sympy.Rational(1, 24) + sympy.Rational(1, 12)


def test_table_row_count() -> None:
    rows = table_rows(4, 4)
    assert len(rows) == 21
    assert [(r.k, r.n) for r in rows][:3] == [(0, 0), (0, 1), (0, 2)]


def test_table_even_k_beyond_pole_range() -> None:
    with pytest.raises(DomainError):
        dbzeta_table(4, 1)
