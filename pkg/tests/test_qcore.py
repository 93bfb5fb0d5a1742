"""
Arithmetic kernel and Bernoulli machinery
"""

import random
from fractions import Fraction

import pytest
from mpmath import mp, mpc, mpf

from models.data_models import QParam
from models.errors import DomainError
from qcore.arithmetic import gen_binomial, gen_binomial_table, pochhammer, qbracket, qpow, to_cvalue
from qcore.bernoulli import (
    bernoulli, bernoulli_numbers, bernoulli_poly_value, periodic_bernoulli, periodic_bernoulli_bound
)


# ==================== q-BRACKET AND POWERS ====================

def test_qbracket_small_values(qp, close) -> None:
    assert close(qbracket(1, qp), 1, 1e-35)
    assert close(qbracket(3, qp), "1.75", 1e-35)


def test_qbracket_rejects_zero(qp) -> None:
    with pytest.raises(ValueError):
        qbracket(0, qp)


def test_qbracket_bounds_for_q_above_half() -> None:
    rng = random.Random(7)
    for _ in range(200):
        q = rng.uniform(0.5001, 0.9999)
        qp = QParam(q=q, precision=20)
        k = rng.randint(1, 10 ** 4)
        with mp.workdps(qp.dps):
            value = qbracket(k, qp)
            assert 1 <= value < 2 * k


def test_qbracket_k10_q09() -> None:
    qp = QParam(q="0.9", precision=30)
    with mp.workdps(qp.dps):
        assert 1 <= qbracket(10, qp) < 20


def test_qpow_trivial_exponents(qp, close) -> None:
    with mp.workdps(qp.dps):
        assert close(qpow(qp, 0), 1, 1e-35)
        assert close(qpow(qp, 1), qp.q, 1e-35)


def test_qpow_is_additive(make_qp) -> None:
    rng = random.Random(11)
    for _ in range(50):
        qp = make_qp(str(round(rng.uniform(0.05, 0.95), 6)))
        with mp.workdps(qp.dps):
            a = mpc(rng.uniform(-6, 6), rng.uniform(-20, 20))
            b = mpc(rng.uniform(-6, 6), rng.uniform(-20, 20))
            whole = qpow(qp, a + b)
            assert abs(whole - qpow(qp, a) * qpow(qp, b)) <= abs(whole) * mpf(10) ** (-qp.precision)


def test_qpow_imaginary_exponent(close) -> None:
    with mp.workdps(50):
        qp = QParam(q=mp.exp(-1), precision=40)
        assert close(qpow(qp, 1j), mpc(mp.cos(1), -mp.sin(1)), 1e-35)


# ==================== BINOMIALS AND POCHHAMMER ====================

@pytest.mark.parametrize("s, r, expected", [(7, 0, 1), (1, 5, 1), (2, 3, 4), ("0.5", 0, 1)])
def test_gen_binomial(s, r, expected) -> None:
    assert gen_binomial(mpf(s), r) == expected


def test_gen_binomial_table_matches_pointwise(close) -> None:
    s = mpc("0.3", "1.7")
    table = gen_binomial_table(s, 8)
    for r, value in enumerate(table):
        assert close(value, gen_binomial(s, r), 1e-12)


def test_pochhammer_values() -> None:
    assert pochhammer(3, 2) == 12
    assert pochhammer(mpc(5, 1), 0) == 1
    assert pochhammer(2, -1) == 1


def test_pochhammer_minus_one_at_one() -> None:
    with pytest.raises(ZeroDivisionError):
        pochhammer(1, -1)


def test_to_cvalue_parses_text() -> None:
    assert to_cvalue("0.5+14.1i") == mpc("0.5", "14.1")
    assert to_cvalue("-2") == mpc(-2)
    assert to_cvalue(3) == mpc(3)


@pytest.mark.parametrize("text", ["abc", "two", "0.5+zi"])
def test_to_cvalue_rejects_garbage(text: str) -> None:
    with pytest.raises(DomainError) as info:
        to_cvalue(text)
    assert text in str(info.value)


# ==================== BERNOULLI ====================

@pytest.mark.parametrize("k, expected", [(0, 1), (1, Fraction(-1, 2)), (2, Fraction(1, 6)),
                                         (3, 0), (4, Fraction(-1, 30)), (12, Fraction(-691, 2730))])
def test_bernoulli_numbers(k, expected) -> None:
    assert bernoulli(k) == expected


def test_odd_bernoulli_vanish() -> None:
    assert all(b == 0 for k, b in enumerate(bernoulli_numbers(31)) if k >= 3 and k % 2 == 1)


def test_bernoulli_generating_function() -> None:
    with mp.workdps(30):
        t = mpf("0.1")
        series = mp.fsum(mpf(b.numerator) / b.denominator * t ** k / mp.factorial(k)
                         for k, b in enumerate(bernoulli_numbers(20)))
        assert abs(series - t / mp.expm1(t)) < mpf(10) ** -12


def test_bernoulli_negative_index() -> None:
    with pytest.raises(ValueError):
        bernoulli(-1)


def test_periodic_bernoulli_values() -> None:
    with mp.workdps(30):
        assert abs(periodic_bernoulli(2, "1.5") + mpf(1) / 12) < mpf(10) ** -25
        assert periodic_bernoulli(2, "2.5") == periodic_bernoulli(2, "1.5")
        assert abs(periodic_bernoulli(4, "3.37")) <= periodic_bernoulli_bound(4)


def test_periodic_bernoulli_bound_on_grid() -> None:
    with mp.workdps(30):
        for M in range(2, 9):
            bound = periodic_bernoulli_bound(M)
            for i in range(1000):
                x = 1 + mpf(i) / 1000 * 3
                assert abs(periodic_bernoulli(M, x)) <= bound


def test_periodic_bernoulli_rejects_small_order() -> None:
    with pytest.raises(ValueError):
        periodic_bernoulli(1, 2)


def test_bernoulli_polynomial_at_zero_is_number() -> None:
    for M in range(0, 10):
        b = bernoulli(M)
        assert bernoulli_poly_value(M, 0) == mpf(b.numerator) / b.denominator
