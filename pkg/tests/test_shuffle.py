"""
Series q-shuffle products and their evaluation
"""

import random

import pytest
import sympy
from mpmath import mp, mpc, mpf

from continuation.meromorphic import qzeta_eval
from models.errors import PoleError
from models.zcombo import ONE_MINUS_Q, Word, ZCombo, as_poly
from shuffle.series_shuffle import (
    classical_shuffle, combo_product, eval_combo, qshuffle, verify_series_shuffle
)

a, b, c = sympy.symbols("a b c")


# ==================== FORMAL PRODUCTS ====================

def test_depth_one_product() -> None:
    product = qshuffle([a], [b])
    expected = ZCombo({
        Word([a, b]): 1,
        Word([b, a]): 1,
        Word([a + b]): 1,
        Word([a + b - 1]): ONE_MINUS_Q,
    })
    assert product == expected


def test_classical_depth_one_product() -> None:
    assert classical_shuffle([a], [b]) == ZCombo({Word([a, b]): 1, Word([b, a]): 1, Word([a + b]): 1})


def test_unit_laws() -> None:
    assert qshuffle([a, b], []) == ZCombo.single([a, b])
    assert classical_shuffle([], []) == ZCombo.unit()


def test_depth_one_times_depth_two_term_count() -> None:
    product = qshuffle([a], [b, c])
    assert len(product) == 7
    assert product.coefficient([b, a + c - 1]) == ONE_MINUS_Q
    assert product.coefficient([a + b - 1, c]) == ONE_MINUS_Q


def test_q_one_specialization_is_classical() -> None:
    product = qshuffle([a, 2], [b, c])
    classical = classical_shuffle([a, 2], [b, c])
    expected = {w: sympy.Rational(p.eval(1)) for w, p in classical.items()}
    assert product.specialize(1) == expected


def test_product_is_commutative() -> None:
    assert qshuffle([a, 3], [b]) == qshuffle([b], [a, 3])


def test_product_is_associative() -> None:
    left = combo_product(qshuffle([a], [b]), ZCombo.single([c]))
    right = combo_product(ZCombo.single([a]), qshuffle([b], [c]))
    assert left == right


def test_combo_product_is_bilinear() -> None:
    combo = ZCombo.single([a]).scale(as_poly(sympy.Symbol("q"))) + ZCombo.single([b])
    product = combo_product(combo, [c])
    expected = qshuffle([a], [c]).scale(as_poly(sympy.Symbol("q"))) + qshuffle([b], [c])
    assert product == expected


# ==================== EVALUATION ====================

@pytest.mark.parametrize("q", ["0.3", "0.6", "0.9"])
def test_series_shuffle_3_2(make_qp, cfg, q: str) -> None:
    record = verify_series_shuffle(["3"], ["2"], make_qp(q), cfg)
    assert record.passed
    assert record.residual <= 1e-25


def test_series_shuffle_depth_three(make_qp, cfg) -> None:
    qp = make_qp("0.7")
    with mp.workdps(qp.dps):
        rhs = eval_combo(qshuffle([2], [2, 3]), qp, cfg).value
        lhs = qzeta_eval([2], qp, cfg).value * qzeta_eval([2, 3], qp, cfg).value
        assert abs(lhs - rhs) < 1e-25


def test_series_shuffle_brute_force_product(make_qp, cfg) -> None:
    record = verify_series_shuffle(["3"], ["2", "4"], make_qp("0.8"), cfg)
    assert record.passed
    assert len(record.terms["combination"]) == 7


def test_depth_one_stuffle_at_random_complex_points(make_qp, cfg) -> None:
    rng = random.Random(5)
    for _ in range(6):
        qp = make_qp(str(round(rng.uniform(0.3, 0.9), 4)))
        s1 = mpc(rng.uniform(2.1, 5), rng.uniform(-3, 3))
        s2 = mpc(rng.uniform(2.1, 5), rng.uniform(-3, 3))

        def z(*s):
            return qzeta_eval(list(s), qp, cfg).value

        with mp.workdps(qp.dps):
            rhs = z(s1, s2) + z(s2, s1) + z(s1 + s2) + (1 - qp.q) * z(s1 + s2 - 1)
            assert abs(z(s1) * z(s2) - rhs) <= mpf(10) ** (15 - qp.precision)
            record = verify_series_shuffle([a], [b], qp, cfg, bindings={"a": s1, "b": s2})
            assert abs(record.rhs - rhs) <= mpf(10) ** (15 - qp.precision)


def _random_word(rng: random.Random, length: int) -> list:
    # every suffix sum clears its depth, so each word of the product converges
    return [sympy.Rational(rng.randint(21, 45), 10) for _ in range(length)]


def test_series_shuffle_on_random_word_pairs(make_qp, cfg) -> None:
    rng = random.Random(17)
    for case in range(10):
        qp = make_qp(str(round(rng.uniform(0.3, 0.9), 4)))
        length1 = rng.randint(1, 2)
        w1 = _random_word(rng, length1)
        w2 = _random_word(rng, rng.randint(1, 3 - length1))
        record = verify_series_shuffle(w1, w2, qp, cfg, case_index=case)
        assert record.passed, record.to_dict()
        assert record.tol == cfg.tol


def test_series_shuffle_symbolic_letter(qp, cfg) -> None:
    record = verify_series_shuffle(["s"], ["2"], qp, cfg, bindings={"s": "3.5"})
    assert record.passed


def test_series_shuffle_continued_region(qp, cfg) -> None:
    # every word off the pole set, some outside the direct region
    record = verify_series_shuffle(["-1/2"], ["27/10"], qp, cfg)
    assert record.passed


def test_empty_word_evaluates_to_coefficient(qp, cfg) -> None:
    assert eval_combo(ZCombo.unit().scale(3), qp, cfg).value == 3


def test_pole_word_is_named(qp, cfg) -> None:
    with pytest.raises(PoleError) as info:
        eval_combo(ZCombo.single(["2", "1"]), qp, cfg)
    assert "word (2,1)" in str(info.value)
