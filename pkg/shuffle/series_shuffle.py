"""
Series q-Shuffle Product
Stuffle-type products of zeta_q words and their numeric evaluation
"""

import logging
from functools import lru_cache
from typing import Any, Mapping, Optional, Union

from mpmath import mp, mpc, mpf

from continuation.meromorphic import qzeta_eval
from models.data_models import EvalMethod, EvalResult, QParam, SeriesConfig, VerificationRecord
from models.errors import PoleError
from models.zcombo import ONE_MINUS_Q, Word, ZCombo, evaluate_poly
from qcore.arithmetic import precision_scope

logger = logging.getLogger(__name__)

WordLike = Union[Word, ZCombo]


def _as_word(w: Any) -> Word:
    return w if isinstance(w, Word) else Word(w)


# ==================== PRODUCTS ====================

@lru_cache(maxsize=4096)
def _product(w1: Word, w2: Word, deformed: bool) -> ZCombo:
    if not len(w1):
        return ZCombo.single(w2)
    if not len(w2):
        return ZCombo.single(w1)
    a, b = w1[0], w2[0]
    rest1, rest2 = w1.tail(), w2.tail()
    merged = _product(rest1, rest2, deformed)
    combo = _product(rest1, w2, deformed).prepend(a)
    combo = combo + _product(w1, rest2, deformed).prepend(b)
    combo = combo + merged.prepend(a + b)
    if deformed:
        # q^{(a+b-2)k}/[k]^{a+b} = q^{(a+b-1)k}/[k]^{a+b} + (1-q) q^{(a+b-2)k}/[k]^{a+b-1}
        combo = combo + merged.prepend(a + b - 1).scale(ONE_MINUS_Q)
    return combo


def qshuffle(w1: Any, w2: Any) -> ZCombo:
    """
    The product *_q with zeta_q(w1) zeta_q(w2) = zeta_q(w1 *_q w2).

    a.w1 *_q b.w2 = a(w1 *_q b.w2) + b(a.w1 *_q w2) + (a+b)(w1 *_q w2)
                    + (1-q) (a+b-1)(w1 *_q w2)
    """
    return _product(_as_word(w1), _as_word(w2), True)


def classical_shuffle(w1: Any, w2: Any) -> ZCombo:
    """The Euler-Zagier product *: the same recursion without the (1-q) letter"""
    return _product(_as_word(w1), _as_word(w2), False)


def combo_product(c: WordLike, w: WordLike, deformed: bool = True) -> ZCombo:
    """Bilinear extension of *_q (or * when deformed is False) to combinations"""
    left = c if isinstance(c, ZCombo) else ZCombo.single(c)
    right = w if isinstance(w, ZCombo) else ZCombo.single(w)
    result = ZCombo()
    for u, cu in left.items():
        for v, cv in right.items():
            result = result + _product(u, v, deformed).scale(cu * cv)
    return result


# ==================== EVALUATION ====================

def eval_combo(
    c: ZCombo,
    qp: QParam,
    cfg: SeriesConfig,
    bindings: Optional[Mapping[str, Any]] = None,
    method: EvalMethod = EvalMethod.AUTO
) -> EvalResult:
    """
    sum coeff(q) zeta_q(word); the empty word contributes its coefficient.

    Raises:
        PoleError: some word lies on the pole set (message names the word)
    """
    with precision_scope(qp):
        total = mpc(0)
        error = mpf(0)
        terms = 0
        truncated = False
        for word, poly in c.items():
            coeff = evaluate_poly(poly, qp.q)
            if not len(word):
                total += coeff
                continue
            try:
                result = qzeta_eval(word.evaluate(bindings), qp, cfg, method)
            except PoleError as exc:
                raise PoleError(f"word ({word.text()}): {exc}", report=exc.report, witness=exc.witness) from exc
            total += coeff * result.value
            error += abs(coeff) * result.error_bound
            terms += result.terms_used
            truncated = truncated or result.truncated
        logger.debug("evaluated %d-term combination at q=%s", len(c), mp.nstr(qp.q, 8))
        return EvalResult(value=total, error_bound=error, terms_used=terms,
                          truncated=truncated, method=EvalMethod.COMBINATION)


def verify_series_shuffle(
    w1: Any,
    w2: Any,
    qp: QParam,
    cfg: SeriesConfig,
    bindings: Optional[Mapping[str, Any]] = None,
    case_index: int = 0
) -> VerificationRecord:
    """Residual of zeta_q(w1) zeta_q(w2) = zeta_q(w1 *_q w2)"""
    u, v = _as_word(w1), _as_word(w2)
    with precision_scope(qp):
        left = eval_combo(ZCombo.single(u), qp, cfg, bindings)
        right = eval_combo(ZCombo.single(v), qp, cfg, bindings)
        product = qshuffle(u, v)
        rhs = eval_combo(product, qp, cfg, bindings)
        lhs = left.value * right.value
        return VerificationRecord(
            name="series-shuffle",
            case_index=case_index,
            inputs={"w1": u.text(), "w2": v.text(), "q": mp.nstr(qp.q, qp.precision)},
            lhs=lhs,
            rhs=rhs.value,
            residual=abs(lhs - rhs.value),
            tol=cfg.tol,
            error_bound=rhs.error_bound + abs(right.value) * left.error_bound + abs(left.value) * right.error_bound,
            terms={"zeta_q(w1)": left.value, "zeta_q(w2)": right.value, "combination": product.to_dict()},
        )
