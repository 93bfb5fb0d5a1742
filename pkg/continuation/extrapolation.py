"""
Limit Extrapolation
Richardson ladders for residues, iterated limits at indeterminacy points and q -> 1 limits
"""

import logging
from typing import Any, Callable, List, Optional, Sequence

from mpmath import mp, mpc, mpf

from config.settings import get_settings
from continuation.meromorphic import qzeta_eval
from models.data_models import LimitEstimate, LimitOrder, QParam, SeriesConfig, make_svec
from models.errors import DomainError, NonConvergenceError
from qcore.arithmetic import precision_scope

logger = logging.getLogger(__name__)


# ==================== RICHARDSON ====================

def richardson(values: Sequence[Any], ratio: Any = 2, order: int = 6) -> LimitEstimate:
    """
    Extrapolate f(h) -> f(0) from samples at h_0, h_0/ratio, h_0/ratio^2, ...

    Assumes an error expansion in integer powers of h. The residual is the
    difference between the two most accurate entries of the final column.
    """
    if not values:
        raise DomainError("richardson needs at least one sample")
    ratio = mpf(ratio)
    n = len(values)
    K = min(order, n - 1)
    tableau: List[List[mpc]] = []
    for i, v in enumerate(values):
        row = [mpc(v)]
        for k in range(1, min(i, K) + 1):
            factor = ratio ** k - 1
            row.append(row[k - 1] + (row[k - 1] - tableau[i - 1][k - 1]) / factor)
        tableau.append(row)
    if K == 0:
        return LimitEstimate(value=tableau[0][0], levels_used=1, residual=0)
    best = tableau[-1][K]
    if n - 2 >= K:
        residual = abs(best - tableau[-2][K])
    else:
        residual = abs(best - tableau[-1][K - 1])
    return LimitEstimate(value=best, levels_used=n, residual=residual)


def _checked(estimate: LimitEstimate, cfg: SeriesConfig, label: str) -> LimitEstimate:
    logger.debug("%s: %d levels, residual %s", label, estimate.levels_used, mp.nstr(estimate.residual, 5))
    if estimate.residual > cfg.extrapolation_tol:
        logger.warning("%s: extrapolation residual %s above %s", label, mp.nstr(estimate.residual, 5), cfg.extrapolation_tol)
        raise NonConvergenceError(
            f"{label}: extrapolation residual {mp.nstr(estimate.residual, 5)} exceeds {cfg.extrapolation_tol}",
            residual=estimate.residual
        )
    return estimate


def step_ladder(cfg: SeriesConfig) -> List[mpf]:
    """h_j = step0 * 2^-j, j = 0..levels"""
    return [mpf(cfg.step0) / 2 ** j for j in range(cfg.levels + 1)]


# ==================== RESIDUES ====================

def numeric_residue_estimate(point: Sequence[Any], qp: QParam, cfg: SeriesConfig) -> LimitEstimate:
    """lim_{h->0} h zeta_q(point + h e_d), sampled on the step ladder"""
    with precision_scope(qp):
        vec = make_svec(point)
        samples = []
        for h in step_ladder(cfg):
            moved = vec[:-1] + (vec[-1] + h,)
            samples.append(h * qzeta_eval(moved, qp, cfg).value)
        estimate = richardson(samples, 2, cfg.richardson_order)
        return _checked(estimate, cfg, f"residue at {_label(vec)}")


def numeric_residue(point: Sequence[Any], qp: QParam, cfg: SeriesConfig) -> mpc:
    return numeric_residue_estimate(point, qp, cfg).value


# ==================== ITERATED LIMITS ====================

def iterated_limit_estimate(
    point: Sequence[int], qp: QParam, order: LimitOrder, cfg: SeriesConfig
) -> LimitEstimate:
    """
    The two one-variable limits of zeta_q(s1, s2) at (-m, -n).

    S2_FIRST sets s2 = -n first (regular there) and lets s1 -> -m along the ladder;
    S1_FIRST sets s1 = -m first and lets s2 -> -n.
    """
    if len(point) != 2:
        raise DomainError(f"iterated limits are defined at depth 2, got {len(point)} coordinates")
    s1, s2 = (int(x) for x in point)
    if s1 > 0 or s2 > 0:
        raise DomainError(f"iterated limit needs a point (-m, -n) with m, n >= 0, got ({s1}, {s2})")
    order = LimitOrder(order)
    with precision_scope(qp):
        samples = []
        for eps in step_ladder(cfg):
            if order == LimitOrder.S2_FIRST:
                moved = (mpc(s1) + eps, mpc(s2))
            else:
                moved = (mpc(s1), mpc(s2) + eps)
            samples.append(qzeta_eval(moved, qp, cfg).value)
        estimate = richardson(samples, 2, cfg.richardson_order)
        return _checked(estimate, cfg, f"{order.value} limit at ({s1}, {s2})")


def iterated_limit(point: Sequence[int], qp: QParam, order: LimitOrder, cfg: SeriesConfig) -> mpc:
    return iterated_limit_estimate(point, qp, order, cfg).value


# ==================== q -> 1 ====================

def q_ladder(cfg: SeriesConfig, precision: Optional[int] = None) -> List[QParam]:
    """q_j = 1 - 2^-j for j = limit_start..limit_levels, at raised precision"""
    digits = (precision or get_settings().precision) + cfg.limit_guard_digits
    return [
        QParam(q=repr(1 - 2.0 ** -j), precision=digits)
        for j in range(cfg.limit_start, cfg.limit_levels + 1)
    ]


def q_to_1_limit(
    evaluator: Callable[[QParam], Any],
    cfg: SeriesConfig,
    precision: Optional[int] = None
) -> LimitEstimate:
    """
    Extrapolate evaluator(q) to q = 1 in the variable 1 - q.
    The evaluator may return a number or an EvalResult.
    """
    if cfg.limit_levels <= cfg.limit_start:
        raise DomainError("q ladder needs limit_levels > limit_start")
    ladder = q_ladder(cfg, precision)
    samples = []
    for qp in ladder:
        with precision_scope(qp):
            out = evaluator(qp)
            samples.append(mpc(getattr(out, "value", out)))
    with precision_scope(ladder[-1]):
        estimate = richardson(samples, 2, cfg.richardson_order)
        return _checked(estimate, cfg, "q -> 1 limit")


def _label(vec: Sequence[mpc]) -> str:
    return "(" + ", ".join(mp.nstr(x, 8) for x in vec) + ")"
