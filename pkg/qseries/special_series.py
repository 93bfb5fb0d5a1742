"""
Auxiliary Single Series
xi_q, the T^j series and the Li-shift remainder used by the integral q-shuffle
"""

import logging
from typing import Any, Callable

from mpmath import mp, mpc

from models.data_models import EvalResult, QParam, SeriesConfig
from models.errors import DomainError
from qcore.arithmetic import precision_scope
from qseries.nested_sums import nested_series

logger = logging.getLogger(__name__)


def _single_series(term: Callable[[int], Any], rho: Any, cfg: SeriesConfig) -> EvalResult:
    return nested_series(lambda l: [mpc(term(l))], 1, rho, cfg)


def _bracket(qp: QParam, l: int) -> Any:
    return -mp.expm1(l * qp.log_q) / (1 - qp.q)


def xi_q(j: int, qp: QParam, cfg: SeriesConfig) -> EvalResult:
    """xi_q(j) = sum_{l>=1} q^{(j+1) l} / [l]^2"""
    if j < 0:
        raise DomainError(f"xi_q needs j >= 0, got {j}")
    with precision_scope(qp):
        q = qp.q
        return _single_series(
            lambda l: q ** ((j + 1) * l) / _bracket(qp, l) ** 2, q ** (j + 1), cfg
        )


def T_series(j: int, gamma: int, qp: QParam, cfg: SeriesConfig) -> EvalResult:
    """
    T^j zeta_q(gamma) by its defining series.

    j >= 1: sum_l (q^j - q^{jl})/(1 - q^j) q^{(gamma-1) l}/[l]^gamma
    j = 0:  sum_l (l - 1) q^{(gamma-1) l}/[l]^gamma, the j -> 0 limit of the weight
    """
    if j < 0:
        raise DomainError(f"T^j needs j >= 0, got {j}")
    if gamma < 2:
        raise DomainError(f"T^j zeta_q(gamma) needs gamma >= 2, got {gamma}")
    with precision_scope(qp):
        q = qp.q
        if j == 0:
            def weight(l: int) -> Any:
                return l - 1
        else:
            qj = q ** j
            denominator = 1 - qj

            def weight(l: int) -> Any:
                return (qj - q ** (j * l)) / denominator

        return _single_series(
            lambda l: weight(l) * q ** ((gamma - 1) * l) / _bracket(qp, l) ** gamma,
            q ** (gamma - 1),
            cfg
        )


def li_shift_series(e: int, qp: QParam, cfg: SeriesConfig) -> EvalResult:
    """sum_{l>=1} q^l (q^{(e+1) l} - 1)/[l]^2, which equals xi_q(e+1) - xi_q(0)"""
    if e < 0:
        raise DomainError(f"shift e must be >= 0, got {e}")
    with precision_scope(qp):
        q = qp.q
        return _single_series(
            lambda l: q ** l * mp.expm1((e + 1) * l * qp.log_q) / _bracket(qp, l) ** 2, q, cfg
        )
