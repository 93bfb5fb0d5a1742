"""
Shared fixtures: q parameters, series configurations and an mpmath comparison helper
"""

from fractions import Fraction
from typing import Any, Callable

import pytest
from mpmath import mp, mpf

from models.data_models import QParam, SeriesConfig


@pytest.fixture
def make_qp() -> Callable[..., QParam]:
    def factory(q: Any = "0.5", precision: int = 40) -> QParam:
        return QParam(q=q, precision=precision, guard=10)
    return factory


@pytest.fixture
def qp(make_qp: Callable[..., QParam]) -> QParam:
    return make_qp("0.5")


@pytest.fixture
def cfg() -> SeriesConfig:
    return SeriesConfig(tol=1e-30, max_terms=20000)


@pytest.fixture
def ladder_cfg() -> SeriesConfig:
    """Looser truncation for q close to 1"""
    return SeriesConfig(tol=1e-15, max_terms=10 ** 6)


def _num(x: Any) -> Any:
    if isinstance(x, Fraction):
        return mpf(x.numerator) / x.denominator
    return mp.mpmathify(x)


def _close(a: Any, b: Any, tol: Any) -> bool:
    with mp.workdps(60):
        return abs(_num(a) - _num(b)) <= mpf(tol)


@pytest.fixture
def close() -> Callable[[Any, Any, Any], bool]:
    return _close
