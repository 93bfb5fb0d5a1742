"""
Jackson q-Calculus
q-derivative, Jackson q-integral, the q-Leibniz rule and the q-fundamental theorem
"""

import logging
from typing import Any, Callable

from mpmath import mp, mpc, mpf

from models.data_models import EvalMethod, EvalResult, QParam, SeriesConfig, VerificationRecord
from models.errors import DomainError, PoleError, SingularLatticeError
from qcore.arithmetic import precision_scope
from qseries.nested_sums import TailMonitor

logger = logging.getLogger(__name__)

Function = Callable[[Any], Any]


def _value(out: Any) -> mpc:
    return mpc(getattr(out, "value", out))


def _call(f: Function, x: Any, where: str) -> mpc:
    try:
        value = _value(f(x))
    except (ZeroDivisionError, PoleError) as exc:
        raise SingularLatticeError(f"integrand is singular at {where}: {exc}", witness={"point": str(x)}) from exc
    if not mp.isfinite(value):
        raise SingularLatticeError(f"integrand is not finite at {where}", witness={"point": str(x)})
    return value


# ==================== DERIVATIVE ====================

def jackson_derivative(f: Function, z: Any, qp: QParam) -> mpc:
    """D_q f(z) = (f(z) - f(qz)) / ((1-q) z)"""
    with precision_scope(qp):
        z = mpc(z)
        if z == 0:
            raise DomainError("Jackson derivative is undefined at z = 0")
        return (_value(f(z)) - _value(f(qp.q * z))) / ((1 - qp.q) * z)


def q_leibniz_check(f: Function, g: Function, x: Any, qp: QParam) -> mpf:
    """|D_q[fg](x) - D_q f g - f D_q g - x(q-1) D_q f D_q g|"""
    with precision_scope(qp):
        x = mpc(x)
        df = jackson_derivative(f, x, qp)
        dg = jackson_derivative(g, x, qp)
        dfg = jackson_derivative(lambda t: _value(f(t)) * _value(g(t)), x, qp)
        fx, gx = _value(f(x)), _value(g(x))
        return abs(dfg - df * gx - fx * dg - x * (qp.q - 1) * df * dg)


# ==================== INTEGRAL ====================

def jackson_integral(f: Function, a: Any, b: Any, qp: QParam, cfg: SeriesConfig) -> EvalResult:
    """
    int_a^b f d_qt = sum_{i>=0} f(a + q^i (b-a)) (q^i - q^{i+1}) (b-a).

    Not additive in the interval: int_a^b + int_b^c differs from int_a^c in general.
    """
    with precision_scope(qp):
        a, b = mpc(a), mpc(b)
        width = b - a
        if width == 0:
            return EvalResult(value=0, method=EvalMethod.JACKSON)
        q = qp.q
        monitor = TailMonitor(q, cfg.tol)
        total = mpc(0)
        qi = mpf(1)
        for i in range(cfg.max_terms):
            point = a + qi * width
            term = _call(f, point, f"lattice point {i} (t = {mp.nstr(point, 10)})") * qi * (1 - q) * width
            total += term
            if monitor.done(i + 1, term):
                logger.debug("Jackson integral converged after %d lattice points", i + 1)
                return EvalResult(value=total, error_bound=monitor.bound, terms_used=i + 1, method=EvalMethod.JACKSON)
            qi *= q
        logger.warning("Jackson integral hit max_terms=%d", cfg.max_terms)
        return EvalResult(value=total, error_bound=monitor.bound, terms_used=cfg.max_terms,
                          truncated=True, method=EvalMethod.JACKSON)


def q_ftc_check(f: Function, x: Any, qp: QParam, cfg: SeriesConfig, case_index: int = 0) -> VerificationRecord:
    """int_0^x D_q f d_qt against f(x) - f(0)"""
    with precision_scope(qp):
        x = mpc(x)
        integral = jackson_integral(lambda t: jackson_derivative(f, t, qp), 0, x, qp, cfg)
        rhs = _value(f(x)) - _value(f(mpc(0)))
        return VerificationRecord(
            name="qftc",
            case_index=case_index,
            inputs={"x": x, "q": mp.nstr(qp.q, qp.precision)},
            lhs=integral.value,
            rhs=rhs,
            residual=abs(integral.value - rhs),
            tol=cfg.tol,
            error_bound=integral.error_bound,
            terms={"lattice_points": integral.terms_used},
        )
