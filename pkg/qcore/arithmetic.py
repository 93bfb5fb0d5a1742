"""
Precision Arithmetic Kernel
q-brackets, complex powers of q, generalized binomials and Pochhammer symbols
"""

from typing import Any, List

from mpmath import mp, mpc, mpf

from models.data_models import QParam
from models.errors import DomainError


def precision_scope(qp: QParam):
    """
    Context manager setting the global mpmath working precision for one evaluation.
    The mpmath context is process-global: run parallel evaluations in separate processes.
    """
    return mp.workdps(qp.dps)


def to_cvalue(value: Any) -> mpc:
    """Parse an exponent given as number or text ('2', '-1.5', '0.5+14.1i', '1-2j')"""
    try:
        if isinstance(value, str):
            text = value.strip().replace(" ", "").lower()
            if text.endswith("i"):
                text = text[:-1] + "j"
            return mpc(mp.mpmathify(text))
        return mpc(value)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"cannot parse number '{value}'") from exc


def qbracket(k: int, qp: QParam) -> mpf:
    """[k] = (1 - q^k)/(1 - q)"""
    if k < 1:
        raise ValueError(f"q-bracket needs k >= 1, got {k}")
    return -mp.expm1(k * qp.log_q) / (1 - qp.q)


def qpow(qp: QParam, s: Any) -> mpc:
    """q^s = exp(s log q), single-valued since log q is real"""
    return mp.exp(mpc(s) * qp.log_q)


def one_minus_qpow(qp: QParam, w: Any) -> mpc:
    """1 - q^w without cancellation near w = 0"""
    return -mp.expm1(mpc(w) * qp.log_q)


def gen_binomial(s: Any, r: int) -> mpc:
    """C(s+r-1, r) = prod_{i<r} (s+i) / r!"""
    if r < 0:
        raise ValueError(f"binomial index must be non-negative, got {r}")
    s = mpc(s)
    value = mpc(1)
    for i in range(r):
        value = value * (s + i) / (i + 1)
    return value


def gen_binomial_table(s: Any, count: int) -> List[mpc]:
    """[C(s+r-1, r) for r in 0..count-1] by the running product"""
    s = mpc(s)
    table = [mpc(1)]
    for r in range(1, count):
        table.append(table[-1] * (s + r - 1) / r)
    return table


def pochhammer(s: Any, r: int) -> mpc:
    """
    Rising factorial (s)_r, with (s)_0 = 1 and (s)_{-1} = 1/(s-1).

    Raises:
        ZeroDivisionError: r = -1 and s = 1
    """
    if r < -1:
        raise ValueError(f"Pochhammer index must be >= -1, got {r}")
    s = mpc(s)
    if r == -1:
        if s == 1:
            raise ZeroDivisionError("(s)_{-1} = 1/(s-1) is undefined at s = 1")
        return 1 / (s - 1)
    return mp.rf(s, r)
