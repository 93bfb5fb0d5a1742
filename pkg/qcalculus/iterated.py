"""
q-Iterated Integrals
Nested Jackson integrals of rational 1-forms and the q-polylog identities they carry
"""

import logging
import math
from typing import Any, List, Sequence

from mpmath import mp, mpc, mpf
from pydantic import BaseModel, ConfigDict, field_validator

from models.data_models import EvalMethod, EvalResult, QParam, SeriesConfig, VerificationRecord, make_svec
from models.errors import DomainError, SingularLatticeError
from qcalculus.jackson import jackson_derivative
from qcore.arithmetic import precision_scope
from qseries.nested_sums import qpolylog_direct

logger = logging.getLogger(__name__)


# ==================== FORM DESCRIPTORS ====================

class _Form(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    def poles(self) -> List[mpc]:
        raise NotImplementedError

    def density(self, t: mpc) -> mpc:
        """phi with the form written phi(t) d_qt"""
        raise NotImplementedError


class PoleForm(_Form):
    """d_qt/(t-a); a = 0 is d_qt/t"""
    a: Any

    @field_validator("a", mode="before")
    @classmethod
    def _as_complex(cls, v: Any) -> mpc:
        return mpc(v)

    def poles(self) -> List[mpc]:
        return [self.a]

    def density(self, t: mpc) -> mpc:
        return 1 / (t - self.a)


class CollapseForm(_Form):
    """t d_qt/((t-a)(t-b))"""
    a: Any
    b: Any

    @field_validator("a", "b", mode="before")
    @classmethod
    def _as_complex(cls, v: Any) -> mpc:
        return mpc(v)

    def poles(self) -> List[mpc]:
        return [self.a, self.b]

    def density(self, t: mpc) -> mpc:
        return t / ((t - self.a) * (t - self.b))


class DoublePoleForm(_Form):
    """b d_qt/(t-b)^2"""
    b: Any

    @field_validator("b", mode="before")
    @classmethod
    def _as_complex(cls, v: Any) -> mpc:
        return mpc(v)

    def poles(self) -> List[mpc]:
        return [self.b]

    def density(self, t: mpc) -> mpc:
        return self.b / (t - self.b) ** 2


def describe_form(form: _Form) -> str:
    if isinstance(form, PoleForm):
        return "d_qt/t" if form.a == 0 else f"d_qt/(t-{mp.nstr(form.a, 8)})"
    if isinstance(form, CollapseForm):
        return f"t d_qt/((t-{mp.nstr(form.a, 8)})(t-{mp.nstr(form.b, 8)}))"
    return f"b d_qt/(t-b)^2, b={mp.nstr(form.b, 8)}"


# ==================== NESTED JACKSON SUMS ====================

def _lattice_size(forms: Sequence[_Form], b: mpc, qp: QParam, cfg: SeriesConfig) -> int:
    """Lattice depth P with |b| q^P (P+1)^r below tol, scaled by the closest pole distance"""
    r = len(forms)
    distances = [abs(p) for form in forms for p in form.poles() if p != 0]
    scale = max([mpf(1)] + [abs(b) / d for d in distances if d > 0])
    target = mp.log(mpf(cfg.tol) / (scale ** r * max(abs(b), 1)))
    P = int(mp.ceil(target / qp.log_q)) + 1
    for _ in range(8):
        P_next = int(mp.ceil((target - r * mp.log(P + 1)) / qp.log_q)) + 1
        if P_next == P:
            break
        P = P_next
    return max(P, 8)


def _nested_sum(forms: Sequence[_Form], b: mpc, P: int, qp: QParam) -> mpc:
    """
    F_0 = 1, F_k[p] = sum_{p' >= p} phi_k(t_p') t_p' (1-q) F_{k-1}[p'] on t_p = b q^p,
    for p = 0..P; the first form is innermost. Returns F_r[0].
    """
    one_minus_q = 1 - qp.q
    lattice = [b * mp.exp(p * qp.log_q) for p in range(P + 1)]
    threshold = qp.threshold
    previous = [mpc(1)] * (P + 1)
    for k, form in enumerate(forms):
        for pole in form.poles():
            for p, t in enumerate(lattice):
                if abs(t - pole) < threshold:
                    raise SingularLatticeError(
                        f"form {k + 1} ({describe_form(form)}) has a pole on lattice point t = b q^{p}",
                        witness={"form": k + 1, "p": p}
                    )
        current = [mpc(0)] * (P + 1)
        running = mpc(0)
        for p in range(P, -1, -1):
            t = lattice[p]
            running += form.density(t) * t * one_minus_q * previous[p]
            current[p] = running
        previous = current
    return previous[0]


def q_iterated(forms: Sequence[_Form], b: Any, qp: QParam, cfg: SeriesConfig) -> EvalResult:
    """
    int_0^b forms[0] o forms[1] o ... o forms[-1], innermost first.

    Every inner integral runs up to an outer lattice point, which is itself a point of
    the lattice b q^p, so one backward sweep per form evaluates the whole nest.

    Raises:
        DomainError: empty pattern, or d_qt/t innermost
        SingularLatticeError: a pole lies on the lattice
    """
    if not forms:
        raise DomainError("q_iterated needs at least one form")
    first = forms[0]
    if isinstance(first, PoleForm) and first.a == 0:
        raise DomainError("d_qt/t cannot be the innermost form: the integral diverges at 0")
    with precision_scope(qp):
        b = mpc(b)
        if b == 0:
            return EvalResult(value=0, method=EvalMethod.JACKSON)
        P = _lattice_size(forms, b, qp, cfg)
        truncated = P > cfg.max_terms
        P = min(P, cfg.max_terms)
        value = _nested_sum(forms, b, P, qp)
        P_check = P + max(8, P // 4)
        check = _nested_sum(forms, b, P_check, qp)
        logger.debug("q_iterated depth %d on %d lattice points", len(forms), P_check + 1)
        return EvalResult(value=check, error_bound=abs(check - value), terms_used=P_check + 1,
                          truncated=truncated, method=EvalMethod.JACKSON)


# ==================== q-POLYLOGARITHMS ====================

def chen_pattern(n: Sequence[int], z: Sequence[Any]) -> List[_Form]:
    """d_qt/(t-a_1) (d_qt/t)^{n_1-1} ... d_qt/(t-a_d) (d_qt/t)^{n_d-1}, a_j = 1/(z_j ... z_d)"""
    if len(n) != len(z):
        raise DomainError(f"depth mismatch: {len(n)} weights, {len(z)} arguments")
    forms: List[_Form] = []
    tail = mpc(1)
    poles: List[mpc] = []
    for zj in reversed([mpc(x) for x in z]):
        tail = tail * zj
        if tail == 0:
            raise DomainError("polylog arguments must be non-zero for the iterated form")
        poles.append(1 / tail)
    poles.reverse()
    for nj, aj in zip(n, poles):
        if int(nj) < 1:
            raise DomainError(f"polylog weights must be positive integers, got {list(n)}")
        forms.append(PoleForm(a=aj))
        forms.extend(PoleForm(a=0) for _ in range(int(nj) - 1))
    return forms


def polylog_iterated(n: Sequence[int], z: Sequence[Any], qp: QParam, cfg: SeriesConfig) -> EvalResult:
    """Li_{q;n}(z) = (-1)^d int_0^1 of the Chen pattern, valid off the singular set"""
    with precision_scope(qp):
        result = q_iterated(chen_pattern(n, z), 1, qp, cfg)
        sign = (-1) ** len(n)
        return result.model_copy(update={"value": sign * result.value})


def verify_qdiff(
    n: Sequence[int], z: Sequence[Any], j: int, qp: QParam, cfg: SeriesConfig, case_index: int = 0
) -> VerificationRecord:
    """
    D_{q;z_j} Li_{q;n}(z) against its reduction:
        n_j >= 2:        Li with n_j lowered, divided by z_j
        d = n_1 = 1:     1/(1-z)
        n_j = 1, d >= 2: (Li(.., z_{j-1} z_j, ..) - Li(.., z_j z_{j+1}, ..)/z_j)/(1-z_j),
                         both without the j-th slot; the second term is absent when j = d
    """
    n = [int(x) for x in n]
    d = len(n)
    if not 1 <= j <= d:
        raise DomainError(f"index j={j} out of range for depth {d}")
    with precision_scope(qp):
        z = list(make_svec(z))
        idx = j - 1

        def li(w: Any) -> mpc:
            point = z[:idx] + [mpc(w)] + z[idx + 1:]
            return qpolylog_direct(n, point, qp, cfg).value

        lhs = jackson_derivative(li, z[idx], qp)
        zj = z[idx]
        if n[idx] >= 2:
            lowered = n[:idx] + [n[idx] - 1] + n[idx + 1:]
            rhs = qpolylog_direct(lowered, z, qp, cfg).value / zj
            rule = "n_j >= 2"
        elif d == 1:
            rhs = 1 / (1 - zj)
            rule = "d = n_1 = 1"
        else:
            rest_n = n[:idx] + n[idx + 1:]
            if idx == 0:
                first = qpolylog_direct(rest_n, z[1:], qp, cfg).value
            else:
                merged = z[:idx - 1] + [z[idx - 1] * zj] + z[idx + 1:]
                first = qpolylog_direct(rest_n, merged, qp, cfg).value
            second = mpc(0)
            if idx < d - 1:
                merged = z[:idx] + [zj * z[idx + 1]] + z[idx + 2:]
                second = qpolylog_direct(rest_n, merged, qp, cfg).value / zj
            rhs = (first - second) / (1 - zj)
            rule = "n_j = 1"
        return VerificationRecord(
            name="qdiff",
            case_index=case_index,
            inputs={"n": n, "z": z, "j": j, "q": mp.nstr(qp.q, qp.precision)},
            lhs=lhs,
            rhs=rhs,
            residual=abs(lhs - rhs),
            tol=cfg.tol,
            # two truncated series divided by (1 - q) z_j, plus rounding at the output precision
            error_bound=10 * mpf(cfg.tol) + mpf(10) ** (1 - qp.precision),
            notes=[rule],
        )



def pole_clearance(forms: Sequence[_Form], b: Any, qp: QParam) -> mpf:
    """Smallest |t - pole| over all lattice points t = b q^p, pole in the forms"""
    with precision_scope(qp):
        b = mpc(b)
        best = mp.inf
        for form in forms:
            for pole in form.poles():
                if pole == 0:
                    continue
                ratio = abs(pole) / abs(b)
                p = math.log(float(ratio)) / float(qp.log_q) if ratio > 0 else 0
                for candidate in {max(0, math.floor(p)), max(0, math.ceil(p))}:
                    best = min(best, abs(b * mp.exp(candidate * qp.log_q) - pole))
                best = min(best, abs(b - pole))
        return best
