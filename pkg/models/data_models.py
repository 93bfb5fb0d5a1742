"""
QZeta Data Models
Core records shared by the series, continuation and verification engines
"""

from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from mpmath import mp, mpc, mpf
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from config.settings import get_settings


# ==================== ENUMS ====================

class EvalMethod(str, Enum):
    """How a value was obtained"""
    AUTO = "auto"
    DIRECT = "direct"                    # convergent nested series
    CONTINUED = "continued"              # binomial double-sum continuation
    EULER_MACLAURIN = "euler-maclaurin"  # classical oracle
    JACKSON = "jackson"                  # nested Jackson sums
    COMBINATION = "combination"          # linear combination of other values
    CLOSED_FORM = "closed-form"


class PoleCondition(str, Enum):
    """The three hyperplane families of the zeta pole set"""
    LAST_AT_ONE = "last-coordinate-at-one"
    LAST_NONPOSITIVE_SHIFTED = "last-coordinate-nonpositive-shifted"
    PARTIAL_SUM_INTEGER = "partial-sum-integer"


class LimitOrder(str, Enum):
    """Order of the two one-variable limits at an indeterminacy point"""
    S2_FIRST = "s2-first"    # zeta(-m,-n)
    S1_FIRST = "s1-first"    # zeta^R(-m,-n)


class ResidueMode(str, Enum):
    CLOSED = "closed"
    NUMERIC = "numeric"
    BOTH = "both"


class TableEntryKind(str, Enum):
    """Classification of a classical double-zeta lattice point"""
    POLE = "POLE"
    INDETERMINACY = "INDETERMINACY"


# ==================== HELPERS ====================

CValue = mpc
SVec = Tuple[mpc, ...]


def cvalue_to_dict(value: Any) -> Dict[str, str]:
    """
    Serialize a complex number as {re, im} decimal strings at the active mp.dps.
    Report builders call this inside the command's precision scope.
    """
    z = mpc(value)
    digits = mp.dps
    return {"re": mp.nstr(z.real, digits), "im": mp.nstr(z.imag, digits)}


def real_to_str(value: Any) -> str:
    return mp.nstr(mpf(value), 8)


def make_svec(entries: Sequence[Any]) -> SVec:
    """Build a signature vector; depth must be at least one"""
    vec = tuple(mpc(e) for e in entries)
    if not vec:
        raise ValueError("signature vector must have depth d >= 1")
    return vec


# ==================== PARAMETERS ====================

class QParam(BaseModel):
    """
    Deformation parameter q in (0,1) with cached log q.
    q is parsed at working precision (precision + guard digits); floats go through str().
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    q: Any
    log_q: Any = None
    precision: int = Field(default=40, ge=5, le=2000)
    guard: int = Field(default=10, ge=0, le=200)

    @model_validator(mode="before")
    @classmethod
    def _resolve_q(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        data = dict(data)
        settings = get_settings()
        precision = int(data.get("precision") or settings.precision)
        guard = int(data["guard"]) if data.get("guard") is not None else settings.guard_digits
        raw = data.get("q")
        if raw is None:
            raise ValueError("q is required")
        if isinstance(raw, float):
            raw = repr(raw)
        with mp.workdps(precision + guard):
            q = mpf(raw)
            if not (0 < q < 1):
                raise ValueError(f"q must lie strictly inside (0,1), got {mp.nstr(q, 12)}")
            data["q"] = q
            data["log_q"] = mp.log(q)
        data["precision"] = precision
        data["guard"] = guard
        return data

    @model_validator(mode="after")
    def _check_log(self) -> "QParam":
        with mp.workdps(self.precision + self.guard):
            if not self.log_q < 0:
                raise ValueError("log q must be negative")
            if abs(mp.exp(self.log_q) - self.q) >= mpf(10) ** (1 - self.precision):
                raise ValueError("cached log q inconsistent with q")
        return self

    @property
    def dps(self) -> int:
        """Working decimal digits"""
        return self.precision + self.guard

    @property
    def threshold(self) -> mpf:
        """Pole-detection threshold 10^(-precision/2)"""
        return mpf(10) ** (-mpf(self.precision) / 2)

    def with_q(self, q: Any) -> "QParam":
        return QParam(q=q, precision=self.precision, guard=self.guard)

    def describe(self) -> Dict[str, Any]:
        return {"q": mp.nstr(self.q, self.precision), "precision": self.precision}


class SeriesConfig(BaseModel):
    """Truncation and extrapolation schedule"""
    tol: float = Field(default=1e-30, gt=0.0)
    max_terms: int = Field(default=20000, ge=8)
    # residue / iterated-limit ladders: h_j = step0 * 2^-j, j = 0..levels
    step0: float = Field(default=1e-2, gt=0.0, lt=1.0)
    levels: int = Field(default=10, ge=1, le=40)
    richardson_order: int = Field(default=6, ge=1, le=30)
    # q -> 1 ladder: q_j = 1 - 2^-j, j = limit_start..limit_levels
    limit_start: int = Field(default=3, ge=1)
    limit_levels: int = Field(default=10, ge=2, le=40)
    limit_guard_digits: int = Field(default=20, ge=0)
    extrapolation_tol: float = Field(default=1e-3, gt=0.0)

    @classmethod
    def from_settings(cls, **overrides: Any) -> "SeriesConfig":
        settings = get_settings()
        values: Dict[str, Any] = {"tol": settings.tol, "max_terms": settings.max_terms}
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


# ==================== RESULTS ====================

class EvalResult(BaseModel):
    """Value with error bound and truncation metadata"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    value: Any
    error_bound: Any = Field(default_factory=lambda: mpf(0))
    terms_used: int = Field(default=0, ge=0)
    truncated: bool = False
    method: EvalMethod = EvalMethod.DIRECT

    @field_validator("value", mode="before")
    @classmethod
    def _as_complex(cls, v: Any) -> mpc:
        return mpc(v)

    @field_validator("error_bound", mode="before")
    @classmethod
    def _as_bound(cls, v: Any) -> mpf:
        bound = mpf(v)
        if bound < 0:
            raise ValueError("error_bound must be non-negative")
        return bound

    def to_dict(self) -> Dict[str, Any]:
        return {
            "value": cvalue_to_dict(self.value),
            "error_bound": real_to_str(self.error_bound),
            "terms_used": self.terms_used,
            "truncated": self.truncated,
            "method": self.method.value,
        }


class PoleReport(BaseModel):
    """Classification of a point against the zeta pole set"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    in_pole_set: bool
    matched_condition: Optional[PoleCondition] = None
    index: Optional[int] = None                       # j, 1-based
    witness: Optional[Tuple[int, int]] = None         # (real integer, imaginary lattice index)
    distance: Any = Field(default_factory=lambda: mpf(0))
    threshold: Any = Field(default_factory=lambda: mpf(0))

    @model_validator(mode="after")
    def _check_distance(self) -> "PoleReport":
        if self.distance < 0:
            raise ValueError("distance must be non-negative")
        if self.in_pole_set and not self.distance < self.threshold:
            raise ValueError("in_pole_set requires distance below threshold")
        return self

    def to_dict(self) -> Dict[str, Any]:
        return {
            "in_pole_set": self.in_pole_set,
            "matched_condition": self.matched_condition.value if self.matched_condition else None,
            "index": self.index,
            "witness": list(self.witness) if self.witness else None,
            "distance": real_to_str(self.distance),
        }


class LimitEstimate(BaseModel):
    """Extrapolated limit of a sampled ladder"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    value: Any
    levels_used: int = Field(ge=1)
    residual: Any = Field(default_factory=lambda: mpf(0))

    @field_validator("value", mode="before")
    @classmethod
    def _as_complex(cls, v: Any) -> mpc:
        return mpc(v)

    @field_validator("residual", mode="before")
    @classmethod
    def _as_residual(cls, v: Any) -> mpf:
        r = mpf(v)
        if r < 0:
            raise ValueError("residual must be non-negative")
        return r

    def to_dict(self) -> Dict[str, Any]:
        return {
            "value": cvalue_to_dict(self.value),
            "levels_used": self.levels_used,
            "residual": real_to_str(self.residual),
        }


class TableRow(BaseModel):
    """One classical double-zeta lattice entry (pole residue or indeterminate value)"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    k: int = Field(ge=0)
    n: int = Field(ge=0)
    point: Tuple[int, int]
    kind: TableEntryKind
    value: Any                       # exact sympy number
    rule: str
    q_value: Optional[Any] = None

    def to_dict(self) -> Dict[str, Any]:
        row: Dict[str, Any] = {
            "k": self.k,
            "n": self.n,
            "point": list(self.point),
            "kind": self.kind.value,
            "value": str(self.value),
            "rule": self.rule,
        }
        if self.q_value is not None:
            row["q_value"] = cvalue_to_dict(self.q_value)
        return row


class VerificationRecord(BaseModel):
    """Both sides of an identity, its residual, and the sub-terms that produced it"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    name: str
    case_index: int = 0
    inputs: Dict[str, Any] = Field(default_factory=dict)
    lhs: Any = Field(default_factory=lambda: mpc(0))
    rhs: Any = Field(default_factory=lambda: mpc(0))
    residual: Any = Field(default_factory=lambda: mpf(0))
    tol: float = Field(default=1e-20, gt=0.0)
    error_bound: Any = Field(default_factory=lambda: mpf(0))    # propagated series error
    terms: Dict[str, Any] = Field(default_factory=dict)
    notes: List[str] = Field(default_factory=list)

    @property
    def acceptance(self) -> mpf:
        """Residual threshold: tol, widened to ten times the propagated error"""
        return max(mpf(self.tol), 10 * mpf(self.error_bound))

    @property
    def passed(self) -> bool:
        return bool(self.residual <= self.acceptance)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "case_index": self.case_index,
            "inputs": {k: _plain(v) for k, v in self.inputs.items()},
            "lhs": cvalue_to_dict(self.lhs),
            "rhs": cvalue_to_dict(self.rhs),
            "residual": real_to_str(self.residual),
            "tol": self.tol,
            "error_bound": real_to_str(self.error_bound),
            "passed": self.passed,
            "terms": {k: _plain(v) for k, v in self.terms.items()},
            "notes": self.notes,
        }


def _plain(value: Any) -> Any:
    """Best-effort JSON form for record payloads"""
    if isinstance(value, (mpc, mpf)):
        return cvalue_to_dict(value)
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, Enum):
        return value.value
    return value
