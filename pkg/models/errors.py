"""
Error Hierarchy
Exceptions raised by the evaluators, each mapped to a CLI exit code
"""

from typing import Any, Dict, List, Optional


class QZetaError(Exception):
    """Base class for every library error"""
    exit_code = 1


class DomainError(QZetaError, ValueError):
    """An input violates an operation's precondition"""
    exit_code = 1


class ConvergenceRegionError(DomainError):
    """A series was requested outside its region of convergence"""


class PoleError(QZetaError, ArithmeticError):
    """
    Evaluation point lies on (or within threshold of) a pole or singular set.

    Attributes:
        report: PoleReport for zeta-type points, None for lattice/series witnesses
        witness: integer data locating the offending denominator
    """
    exit_code = 2

    def __init__(
        self,
        message: str,
        report: Optional[Any] = None,
        witness: Optional[Dict[str, Any]] = None
    ):
        super().__init__(message)
        self.report = report
        self.witness = witness or {}


class SingularLatticeError(PoleError):
    """A Jackson lattice point coincides with a pole of the integrand"""


class NonConvergenceError(QZetaError):
    """An extrapolation ladder did not settle below tolerance"""
    exit_code = 3

    def __init__(self, message: str, residual: Optional[Any] = None):
        super().__init__(message)
        self.residual = residual


class VerificationError(QZetaError):
    """One or more identity checks exceeded tolerance"""
    exit_code = 4

    def __init__(self, message: str, records: Optional[List[Any]] = None):
        super().__init__(message)
        self.records = records or []
