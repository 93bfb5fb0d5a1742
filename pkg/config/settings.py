"""
Runtime Settings
Environment-driven defaults for precision, tolerances and logging
"""

import os
from pydantic import BaseModel, Field
from dotenv import load_dotenv

# Load environment variables
load_dotenv()


class RuntimeSettings(BaseModel):
    """Resolved runtime configuration"""
    precision: int = Field(default=40, ge=5, le=2000)
    tol: float = Field(default=1e-30, gt=0.0)
    max_terms: int = Field(default=20000, ge=8)
    guard_digits: int = Field(default=10, ge=0, le=200)
    log_level: str = "WARNING"
    audit_alerts: bool = True


def _flag(value: str) -> bool:
    return value.strip().lower() not in ("0", "false", "no", "off", "")


def get_settings() -> RuntimeSettings:
    """
    Read settings from the environment.
    Re-read on every call so QZETA_* overrides apply without restarting.
    """
    return RuntimeSettings(
        precision=int(os.getenv("QZETA_PREC", "40")),
        tol=float(os.getenv("QZETA_TOL", "1e-30")),
        max_terms=int(os.getenv("QZETA_MAX_TERMS", "20000")),
        guard_digits=int(os.getenv("QZETA_GUARD_DIGITS", "10")),
        log_level=os.getenv("QZETA_LOG_LEVEL", "WARNING").upper(),
        audit_alerts=_flag(os.getenv("QZETA_AUDIT_ALERTS", "true")),
    )
