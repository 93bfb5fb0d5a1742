"""
Computation Audit Trail
Records evaluations, poles, truncations and verification outcomes for reproducible reports
"""

import json
import logging
from datetime import datetime
from enum import Enum
from typing import Any, Dict, List, Optional

from config.settings import get_settings
from models.data_models import EvalResult, LimitEstimate, PoleReport, VerificationRecord, _plain

logger = logging.getLogger(__name__)


class AuditEventType(str, Enum):
    """Types of auditable events"""
    # Commands
    COMMAND_STARTED = "COMMAND_STARTED"
    COMMAND_COMPLETED = "COMMAND_COMPLETED"
    COMMAND_FAILED = "COMMAND_FAILED"

    # Numerics
    EVALUATION = "EVALUATION"
    POLE_DETECTED = "POLE_DETECTED"
    TRUNCATION_CAP = "TRUNCATION_CAP"
    EXTRAPOLATION = "EXTRAPOLATION"

    # Identities
    VERIFICATION_PASSED = "VERIFICATION_PASSED"
    VERIFICATION_FAILED = "VERIFICATION_FAILED"


class AuditSeverity(str, Enum):
    """Severity levels for audit events"""
    INFO = "INFO"
    WARNING = "WARNING"
    ERROR = "ERROR"
    CRITICAL = "CRITICAL"


class AuditEntry:
    """Single audit log entry"""

    _counter = 0

    def __init__(
        self,
        event_type: AuditEventType,
        severity: AuditSeverity,
        command: Optional[str],
        action: str,
        details: Optional[Dict[str, Any]] = None
    ):
        AuditEntry._counter += 1
        self.audit_id = f"audit_{AuditEntry._counter:06d}"
        self.timestamp = datetime.now()
        self.event_type = event_type
        self.severity = severity
        self.command = command
        self.action = action
        self.details = details or {}

    def to_dict(self) -> Dict[str, Any]:
        return {
            "audit_id": self.audit_id,
            "timestamp": self.timestamp.isoformat(),
            "event_type": self.event_type.value,
            "severity": self.severity.value,
            "command": self.command,
            "action": self.action,
            "details": _plain(self.details),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, default=str)


class InMemoryAuditStorage:
    """Append-only in-process log"""

    def __init__(self):
        self.entries: List[AuditEntry] = []

    def write(self, entry: AuditEntry) -> None:
        self.entries.append(entry)

    def get_by_event_type(self, event_type: AuditEventType) -> List[AuditEntry]:
        return [e for e in self.entries if e.event_type == event_type]

    def get_all(self) -> List[AuditEntry]:
        return list(self.entries)


class AuditLogger:
    """
    Audit trail for one CLI session
    Every command, pole, truncation cap and verification outcome is recorded so a report
    can be traced back to the settings and ladders that produced it
    """

    def __init__(self, storage_backend: Optional[InMemoryAuditStorage] = None, command: Optional[str] = None):
        self.storage = storage_backend or InMemoryAuditStorage()
        self.command = command
        self.alerts_enabled = get_settings().audit_alerts

    def log(self, entry: AuditEntry) -> None:
        self.storage.write(entry)
        if entry.severity == AuditSeverity.CRITICAL:
            self._trigger_alert(entry)

    def _entry(self, event_type: AuditEventType, severity: AuditSeverity, action: str,
               details: Optional[Dict[str, Any]] = None) -> None:
        self.log(AuditEntry(event_type, severity, self.command, action, details))

    def log_command(self, event_type: AuditEventType, details: Dict[str, Any]) -> None:
        severity = AuditSeverity.ERROR if event_type == AuditEventType.COMMAND_FAILED else AuditSeverity.INFO
        self._entry(event_type, severity, f"{self.command}: {event_type.value.lower()}", details)

    def log_evaluation(self, label: str, result: EvalResult) -> None:
        self._entry(AuditEventType.EVALUATION, AuditSeverity.INFO, f"evaluated {label}", result.to_dict())
        if result.truncated:
            self.log_truncation(label, result.terms_used)

    def log_pole(self, label: str, report: Optional[PoleReport], witness: Dict[str, Any]) -> None:
        details: Dict[str, Any] = {"witness": witness}
        if report is not None:
            details["report"] = report.to_dict()
        self._entry(AuditEventType.POLE_DETECTED, AuditSeverity.WARNING, f"pole at {label}", details)

    def log_truncation(self, label: str, terms_used: int) -> None:
        self._entry(AuditEventType.TRUNCATION_CAP, AuditSeverity.WARNING,
                    f"{label} stopped at the term cap", {"terms_used": terms_used})

    def log_extrapolation(self, label: str, estimate: LimitEstimate, tolerance: float) -> None:
        severity = AuditSeverity.INFO if estimate.residual <= tolerance else AuditSeverity.ERROR
        details = estimate.to_dict()
        details["tolerance"] = tolerance
        self._entry(AuditEventType.EXTRAPOLATION, severity, f"extrapolated {label}", details)

    def log_verification(self, record: VerificationRecord) -> None:
        if record.passed:
            self._entry(AuditEventType.VERIFICATION_PASSED, AuditSeverity.INFO,
                        f"{record.name} case {record.case_index} passed", {"residual": record.residual})
        else:
            self._entry(AuditEventType.VERIFICATION_FAILED, AuditSeverity.CRITICAL,
                        f"{record.name} case {record.case_index} failed", record.to_dict())

    def get_trail(self) -> List[Dict[str, Any]]:
        return [e.to_dict() for e in self.storage.get_all()]

    def _trigger_alert(self, entry: AuditEntry) -> None:
        """Escalate critical entries to the process log"""
        if self.alerts_enabled:
            logger.error("CRITICAL: %s", entry.action)


# ==================== REPRODUCIBILITY ====================

class ReproducibilityChecker:
    """Static checks that a report carries what is needed to rerun it"""

    REQUIRED_CONFIG = ("q", "precision", "tol", "max_terms")

    @staticmethod
    def validate_report(report: Dict[str, Any]) -> Dict[str, Any]:
        """
        Returns {"reproducible": bool, "checks": {...}, "issues": [...]}
        """
        results: Dict[str, Any] = {"reproducible": True, "checks": {}, "issues": []}

        config = report.get("config") or {}
        missing = [key for key in ReproducibilityChecker.REQUIRED_CONFIG if key not in config]
        results["checks"]["config_echo"] = not missing
        if missing:
            results["reproducible"] = False
            results["issues"].append(f"config missing {', '.join(missing)}")

        within = ReproducibilityChecker._residuals_within_tolerance(report)
        results["checks"]["residuals"] = within
        if not within:
            results["reproducible"] = False
            results["issues"].append("residual above tolerance")

        results["checks"]["command"] = bool(report.get("command"))
        if not report.get("command"):
            results["reproducible"] = False
            results["issues"].append("missing command name")
        return results

    @staticmethod
    def _residuals_within_tolerance(report: Dict[str, Any]) -> bool:
        for item in report.get("residuals", []):
            if isinstance(item, dict) and "passed" in item and not item["passed"]:
                return False
        return True
