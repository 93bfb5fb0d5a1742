"""
Audit trail, reproducibility checks and runtime settings
"""

import logging

import pytest
from mpmath import mpf

from compliance.audit_logging import (
    AuditEntry, AuditEventType, AuditLogger, AuditSeverity, InMemoryAuditStorage, ReproducibilityChecker
)
from config.settings import get_settings
from models.data_models import EvalResult, LimitEstimate, SeriesConfig, VerificationRecord


def _record(residual: str, tol: float = 1e-20) -> VerificationRecord:
    return VerificationRecord(name="series-shuffle", case_index=3, lhs=1, rhs=1, residual=mpf(residual), tol=tol)


# ==================== SETTINGS ====================

def test_settings_defaults(monkeypatch) -> None:
    for key in ("QZETA_PREC", "QZETA_TOL", "QZETA_MAX_TERMS", "QZETA_LOG_LEVEL", "QZETA_AUDIT_ALERTS"):
        monkeypatch.delenv(key, raising=False)
    settings = get_settings()
    assert settings.precision == 40
    assert settings.tol == 1e-30
    assert settings.log_level == "WARNING"
    assert settings.audit_alerts


def test_settings_read_environment(monkeypatch) -> None:
    monkeypatch.setenv("QZETA_PREC", "60")
    monkeypatch.setenv("QZETA_MAX_TERMS", "500")
    monkeypatch.setenv("QZETA_LOG_LEVEL", "debug")
    monkeypatch.setenv("QZETA_AUDIT_ALERTS", "off")
    settings = get_settings()
    assert settings.precision == 60
    assert settings.log_level == "DEBUG"
    assert not settings.audit_alerts
    assert SeriesConfig.from_settings(tol=1e-12).max_terms == 500
    assert SeriesConfig.from_settings(tol=1e-12).tol == 1e-12


# ==================== AUDIT LOGGER ====================

def test_entries_are_numbered_and_serializable() -> None:
    first = AuditEntry(AuditEventType.EVALUATION, AuditSeverity.INFO, "eval", "evaluated zeta_q(2)")
    second = AuditEntry(AuditEventType.EVALUATION, AuditSeverity.INFO, "eval", "evaluated zeta_q(3)")
    assert first.audit_id != second.audit_id
    assert '"event_type": "EVALUATION"' in first.to_json()


def test_truncated_evaluation_adds_cap_entry() -> None:
    audit = AuditLogger(command="eval")
    audit.log_evaluation("zeta_q(2)", EvalResult(value=1, terms_used=20000, truncated=True))
    storage = audit.storage
    assert len(storage.get_by_event_type(AuditEventType.EVALUATION)) == 1
    cap = storage.get_by_event_type(AuditEventType.TRUNCATION_CAP)
    assert cap[0].details == {"terms_used": 20000}
    assert cap[0].severity == AuditSeverity.WARNING


def test_pole_entry() -> None:
    audit = AuditLogger(command="residue")
    audit.log_pole("(1)", None, {"index": 1})
    trail = audit.get_trail()
    assert trail[0]["event_type"] == "POLE_DETECTED"
    assert trail[0]["details"] == {"witness": {"index": 1}}
    assert trail[0]["command"] == "residue"


def test_extrapolation_severity() -> None:
    audit = AuditLogger(command="limit")
    audit.log_extrapolation("zeta", LimitEstimate(value=1, levels_used=4, residual=mpf("1e-6")), 1e-3)
    audit.log_extrapolation("zeta", LimitEstimate(value=1, levels_used=4, residual=mpf("0.1")), 1e-3)
    severities = [e.severity for e in audit.storage.get_all()]
    assert severities == [AuditSeverity.INFO, AuditSeverity.ERROR]
    assert audit.get_trail()[0]["details"]["tolerance"] == 1e-3


def test_failed_verification_is_critical(monkeypatch, caplog) -> None:
    monkeypatch.setenv("QZETA_AUDIT_ALERTS", "true")
    audit = AuditLogger(storage_backend=InMemoryAuditStorage(), command="verify")
    with caplog.at_level(logging.ERROR, logger="compliance.audit_logging"):
        audit.log_verification(_record("1e-25"))
        audit.log_verification(_record("1e-5"))
    assert [e.severity for e in audit.storage.get_all()] == [AuditSeverity.INFO, AuditSeverity.CRITICAL]
    failed = audit.storage.get_by_event_type(AuditEventType.VERIFICATION_FAILED)[0]
    assert failed.action == "series-shuffle case 3 failed"
    assert failed.details["passed"] is False
    assert "CRITICAL: series-shuffle case 3 failed" in caplog.text


def test_alerts_can_be_silenced(monkeypatch, caplog) -> None:
    monkeypatch.setenv("QZETA_AUDIT_ALERTS", "0")
    audit = AuditLogger(command="verify")
    with caplog.at_level(logging.ERROR, logger="compliance.audit_logging"):
        audit.log_verification(_record("1"))
    assert caplog.text == ""


def test_command_failure_is_error() -> None:
    audit = AuditLogger(command="eval")
    audit.log_command(AuditEventType.COMMAND_STARTED, {"argv": ["eval"]})
    audit.log_command(AuditEventType.COMMAND_FAILED, {"error": "pole"})
    trail = audit.get_trail()
    assert [e["severity"] for e in trail] == ["INFO", "ERROR"]
    assert trail[1]["action"] == "eval: command_failed"


# ==================== REPRODUCIBILITY ====================

def test_complete_report_is_reproducible() -> None:
    report = {
        "command": "verify",
        "config": {"q": "0.5", "precision": 40, "tol": 1e-30, "max_terms": 20000},
        "residuals": [{"passed": True}],
    }
    result = ReproducibilityChecker.validate_report(report)
    assert result["reproducible"]
    assert result["issues"] == []


@pytest.mark.parametrize("report, issue", [
    ({"command": "eval", "config": {"q": "0.5"}}, "config missing precision, tol, max_terms"),
    ({"command": "verify", "config": {"q": 1, "precision": 1, "tol": 1, "max_terms": 1},
      "residuals": [{"passed": False}]}, "residual above tolerance"),
    ({"config": {"q": 1, "precision": 1, "tol": 1, "max_terms": 1}}, "missing command name"),
])
def test_incomplete_reports(report, issue: str) -> None:
    result = ReproducibilityChecker.validate_report(report)
    assert not result["reproducible"]
    assert result["issues"] == [issue]


# ==================== RECORDS ====================

def test_record_keeps_configured_tolerance() -> None:
    record = VerificationRecord(name="qftc", residual=mpf("1e-28"), tol=1e-30, error_bound=mpf("2e-29"))
    assert record.passed
    assert abs(record.acceptance - mpf("2e-28")) < mpf("1e-40")
    payload = record.to_dict()
    assert payload["tol"] == 1e-30
    assert abs(mpf(payload["error_bound"]) - mpf("2e-29")) < mpf("1e-36")


def test_record_without_error_bound_uses_tol() -> None:
    assert not VerificationRecord(name="qftc", residual=mpf("1e-28"), tol=1e-30).passed
