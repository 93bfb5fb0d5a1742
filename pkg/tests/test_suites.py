"""
Verification suites and the runner
"""

import pytest

from compliance.audit_logging import AuditEventType, AuditLogger
from models.data_models import VerificationRecord
from models.errors import DomainError, VerificationError
from workflows.verification_suites import SUITES, SuiteRequest, VerificationRunner, register_suite


@pytest.fixture
def request_for(qp, cfg):
    def factory(**options) -> SuiteRequest:
        return SuiteRequest(qp=qp, cfg=cfg, options=options, seed=1)
    return factory


def test_registered_suites() -> None:
    assert {"series-shuffle", "integral-shuffle", "qdiff", "qftc", "qshuffle-lemma", "lemma-li-shift"} <= set(SUITES)


def test_unknown_suite(request_for) -> None:
    with pytest.raises(DomainError) as info:
        VerificationRunner().run("stuffle", request_for())
    assert "series-shuffle" in str(info.value)


def test_series_shuffle_single_case(request_for) -> None:
    audit = AuditLogger(command="verify")
    records = VerificationRunner(audit).run("series-shuffle", request_for(w1="3", w2="2,4"))
    assert len(records) == 1
    assert records[0].passed
    assert len(audit.storage.get_by_event_type(AuditEventType.VERIFICATION_PASSED)) == 1


def test_series_shuffle_default_cases_are_seeded(request_for) -> None:
    first = VerificationRunner().run("series-shuffle", request_for(cases=2))
    second = VerificationRunner().run("series-shuffle", request_for(cases=2))
    assert len(first) == 5
    assert [r.inputs for r in first] == [r.inputs for r in second]


def test_integral_shuffle_needs_both_weights(request_for) -> None:
    with pytest.raises(DomainError):
        VerificationRunner().run("integral-shuffle", request_for(m=3))
    with pytest.raises(DomainError):
        VerificationRunner().run("integral-shuffle", request_for(m=3, n=3))


def test_integral_shuffle_single_case(request_for) -> None:
    records = VerificationRunner().run("integral-shuffle", request_for(m=2, n=3))
    assert [r.inputs["m"] for r in records] == [2]


@pytest.mark.parametrize("name", ["qdiff", "qftc", "qshuffle-lemma", "lemma-li-shift"])
def test_default_suites_pass(request_for, name: str) -> None:
    records = VerificationRunner().run(name, request_for())
    assert records
    assert all(r.passed for r in records)
    assert [r.case_index for r in records] == list(range(len(records)))


def test_failures_raise_with_records(request_for) -> None:
    @register_suite("always-fails")
    def always_fails(request: SuiteRequest):
        return [VerificationRecord(name="always-fails", case_index=i, residual=1, tol=1e-10) for i in range(2)]

    audit = AuditLogger(command="verify")
    try:
        with pytest.raises(VerificationError) as info:
            VerificationRunner(audit).run("always-fails", request_for())
    finally:
        SUITES.pop("always-fails")
    assert len(info.value.records) == 2
    assert "cases 0, 1" in str(info.value)
    assert info.value.exit_code == 4
    assert len(audit.storage.get_by_event_type(AuditEventType.VERIFICATION_FAILED)) == 2
