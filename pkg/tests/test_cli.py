"""
Command-line surface: reports, exit codes and output options
"""

import json

import pytest
from mpmath import mp, mpf

from classical.double_zeta import table_rows
from models.data_models import QParam, SeriesConfig
from qseries.nested_sums import qzeta_direct
from qzeta import main


def _run(capsys, *argv: str):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip().startswith("{") else out)


# ==================== eval ====================

def test_eval_qzeta_two(capsys) -> None:
    code, report = _run(capsys, "eval", "--s", "2", "--q", "0.5", "--prec", "30")
    assert code == 0
    assert report["command"] == "eval"
    assert report["config"]["q"] == "0.5"
    assert report["config"]["precision"] == 30
    result = report["results"][0]
    assert result["label"] == "zeta_q(2)"
    with mp.workdps(30):
        expected = qzeta_direct([2], QParam(q="0.5", precision=30), SeriesConfig()).value
        assert abs(mpf(result["value"]["re"]) - expected.real) < mpf(10) ** -20


def test_eval_pole_exit_code(capsys) -> None:
    code, report = _run(capsys, "eval", "--s", "1", "--q", "0.5")
    assert code == 2
    assert "pole" in report
    assert report["pole"]["matched_condition"] == "last-coordinate-at-one"


def test_eval_needs_q(capsys) -> None:
    code, report = _run(capsys, "eval", "--s", "2")
    assert code == 1
    assert report["error"] == "eval needs --q"


def test_eval_rejects_non_numeric_exponent(capsys) -> None:
    code, report = _run(capsys, "eval", "--s", "abc", "--q", "0.5")
    assert code == 1
    assert report["error"] == "cannot parse number 'abc'"
    assert report["results"] == []


def test_eval_polylog(capsys) -> None:
    code, report = _run(capsys, "eval", "--polylog", "--n", "2", "--z", "0.5", "--q", "0.7")
    assert code == 0
    assert report["results"][0]["method"] == "direct"
    assert report["inputs"] == {"n": [2], "z": "0.5"}


def test_eval_fq(capsys) -> None:
    code, report = _run(capsys, "eval", "--s", "2,3", "--t", "1,2", "--q", "0.5")
    assert code == 0
    assert report["results"][0]["label"] == "f_q(2,3; 1,2)"


def test_usage_error(capsys) -> None:
    assert main(["eval", "--bogus"]) == 1
    assert "usage" in capsys.readouterr().err


# ==================== residue ====================

def test_residue_both_modes(capsys) -> None:
    code, report = _run(capsys, "residue", "--point", "4,-4", "--q", "0.7", "--mode", "both")
    assert code == 0
    assert [r["mode"] for r in report["results"]] == ["closed", "numeric"]
    assert report["results"][0]["label"] == "res_closed(k=2, n=4)"
    assert report["residuals"][0]["passed"]


def test_residue_neg3_2(capsys) -> None:
    code, report = _run(capsys, "residue", "--point", "-3,2", "--q", "0.5")
    assert code == 0
    assert report["results"][0]["label"] == "res_neg3_2"
    assert abs(float(report["results"][0]["value"]["re"]) + 0.0550) < 1e-3


def test_residue_at_regular_point(capsys) -> None:
    code, report = _run(capsys, "residue", "--point", "2,3", "--q", "0.5")
    assert code == 1
    assert "regular point" in report["error"]


# ==================== limit ====================

def test_limit_residue(capsys) -> None:
    code, report = _run(capsys, "limit", "--target", "residue:4,-4", "--prec", "25")
    assert code == 0
    assert report["results"][0]["reference"] == "-1/3"
    assert report["residuals"][0]["passed"]


def test_limit_reversed_corner(capsys) -> None:
    code, report = _run(capsys, "limit", "--target", "value:0,0:R", "--prec", "25")
    assert code == 0
    assert report["results"][0]["label"] == "zeta_q^R(0,0)"
    assert report["results"][0]["reference"] == "5/12"


def test_limit_nonpositive_zeta(capsys) -> None:
    code, report = _run(capsys, "limit", "--target", "zeta:-1", "--prec", "25")
    assert code == 0
    assert report["results"][0]["reference"] == "-1/12"


@pytest.mark.parametrize("target", ["value:1,0", "value:0,0:X", "poly:2", "residue:2,3"])
def test_limit_bad_targets(capsys, target: str) -> None:
    code, _ = _run(capsys, "limit", "--target", target)
    assert code == 1


# ==================== verify ====================

def test_verify_series_shuffle(capsys) -> None:
    code, report = _run(capsys, "verify", "series-shuffle", "--q", "0.5", "--w1", "3", "--w2", "2")
    assert code == 0
    assert report["residuals"][0]["label"] == "series-shuffle[0]"
    assert report["residuals"][0]["passed"]


def test_verify_integral_shuffle_equal_weights(capsys) -> None:
    code, report = _run(capsys, "verify", "integral-shuffle", "--q", "0.5", "--m", "3", "--n", "3")
    assert code == 1
    assert "m != n" in report["error"]


def test_verify_with_audit_trail(capsys) -> None:
    code, report = _run(capsys, "verify", "lemma-li-shift", "--q", "0.6", "--e", "2", "--gamma", "3", "--audit")
    assert code == 0
    events = [e["event_type"] for e in report["audit"]]
    assert events == ["COMMAND_STARTED", "VERIFICATION_PASSED", "COMMAND_COMPLETED"]
    assert report["reproducibility"]["reproducible"]


# ==================== PRECISION ====================

def _significant_digits(text: str) -> int:
    mantissa = text.lstrip("-").split("e")[0].replace(".", "")
    return len(mantissa.lstrip("0"))


def test_limit_serializes_at_full_precision(capsys) -> None:
    code, report = _run(capsys, "limit", "--target", "zeta:-1", "--prec", "40")
    assert code == 0
    assert _significant_digits(report["results"][0]["value"]["re"]) >= 40


def test_verify_serializes_at_full_precision(capsys) -> None:
    code, report = _run(capsys, "verify", "series-shuffle", "--q", "0.5", "--w1", "3", "--w2", "2",
                        "--prec", "40", "--tol", "1e-30")
    assert code == 0
    record = report["results"][0]
    assert _significant_digits(record["lhs"]["re"]) >= 40
    assert _significant_digits(record["terms"]["zeta_q(w1)"]["re"]) >= 40
    assert record["tol"] == 1e-30
    assert report["residuals"][0]["tol"] == 1e-30
    assert "error_bound" in report["residuals"][0]


# ==================== table ====================

def test_table(capsys) -> None:
    code, report = _run(capsys, "table", "--kmax", "2", "--nmax", "2")
    assert code == 0
    assert len(report["results"]) == len(table_rows(2, 2))
    assert "q_value" not in report["results"][0]


def test_table_with_q_values(capsys) -> None:
    code, report = _run(capsys, "table", "--kmax", "3", "--nmax", "1", "--q", "0.7")
    assert code == 0
    assert all("q_value" in row for row in report["results"])


def test_table_kmax_zero(capsys) -> None:
    code, report = _run(capsys, "table", "--kmax", "0", "--nmax", "2")
    assert code == 0
    assert [row["point"] for row in report["results"]] == [[2, 0], [3, -1], [4, -2]]


# ==================== OUTPUT ====================

def test_out_file(capsys, tmp_path) -> None:
    path = tmp_path / "report.json"
    code = main(["table", "--kmax", "1", "--nmax", "1", "--out", str(path)])
    assert code == 0
    assert capsys.readouterr().out == ""
    assert json.loads(path.read_text())["command"] == "table"


def test_table_format(capsys) -> None:
    code, text = _run(capsys, "verify", "series-shuffle", "--q", "0.5", "--w1", "3", "--w2", "2", "--format", "table")
    assert code == 0
    assert text.startswith("# verify")
    assert "[ok] series-shuffle[0]" in text
