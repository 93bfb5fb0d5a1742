#!/usr/bin/env python3
"""
QZETA - q-Multiple Zeta Workbench
Evaluate, extract residues, take q -> 1 limits and verify shuffle identities
"""

import argparse
import json
import logging
import sys
import time
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Tuple

from mpmath import mp, mpf
from pydantic import ValidationError

from classical.double_zeta import dbzeta_neg, table_rows, zeta_nonpositive
from classical.euler_maclaurin import mzv
from compliance.audit_logging import AuditEventType, AuditLogger, ReproducibilityChecker
from config.settings import get_settings
from continuation.extrapolation import numeric_residue_estimate, q_to_1_limit
from continuation.meromorphic import fq_continued, qpolylog_continued, qzeta_eval
from continuation.poles import pole_report
from models.data_models import (
    EvalMethod, LimitOrder, QParam, ResidueMode, SeriesConfig, TableEntryKind, cvalue_to_dict, real_to_str
)
from models.errors import DomainError, PoleError, QZetaError, VerificationError
from qcore.arithmetic import precision_scope, to_cvalue
from qseries.nested_sums import fq_direct, qpolylog_direct
from special_values.closed_forms import (
    kgen2_value, qzeta_neg_closed, res_closed, res_limit_target, res_neg3_2
)
from workflows.verification_suites import SUITES, SuiteRequest, VerificationRunner

logger = logging.getLogger("qzeta")

Report = Dict[str, Any]


class _Parser(argparse.ArgumentParser):
    """Usage errors surface as DomainError so they map to exit code 1"""

    def error(self, message: str) -> None:
        raise DomainError(f"usage: {message}")


# ==================== PARSING HELPERS ====================

def _split(text: str) -> List[str]:
    parts = [p.strip() for p in text.split(",")]
    if not text.strip() or any(not p for p in parts):
        raise DomainError(f"cannot parse list '{text}'")
    return parts


def _int_pair(text: str) -> Tuple[int, int]:
    parts = _split(text)
    if len(parts) != 2:
        raise DomainError(f"expected two integers 'a,b', got '{text}'")
    try:
        return int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise DomainError(f"expected integers in '{text}'") from exc


def _require_q(args: argparse.Namespace) -> QParam:
    if args.q is None:
        raise DomainError(f"{args.command} needs --q")
    return QParam(q=args.q, precision=args.prec)


def _report_scope(args: argparse.Namespace):
    """Working precision for serializing values, the same digits an eval scope carries"""
    return mp.workdps(args.prec + get_settings().guard_digits)


def _series_config(args: argparse.Namespace) -> SeriesConfig:
    overrides = {"tol": args.tol, "max_terms": args.max_terms}
    if getattr(args, "levels", None) is not None:
        overrides["limit_levels"] = args.levels
    return SeriesConfig.from_settings(**overrides)


def _ladder_config(cfg: SeriesConfig) -> SeriesConfig:
    """Looser truncation for q close to 1, where the series converge slowly"""
    return cfg.model_copy(update={"tol": max(cfg.tol, 1e-15), "max_terms": max(cfg.max_terms, 10 ** 6)})


def _closed_residue(point: Tuple[int, int]) -> Optional[Tuple[str, Callable[[QParam], Any], Any]]:
    """(label, q-side closed form, q -> 1 target) for the residues known in closed form"""
    s1, s2 = point
    if point == (-3, 2):
        return "res_neg3_2", res_neg3_2, 0
    if s2 <= 0 and 1 <= s1 <= -s2 + 2:
        n = -s2
        k = n + 2 - s1
        return f"res_closed(k={k}, n={n})", lambda qp: res_closed(k, n, qp), res_limit_target(k, n)
    return None


# ==================== COMMANDS ====================

def cmd_eval(args: argparse.Namespace, audit: AuditLogger) -> Report:
    qp = _require_q(args)
    cfg = _series_config(args)
    with precision_scope(qp):
        if args.polylog:
            if args.n is None or args.z is None:
                raise DomainError("eval --polylog needs --n and --z")
            n = [int(x) for x in _split(args.n)]
            z = [to_cvalue(x) for x in _split(args.z)]
            if args.method == "direct":
                result = qpolylog_direct(n, z, qp, cfg)
            elif args.method == "continued" or any(abs(x) >= 1 for x in z):
                result = qpolylog_continued(n, z, qp, cfg)
            else:
                result = qpolylog_direct(n, z, qp, cfg)
            label = f"Li_q;{args.n}({args.z})"
            inputs = {"n": n, "z": args.z}
        else:
            if args.s is None:
                raise DomainError("eval needs --s (or --polylog)")
            s = [to_cvalue(x) for x in _split(args.s)]
            if args.t is not None:
                t = [to_cvalue(x) for x in _split(args.t)]
                if args.method == "direct":
                    result = fq_direct(s, t, qp, cfg)
                else:
                    result = fq_continued(s, t, qp, cfg)
                label = f"f_q({args.s}; {args.t})"
                inputs = {"s": args.s, "t": args.t}
            else:
                result = qzeta_eval(s, qp, cfg, EvalMethod(args.method))
                label = f"zeta_q({args.s})"
                inputs = {"s": args.s}
        audit.log_evaluation(label, result)
        entry = {"label": label}
        entry.update(result.to_dict())
        return {"inputs": inputs, "results": [entry], "residuals": []}


def cmd_residue(args: argparse.Namespace, audit: AuditLogger) -> Report:
    qp = _require_q(args)
    cfg = _series_config(args)
    point = _int_pair(args.point)
    mode = ResidueMode(args.mode)
    with precision_scope(qp):
        report = pole_report(point, qp)
        if not report.in_pole_set:
            raise DomainError(f"{point} is a regular point of zeta_q: no residue")
        known = _closed_residue(point)
        results: List[Dict[str, Any]] = []
        residuals: List[Dict[str, Any]] = []
        closed = numeric = None
        if mode in (ResidueMode.CLOSED, ResidueMode.BOTH):
            if known is None:
                raise DomainError(f"no closed form for the residue at {point}; use --mode numeric")
            label, closed_form, _ = known
            closed = closed_form(qp)
            results.append({"label": label, "mode": "closed", "value": cvalue_to_dict(closed)})
        if mode in (ResidueMode.NUMERIC, ResidueMode.BOTH):
            estimate = numeric_residue_estimate(point, qp, cfg)
            audit.log_extrapolation(f"residue at {point}", estimate, cfg.extrapolation_tol)
            numeric = estimate.value
            entry = {"label": "numeric_residue", "mode": "numeric"}
            entry.update(estimate.to_dict())
            results.append(entry)
        if closed is not None and numeric is not None:
            diff = abs(closed - numeric)
            residuals.append({"label": "closed - numeric", "residual": real_to_str(diff),
                              "tol": cfg.extrapolation_tol, "passed": bool(diff <= cfg.extrapolation_tol)})
        return {"inputs": {"point": list(point), "pole": report.to_dict()}, "results": results,
                "residuals": residuals}


def _limit_plan(target: str, cfg: SeriesConfig) -> Tuple[str, Callable[[QParam], Any], Optional[Any]]:
    kind, _, payload = target.partition(":")
    if kind == "zeta":
        s = [to_cvalue(x) for x in _split(payload)]
        if len(s) == 1 and s[0].imag == 0 and s[0].real <= 0 and s[0].real == int(s[0].real):
            n = -int(s[0].real)
            return f"zeta_q(-{n})", lambda qp: qzeta_neg_closed(n, qp), zeta_nonpositive(n)
        loose = _ladder_config(cfg)
        try:
            reference: Optional[Any] = mzv(s, cfg=cfg).value
        except PoleError:
            reference = None
        return f"zeta_q({payload})", lambda qp: qzeta_eval(s, qp, loose), reference
    if kind == "residue":
        point = _int_pair(payload)
        known = _closed_residue(point)
        if known is None:
            raise DomainError(f"no closed-form residue at {point} to extrapolate")
        return known
    if kind == "value":
        text, _, flag = payload.partition(":")
        a, b = _int_pair(text)
        if a > 0 or b > 0:
            raise DomainError(f"value targets are points (-m,-n) with m, n >= 0, got ({a}, {b})")
        if flag not in ("", "R"):
            raise DomainError(f"value target order flag must be R or empty, got '{flag}'")
        order = LimitOrder.S1_FIRST if flag == "R" else LimitOrder.S2_FIRST
        m, n = -a, -b
        return (f"zeta_q{'^R' if flag else ''}({a},{b})", lambda qp: kgen2_value(m, n, order, qp),
                dbzeta_neg(m, n, order))
    raise DomainError(f"limit target must start with zeta:, residue: or value:, got '{target}'")


def _as_mp(value: Any) -> Any:
    if isinstance(value, Fraction):
        return mpf(value.numerator) / value.denominator
    return mp.mpmathify(value)


def cmd_limit(args: argparse.Namespace, audit: AuditLogger) -> Report:
    cfg = _series_config(args)
    label, evaluator, reference = _limit_plan(args.target, cfg)
    estimate = q_to_1_limit(evaluator, cfg, args.prec)
    residuals = []
    with _report_scope(args):
        audit.log_extrapolation(label, estimate, cfg.extrapolation_tol)
        entry = {"label": label}
        entry.update(estimate.to_dict())
        if reference is not None:
            ref = _as_mp(reference)
            diff = abs(estimate.value - ref)
            entry["reference"] = str(reference) if isinstance(reference, Fraction) else cvalue_to_dict(ref)
            residuals.append({"label": f"{label} vs q = 1", "residual": real_to_str(diff),
                              "tol": cfg.extrapolation_tol, "passed": bool(diff <= cfg.extrapolation_tol)})
    return {"inputs": {"target": args.target, "levels": cfg.limit_levels}, "results": [entry],
            "residuals": residuals}


def cmd_verify(args: argparse.Namespace, audit: AuditLogger) -> Report:
    qp = _require_q(args)
    cfg = _series_config(args)
    options = {
        "w1": args.w1, "w2": args.w2, "m": args.m, "n": args.n, "z": args.z, "j": args.j,
        "cases": args.cases, "poles_u": args.poles_u, "poles_v": args.poles_v, "upper": args.upper,
        "e": args.e, "gamma": args.gamma,
    }
    request = SuiteRequest(qp=qp, cfg=cfg, options=options, seed=args.seed)
    runner = VerificationRunner(audit)
    with precision_scope(qp):
        records = runner.run(args.suite, request)
    return _verify_report(args, records)


def _verify_report(args: argparse.Namespace, records: List[Any]) -> Report:
    with _report_scope(args):
        return {
            "inputs": {"suite": args.suite},
            "results": [r.to_dict() for r in records],
            "residuals": [
                {"label": f"{r.name}[{r.case_index}]", "residual": real_to_str(r.residual), "tol": r.tol,
                 "error_bound": real_to_str(r.error_bound), "passed": r.passed}
                for r in records
            ],
        }


def cmd_table(args: argparse.Namespace, audit: AuditLogger) -> Report:
    qp = QParam(q=args.q, precision=args.prec) if args.q is not None else None
    rows = table_rows(args.kmax, args.nmax)
    if qp is not None:
        with precision_scope(qp):
            rows = [
                row.model_copy(update={"q_value": (
                    res_closed(row.k, row.n, qp) if row.k <= row.n + 1
                    else kgen2_value(row.k - row.n - 2, row.n, LimitOrder.S2_FIRST, qp)
                )})
                for row in rows
            ]
            results = [row.to_dict() for row in rows]
    else:
        results = [row.to_dict() for row in rows]
    poles = sum(1 for r in rows if r.kind == TableEntryKind.POLE)
    logger.debug("table: %d rows, %d poles", len(rows), poles)
    return {"inputs": {"kmax": args.kmax, "nmax": args.nmax}, "results": results, "residuals": []}


COMMANDS: Dict[str, Callable[[argparse.Namespace, AuditLogger], Report]] = {
    "eval": cmd_eval,
    "residue": cmd_residue,
    "limit": cmd_limit,
    "verify": cmd_verify,
    "table": cmd_table,
}


# ==================== PARSER ====================

def build_parser() -> argparse.ArgumentParser:
    settings = get_settings()
    common = _Parser(add_help=False)
    common.add_argument("--q", type=str, default=None, help="Deformation parameter 0 < q < 1.")
    common.add_argument("--prec", type=int, default=settings.precision, help="Decimal digits (default: QZETA_PREC).")
    common.add_argument("--tol", type=float, default=None, help="Series truncation tolerance.")
    common.add_argument("--max-terms", type=int, default=None, dest="max_terms", help="Term cap per series.")
    common.add_argument("--format", choices=["json", "table"], default="json", help="Report format.")
    common.add_argument("--out", type=str, default=None, help="Write the report to this path.")
    common.add_argument("--seed", type=int, default=0, help="Seed for random verification cases.")
    common.add_argument("--log-level", type=str, default=None, dest="log_level", help="Logging level.")
    common.add_argument("--audit", action="store_true", help="Append the audit trail to the report.")

    parser = _Parser(prog="qzeta", description="q-multiple zeta functions: values, residues, limits, identities")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="Evaluate zeta_q(s) or Li_q;n(z).")
    p.add_argument("--s", type=str, default=None, help="Comma list of exponents, e.g. '2,3' or '0.5+14.1i'.")
    p.add_argument("--t", type=str, default=None, help="Exponent shifts t for f_q(s; t); omit for zeta_q(s).")
    p.add_argument("--method", choices=[m.value for m in (EvalMethod.AUTO, EvalMethod.DIRECT, EvalMethod.CONTINUED)],
                   default="auto")
    p.add_argument("--polylog", action="store_true", help="Evaluate a q-polylogarithm instead.")
    p.add_argument("--n", type=str, default=None, help="Polylog weights.")
    p.add_argument("--z", type=str, default=None, help="Polylog arguments.")

    p = sub.add_parser("residue", parents=[common], help="Residue of zeta_q at an integer point.")
    p.add_argument("--point", type=str, required=True, help="'s1,s2' integers.")
    p.add_argument("--mode", choices=[m.value for m in ResidueMode], default="closed")

    p = sub.add_parser("limit", parents=[common], help="Extrapolate to q = 1.")
    p.add_argument("--target", type=str, required=True, help="zeta:LIST | residue:A,B | value:A,B[:R]")
    p.add_argument("--levels", type=int, default=None, help="Last ladder index J (q_J = 1 - 2^-J).")

    p = sub.add_parser("verify", parents=[common], help="Run an identity verification suite.")
    p.add_argument("suite", choices=sorted(SUITES))
    p.add_argument("--w1", type=str, default=None)
    p.add_argument("--w2", type=str, default=None)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--n", type=str, default=None)
    p.add_argument("--z", type=str, default=None)
    p.add_argument("--j", type=int, default=None)
    p.add_argument("--cases", type=int, default=None)
    p.add_argument("--poles-u", type=str, default=None, dest="poles_u")
    p.add_argument("--poles-v", type=str, default=None, dest="poles_v")
    p.add_argument("--upper", type=str, default=None)
    p.add_argument("--e", type=int, default=None)
    p.add_argument("--gamma", type=int, default=None)

    p = sub.add_parser("table", parents=[common], help="Classical double zeta pole/indeterminacy table.")
    p.add_argument("--kmax", type=int, default=4)
    p.add_argument("--nmax", type=int, default=4)
    return parser


# ==================== OUTPUT ====================

def _config_echo(args: argparse.Namespace) -> Dict[str, Any]:
    settings = get_settings()
    cfg = _series_config(args)
    echo = {"q": args.q, "precision": args.prec, "guard_digits": settings.guard_digits, "seed": args.seed}
    echo.update(cfg.model_dump())
    return echo


def _render_table(report: Report) -> str:
    lines = [f"# {report['command']}  ({report['elapsed_ms']} ms)"]
    for item in report.get("results", []):
        cells = []
        for key, value in item.items():
            if isinstance(value, dict) and set(value) == {"re", "im"}:
                im = value["im"]
                if im in ("0.0", "0"):
                    value = value["re"]
                else:
                    value = f"{value['re']}{im if im.startswith('-') else '+' + im}i"
            cells.append(f"{key}={value}")
        lines.append("  ".join(cells))
    for item in report.get("residuals", []):
        status = "ok" if item.get("passed") else "FAIL"
        lines.append(f"[{status}] {item['label']}: residual {item['residual']} (tol {item['tol']})")
    if "error" in report:
        lines.append(f"error: {report['error']}")
    return "\n".join(lines)


def _emit(report: Report, args: argparse.Namespace) -> None:
    if getattr(args, "format", "json") == "table":
        text = _render_table(report)
    else:
        text = json.dumps(report, indent=2, default=str)
    if getattr(args, "out", None):
        with open(args.out, "w") as f:
            f.write(text + "\n")
    else:
        print(text)


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point; returns the process exit code"""
    try:
        args = build_parser().parse_args(argv)
    except (DomainError, ValidationError) as exc:
        print(f"qzeta: {exc}", file=sys.stderr)
        return 1

    level = (args.log_level or get_settings().log_level).upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), stream=sys.stderr,
                        format="%(asctime)s %(name)s %(levelname)s %(message)s", force=True)

    audit = AuditLogger(command=args.command)
    started = time.perf_counter()
    report: Report = {"command": args.command}
    code = 0
    try:
        audit.log_command(AuditEventType.COMMAND_STARTED, {"argv": argv if argv is not None else sys.argv[1:]})
        report["config"] = _config_echo(args)
        report.update(COMMANDS[args.command](args, audit))
        audit.log_command(AuditEventType.COMMAND_COMPLETED, {})
    except VerificationError as exc:
        report.update(_verify_report(args, exc.records))
        report["error"] = str(exc)
        code = exc.exit_code
    except PoleError as exc:
        audit.log_pole(str(getattr(args, "s", None) or getattr(args, "point", "")), exc.report, exc.witness)
        report["error"] = str(exc)
        if exc.report is not None:
            report["pole"] = exc.report.to_dict()
        code = exc.exit_code
    except QZetaError as exc:
        report["error"] = str(exc)
        code = exc.exit_code
    except ValidationError as exc:
        report["error"] = f"invalid parameter: {exc.errors()[0]['msg']}"
        code = 1

    if code:
        audit.log_command(AuditEventType.COMMAND_FAILED, {"error": report.get("error"), "exit_code": code})
        print(f"qzeta: {report['error']}", file=sys.stderr)
    report.setdefault("inputs", {})
    report.setdefault("results", [])
    report.setdefault("residuals", [])
    report["elapsed_ms"] = int((time.perf_counter() - started) * 1000)
    reproducibility = ReproducibilityChecker.validate_report(report)
    if not reproducibility["reproducible"]:
        logger.warning("report for %s not reproducible: %s", args.command, "; ".join(reproducibility["issues"]))
    if args.audit:
        report["audit"] = audit.get_trail()
        report["reproducibility"] = reproducibility
    _emit(report, args)
    return code


if __name__ == "__main__":
    sys.exit(main())
