"""
Command-line front end.

Every subcommand builds a ``Report`` and prints it as a text table, CSV or
JSON on stdout; logs go to stderr and the log directory. Exit codes: 0 on
success, 1 when a verification suite fails, 2 on invalid arguments.
"""

import argparse
import csv
import io
import json
import logging
import math
import sys
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence

from pydantic import ValidationError

from cmlt import __version__
from cmlt.core.config import resolve_threads
from cmlt.core.errors import CMLTError
from cmlt.core.logging_config import setup_logging
from cmlt.core.observability import initialize_observability
from cmlt.models.curve import CurveSpec, QuadPoly
from cmlt.schemas import Report, ReportMetadata
from cmlt.services.classifier_service import VANISHES, CONVENTION, classifier_service
from cmlt.services.constant_service import METHODS, constant_service
from cmlt.services.trace_count_service import ROUTES, trace_count_service
from cmlt.services.verification_service import SUITES, verification_service

logger = logging.getLogger(__name__)

FORMATS = ("text", "csv", "json")
MODES = ("positivity", "anomalous", "symmetry")
COMPARE_COLUMNS = ("D", "g", "r", "x", "count", "predicted", "ratio", "finite_factor", "xi", "cutoff", "method")
SMOKE_RATIO_RANGE = (0.6, 1.5)
SMOKE_VANISHING_BOUND = 3


@dataclass
class CommandOutput:
    """What a subcommand hands back to the printer."""

    report: Report
    columns: Sequence[str] = ()
    rows: List[Dict[str, Any]] = field(default_factory=list)
    lines: List[str] = field(default_factory=list)
    exit_code: int = 0


def significant(value: Optional[float], digits: int = 4) -> Optional[float]:
    """Round to a fixed number of significant digits; None passes through."""
    if value is None or value == 0 or not math.isfinite(value):
        return value
    return float(f"{value:.{digits}g}")


def _ratio(count: int, predicted: float) -> Optional[float]:
    return significant(count / predicted) if predicted > 0 else None


def _metadata(started: float, cutoff: Optional[int] = None, method: Optional[str] = None) -> ReportMetadata:
    return ReportMetadata(version=__version__, cutoff=cutoff, method=method, runtime=round(time.time() - started, 3))


# ============== Subcommands ==============


def cmd_traces(args: argparse.Namespace) -> CommandOutput:
    started = time.time()
    curve = CurveSpec(args.D, args.g)
    histogram = trace_count_service.count_traces_parallel(curve, args.x, args.r_min, args.r_max, args.threads)
    rows = [{"r": r, "count": histogram.count(r)} for r in range(args.r_min, args.r_max + 1)]
    lines = [f"{curve}, good primes <= {args.x}: {histogram.good_primes}"]
    lines += [f"  r = {row['r']:>5}  count = {row['count']}" for row in rows]
    lines.append(f"  outside window: {histogram.overflow}")
    report = Report(
        command="traces",
        parameters={"D": args.D, "g": args.g, "x": args.x, "r_min": args.r_min, "r_max": args.r_max},
        results=histogram.model_dump(mode="json"),
        metadata=_metadata(started),
    )
    return CommandOutput(report, ("r", "count"), rows, lines)


def cmd_constant(args: argparse.Namespace) -> CommandOutput:
    started = time.time()
    constant = constant_service.varpi(args.D, args.g, args.r, args.cutoff, args.method)
    results = constant.model_dump(mode="json")
    lines = [
        f"varpi(D={args.D}, g={args.g}, r={args.r}) = {constant.varpi:.10g}",
        f"  xi = {constant.xi}, finite factor = {results['finite_factor']}",
        f"  h = {constant.h:.10g} ({constant.method}, cutoff {constant.cutoff})",
    ]
    lines += [f"  {name} = {value}" for name, value in sorted(results["breakdown"].items())]
    if constant.reason:
        lines.append(f"  reason: {constant.reason}")
    report = Report(
        command="constant",
        parameters={"D": args.D, "g": args.g, "r": args.r},
        results=results,
        metadata=_metadata(started, constant.cutoff, constant.method),
    )
    columns = ("D", "g", "r", "xi", "finite_factor", "h", "varpi", "reason")
    return CommandOutput(report, columns, [{key: results.get(key) for key in columns}], lines)


def cmd_classify(args: argparse.Namespace) -> CommandOutput:
    started = time.time()
    if args.mode != "anomalous" and args.r is None:
        raise argparse.ArgumentTypeError(f"--r is required for --mode {args.mode}")
    if args.mode == "positivity":
        verdict = classifier_service.classify_positivity(args.D, args.g, args.r)
    elif args.mode == "symmetry":
        verdict = classifier_service.classify_symmetry(args.D, args.g, args.r)
    else:
        verdict = classifier_service.classify_anomalous(args.D, args.g)
    line = f"{args.mode} D={args.D} g={args.g}" + (f" r={args.r}" if args.r is not None else "")
    line += f": {verdict.result} (condition {verdict.fired_condition})"
    if verdict.witness:
        line += f", witness {verdict.witness}"
    report = Report(
        command="classify",
        parameters={"D": args.D, "g": args.g, "r": args.r, "mode": args.mode},
        results=verdict.model_dump(mode="json"),
        metadata=_metadata(started),
    )
    columns = ("mode", "result", "fired_condition", "witness")
    return CommandOutput(report, columns, [verdict.model_dump(mode="json")], [line])


def _compare_row(D: int, g: int, r: int, x: int, cutoff: Optional[int], method: str, route: str) -> Dict[str, Any]:
    constant = constant_service.varpi(D, g, r, cutoff, method)
    count, used = trace_count_service.count_trace_single(CurveSpec(D, g), r, x, route)
    predicted = constant.varpi * math.sqrt(x) / math.log(x)
    logger.info(f"compare D={D} g={g} r={r} x={x}: count={count} predicted={predicted:.2f} via {used}")
    return {
        "D": D,
        "g": g,
        "r": r,
        "x": x,
        "count": count,
        "predicted": significant(predicted),
        "ratio": _ratio(count, predicted),
        "finite_factor": constant.model_dump(mode="json")["finite_factor"],
        "xi": constant.xi,
        "cutoff": constant.cutoff,
        "method": constant.method,
        "route": used,
    }


def cmd_compare(args: argparse.Namespace) -> CommandOutput:
    started = time.time()
    row = _compare_row(args.D, args.g, args.r, args.x, args.cutoff, args.method, args.route)
    lines = [
        f"pi_E,r(x) for D={args.D} g={args.g} r={args.r} x={args.x}: {row['count']} ({row['route']} route)",
        f"  predicted varpi sqrt(x)/log x = {row['predicted']}",
        f"  ratio = {row['ratio']}",
    ]
    report = Report(
        command="compare",
        parameters={"D": args.D, "g": args.g, "r": args.r, "x": args.x, "route": args.route},
        results=row,
        metadata=_metadata(started, row["cutoff"], row["method"]),
    )
    return CommandOutput(report, COMPARE_COLUMNS, [row], lines)


def cmd_fixed_trace(args: argparse.Namespace) -> CommandOutput:
    started = time.time()
    via_elements, via_polynomial = trace_count_service.count_fixed_trace(args.D, args.r, args.x)
    row = {
        "D": args.D,
        "r": args.r,
        "x": args.x,
        "via_elements": via_elements,
        "via_polynomial": via_polynomial,
        "difference": via_elements - via_polynomial,
    }
    lines = [
        f"primes <= {args.x} with an element of trace {args.r} in D={args.D}:",
        f"  by prime elements: {via_elements}",
        f"  by quadratic progression: {via_polynomial}",
        f"  difference: {row['difference']}",
    ]
    report = Report(command="fixed-trace", parameters={"D": args.D, "r": args.r, "x": args.x}, results=row,
                    metadata=_metadata(started))
    return CommandOutput(report, tuple(row), [row], lines)


def cmd_hl(args: argparse.Namespace) -> CommandOutput:
    started = time.time()
    poly = QuadPoly(args.a, args.b, args.c)
    if args.q is None:
        count = trace_count_service.count_hl(poly, args.x)
        constant = constant_service.hl_constant(poly, args.cutoff)
    else:
        count = trace_count_service.count_hl_ap(poly, args.x, args.q, args.u)
        constant = constant_service.hl_constant_ap(poly, args.q, args.u, args.cutoff)
    predicted = constant * math.sqrt(args.x) / math.log(args.x)
    row = {
        "polynomial": str(poly),
        "x": args.x,
        "q": args.q,
        "u": args.u if args.q is not None else None,
        "count": count,
        "constant": significant(constant, 8),
        "predicted": significant(predicted),
        "ratio": _ratio(count, predicted),
    }
    lines = [
        f"primes <= {args.x} of the form {poly}" + (f" with n = {args.u} mod {args.q}" if args.q else "") + f": {count}",
        f"  constant = {row['constant']}, predicted = {row['predicted']}, ratio = {row['ratio']}",
    ]
    report = Report(
        command="hl",
        parameters={"a": args.a, "b": args.b, "c": args.c, "x": args.x, "q": args.q, "u": args.u},
        results=row,
        metadata=_metadata(started, args.cutoff),
    )
    return CommandOutput(report, tuple(row), [row], lines)


def cmd_verify(args: argparse.Namespace) -> CommandOutput:
    started = time.time()
    results = verification_service.run(args.suite, quick=args.quick, threads=args.threads)
    passed = all(result.passed for result in results)
    rows = [result.model_dump(mode="json") for result in results]
    lines = []
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        line = f"{status}  {result.suite}: {result.name} ({result.cases} cases"
        line += f", {result.failures} failed)" if result.failures else ")"
        lines.append(line)
        if result.detail:
            lines.append(f"      first failure: {result.detail}")
    lines.append("PASS" if passed else "FAIL")
    report = Report(
        command="verify",
        parameters={"suite": args.suite, "quick": args.quick},
        results={"passed": passed, "checks": rows},
        metadata=_metadata(started),
    )
    columns = ("suite", "name", "passed", "cases", "failures", "detail")
    return CommandOutput(report, columns, rows, lines, exit_code=0 if passed else 1)


# y^2 = x^3 - 432, y^2 = x^3 + 4x and y^2 = x^3 + 2 in the (D, g) parametrization
SMOKE_RATIO_CASES = ((3, -432, (2, -1, 5)), (1, -4, (2, -2)))
SMOKE_VANISHING_CURVES = ((3, -432), (1, -4))
SMOKE_DISCREPANCY = (3, 2, (8, 16, -8, -16))


def cmd_smoke(args: argparse.Namespace) -> CommandOutput:
    """Informational consistency runs; the exit code does not depend on the ratios."""
    started = time.time()
    x, small_x = args.x, max(args.x // 10, 10)
    rows = []

    for D, g, traces in SMOKE_RATIO_CASES:
        for r in traces:
            row = _compare_row(D, g, r, x, args.cutoff, "direct", "polynomial")
            low, high = SMOKE_RATIO_RANGE
            row.update(check="ratio", within=row["ratio"] is not None and low <= row["ratio"] <= high)
            rows.append(row)

    for D, g in SMOKE_VANISHING_CURVES:
        for r in range(-args.r_bound, args.r_bound + 1):
            if r == 0:
                continue
            verdict = classifier_service.classify_positivity(D, g, r)
            if verdict.result != VANISHES or verdict.fired_condition == CONVENTION:
                continue
            row = _compare_row(D, g, r, small_x, args.cutoff, "direct", "polynomial")
            row.update(check=f"vanishing {verdict.fired_condition}", within=row["count"] <= SMOKE_VANISHING_BOUND)
            rows.append(row)

    D, g, traces = SMOKE_DISCREPANCY
    for r in traces:
        row = _compare_row(D, g, r, x, args.cutoff, "direct", "polynomial")
        row.update(check=f"r = {r % 24} mod 24", within=None)
        rows.append(row)

    lines = ["Conjecture consistency (informational):"]
    for row in rows:
        flag = {True: "ok", False: "OUTSIDE", None: "recorded"}[row["within"]]
        lines.append(
            f"  {row['check']:<18} D={row['D']:<3} g={row['g']:<5} r={row['r']:<4} x={row['x']:<10} "
            f"count={row['count']:<7} predicted={row['predicted']} ratio={row['ratio']} [{flag}]"
        )
    report = Report(
        command="smoke",
        parameters={"x": x, "r_bound": args.r_bound},
        results=rows,
        metadata=_metadata(started, rows[0]["cutoff"] if rows else None, "direct"),
    )
    return CommandOutput(report, COMPARE_COLUMNS + ("check", "within"), rows, lines)


COMMANDS: Dict[str, Callable[[argparse.Namespace], CommandOutput]] = {
    "traces": cmd_traces,
    "constant": cmd_constant,
    "classify": cmd_classify,
    "compare": cmd_compare,
    "fixed-trace": cmd_fixed_trace,
    "hl": cmd_hl,
    "verify": cmd_verify,
    "smoke": cmd_smoke,
}


# ============== Parser ==============


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="text", help="Output format (default text).")
    common.add_argument("--log-level", default=None, help="Log level; defaults to CMLT_LOG_LEVEL or INFO.")
    common.add_argument("--threads", type=int, default=None, help="Worker processes; CMLT_THREADS takes precedence.")

    parser = argparse.ArgumentParser(prog="cmlt", description="Lang-Trotter experiments for CM elliptic curves.")
    parser.add_argument("--version", action="version", version=f"cmlt {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("traces", parents=[common], help="Histogram of a_p over good primes p <= x.")
    p.add_argument("--D", type=int, required=True)
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--r-min", type=int, default=-20)
    p.add_argument("--r-max", type=int, default=20)

    p = sub.add_parser("constant", parents=[common], help="Explicit constant varpi_{E,r}.")
    _curve_trace_args(p)
    _euler_args(p)

    p = sub.add_parser("classify", parents=[common], help="Positivity, anomalous or symmetry verdict.")
    p.add_argument("--D", type=int, required=True)
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--r", type=int, default=None)
    p.add_argument("--mode", choices=MODES, default="positivity")

    p = sub.add_parser("compare", parents=[common], help="Empirical pi_{E,r}(x) against the prediction.")
    _curve_trace_args(p)
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--route", choices=ROUTES, default="auto")
    _euler_args(p)

    p = sub.add_parser("fixed-trace", parents=[common], help="Primes with an element of trace r, two ways.")
    p.add_argument("--D", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--x", type=int, required=True)

    p = sub.add_parser("hl", parents=[common], help="Primes a n^2 + b n + c <= x against the density constant.")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--q", type=int, default=None)
    p.add_argument("--u", type=int, default=1)
    p.add_argument("--cutoff", type=int, default=None)

    p = sub.add_parser("verify", parents=[common], help="Run an oracle suite.")
    p.add_argument("--suite", choices=SUITES + ("all",), default="all")
    p.add_argument("--quick", action="store_true", help="Reduced grids.")

    p = sub.add_parser("smoke", parents=[common], help="Informational conjecture-consistency runs.")
    p.add_argument("--x", type=int, default=10**8)
    p.add_argument("--r-bound", type=int, default=12, help="|r| range scanned for vanishing classes.")
    p.add_argument("--cutoff", type=int, default=None)
    return parser


def _curve_trace_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--D", type=int, required=True)
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--r", type=int, required=True)


def _euler_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--cutoff", type=int, default=None)
    p.add_argument("--method", choices=METHODS, default="direct")


# ============== Output ==============


def render(output: CommandOutput, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(output.report.model_dump(mode="json"), sort_keys=True, ensure_ascii=False, indent=2)
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=list(output.columns), extrasaction="ignore", lineterminator="\n")
        writer.writeheader()
        writer.writerows(output.rows)
        return buffer.getvalue().rstrip("\n")
    return "\n".join(output.lines)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    setup_logging(args.log_level)
    initialize_observability()
    try:
        args.threads = resolve_threads(args.threads)
        output = COMMANDS[args.command](args)
    except (CMLTError, ValidationError, ValueError, argparse.ArgumentTypeError) as e:
        logger.error(f"{args.command} rejected its arguments: {e}")
        print(f"error: {e}", file=sys.stderr)
        return 2

    if hasattr(sys.stdout, "reconfigure"):
        sys.stdout.reconfigure(encoding="utf-8")
    print(render(output, args.format))
    return output.exit_code


if __name__ == "__main__":
    sys.exit(main())
