"""Command-line front end: analysis, prediction, verification, sampling
and sweep workflows with machine-readable JSON output.

Every command prints a single envelope document

    {schema_version, tool_version, command, shape, payload, warnings}

to stdout (or writes it atomically to --out).  Diagnostics go to stderr.
Exit codes: 0 success or match, 2 infeasible input, 3 resource cap,
4 scientific mismatch, 5 numerical disagreement, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

from . import __version__
from .core import (
    ComplexShape,
    RankVector,
    WorkCapExceeded,
    ambient_dimension,
    betti_from_ranks,
    betti_lower_bound,
    euler_characteristic,
    is_feasible,
    stratum_dimension,
)
from .optimizer import (
    DEFAULT_ENUMERATION_CAP,
    DEFAULT_WORK_CAP,
    brute_force_maximize,
    enumerate_maximizers,
)
from .predictions import (
    HypothesisReading,
    Verdict,
    all_predictions,
    check_shape,
    conjecture_scan,
    prediction_matches,
    sweep_theorems,
)
from .numerics import (
    DEFAULT_SIZE_CAP,
    ToleranceConfig,
    canonical_complex,
    greedy_rank_vector,
    numerical_rank,
    orbit_dimension,
    sequential_sample,
)

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_INFEASIBLE = 2
EXIT_RESOURCE = 3
EXIT_MISMATCH = 4
EXIT_NUMERIC_DISAGREEMENT = 5
EXIT_USAGE = 64

ENV_RANK_TOL = "CHAINCX_RANK_TOL"
ENV_WORK_CAP = "CHAINCX_WORK_CAP"

SAMPLER_WARNING = "sequential sampler does not realize the conditional measure"


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _parse_vector(text: str, what: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(int(tok) for tok in text.split(","))
    except ValueError:
        raise _UsageError(
            f"could not parse {what} {text!r}: expected comma-separated integers"
        ) from None


def _shape_of(args) -> ComplexShape:
    try:
        return ComplexShape(_parse_vector(args.dims, "--dims"))
    except ValueError as exc:
        raise _UsageError(str(exc)) from None


def _ranks_of(args, shape: ComplexShape) -> RankVector:
    values = _parse_vector(args.ranks, "--ranks")
    if len(values) != shape.n_maps:
        raise _UsageError(
            f"--ranks has {len(values)} entries but shape {shape.dims} "
            f"has {shape.n_maps} maps"
        )
    try:
        return RankVector(values)
    except ValueError as exc:
        raise _UsageError(str(exc)) from None


def _reading_of(args) -> HypothesisReading:
    return HypothesisReading(args.reading)


def _env_float(name: str) -> float | None:
    raw = os.environ.get(name)
    if raw is None:
        return None
    try:
        return float(raw)
    except ValueError:
        raise _UsageError(f"environment variable {name}={raw!r} is not a number") from None


def _env_int(name: str) -> int | None:
    raw = os.environ.get(name)
    if raw is None:
        return None
    try:
        return int(raw)
    except ValueError:
        raise _UsageError(f"environment variable {name}={raw!r} is not an integer") from None


def _tolerances(args) -> ToleranceConfig:
    factor = getattr(args, "rank_tol", None)
    if factor is None:
        factor = _env_float(ENV_RANK_TOL)
    comp = getattr(args, "composition_tol", None)
    defaults = ToleranceConfig()
    try:
        return ToleranceConfig(
            rank_tolerance_factor=factor if factor is not None else defaults.rank_tolerance_factor,
            composition_tolerance=comp if comp is not None else defaults.composition_tolerance,
        )
    except ValueError as exc:
        raise _UsageError(str(exc)) from None


def _work_cap(args) -> int:
    cap = getattr(args, "work_cap", None)
    if cap is None:
        cap = _env_int(ENV_WORK_CAP)
    if cap is None:
        return DEFAULT_WORK_CAP
    if cap < 1:
        raise _UsageError("work cap must be positive")
    return cap


def _envelope(command: str, shape: ComplexShape | None, payload, warnings=()):
    return {
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "command": command,
        "shape": list(shape.dims) if shape is not None else None,
        "payload": payload,
        "warnings": list(warnings),
    }


def _report_payload(report):
    return {
        "max_dimension": report.max_dimension,
        "maximizer_count": report.maximizer_count,
        "maximizers": [list(r.ranks) for r in report.maximizers],
        "betti_spectrum": [list(b.bettis) for b in report.betti_spectrum],
        "truncated": report.truncated,
        "enumeration_cap": report.enumeration_cap,
    }


def _prediction_payload(pred):
    return {
        "source_theorem": pred.source_theorem.value,
        "applicable": pred.applicable,
        "predicted_betti_set": [list(b.bettis) for b in pred.predicted_betti_set],
        "predicted_sum": pred.predicted_sum,
    }


def _comparison_payload(result):
    return {
        "shape": list(result.shape.dims),
        "verdict": result.verdict.value,
        "prediction": _prediction_payload(result.prediction),
        "observed": _report_payload(result.observed),
    }


def cmd_dimension(args):
    shape = _shape_of(args)
    ranks = _ranks_of(args, shape)
    if not is_feasible(shape, ranks):
        payload = {
            "feasible": False,
            "ranks": list(ranks.ranks),
            "error": f"ranks {list(ranks.ranks)} are infeasible for dims {list(shape.dims)}",
        }
        return _envelope("dimension", shape, payload), EXIT_INFEASIBLE
    betti = betti_from_ranks(shape, ranks)
    payload = {
        "feasible": True,
        "ranks": list(ranks.ranks),
        "d": stratum_dimension(shape, ranks),
        "N": ambient_dimension(shape),
        "betti": list(betti.bettis),
        "chi": euler_characteristic(shape),
        "sum_betti": sum(betti.bettis),
        "lower_bound": betti_lower_bound(shape),
    }
    return _envelope("dimension", shape, payload), EXIT_OK


def cmd_maximize(args):
    shape = _shape_of(args)
    if args.limit < 1:
        raise _UsageError("--limit must be positive")
    if args.method == "brute":
        report = brute_force_maximize(shape, work_cap=_work_cap(args))
    else:
        report = enumerate_maximizers(shape, cap=args.limit)
    payload = {"method": args.method, **_report_payload(report)}
    return _envelope("maximize", shape, payload), EXIT_OK


def cmd_predict(args):
    shape = _shape_of(args)
    reading = _reading_of(args)
    payload = {
        "reading": reading.value,
        "predictions": [_prediction_payload(p) for p in all_predictions(shape, reading)],
    }
    return _envelope("predict", shape, payload), EXIT_OK


def cmd_check(args):
    shape = _shape_of(args)
    reading = _reading_of(args)
    result = check_shape(shape, reading)
    comparisons = []
    for pred in all_predictions(shape, reading):
        entry = _prediction_payload(pred)
        entry["matched"] = (
            prediction_matches(pred, result.observed) if pred.applicable else None
        )
        comparisons.append(entry)
    payload = {
        "reading": reading.value,
        "verdict": result.verdict.value,
        "comparisons": comparisons,
        "observed": _report_payload(result.observed),
    }
    code = EXIT_MISMATCH if result.verdict is Verdict.MISMATCH else EXIT_OK
    return _envelope("check", shape, payload), code


def cmd_verify_dim(args):
    shape = _shape_of(args)
    ranks = _ranks_of(args, shape)
    if not is_feasible(shape, ranks):
        payload = {
            "feasible": False,
            "ranks": list(ranks.ranks),
            "error": f"ranks {list(ranks.ranks)} are infeasible for dims {list(shape.dims)}",
        }
        return _envelope("verify-dim", shape, payload), EXIT_INFEASIBLE
    config = _tolerances(args)
    complex_ = canonical_complex(shape, ranks, config)
    formula_d = stratum_dimension(shape, ranks)
    orbit_d = orbit_dimension(complex_, config, size_cap=args.size_cap)
    agree = formula_d == orbit_d
    payload = {
        "feasible": True,
        "ranks": list(ranks.ranks),
        "formula_d": formula_d,
        "orbit_d": orbit_d,
        "agree": agree,
    }
    return _envelope("verify-dim", shape, payload), EXIT_OK if agree else EXIT_NUMERIC_DISAGREEMENT


def cmd_sample(args):
    shape = _shape_of(args)
    if args.trials < 1:
        raise _UsageError("--trials must be positive")
    if args.seed < 0:
        raise _UsageError("--seed must be non-negative")
    config = _tolerances(args)
    trial_ranks = []
    for t in range(args.trials):
        complex_ = sequential_sample(shape, args.seed + t, config)
        trial_ranks.append([numerical_rank(m, config) for m in complex_.maps])
    greedy = greedy_rank_vector(shape)
    report = enumerate_maximizers(shape, cap=args.limit)
    greedy_d = stratum_dimension(shape, greedy)
    biased = greedy_d != report.max_dimension
    payload = {
        "seed": args.seed,
        "trials": args.trials,
        "trial_ranks": trial_ranks,
        "greedy_ranks": list(greedy.ranks),
        "greedy_dimension": greedy_d,
        "max_dimension": report.max_dimension,
        "maximizers": [list(r.ranks) for r in report.maximizers],
        "maximizers_truncated": report.truncated,
        "biased": biased,
    }
    return _envelope("sample", shape, payload, warnings=[SAMPLER_WARNING]), EXIT_OK


def cmd_sweep(args):
    if args.max_length < 0 or args.max_entry < 0:
        raise _UsageError("--max-length and --max-entry must be non-negative")
    reading = _reading_of(args)
    warnings = []
    if args.mode == "theorems":
        summary = sweep_theorems(
            args.max_length, args.max_entry, reading, work_cap=_work_cap(args)
        )
        payload = {
            "mode": "theorems",
            "reading": reading.value,
            "max_length": args.max_length,
            "max_entry": args.max_entry,
            "shapes_checked": summary.shapes_checked,
            "matches": summary.matches,
            "mismatches": summary.mismatches,
            "not_applicable": summary.not_applicable,
            "mismatch_details": [_comparison_payload(r) for r in summary.mismatch_details],
        }
        failed = summary.mismatches > 0
    else:
        scan = conjecture_scan(
            args.max_length, args.max_entry, reading, work_cap=_work_cap(args)
        )
        if scan.truncated:
            warnings.append("scan stopped at the work cap; results are partial")
        payload = {
            "mode": "conjecture",
            "reading": reading.value,
            "max_length": args.max_length,
            "max_entry": args.max_entry,
            "shapes_scanned": scan.shapes_scanned,
            "counterexamples": [_comparison_payload(r) for r in scan.counterexamples],
            "truncated": scan.truncated,
        }
        failed = bool(scan.counterexamples)
    code = EXIT_MISMATCH if failed else EXIT_OK
    return _envelope("sweep", None, payload, warnings), code


def _render_table(envelope) -> str:
    lines = [f"command       {envelope['command']}"]
    if envelope["shape"] is not None:
        lines.append(f"shape         {','.join(str(a) for a in envelope['shape'])}")
    for key, value in envelope["payload"].items():
        rendered = value if isinstance(value, str) else json.dumps(value)
        lines.append(f"{key:<13} {rendered}")
    for warning in envelope["warnings"]:
        lines.append(f"warning       {warning}")
    return "\n".join(lines) + "\n"


def _emit(envelope, args) -> None:
    text = json.dumps(envelope, indent=2) + "\n"
    out = getattr(args, "out", None)
    if out:
        directory = os.path.dirname(os.path.abspath(out))
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=".chaincx-", suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as handle:
                handle.write(text)
            os.replace(tmp, out)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        return
    if args.format == "table":
        sys.stdout.write(_render_table(envelope))
    else:
        sys.stdout.write(text)


def _add_common(sub):
    sub.add_argument("--format", choices=("json", "table"), default="json",
                     help="output format on stdout (default json)")
    sub.add_argument("--out", metavar="FILE",
                     help="write the JSON envelope atomically to FILE instead of stdout")


def _add_reading(sub):
    sub.add_argument("--reading", choices=("sentinel", "interior"), default="sentinel",
                     help="index window of the no-forced-homology hypothesis "
                          "(default sentinel: end conditions included)")


def _add_tolerances(sub):
    sub.add_argument("--rank-tol", type=float, default=None, metavar="FACTOR",
                     help=f"numerical-rank pivot threshold factor "
                          f"(default {ToleranceConfig().rank_tolerance_factor:g}; "
                          f"env {ENV_RANK_TOL})")
    sub.add_argument("--composition-tol", type=float, default=None, metavar="TOL",
                     help="relative composition-zero tolerance "
                          f"(default {ToleranceConfig().composition_tolerance:g})")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="chaincx",
                     description="Almost-sure homology of random chain complexes.")
    parser.add_argument("--version", action="version", version=f"chaincx {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("dimension", parents=[], help="stratum dimension and Betti data")
    p.add_argument("--dims", required=True)
    p.add_argument("--ranks", required=True)
    _add_common(p)
    p.set_defaults(handler=cmd_dimension)

    p = commands.add_parser("maximize", help="rank vectors maximizing the stratum dimension")
    p.add_argument("--dims", required=True)
    p.add_argument("--method", choices=("dp", "brute"), default="dp")
    p.add_argument("--limit", type=int, default=DEFAULT_ENUMERATION_CAP,
                   help="maximizer listing cap (count stays exact)")
    p.add_argument("--work-cap", type=int, default=None,
                   help=f"candidate cap for --method brute (env {ENV_WORK_CAP})")
    _add_common(p)
    p.set_defaults(handler=cmd_maximize)

    p = commands.add_parser("predict", help="closed-form Betti predictions")
    p.add_argument("--dims", required=True)
    _add_reading(p)
    _add_common(p)
    p.set_defaults(handler=cmd_predict)

    p = commands.add_parser("check", help="compare predictions against the optimizer")
    p.add_argument("--dims", required=True)
    _add_reading(p)
    _add_common(p)
    p.set_defaults(handler=cmd_check)

    p = commands.add_parser("verify-dim",
                            help="check the dimension formula against the orbit rank")
    p.add_argument("--dims", required=True)
    p.add_argument("--ranks", required=True)
    p.add_argument("--size-cap", type=int, default=DEFAULT_SIZE_CAP,
                   help="refusal cap on the linearized-action matrix sides")
    _add_tolerances(p)
    _add_common(p)
    p.set_defaults(handler=cmd_verify_dim)

    p = commands.add_parser("sample", help="sequential Gaussian sampler (greedy, biased)")
    p.add_argument("--dims", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--limit", type=int, default=DEFAULT_ENUMERATION_CAP)
    _add_tolerances(p)
    _add_common(p)
    p.set_defaults(handler=cmd_sample)

    p = commands.add_parser("sweep", help="exhaustive theorem checks or conjecture scan")
    p.add_argument("--max-length", type=int, required=True,
                   help="largest number of boundary maps")
    p.add_argument("--max-entry", type=int, required=True)
    p.add_argument("--mode", choices=("theorems", "conjecture"), default="theorems")
    p.add_argument("--work-cap", type=int, default=None,
                   help=f"cap on shapes examined (env {ENV_WORK_CAP})")
    _add_reading(p)
    _add_common(p)
    p.set_defaults(handler=cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        envelope, code = args.handler(args)
    except _UsageError as exc:
        print(f"chaincx: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except WorkCapExceeded as exc:
        print(f"chaincx: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    _emit(envelope, args)
    return code


def entry_point() -> None:
    raise SystemExit(main())
