#!/usr/bin/env python3
"""
Command-line interface for frameopt.

Usage:
    # Erasure measures of a frame and its dual
    python -m src.cli analyze frames/normalized_diagonal.json --m 1 --measure all --dual canonical

    # Search for an optimal dual
    python -m src.cli search frames/unnormalized_diagonal.json --seed 0 --restarts 8

    # Build a probability uniform Parseval frame
    python -m src.cli construct --probabilities 1/3 1/3 1/3 --dimension 2

    # Simulate the erasure channel
    python -m src.cli simulate frames/mercedes.json --trials 100000 --seed 7

    # Check the worked examples
    python -m src.cli verify-examples
"""

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from .config import ENV_TOLERANCE, Tolerances, load_tolerances
from .dual_pairs import construct_probability_uniform_parseval, pair_verdict, unique_pair_check_tight
from .erasure_model import (
    measure,
    measure_all,
    one_erasure_closed_form,
    weights_from_probabilities,
)
from .erasure_sim import simulate
from .errors import ConfigError, FrameOptError, NotDual, SchemaError
from .formatters import JSONFormatter, MarkdownFormatter
from .frame_core import canonical_dual, dual_space, is_dual, is_tight
from .golden import all_passed, verify_examples
from .models import FrameFile, MeasureKind, SearchConfig, SimConfig, WeightingMode
from .optimality import canonical_certificates, objective_value, pasod_search

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INPUT = 2
EXIT_DOMAIN = 3


def _status(args, message: str) -> None:
    if not getattr(args, "quiet", False):
        print(message, file=sys.stderr)


def _tolerances(args) -> Tolerances:
    return load_tolerances(getattr(args, "tol", None))


def load_frame_file(path: str) -> FrameFile:
    """Read and validate a frame file; unreadable or malformed files are SchemaErrors"""
    try:
        data = json.loads(Path(path).read_text())
    except OSError as e:
        raise SchemaError(f"cannot read {path}: {e.strerror or e}") from e
    except json.JSONDecodeError as e:
        raise SchemaError(f"{path} is not valid JSON: {e}") from e
    return FrameFile.from_dict(data)


def _select_dual(frame_file: FrameFile, choice: str):
    if choice == "canonical" or frame_file.dual is None:
        return canonical_dual(frame_file.frame), "canonical"
    return frame_file.dual, "file"


def _emit(args, obj, markdown) -> None:
    """JSON to stdout, or to -o/--output (Markdown when it ends in .md)"""
    output_path = getattr(args, "output", None)
    if output_path and output_path.endswith(".md"):
        content = markdown()
    else:
        content = JSONFormatter().format(obj)

    if output_path:
        Path(output_path).write_text(content + "\n")
        _status(args, f"   📝 Report saved to: {output_path}")
    else:
        print(content)


def cmd_analyze(args):
    """Erasure measures, pair verdict and canonical-dual certificates"""
    tols = _tolerances(args)
    frame_file = load_frame_file(args.input)
    F = frame_file.frame
    _status(args, f"📐 Analyzing: {args.input} ({F.size} vectors in C^{F.dimension})")

    M = weights_from_probabilities(frame_file.probabilities, F.dimension)
    G, source = _select_dual(frame_file, args.dual)
    if not is_dual(F, G, tols.dual):
        raise NotDual(f"the {source} dual in {args.input} is not a dual of the frame")

    if args.measure == "all":
        reports = measure_all(F, G, M, args.m, tie=tols.tie)
    else:
        kind = MeasureKind(args.measure)
        reports = {kind: measure(F, G, M, args.m, kind, tie=tols.tie)}

    analysis = {
        "dimension": F.dimension,
        "size": F.size,
        "m": args.m,
        "dual_source": source,
        "weights": M,
        "measures": reports,
    }
    if args.m == 1:
        analysis["closed_form"] = one_erasure_closed_form(F, G, M, tie=tols.tie)
        analysis["pair_verdict"] = pair_verdict(F, G, M, tol=tols.check, dual_tol=tols.dual)
        analysis["certificates"] = canonical_certificates(F, M, tols)
        if is_tight(F, tols.check):
            analysis["tight_pair"] = unique_pair_check_tight(F, M, tols.check)

    for kind, report in reports.items():
        _status(args, f"   ✅ {MeasureKind(kind).value} = {report.value:.12g}")

    def markdown():
        md = MarkdownFormatter()
        text = md.format_analysis(analysis)
        for name, cert in analysis.get("certificates", {}).items():
            text += "\n" + md.format_certificate(name, cert)
        return text

    _emit(args, analysis, markdown)
    return EXIT_OK


def cmd_search(args):
    """Search the dual space for a single-erasure optimal dual"""
    tols = _tolerances(args)
    frame_file = load_frame_file(args.input)
    F = frame_file.frame
    M = weights_from_probabilities(frame_file.probabilities, F.dimension)
    cfg = SearchConfig(
        max_iterations=args.iters,
        step_size=args.step,
        restarts=args.restarts,
        seed=args.seed,
        patience=args.patience,
    )
    objective = MeasureKind(args.objective)
    _status(args, f"🔎 Searching {objective.value}-optimal dual: {args.input}")

    result = pasod_search(F, M, cfg, objective=objective, rank_factor=tols.rank_factor)
    if not is_dual(F, result.dual, tols.dual):
        logger.warning("search result misses the reconstruction identity at tol %.3g", tols.dual)
    if result.non_converged:
        _status(args, "   ⚠️  NonConvergence: some restarts did not settle; value is the best found")
    _status(args, f"   ✅ value = {result.value:.12g} (restart {result.restart})")

    output = result.to_dict()
    output["canonical_value"] = objective_value(
        F, M, np.zeros(2 * dual_space(F, tols.rank_factor).d), objective
    )
    output["config"] = cfg.to_dict()
    _emit(args, output, lambda: MarkdownFormatter().format_search(result))
    return EXIT_OK


def _parse_probability(text: str) -> float:
    try:
        return float(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError) as e:
        raise SchemaError(f"not a probability: {text!r}") from e


def parse_probabilities(values: list) -> list:
    """Accepts '1/3 1/3 1/3' and '1/3,1/3,1/3' forms"""
    items = [item for value in values for item in value.split(",") if item.strip()]
    if not items:
        raise SchemaError("no probabilities given")
    return [_parse_probability(item) for item in items]


def cmd_construct(args):
    """Build a probability uniform Parseval frame"""
    tols = _tolerances(args)
    p = parse_probabilities(args.probabilities)
    _status(args, f"🏗️  Constructing Parseval frame: {len(p)} vectors in C^{args.dimension}")
    M = weights_from_probabilities(p, args.dimension)
    F = construct_probability_uniform_parseval(M, args.dimension, tols.majorization)
    frame_file = FrameFile(frame=F, probabilities=p)
    _status(args, f"   ✅ norms {[round(float(x), 12) for x in F.norms()]}")
    _emit(args, frame_file, lambda: "```json\n" + JSONFormatter().format(frame_file) + "\n```")
    return EXIT_OK


def cmd_simulate(args):
    """Monte Carlo erasure channel against the worst-case bound"""
    tols = _tolerances(args)
    frame_file = load_frame_file(args.input)
    F = frame_file.frame
    M = weights_from_probabilities(frame_file.probabilities, F.dimension)
    G, source = _select_dual(frame_file, args.dual)
    cfg = SimConfig(
        trials=args.trials, signals=args.signals, m=args.m, seed=args.seed, mode=args.mode
    )
    _status(args, f"🎲 Simulating {cfg.trials} trials ({cfg.mode.value}, {source} dual)")

    report = simulate(F, G, M, cfg, tol=tols.dual)
    _status(
        args,
        f"   ✅ max {report.empirical_max:.6g} / bound {report.bound:.6g} "
        f"(ratio {report.attainment_ratio:.4f})",
    )
    _emit(args, report, lambda: MarkdownFormatter().format_simulation(report))
    return EXIT_OK


def cmd_verify_examples(args):
    """Check the embedded worked examples"""
    _status(args, "🧪 Verifying worked examples...")
    rows = verify_examples()
    passed = all_passed(rows)
    for row in rows:
        logger.debug("%s / %s: %s", row.example, row.check, row.status.value)

    output = {"passed": passed, "rows": rows}
    _emit(args, output, lambda: MarkdownFormatter().format_verification(rows))
    if passed:
        _status(args, f"   ✅ All {len(rows)} checks passed (published discrepancies noted)")
        return EXIT_OK
    failed = [row for row in rows if row.status.value == "fail"]
    _status(args, f"   ❌ {len(failed)} of {len(rows)} checks failed")
    return EXIT_MISMATCH


def cmd_serve(args):
    """Start the API server"""
    _status(args, f"🚀 Starting frameopt API on port {args.port}...")
    _status(args, f"   Documentation: http://localhost:{args.port}/docs")

    from .api import start_server
    start_server(host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="frameopt",
        description="frameopt - optimal dual frames for probabilistic erasures",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=f"""
Examples:
  # Measures with the canonical dual
  python -m src.cli analyze frames/normalized_diagonal.json --dual canonical

  # Optimal dual search, Markdown report
  python -m src.cli search frames/unnormalized_diagonal.json -o search.md

  # Parseval frame for given erasure probabilities
  python -m src.cli construct --probabilities 0 1/2 1/2 --dimension 2

  # Worked examples
  python -m src.cli verify-examples

Environment Variables:
  {ENV_TOLERANCE}  - Overrides the duality tolerance
                 (precedence: --tol > {ENV_TOLERANCE} > default 1e-10)

Exit codes: 0 ok, 1 example mismatch, 2 bad input, 3 domain error
        """,
    )
    parser.add_argument("--tol", help=f"Duality tolerance (overrides {ENV_TOLERANCE})")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="Warnings only")

    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    # Analyze command
    analyze_parser = subparsers.add_parser("analyze", help="Erasure measures of a frame file")
    analyze_parser.add_argument("input", help="Path to frame JSON file")
    analyze_parser.add_argument("--m", type=int, default=1, help="Number of erasures")
    analyze_parser.add_argument(
        "--measure", choices=["O", "r", "A", "all"], default="all", help="Measure to report"
    )
    analyze_parser.add_argument(
        "--dual", choices=["file", "canonical"], default="file",
        help="Use the file's dual (default, canonical if absent) or the canonical dual",
    )
    analyze_parser.add_argument("-o", "--output", help="Output file path (.md or .json)")
    analyze_parser.set_defaults(func=cmd_analyze)

    # Search command
    search_parser = subparsers.add_parser("search", help="Search for an optimal dual")
    search_parser.add_argument("input", help="Path to frame JSON file")
    search_parser.add_argument("--seed", type=int, default=0, help="Random seed")
    search_parser.add_argument("--restarts", type=int, default=8, help="Number of restarts")
    search_parser.add_argument("--iters", type=int, default=200000, help="Iterations per restart")
    search_parser.add_argument("--step", type=float, default=0.5, help="Initial step scale sigma in sigma/sqrt(j)")
    search_parser.add_argument(
        "--patience", type=int, default=2000, help="Iterations per epoch; the step scale halves between epochs"
    )
    search_parser.add_argument(
        "--objective", choices=["A", "O", "r"], default="A", help="Objective to minimize"
    )
    search_parser.add_argument("-o", "--output", help="Output file path (.md or .json)")
    search_parser.set_defaults(func=cmd_search)

    # Construct command
    construct_parser = subparsers.add_parser(
        "construct", help="Build a probability uniform Parseval frame"
    )
    construct_parser.add_argument(
        "--probabilities", nargs="+", required=True, help="Erasure probabilities (fractions allowed)"
    )
    construct_parser.add_argument("--dimension", type=int, required=True, help="Dimension n")
    construct_parser.add_argument("-o", "--output", help="Output file path")
    construct_parser.set_defaults(func=cmd_construct)

    # Simulate command
    simulate_parser = subparsers.add_parser("simulate", help="Monte Carlo erasure channel")
    simulate_parser.add_argument("input", help="Path to frame JSON file")
    simulate_parser.add_argument("--trials", type=int, default=10000, help="Number of trials")
    simulate_parser.add_argument("--signals", type=int, default=1, help="Signals per trial")
    simulate_parser.add_argument("--m", type=int, default=1, help="Erasures per trial")
    simulate_parser.add_argument("--seed", type=int, default=0, help="Random seed")
    simulate_parser.add_argument(
        "--mode", choices=[m.value for m in WeightingMode], default="weighted",
        help="Weighted error operator or raw lost-coefficient sum",
    )
    simulate_parser.add_argument(
        "--dual", choices=["file", "canonical"], default="file", help="Dual to reconstruct with"
    )
    simulate_parser.add_argument("-o", "--output", help="Output file path (.md or .json)")
    simulate_parser.set_defaults(func=cmd_simulate)

    # Verify command
    verify_parser = subparsers.add_parser("verify-examples", help="Check the worked examples")
    verify_parser.add_argument("-o", "--output", help="Output file path (.md or .json)")
    verify_parser.set_defaults(func=cmd_verify_examples)

    # Serve command
    serve_parser = subparsers.add_parser("serve", help="Start the API server")
    serve_parser.add_argument("--host", default="0.0.0.0", help="Host to bind to")
    serve_parser.add_argument("--port", type=int, default=8000, help="Port to listen on")
    serve_parser.set_defaults(func=cmd_serve)

    return parser


def _configure_logging(args) -> None:
    if args.verbose:
        level = logging.DEBUG
    elif args.quiet:
        level = logging.WARNING
    else:
        level = logging.INFO
    logging.basicConfig(
        level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s"
    )


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command is None:
        parser.print_help()
        return EXIT_MISMATCH

    _configure_logging(args)
    try:
        return args.func(args)
    except (SchemaError, ConfigError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except FrameOptError as e:
        print(f"Error ({type(e).__name__}): {e}", file=sys.stderr)
        return EXIT_DOMAIN
    except ValueError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
