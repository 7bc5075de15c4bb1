#!/usr/bin/env python3

import argparse
import logging
import sys
from dataclasses import replace
from typing import Optional

from config import EngineConfig, VerifierConfig
from errors import DSLError, NumericsError, RegistryError, ValidationError
from evaluator import Evaluator, evaluate_constant
from expression_parser import parse_expression
from figure_grid import FIGURES, sample_grid
from helpers import SECTION_TITLES, format_bindings, format_complex
from registry import filter_section, load_registry
from report_writer import FORMATS, emit_report
from validator import validate
from verifier import run_all

EXIT_OK = 0
EXIT_FAILURES = 1
EXIT_USAGE = 2
EXIT_IO = 3


def setup_logging(verbose: bool = False) -> None:
    """Configure logging for the application."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )


def parse_assignment(text: str, bindings: dict[str, complex]) -> tuple[str, complex]:
    """
    Parse "name=value" where value is a constant expression.

    Args:
        text: Assignment such as "alpha=Sqrt(2)" or "z=0.5+0.2*I"
        bindings: Earlier assignments the value may reference

    Returns:
        (name, value)
    """
    name, sep, value_text = text.partition("=")
    name = name.strip()
    if not sep or not name.isidentifier() or not name.isascii():
        raise ValidationError(f"Expected name=value, got {text!r}")
    value = evaluate_constant(parse_expression(value_text, "<param>"), bindings)
    return name, value


def verify_registry(args: argparse.Namespace) -> int:
    """Verify the registry and write the report."""
    logger = logging.getLogger(__name__)

    cfg = VerifierConfig(
        registry_dir=args.registry,
        tol_rel=args.tol_rel,
        tol_abs=args.tol_abs,
        jobs=args.jobs,
    )
    manifest = load_registry(cfg.registry_dir, args.id)
    report = run_all(manifest, cfg)
    out = args.out or cfg.report_path(args.report)
    emit_report(report, args.report, out)
    logger.info(f"Exit code: {report.exit_code}")

    # Print summary
    summary = report.summary
    print("\n=== Identity Verification ===")
    print(f"Identities: {summary['entries']}")
    print(f"Sample points: {summary['records']}")
    for status, count in summary["entry_counts"].items():
        print(f"  {status}: {count}")
    print(f"Total time: {summary['total_time_ms'] / 1000:.1f} s")
    print(f"\nSaved to: {out}")
    return report.exit_code


def evaluate_expression(args: argparse.Namespace) -> int:
    """Evaluate an ad-hoc expression."""
    bindings: dict[str, complex] = {}
    for assignment in args.param or []:
        name, value = parse_assignment(assignment, bindings)
        bindings[name] = value

    ast = parse_expression(args.expr, "<expr>")
    report = validate(ast, bindings)
    if report.errors:
        raise ValidationError("; ".join(report.errors), report.errors)

    engine = EngineConfig()
    if args.tol is not None:
        engine = replace(engine, target_abs_tol=args.tol, target_rel_tol=args.tol)
    result = Evaluator(engine).evaluate(report.folded, bindings)

    print(f"value:     {format_complex(result.value, 16)}")
    print(f"abs_err:   {result.abs_err:.3e}")
    print(f"converged: {result.converged}")
    for diagnostic in result.diagnostics:
        print(f"note:      {diagnostic}")
    return EXIT_OK if result.converged else EXIT_FAILURES


def list_identities(args: argparse.Namespace) -> int:
    """List registry entries, optionally for one section."""
    manifest = load_registry(args.registry)
    entries = filter_section(manifest, args.section) if args.section else manifest.entries

    print("\n=== Identity Registry ===")
    for entry in entries:
        samples = "; ".join(format_bindings(point, 6) for point in entry.samples)
        print(f"{entry.provenance:<10} {entry.expected_status:<17} {entry.id}  [{samples}]")
    print(f"\nTotal: {len(entries)} identities")
    for section, count in manifest.counts_by_section.items():
        print(f"  {section} ({SECTION_TITLES.get(section, 'Other')}): {count}")
    return EXIT_OK


def sample_figure(args: argparse.Namespace) -> int:
    """Write a figure-data grid."""
    cfg = VerifierConfig()
    out = args.out or cfg.figure_csv(args.figure)
    rows = sample_grid(args.figure, (args.re_min, args.re_max, args.im_min, args.im_max), args.res, out)

    print(f"\n=== Figure data: {args.figure} ===")
    print(f"Grid points: {rows}")
    print(f"\nSaved to: {out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    defaults = VerifierConfig()
    parser = argparse.ArgumentParser(description="Numerical verifier for Lerch-transcendent identities")
    parser.add_argument("--verbose", "-v", action="store_true", help="debug logging")
    commands = parser.add_subparsers(dest="command", required=True)

    verify = commands.add_parser("verify", help="verify the identity registry")
    verify.add_argument("--registry", default=defaults.registry_dir)
    verify.add_argument("--id", action="append", help="restrict to an identity id (repeatable)")
    verify.add_argument("--tol-rel", type=float, default=defaults.tol_rel)
    verify.add_argument("--tol-abs", type=float, default=defaults.tol_abs)
    verify.add_argument("--jobs", type=int, default=defaults.jobs)
    verify.add_argument("--report", choices=FORMATS, default="json")
    verify.add_argument("--out", help="report path (default output/report.<ext>)")
    verify.set_defaults(handler=verify_registry)

    evaluate = commands.add_parser("eval", help="evaluate an expression")
    evaluate.add_argument("expr")
    evaluate.add_argument("--param", action="append", metavar="NAME=VALUE")
    evaluate.add_argument("--tol", type=float, help="absolute and relative engine target")
    evaluate.set_defaults(handler=evaluate_expression)

    listing = commands.add_parser("list", help="list registry entries")
    listing.add_argument("--registry", default=defaults.registry_dir)
    listing.add_argument("--section", choices=sorted(SECTION_TITLES))
    listing.set_defaults(handler=list_identities)

    sample = commands.add_parser("sample", help="write a figure-data grid")
    sample.add_argument("--figure", choices=sorted(FIGURES), required=True)
    sample.add_argument("--re-min", type=float, required=True)
    sample.add_argument("--re-max", type=float, required=True)
    sample.add_argument("--im-min", type=float, required=True)
    sample.add_argument("--im-max", type=float, required=True)
    sample.add_argument("--res", type=int, required=True)
    sample.add_argument("--out", help="CSV path (default output/<figure>.csv)")
    sample.set_defaults(handler=sample_figure)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    """Main entry point for the identity verifier."""
    args = build_parser().parse_args(argv)
    setup_logging(args.verbose)
    logger = logging.getLogger(__name__)

    try:
        return args.handler(args)
    except (DSLError, RegistryError, ValueError) as e:
        logger.error(f"An error occurred: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except NumericsError as e:
        logger.error(f"Evaluation failed: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILURES
    except OSError as e:
        logger.error(f"I/O error: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
