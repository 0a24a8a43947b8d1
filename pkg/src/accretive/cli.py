"""Command-line interface.

Subcommands:

``analyze --config FILE --out DIR``
    Full pipeline over the configured sizes; writes report.json, spectrum
    CSV tables, and figures.  Exit code 0 iff every enabled check passed.

``sweep --config FILE --sizes 32,64,128 --out DIR``
    Same as analyze with the size list overridden from the command line.

``selftest``
    Runs the built-in 2x2 worked example through every check and prints
    one line per check with its margin.

``spectrum --config FILE --out DIR --dump``
    Computes the spectra only and writes the CSV tables (no JSON, no
    figures); without --dump prints a short summary instead.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

from .config import SEED_ENV_VAR, AnalysisConfig, load_config, validate_config
from .exceptions import AccretiveError
from .pipeline import run_analysis
from .report import emit_report

__all__ = ["main", "build_parser"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="accretive",
        description="Spectral inequality checks for perturbed accretive operators.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, config_required=True):
        p.add_argument("--config", required=config_required, help="configuration file")
        p.add_argument("--out", default="accretive-out", help="output directory")
        p.add_argument("--seed", type=int, default=None,
                       help=f"override the seed (also {SEED_ENV_VAR})")

    analyze = sub.add_parser("analyze", help="run the full pipeline")
    add_common(analyze)
    analyze.add_argument("--no-plots", dest="plots", action="store_false",
                         help="skip figure rendering")

    sweep = sub.add_parser("sweep", help="analyze with sizes from the command line")
    add_common(sweep)
    sweep.add_argument("--sizes", required=True, help="comma-separated grid sizes")
    sweep.add_argument("--no-plots", dest="plots", action="store_false")

    selftest = sub.add_parser("selftest", help="run the built-in 2x2 worked example")
    selftest.add_argument("--out", default=None, help="optional output directory")

    spectrum = sub.add_parser("spectrum", help="compute spectra only")
    add_common(spectrum)
    spectrum.add_argument("--dump", action="store_true", help="write CSV tables")

    return parser


def _apply_overrides(config: AnalysisConfig, args) -> AnalysisConfig:
    updates = {}
    if getattr(args, "seed", None) is not None:
        updates["seed"] = args.seed
    if getattr(args, "sizes", None):
        updates["sizes"] = tuple(
            sorted(int(s) for s in str(args.sizes).split(",") if s.strip())
        )
    if updates:
        config = validate_config(dataclasses.replace(config, **updates))
    return config


def _print_checks(report) -> None:
    for result in report.size_results:
        for check in result.checks:
            status = "PASS" if check.passed else "FAIL"
            print(f"[{status}] n={result.size:<5} {check.id:<28} margin={check.margin:+.3e}")
        for skip in result.skipped:
            print(f"[SKIP] n={result.size:<5} {skip['id']:<28} ({skip['reason']})")
    for check in report.cross_checks:
        status = "PASS" if check.passed else "FAIL"
        print(f"[{status}] cross   {check.id:<28} margin={check.margin:+.3e}")
    for skip in report.cross_skipped:
        print(f"[SKIP] cross   {skip['id']:<28} ({skip['reason']})")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "selftest":
            config = AnalysisConfig(family="selftest2x2")
            report = run_analysis(config)
            _print_checks(report)
            if args.out:
                emit_report(report, args.out)
            print("selftest:", "all checks passed" if report.all_passed else "FAILURES")
            return 0 if report.all_passed else 1

        config = _apply_overrides(load_config(args.config), args)
        report = run_analysis(config)

        if args.command == "spectrum":
            if args.dump:
                written = emit_report(report, args.out, formats=("csv",), plots=False)
                for path in written:
                    print(path)
            else:
                for result in report.size_results:
                    for label, table in result.spectra.items():
                        eigs = table["eigenvalues"]
                        print(f"n={result.size} {label}: {len(eigs)} eigenvalues, "
                              f"largest modulus {max(abs(z) for z in eigs):.6g}")
            return 0

        _print_checks(report)
        written = emit_report(report, args.out, plots=getattr(args, "plots", True))
        print(f"wrote {len(written)} files under {args.out}")
        return 0 if report.all_passed else 1
    except AccretiveError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
