"""Command-line interface.

Verbs: derive, evolve, horizons, spectrum2d, spectrum3d, report, each taking
--scenario <preset|path> plus output and numeric overrides. Exit codes:
0 success, 1 configuration error, 2 numeric failure, 3 success with validity
warnings. An undocumented selftest verb dumps the special-function identity
table.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

from .scenarios import (ConfigError, ScenarioConfig, StageError,
                        load_scenario, run, validate_analysis)
from .specfun import identity_table

_VERB_ANALYSES = {
    "derive": ("derive",),
    "evolve": ("derive", "evolve"),
    "horizons": ("derive", "evolve", "horizons"),
    "spectrum2d": ("derive", "spectrum-2d"),
    "spectrum3d": ("derive", "evolve", "spectrum-3d"),
    "report": None,  # keep the scenario's own analysis list, ensure "report"
}


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--scenario", required=True,
                        help="preset name (sodium-q2d, rubidium-3d) or JSON path")
    parser.add_argument("--out", default=None,
                        help="output directory (default: ./<scenario>-out)")
    parser.add_argument("--tol", type=float, default=None,
                        help="ODE relative tolerance override")
    parser.add_argument("--kappa-min", type=float, default=None,
                        help="lower edge of the wavenumber grid (1/m)")
    parser.add_argument("--kappa-max", type=float, default=None,
                        help="upper edge of the wavenumber grid (1/m)")
    parser.add_argument("--kappa-points", type=int, default=None,
                        help="number of wavenumber grid points")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="becosmo",
        description="Expanding-condensate acoustic cosmology: derived "
                    "parameters, expansion histories, horizons and frozen "
                    "fluctuation spectra.")
    subs = parser.add_subparsers(
        dest="verb", required=True,
        metavar="{derive,evolve,horizons,spectrum2d,spectrum3d,report}")
    for verb in _VERB_ANALYSES:
        sub = subs.add_parser(verb)
        _add_common(sub)
    subs.add_parser("selftest")
    return parser


def _apply_overrides(config: ScenarioConfig, args) -> ScenarioConfig:
    numeric = config.numeric
    updates = {}
    if args.tol is not None:
        updates["ode_tolerance"] = args.tol
    if args.kappa_min is not None or args.kappa_max is not None:
        if args.kappa_min is None or args.kappa_max is None:
            raise ConfigError("--kappa-min and --kappa-max must be given together")
        updates["kappa_min"] = args.kappa_min
        updates["kappa_max"] = args.kappa_max
    if args.kappa_points is not None:
        updates["kappa_points"] = args.kappa_points
    if updates:
        numeric = dataclasses.replace(numeric, **updates)

    analysis = _VERB_ANALYSES[args.verb]
    if analysis is None:
        analysis = tuple(config.analysis)
        if "report" not in analysis:
            analysis = analysis + ("report",)
    validate_analysis(analysis, config.condensate.trap.dimension)
    return dataclasses.replace(config, numeric=numeric, analysis=analysis)


def _run_selftest() -> int:
    ok = True
    for row in identity_table():
        passed = row["residual"] <= max(row["budget"], 1e-15)
        ok = ok and passed
        print(f"{'pass' if passed else 'FAIL'}  {row['check']:<34} "
              f"residual {row['residual']:.3e}  budget {row['budget']:.0e}")
    return 0 if ok else 2


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.verb == "selftest":
        return _run_selftest()

    try:
        config = load_scenario(args.scenario)
        config = _apply_overrides(config, args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1

    out_dir = args.out if args.out is not None else f"{config.name}-out"
    try:
        report = run(config, out_dir)
    except StageError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 2

    print(f"run complete: {report.output_dir}")
    for row in report.reference_comparison:
        note = f"  ({row['note']})" if "note" in row else ""
        print(f"  {row['key']}: computed {row['computed']:.4g}, "
              f"reference {row['reference']:.4g}, ratio {row['ratio']:.3f}{note}")
    for warning in report.warnings:
        print(f"  warning [{warning['source']}]: {warning['message']}")
    return 3 if report.warnings else 0


if __name__ == "__main__":
    raise SystemExit(main())
