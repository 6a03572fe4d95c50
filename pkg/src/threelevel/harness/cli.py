"""Command line entry point: ``threelevel run|compare|sweep|theorem``.

Exit codes: 0 success, 1 invalid scenario or arguments, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from ..integrator import IntegrationError
from .emit import emit
from .run import SweepError, compare, run_scenario, sweep, theorem_summary
from .scenario import Mode, ScenarioError, load_scenario

log = logging.getLogger("threelevel")

EXIT_OK, EXIT_VALIDATION, EXIT_RUNTIME = 0, 1, 2


def _suffixed(out: str, label: str) -> Path:
    path = Path(out)
    return path.with_name(f"{path.stem}_{label}{path.suffix}")


def _write_json(payload, out) -> None:
    text = json.dumps(payload, indent=1)
    if out in (None, "-"):
        print(text)
    else:
        Path(out).write_text(text + "\n", encoding="utf-8")


def _cmd_run(args) -> int:
    scenario = load_scenario(args.scenario)
    mode = Mode(args.mode)
    result = run_scenario(scenario, mode)
    trajectories = result.trajectories
    if len(trajectories) > 1 and args.out in (None, "-"):
        raise ScenarioError("--mode both writes two files; pass --out")
    for label, traj in trajectories.items():
        dest = args.out
        if len(trajectories) > 1:
            dest = _suffixed(args.out, label)
        emit(traj, args.format, dest, scenario=scenario.with_mode(mode), label=label)
        if dest not in (None, "-"):
            log.info("wrote %s (%d rows)", dest, len(traj))
    return EXIT_OK


def _cmd_compare(args) -> int:
    scenario = load_scenario(args.scenario)
    result = run_scenario(scenario, Mode.BOTH)
    report = compare(result.analytic, result.numeric, scenario)
    _write_json(report.to_dict(), args.out)
    return EXIT_OK


def _parse_values(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ScenarioError(f"--values must be a comma list of numbers, got {text!r}") from None


def _cmd_sweep(args) -> int:
    scenario = load_scenario(args.scenario)
    values = _parse_values(args.values)
    if not values:
        raise ScenarioError("--values is empty")
    reports = sweep(scenario, args.axis, values, workers=args.workers)
    payload = [{"axis": args.axis, "value": v, **r.to_dict()} for v, r in zip(values, reports)]
    _write_json(payload, args.out)
    return EXIT_OK


def _cmd_theorem(args) -> int:
    scenario = load_scenario(args.scenario).with_mode(Mode.THEOREM)
    result = run_scenario(scenario)
    summary = theorem_summary(result)
    emit(result.theorem, args.format, args.out, scenario=scenario, label="theorem", extra=summary)
    print(json.dumps(summary), file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="threelevel",
        description="First-order Magnus vs exact dynamics of driven three-level atoms.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_format=True):
        p.add_argument("--scenario", required=True, help="scenario file")
        p.add_argument("--out", default=None, help="output path (default: stdout)")
        if with_format:
            p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("run", help="emit analytic and/or numeric trajectories")
    common(p)
    p.add_argument("--mode", choices=("analytic", "numeric", "both"), default="both")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("compare", help="analytic vs numeric deviation report (JSON)")
    common(p, with_format=False)
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("sweep", help="comparison reports over one parameter")
    common(p, with_format=False)
    p.add_argument("--axis", required=True, help="section.key or bare key, e.g. pulse_s.peak_rabi")
    p.add_argument("--values", required=True, help="comma-separated values")
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("theorem", help="self-consistent thin-medium run")
    common(p)
    p.set_defaults(func=_cmd_theorem)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_VALIDATION
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(message)s",
    )
    try:
        return args.func(args)
    except (ScenarioError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (IntegrationError, SweepError, OSError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
