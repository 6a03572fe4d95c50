"""Scenario I/O, run dispatch, comparison reports, sweeps and the CLI."""

from pathlib import Path

from .emit import COLUMNS, emit, read_json
from .run import ComparisonReport, Deviation, RunResult, compare, run_scenario, scenario_with, sweep
from .scenario import Mode, Scenario, ScenarioError, load_scenario, parse_scenario

SCENARIO_DIR = Path(__file__).with_name("scenarios")


def bundled_scenario(name: str) -> Path:
    """Path of a scenario shipped with the package, e.g. ``"fig2"``."""
    path = SCENARIO_DIR / f"{name}.scenario"
    if not path.exists():
        raise FileNotFoundError(path)
    return path


__all__ = [
    "COLUMNS",
    "ComparisonReport",
    "Deviation",
    "Mode",
    "RunResult",
    "SCENARIO_DIR",
    "Scenario",
    "ScenarioError",
    "bundled_scenario",
    "compare",
    "emit",
    "load_scenario",
    "parse_scenario",
    "read_json",
    "run_scenario",
    "scenario_with",
    "sweep",
]
