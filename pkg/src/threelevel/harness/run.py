from __future__ import annotations

import copy
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..propagator import analytic_trajectory, integrate, integrate_with_decay
from ..theorem import SelfConsistentTrajectory, conservation_residual, solve_self_consistent
from ..trajectory import Trajectory
from .scenario import Mode, Scenario, ScenarioError, scenario_from_dict

__all__ = [
    "OBSERVABLES",
    "ComparisonReport",
    "Deviation",
    "RunResult",
    "SweepError",
    "compare",
    "run_scenario",
    "scenario_with",
    "sweep",
    "theorem_summary",
]

# Compared quantities: the Fig.-style panels other than the envelope.
OBSERVABLES = {
    "rho_aa": lambda o: o.rho_aa,
    "rho_cc": lambda o: o.rho_cc,
    "im_rho_ab": lambda o: o.rho_ab.imag,
    "im_rho_cb": lambda o: o.rho_cb.imag,
    "im_rho_ac": lambda o: o.rho_ac.imag,
}


class SweepError(RuntimeError):
    pass


@dataclass
class RunResult:
    """Trajectories produced by one scenario run, keyed by what made them."""

    scenario: Scenario
    analytic: Trajectory | None = None
    numeric: Trajectory | None = None
    theorem: SelfConsistentTrajectory | None = None

    @property
    def trajectories(self) -> dict[str, Trajectory]:
        return {
            name: traj
            for name in ("analytic", "numeric", "theorem")
            if (traj := getattr(self, name)) is not None
        }


@dataclass(frozen=True)
class Deviation:
    max_abs: float
    rms: float
    t_max: float


@dataclass(frozen=True)
class ComparisonReport:
    deviations: dict[str, Deviation]
    small_parameters: tuple[float, float] | None = None

    @property
    def max_deviation(self) -> float:
        return max((d.max_abs for d in self.deviations.values()), default=0.0)

    def to_dict(self) -> dict:
        return {
            "max_deviation": self.max_deviation,
            "small_parameters": None
            if self.small_parameters is None
            else {"s": self.small_parameters[0], "p": self.small_parameters[1]},
            "observables": {
                name: {"max_abs": d.max_abs, "rms": d.rms, "t_max": d.t_max}
                for name, d in self.deviations.items()
            },
        }


def compare(a: Trajectory, b: Trajectory, scenario: Scenario | None = None) -> ComparisonReport:
    """Per-observable max/RMS deviation between two runs on one grid."""
    if len(a) != len(b) or not np.array_equal(a.times, b.times):
        raise ValueError("trajectories must share an identical time grid")
    oa, ob = a.observables, b.observables
    deviations = {}
    for name, get in OBSERVABLES.items():
        diff = np.abs(np.asarray(get(oa)) - np.asarray(get(ob)))
        if diff.size == 0:
            deviations[name] = Deviation(0.0, 0.0, math.nan)
            continue
        i = int(np.argmax(diff))
        deviations[name] = Deviation(
            float(diff[i]), float(np.sqrt(np.mean(diff**2))), float(a.times[i])
        )
    small = scenario.small_parameters() if scenario is not None else None
    return ComparisonReport(deviations, small)


def run_scenario(s: Scenario, mode: Mode | str | None = None) -> RunResult:
    mode = s.mode if mode is None else Mode(mode)
    result = RunResult(s)
    if mode is Mode.THEOREM:
        if s.medium is None:
            raise ScenarioError("theorem mode requires a [medium] section")
        t0, t1 = s.window(Mode.THEOREM)
        result.theorem = solve_self_consistent(
            s.atom.scheme, s.medium, s.seed, s.integrator, t0, t1, s.n_outputs
        )
        return result
    t0, t1 = s.window(mode)
    if mode in (Mode.ANALYTIC, Mode.BOTH):
        result.analytic = analytic_trajectory(s.atom, s.pulse_s, s.pulse_p, t0, t1, s.n_outputs)
    if mode in (Mode.NUMERIC, Mode.BOTH):
        propagate = integrate if s.atom.decay is None else integrate_with_decay
        result.numeric = propagate(s.atom, s.pulse_s, s.pulse_p, s.integrator, t0, t1, s.n_outputs)
    return result


def theorem_summary(result: RunResult) -> dict:
    traj = result.theorem
    return {
        "scheme": traj.scheme.value,
        "max_residual": float(conservation_residual(traj).max()),
        "t_start": float(traj.times[0]),
        "t_end": float(traj.times[-1]),
    }


def scenario_with(base: Scenario, axis: str, value: float) -> Scenario:
    """Copy of ``base`` with one numeric leaf replaced.

    ``axis`` is ``section.key`` (``pulse_s.peak_rabi``) or a bare key, which
    sets that key in every section that has it (``q`` sets both pulses).
    """
    data = copy.deepcopy(base.to_dict(resolve_defaults=False))
    if "." in axis:
        section, key = axis.split(".", 1)
        targets = [(section, key)] if key in data.get(section, {}) else []
    else:
        targets = [(section, axis) for section, values in data.items() if axis in values]
    if not targets:
        raise ScenarioError(f"unknown sweep axis {axis!r}")
    for section, key in targets:
        current = data[section][key]
        if isinstance(current, str) or (current is not None and not isinstance(current, (int, float))):
            raise ScenarioError(f"sweep axis {axis!r} is not numeric")
        data[section][key] = value
    return scenario_from_dict(data)


def _compare_one(s: Scenario) -> ComparisonReport:
    result = run_scenario(s, Mode.BOTH)
    return compare(result.analytic, result.numeric, s)


def sweep(
    base: Scenario, axis: str, values, *, workers: int | None = None
) -> list[ComparisonReport]:
    """Run Both mode for each value; reports come back in input order."""
    values = list(values)
    scenarios = []
    for v in values:
        try:
            scenarios.append(scenario_with(base, axis, v))
        except ScenarioError as exc:
            raise SweepError(f"{axis}={v}: {exc}") from exc
    if workers is None:
        workers = min(len(values), os.cpu_count() or 1)
    if workers <= 1 or len(values) <= 1:
        reports = []
        for v, s in zip(values, scenarios):
            try:
                reports.append(_compare_one(s))
            except Exception as exc:
                raise SweepError(f"{axis}={v}: {exc}") from exc
        return reports
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_compare_one, s) for s in scenarios]
        reports = []
        for v, fut in zip(values, futures):
            try:
                reports.append(fut.result())
            except Exception as exc:
                for other in futures:
                    other.cancel()
                raise SweepError(f"{axis}={v}: {exc}") from exc
    return reports
