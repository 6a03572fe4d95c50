"""Numerical reference propagation beyond the rotating wave approximation.

The Schrodinger equation is integrated in the interaction picture with the
full Hamiltonian, counter-rotating terms included, so that the result can be
compared one-to-one with the first-order Magnus states. Optional level decay
enters as the anti-Hermitian part ``-i Gamma / 2`` of an effective Hamiltonian.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analytic import coupling_matrix, state_for_scheme
from .integrator import dopri5
from .pulses import (
    SAMPLES_PER_PERIOD,
    AtomSpec,
    PulseSpec,
    ResolutionError,
    Scheme,
    area_on_grid,
    default_grid_step,
    field_eval,
)
from .trajectory import Trajectory

__all__ = [
    "GROUND",
    "IntegratorConfig",
    "analytic_trajectory",
    "hamiltonian",
    "integrate",
    "integrate_with_decay",
    "phase_limited_step",
]

GROUND = np.array([0.0, 1.0, 0.0], dtype=complex)
DEFAULT_N_OUTPUTS = 2000


@dataclass(frozen=True)
class IntegratorConfig:
    """Tolerances and step limits; ``max_step=None`` means the phase limit."""

    rel_tol: float = 1e-10
    abs_tol: float = 1e-10
    max_step: float | None = None
    initial_step: float | None = None

    def __post_init__(self) -> None:
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("rel_tol and abs_tol must be > 0")
        if self.max_step is not None and not self.max_step > 0:
            raise ValueError("max_step must be > 0")
        if self.initial_step is not None and not self.initial_step > 0:
            raise ValueError("initial_step must be > 0")


def phase_limited_step(atom: AtomSpec, pulse_s: PulseSpec, pulse_p: PulseSpec) -> float:
    """Largest step resolving both channels' fastest phase ``w + nu``."""
    fastest = max(atom.omega_ab + pulse_s.carrier_freq, atom.probe_freq + pulse_p.carrier_freq)
    return 2 * math.pi / (SAMPLES_PER_PERIOD * fastest)


def _resolve_max_step(atom, pulse_s, pulse_p, cfg: IntegratorConfig) -> float:
    limit = phase_limited_step(atom, pulse_s, pulse_p)
    if cfg.max_step is None:
        return limit
    if cfg.max_step > limit:
        raise ResolutionError(f"max_step {cfg.max_step:g} exceeds the phase limit {limit:g}")
    return cfg.max_step


def _decay_rates(atom: AtomSpec) -> np.ndarray:
    return np.zeros(3) if atom.decay is None else np.asarray(atom.decay, dtype=float)


def hamiltonian(atom: AtomSpec, pulse_s: PulseSpec, pulse_p: PulseSpec, t: float, *, decay: bool = False):
    """``H(t)/hbar`` as a 3x3 complex matrix; Hermitian unless ``decay``.

    With ``decay=True`` the diagonal ``-i/2 (g_a, g_b, g_c)`` is added.
    """
    xs = field_eval(pulse_s, t) * np.exp(1j * atom.omega_ab * t)
    xp = field_eval(pulse_p, t) * np.exp(1j * atom.probe_freq * t)
    h = -coupling_matrix(atom.scheme, xs, xp)
    if decay:
        h = h - 0.5j * np.diag(_decay_rates(atom))
    return h


def _make_rhs(atom: AtomSpec, pulse_s: PulseSpec, pulse_p: PulseSpec, gamma: np.ndarray):
    w_s, w_p = atom.omega_ab, atom.probe_freq
    is_v = atom.scheme is Scheme.V
    half_gamma = 0.5 * gamma
    damped = bool(np.any(gamma))
    out = np.empty(3, dtype=complex)

    def rhs(t, y):
        a, b, c = y.view(complex)
        xs = field_eval(pulse_s, t) * complex(math.cos(w_s * t), math.sin(w_s * t))
        xp = field_eval(pulse_p, t) * complex(math.cos(w_p * t), math.sin(w_p * t))
        # d(psi)/dt = -i H psi = i M psi with M the coupling matrix.
        if is_v:
            out[0] = 1j * xs * b
            out[1] = 1j * (xs.conjugate() * a + xp.conjugate() * c)
            out[2] = 1j * xp * b
        else:
            out[0] = 1j * (xs * b + xp * c)
            out[1] = 1j * xs.conjugate() * a
            out[2] = 1j * xp.conjugate() * a
        if damped:
            out[0] -= half_gamma[0] * a
            out[1] -= half_gamma[1] * b
            out[2] -= half_gamma[2] * c
        return out.view(float).copy()

    return rhs


def _sample_channels(atom, pulse_s, pulse_p, times, t_start, grid_step):
    fields = np.column_stack([field_eval(pulse_s, times), field_eval(pulse_p, times)])
    envelopes = np.column_stack([pulse_s.envelope(times), pulse_p.envelope(times)])
    if grid_step is None:
        span = max(times[-1] - t_start, 1e-12)
        grid_step = min(
            default_grid_step(pulse_s, atom.omega_ab, span),
            default_grid_step(pulse_p, atom.probe_freq, span),
        )
    areas = np.column_stack(
        [
            area_on_grid(pulse_s, atom.omega_ab, times, grid_step, t_start=t_start),
            area_on_grid(pulse_p, atom.probe_freq, times, grid_step, t_start=t_start),
        ]
    )
    return fields, envelopes, areas


def _output_grid(t_start: float, t_end: float, n_outputs: int) -> np.ndarray:
    if not t_end > t_start:
        raise ValueError(f"t_end={t_end} must exceed t_start={t_start}")
    if n_outputs < 2:
        raise ValueError("n_outputs must be >= 2")
    return np.linspace(t_start, t_end, n_outputs)


def _propagate(atom, pulse_s, pulse_p, cfg, t_start, t_end, n_outputs, gamma, initial_state, grid_step):
    cfg = cfg or IntegratorConfig()
    times = _output_grid(t_start, t_end, n_outputs)
    psi0 = GROUND if initial_state is None else np.asarray(initial_state, dtype=complex)
    if psi0.shape != (3,):
        raise ValueError("initial_state must have three amplitudes")
    sol = dopri5(
        _make_rhs(atom, pulse_s, pulse_p, gamma),
        t_start,
        psi0.view(float),
        times,
        rtol=cfg.rel_tol,
        atol=cfg.abs_tol,
        max_step=_resolve_max_step(atom, pulse_s, pulse_p, cfg),
        first_step=cfg.initial_step,
    )
    states = np.ascontiguousarray(sol.y).view(complex)
    fields, envelopes, areas = _sample_channels(atom, pulse_s, pulse_p, times, t_start, grid_step)
    return Trajectory(times, states, fields, envelopes, areas)


def integrate(
    atom: AtomSpec,
    pulse_s: PulseSpec,
    pulse_p: PulseSpec,
    cfg: IntegratorConfig | None = None,
    t_start: float = -15.0,
    t_end: float = 15.0,
    n_outputs: int = DEFAULT_N_OUTPUTS,
    *,
    initial_state=None,
    grid_step: float | None = None,
) -> Trajectory:
    """Propagate from ``|b>`` at ``t_start`` and sample on a uniform grid.

    Any decay rates on ``atom`` are ignored here; see ``integrate_with_decay``.
    ``initial_state`` overrides the ground-state preparation (used for decay
    and time-reversal checks). ``grid_step`` sets the area quadrature step.
    """
    return _propagate(
        atom, pulse_s, pulse_p, cfg, t_start, t_end, n_outputs, np.zeros(3), initial_state, grid_step
    )


def integrate_with_decay(
    atom: AtomSpec,
    pulse_s: PulseSpec,
    pulse_p: PulseSpec,
    cfg: IntegratorConfig | None = None,
    t_start: float = -15.0,
    t_end: float = 15.0,
    n_outputs: int = DEFAULT_N_OUTPUTS,
    *,
    initial_state=None,
    grid_step: float | None = None,
) -> Trajectory:
    """Like ``integrate`` with the non-Hermitian term ``-i/2 diag(gamma)``."""
    return _propagate(
        atom,
        pulse_s,
        pulse_p,
        cfg,
        t_start,
        t_end,
        n_outputs,
        _decay_rates(atom),
        initial_state,
        grid_step,
    )


def analytic_trajectory(
    atom: AtomSpec,
    pulse_s: PulseSpec,
    pulse_p: PulseSpec,
    t_start: float = -15.0,
    t_end: float = 15.0,
    n_outputs: int = DEFAULT_N_OUTPUTS,
    *,
    grid_step: float | None = None,
) -> Trajectory:
    """First-order Magnus states on the same grid ``integrate`` would use."""
    times = _output_grid(t_start, t_end, n_outputs)
    fields, envelopes, areas = _sample_channels(atom, pulse_s, pulse_p, times, t_start, grid_step)
    states = state_for_scheme(atom.scheme, areas[:, 0], areas[:, 1]).as_array()
    return Trajectory(times, states, fields, envelopes, areas)
