"""Optically thin Maxwell-Schrodinger dynamics and the pulse area theorem.

With spatial propagation dropped, the complex areas obey

    theta_s'' = -i Omega_a^2 rho_ab,    theta_p'' = -i Omega_c^2 rho_cb,

where the coherences come from the first-order Magnus state of the scheme
and ``theta'`` is the instantaneous complex field envelope. Along any such
trajectory the V scheme conserves

    |theta_s'|^2 / Omega_a^2 + |theta_p'|^2 / Omega_c^2 - sin^2(theta),

and the Lambda scheme the same with ``sin^2`` replaced by
``|theta_s|^2 sin^2(theta) / theta^2``. Residuals below subtract the value at
the first grid point, so seeded runs with a nonzero constant are accepted.

Sign convention: ``rho_xy = psi_x conj(psi_y)`` and ``rho_bc = conj(rho_cb)``.
With this choice ``-i[conj(rho_ab) theta_s' - rho_ab conj(theta_s')]
- i[rho_bc theta_p' - conj(rho_bc) conj(theta_p')]`` equals ``d rho_bb/dt``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analytic import _sinc, state_for_scheme
from .integrator import dopri5
from .propagator import IntegratorConfig
from .pulses import AtomSpec, PulseSpec, Scheme, area_on_grid, default_grid_step, field_eval
from .trajectory import Trajectory

__all__ = [
    "FieldState",
    "MediumSpec",
    "SelfConsistentTrajectory",
    "area_theorem_pointcheck",
    "collective_frequency",
    "conservation_residual",
    "conservation_residual_lambda",
    "conservation_residual_v",
    "solve_self_consistent",
]


def collective_frequency(n: float, wavelength: float, gamma: float, c: float) -> float:
    """sqrt(3/(8 pi) n lambda^2 gamma c)."""
    for name, value in (("n", n), ("wavelength", wavelength), ("gamma", gamma), ("c", c)):
        if not value > 0:
            raise ValueError(f"{name} must be > 0, got {value}")
    return math.sqrt(3.0 / (8.0 * math.pi) * n * wavelength**2 * gamma * c)


@dataclass(frozen=True)
class MediumSpec:
    omega_a_coll: float
    omega_c_coll: float

    def __post_init__(self) -> None:
        if not (self.omega_a_coll > 0 and self.omega_c_coll > 0):
            raise ValueError("collective frequencies must be > 0")

    @classmethod
    def from_raw(
        cls, n: float, lambda_ab: float, lambda_cb: float, gamma: float, c: float
    ) -> "MediumSpec":
        return cls(
            collective_frequency(n, lambda_ab, gamma, c),
            collective_frequency(n, lambda_cb, gamma, c),
        )


@dataclass(frozen=True)
class FieldState:
    """Complex areas and their time derivatives at one instant."""

    theta_s: complex = 0j
    theta_p: complex = 0j
    dtheta_s: complex = 0j
    dtheta_p: complex = 0j

    def __post_init__(self) -> None:
        for name in ("theta_s", "theta_p", "dtheta_s", "dtheta_p"):
            value = complex(getattr(self, name))
            if not (math.isfinite(value.real) and math.isfinite(value.imag)):
                raise ValueError(f"{name} must be finite")
            object.__setattr__(self, name, value)

    def as_array(self) -> np.ndarray:
        return np.array([self.theta_s, self.theta_p, self.dtheta_s, self.dtheta_p], dtype=complex)


@dataclass(frozen=True, eq=False)
class SelfConsistentTrajectory(Trajectory):
    """Trajectory of a self-consistent run; remembers its scheme and medium."""

    scheme: Scheme = Scheme.V
    medium: MediumSpec | None = None

    def field_state(self, i: int) -> FieldState:
        return FieldState(*self.areas[i], *self.dareas[i])


def _make_rhs(scheme: Scheme, medium: MediumSpec):
    wa2 = medium.omega_a_coll**2
    wc2 = medium.omega_c_coll**2
    is_v = scheme is Scheme.V
    out = np.empty(4, dtype=complex)

    def rhs(t, y):
        ts, tp, dts, dtp = y.view(complex)
        theta = math.hypot(abs(ts), abs(tp))
        sinc = float(_sinc(theta))
        cos = math.cos(theta)
        if is_v:
            # -i rho_ab = theta_s sinc cos, -i rho_cb = theta_p sinc cos
            out[2] = wa2 * ts * sinc * cos
            out[3] = wc2 * tp * sinc * cos
        else:
            g = -0.5 * float(_sinc(0.5 * theta)) ** 2
            psi_b = 1.0 + abs(ts) ** 2 * g
            out[2] = wa2 * ts * sinc * psi_b
            out[3] = -1j * wc2 * ts * tp.conjugate() * g * psi_b
        out[0] = dts
        out[1] = dtp
        return out.view(float).copy()

    return rhs


def solve_self_consistent(
    scheme: Scheme,
    medium: MediumSpec,
    init: FieldState,
    cfg: IntegratorConfig | None = None,
    t_start: float = 0.0,
    t_end: float = 50.0,
    n_outputs: int = 2001,
) -> SelfConsistentTrajectory:
    """Integrate the thin-medium field equations as 8 real ODEs.

    ``cfg.max_step`` defaults to a tenth of the fastest collective period.
    """
    scheme = Scheme(scheme)
    cfg = cfg or IntegratorConfig()
    if not t_end > t_start:
        raise ValueError(f"t_end={t_end} must exceed t_start={t_start}")
    if n_outputs < 2:
        raise ValueError("n_outputs must be >= 2")
    max_step = cfg.max_step
    if max_step is None:
        max_step = 0.1 / max(medium.omega_a_coll, medium.omega_c_coll)
    times = np.linspace(t_start, t_end, n_outputs)
    sol = dopri5(
        _make_rhs(scheme, medium),
        t_start,
        init.as_array().view(float),
        times,
        rtol=cfg.rel_tol,
        atol=cfg.abs_tol,
        max_step=max_step,
        first_step=cfg.initial_step,
    )
    y = np.ascontiguousarray(sol.y).view(complex)
    areas, dareas = y[:, :2], y[:, 2:]
    states = state_for_scheme(scheme, areas[:, 0], areas[:, 1]).as_array()
    return SelfConsistentTrajectory(
        times=times,
        states=states,
        fields=dareas.copy(),
        envelopes=np.abs(dareas),
        areas=areas.copy(),
        dareas=dareas.copy(),
        scheme=scheme,
        medium=medium,
    )


def _field_energy(dtheta_s, dtheta_p, medium: MediumSpec):
    return (
        np.abs(dtheta_s) ** 2 / medium.omega_a_coll**2
        + np.abs(dtheta_p) ** 2 / medium.omega_c_coll**2
    )


def _atomic_term(scheme: Scheme, theta_s, theta_p):
    theta = np.hypot(np.abs(theta_s), np.abs(theta_p))
    if Scheme(scheme) is Scheme.V:
        return np.sin(theta) ** 2
    return np.abs(theta_s) ** 2 * _sinc(theta) ** 2


def conservation_residual(traj: SelfConsistentTrajectory, scheme: Scheme | None = None) -> np.ndarray:
    """|E(t) - E(t_start)| for the conserved quantity of ``scheme``.

    ``scheme`` defaults to the one the trajectory was produced with.
    """
    if traj.dareas is None or traj.medium is None:
        raise ValueError("conservation residuals need a self-consistent trajectory")
    scheme = traj.scheme if scheme is None else Scheme(scheme)
    e = _field_energy(traj.dareas[:, 0], traj.dareas[:, 1], traj.medium) - _atomic_term(
        scheme, traj.areas[:, 0], traj.areas[:, 1]
    )
    return np.abs(e - e[0])


def conservation_residual_v(traj: SelfConsistentTrajectory) -> np.ndarray:
    return conservation_residual(traj, Scheme.V)


def conservation_residual_lambda(traj: SelfConsistentTrajectory) -> np.ndarray:
    return conservation_residual(traj, Scheme.LAMBDA)


def area_theorem_pointcheck(
    scheme: Scheme,
    medium: MediumSpec,
    pulse_s: PulseSpec,
    pulse_p: PulseSpec,
    atom: AtomSpec,
    times,
    grid_step: float | None = None,
) -> np.ndarray:
    """Field energy density minus the atomic side, for prescribed pulses.

    Returns ``|Os(t)/Oa|^2 + |Op(t)/Oc|^2 - F(theta(t))`` with ``F`` the
    scheme's right-hand side and areas accumulated from ``times[0]``. This
    vanishes only when the pulses are themselves a self-consistent solution
    started from zero; for arbitrary external pulses it is a diagnostic and
    generally nonzero.
    """
    times = np.asarray(times, dtype=float)
    if grid_step is None:
        span = max(times[-1] - times[0], 1e-12)
        grid_step = min(
            default_grid_step(pulse_s, atom.omega_ab, span),
            default_grid_step(pulse_p, atom.probe_freq, span),
        )
    theta_s = area_on_grid(pulse_s, atom.omega_ab, times, grid_step)
    theta_p = area_on_grid(pulse_p, atom.probe_freq, times, grid_step)
    energy = _field_energy(field_eval(pulse_s, times), field_eval(pulse_p, times), medium)
    return energy - _atomic_term(scheme, theta_s, theta_p)

