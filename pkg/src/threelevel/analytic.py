"""First-order Magnus solution for V and Lambda atoms.

Both schemes start in the ground state ``|b>``. Keeping only the first Magnus
term, the propagator is ``exp(i A)`` where ``A`` collects the complex pulse
areas; because ``A^3 = theta^2 A`` the exponential has a closed form in the
real effective area ``theta``. Amplitudes are ordered ``(a, b, c)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pulses import AtomSpec, PulseSpec, Scheme, area_on_grid, effective_area, field_eval

__all__ = [
    "DensityObservables",
    "StateVector",
    "coupling_matrix",
    "density_from_state",
    "magnus2_norm",
    "rwa_state_lambda",
    "rwa_state_v",
    "state_for_scheme",
    "state_lambda",
    "state_v",
]

SERIES_THRESHOLD = 1e-4


@dataclass(frozen=True)
class StateVector:
    """Amplitudes of ``|a>, |b>, |c>``; scalars or equally shaped arrays."""

    psi_a: complex
    psi_b: complex
    psi_c: complex

    def as_array(self) -> np.ndarray:
        """Stack into shape ``(..., 3)``."""
        return np.stack(np.broadcast_arrays(self.psi_a, self.psi_b, self.psi_c), axis=-1).astype(
            complex
        )

    @classmethod
    def from_array(cls, arr) -> "StateVector":
        arr = np.asarray(arr, dtype=complex)
        return cls(arr[..., 0], arr[..., 1], arr[..., 2])

    @property
    def norm_sq(self):
        return abs(self.psi_a) ** 2 + abs(self.psi_b) ** 2 + abs(self.psi_c) ** 2


@dataclass(frozen=True)
class DensityObservables:
    rho_aa: float
    rho_bb: float
    rho_cc: float
    rho_ab: complex
    rho_cb: complex
    rho_ac: complex


def density_from_state(psi: StateVector) -> DensityObservables:
    """Pure-state projector elements ``rho_xy = psi_x conj(psi_y)``."""
    a, b, c = (np.asarray(x, dtype=complex) for x in (psi.psi_a, psi.psi_b, psi.psi_c))
    out = DensityObservables(
        rho_aa=np.abs(a) ** 2,
        rho_bb=np.abs(b) ** 2,
        rho_cc=np.abs(c) ** 2,
        rho_ab=a * np.conj(b),
        rho_cb=c * np.conj(b),
        rho_ac=a * np.conj(c),
    )
    if a.ndim == 0:
        out = DensityObservables(
            *(float(v) for v in (out.rho_aa, out.rho_bb, out.rho_cc)),
            *(complex(v) for v in (out.rho_ab, out.rho_cb, out.rho_ac)),
        )
    return out


def _sinc(theta):
    """sin(theta)/theta with a Taylor branch near zero."""
    theta = np.asarray(theta, dtype=float)
    small = theta < SERIES_THRESHOLD
    safe = np.where(small, 1.0, theta)
    t2 = theta * theta
    return np.where(small, 1.0 - t2 / 6.0 + t2 * t2 / 120.0, np.sin(safe) / safe)


def _cosm1_over_sq(theta):
    """(cos(theta) - 1)/theta^2, finite at zero."""
    theta = np.asarray(theta, dtype=float)
    small = theta < SERIES_THRESHOLD
    t2 = theta * theta
    # -2 sin^2(x/2)/x^2 avoids the cancellation in cos(x) - 1.
    direct = -0.5 * _sinc(0.5 * theta) ** 2
    return np.where(small, -0.5 + t2 / 24.0 - t2 * t2 / 720.0, direct)


def _finish(a, b, c) -> StateVector:
    if np.ndim(a) == 0 and np.ndim(b) == 0 and np.ndim(c) == 0:
        return StateVector(complex(a), complex(b), complex(c))
    a, b, c = np.broadcast_arrays(*(np.asarray(x, dtype=complex) for x in (a, b, c)))
    return StateVector(a, b, c)


def state_v(theta_s, theta_p) -> StateVector:
    """V-scheme state for complex areas ``theta_s`` (a-b) and ``theta_p`` (c-b)."""
    theta_s = np.asarray(theta_s, dtype=complex)
    theta_p = np.asarray(theta_p, dtype=complex)
    theta = effective_area(theta_s, theta_p)
    sinc = _sinc(theta)
    return _finish(1j * theta_s * sinc, np.cos(theta), 1j * theta_p * sinc)


def state_lambda(theta_s, theta_p) -> StateVector:
    """Lambda-scheme state for areas ``theta_s`` (a-b) and ``theta_p`` (a-c).

    The b amplitude ``(|theta_p|^2 + |theta_s|^2 cos theta)/theta^2`` is
    evaluated as ``1 + |theta_s|^2 (cos theta - 1)/theta^2``.
    """
    theta_s = np.asarray(theta_s, dtype=complex)
    theta_p = np.asarray(theta_p, dtype=complex)
    theta = effective_area(theta_s, theta_p)
    g = _cosm1_over_sq(theta)
    return _finish(
        1j * theta_s * _sinc(theta),
        1.0 + np.abs(theta_s) ** 2 * g,
        theta_s * np.conj(theta_p) * g,
    )


def state_for_scheme(scheme: Scheme, theta_s, theta_p) -> StateVector:
    if Scheme(scheme) is Scheme.V:
        return state_v(theta_s, theta_p)
    return state_lambda(theta_s, theta_p)


def _rwa_areas(omega_s, omega_p, t):
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("t must be >= 0")
    # Under a resonant constant drive the areas grow as Omega t / 2.
    return 0.5 * np.asarray(omega_s) * t, 0.5 * np.asarray(omega_p) * t


def rwa_state_v(omega_s, omega_p, t) -> StateVector:
    """Resonant CW V state with effective Rabi frequency ``hypot(Os, Op)``."""
    return state_v(*_rwa_areas(omega_s, omega_p, t))


def rwa_state_lambda(omega_s, omega_p, t) -> StateVector:
    """Resonant CW Lambda state; a pure p drive leaves ``|b>`` untouched."""
    return state_lambda(*_rwa_areas(omega_s, omega_p, t))


def coupling_matrix(scheme: Scheme, xs, xp) -> np.ndarray:
    """Hermitian 3x3 coupling pattern of a scheme, shape ``(..., 3, 3)``.

    ``xs`` sits at (a, b). For V ``xp`` sits at (c, b); for Lambda at (a, c).
    The Hamiltonian over hbar is minus this matrix built from the phased
    fields; the first Magnus term is ``i`` times it built from the areas.
    """
    xs = np.asarray(xs, dtype=complex)
    xp = np.asarray(xp, dtype=complex)
    xs, xp = np.broadcast_arrays(xs, xp)
    m = np.zeros(xs.shape + (3, 3), dtype=complex)
    m[..., 0, 1] = xs
    m[..., 1, 0] = np.conj(xs)
    if Scheme(scheme) is Scheme.V:
        m[..., 2, 1] = xp
        m[..., 1, 2] = np.conj(xp)
    else:
        m[..., 0, 2] = xp
        m[..., 2, 0] = np.conj(xp)
    return m


def magnus2_norm(
    pulse_s: PulseSpec,
    pulse_p: PulseSpec,
    atom: AtomSpec,
    t_start: float,
    t: float,
    grid_step: float,
) -> float:
    """Frobenius norm of the second Magnus term at time ``t``.

    The double integral of ``[H(t1), H(t2)]`` over ``t2 < t1`` is nested: the
    inner integral of ``H`` is the area matrix (cumulative Simpson at each
    outer node), the outer integral of ``[H, area]`` uses Simpson again,
    giving ``S2 = -1/2 int [M(t1), A(t1)] dt1`` with ``M`` the phased-field
    coupling and ``A`` its running integral.
    """
    if t < t_start:
        raise ValueError(f"t={t} precedes t_start={t_start}")
    if t == t_start:
        return 0.0
    w_s, w_p = atom.omega_ab, atom.probe_freq
    n = 2 * int(np.ceil((t - t_start) / (2 * grid_step)))
    nodes = np.linspace(t_start, t, n + 1)
    area_s = area_on_grid(pulse_s, w_s, nodes, grid_step)
    area_p = area_on_grid(pulse_p, w_p, nodes, grid_step)
    m = coupling_matrix(
        atom.scheme,
        field_eval(pulse_s, nodes) * np.exp(1j * w_s * nodes),
        field_eval(pulse_p, nodes) * np.exp(1j * w_p * nodes),
    )
    a = coupling_matrix(atom.scheme, area_s, area_p)
    comm = m @ a - a @ m
    weights = np.ones(n + 1)
    weights[1:-1:2] = 4.0
    weights[2:-1:2] = 2.0
    h = (t - t_start) / n
    s2 = -0.5 * (h / 3.0) * np.einsum("k,kij->ij", weights, comm)
    return float(np.linalg.norm(s2))
