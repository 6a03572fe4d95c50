"""Driving-field envelopes, carriers and complex pulse areas.

Fields are written in natural (dimensionless) units. A pulse is the product
of a peak Rabi frequency, a real envelope and a carrier, and its complex area
with respect to an atomic transition frequency ``w`` is

    theta(t) = int_{t_start}^{t} Omega(t') exp(i w t') dt'

computed here by composite Simpson quadrature on a uniform grid.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

__all__ = [
    "AtomSpec",
    "CarrierMode",
    "ComplexArea",
    "CustomEnvelope",
    "PulseSpec",
    "ResolutionError",
    "Scheme",
    "TanhEnvelope",
    "area_on_grid",
    "default_grid_step",
    "effective_area",
    "envelope_eval",
    "field_eval",
    "max_grid_step",
    "pulse_area",
]

# Samples per period of the fastest phase the quadrature must resolve.
SAMPLES_PER_PERIOD = 20


class ResolutionError(ValueError):
    """Raised when a quadrature or integration step would alias the carrier."""


class Scheme(str, enum.Enum):
    V = "V"
    LAMBDA = "Lambda"


class CarrierMode(str, enum.Enum):
    REAL_COSINE = "real_cosine"
    RWA_EXPONENTIAL = "rwa_exponential"


@dataclass(frozen=True)
class TanhEnvelope:
    """Smoothed box of half-width ``tau_p``; ``q`` sets the edge steepness.

    ``q = 0`` is nearly Gaussian, ``q >= 1`` is essentially square. The peak
    value is ``2 tanh(10**q)``, not 1.
    """

    q: float
    tau_p: float

    def __post_init__(self) -> None:
        if not self.tau_p > 0:
            raise ValueError(f"tau_p must be > 0, got {self.tau_p}")
        if not math.isfinite(self.q):
            raise ValueError(f"q must be finite, got {self.q}")

    def __call__(self, t):
        k = 10.0**self.q / self.tau_p
        return np.tanh(k * (t + self.tau_p)) - np.tanh(k * (t - self.tau_p))


@dataclass(frozen=True, eq=False)
class CustomEnvelope:
    """Tabulated envelope, linearly interpolated and zero outside the table."""

    times: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        times = np.asarray(self.times, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if times.ndim != 1 or times.shape != values.shape or times.size < 2:
            raise ValueError("custom envelope needs matching 1-d tables of length >= 2")
        if np.any(np.diff(times) <= 0):
            raise ValueError("custom envelope times must be strictly increasing")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)

    def __call__(self, t):
        return np.interp(t, self.times, self.values, left=0.0, right=0.0)


Envelope = Union[TanhEnvelope, CustomEnvelope]


def envelope_eval(env: Envelope, t):
    """Evaluate an envelope at scalar or array time ``t``."""
    out = env(np.asarray(t, dtype=float))
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class PulseSpec:
    peak_rabi: float
    carrier_freq: float
    envelope: Envelope
    carrier_mode: CarrierMode = CarrierMode.REAL_COSINE

    def __post_init__(self) -> None:
        if not self.peak_rabi >= 0:
            raise ValueError(f"peak_rabi must be >= 0, got {self.peak_rabi}")
        if not self.carrier_freq >= 0:
            raise ValueError(f"carrier_freq must be >= 0, got {self.carrier_freq}")
        object.__setattr__(self, "carrier_mode", CarrierMode(self.carrier_mode))


@dataclass(frozen=True)
class AtomSpec:
    """Level frequencies of a V or Lambda atom; ``omega_ac`` is derived.

    ``decay`` is an optional triple of level decay rates ``(g_a, g_b, g_c)``.
    """

    scheme: Scheme
    omega_ab: float
    omega_cb: float
    decay: tuple[float, float, float] | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "scheme", Scheme(self.scheme))
        if not (self.omega_ab > 0 and self.omega_cb > 0):
            raise ValueError("omega_ab and omega_cb must be > 0")
        if self.scheme is Scheme.LAMBDA and not self.omega_ab > self.omega_cb:
            raise ValueError("Lambda scheme needs omega_ac = omega_ab - omega_cb > 0")
        if self.decay is not None:
            decay = tuple(float(g) for g in self.decay)
            if len(decay) != 3 or any(not g >= 0 for g in decay):
                raise ValueError(f"decay must be three rates >= 0, got {self.decay}")
            object.__setattr__(self, "decay", decay)

    @property
    def omega_ac(self) -> float:
        return self.omega_ab - self.omega_cb

    @property
    def probe_freq(self) -> float:
        """Transition frequency that modulates the p-channel area."""
        return self.omega_cb if self.scheme is Scheme.V else self.omega_ac


@dataclass(frozen=True)
class ComplexArea:
    theta_s: complex
    theta_p: complex

    @property
    def theta_eff(self):
        return effective_area(self.theta_s, self.theta_p)


def field_eval(pulse: PulseSpec, t):
    """Complex Rabi frequency Omega(t) of ``pulse`` (scalar or array ``t``)."""
    t = np.asarray(t, dtype=float)
    env = pulse.envelope(t)
    if pulse.carrier_mode is CarrierMode.REAL_COSINE:
        out = (pulse.peak_rabi * env * np.cos(pulse.carrier_freq * t)).astype(complex)
    else:
        out = 0.5 * pulse.peak_rabi * env * np.exp(-1j * pulse.carrier_freq * t)
    return complex(out) if out.ndim == 0 else out


def effective_area(theta_s, theta_p):
    """sqrt(|theta_s|^2 + |theta_p|^2); works elementwise on arrays."""
    return np.hypot(np.abs(theta_s), np.abs(theta_p))


def max_grid_step(pulse: PulseSpec, transition_freq: float) -> float:
    """Largest quadrature step that still resolves the phase ``nu + w``."""
    fastest = pulse.carrier_freq + abs(transition_freq)
    if fastest == 0:
        return math.inf
    return 2 * math.pi / (SAMPLES_PER_PERIOD * fastest)


def default_grid_step(pulse: PulseSpec, transition_freq: float, span: float) -> float:
    """Half the resolution limit, capped at 1/200 of ``span``."""
    return min(0.5 * max_grid_step(pulse, transition_freq), span / 200.0)


def _check_step(pulse: PulseSpec, transition_freq: float, grid_step: float) -> None:
    if not grid_step > 0:
        raise ResolutionError(f"grid_step must be > 0, got {grid_step}")
    limit = max_grid_step(pulse, transition_freq)
    if grid_step > limit:
        raise ResolutionError(
            f"grid_step {grid_step:g} exceeds {limit:g}; the phase at "
            f"nu + w = {pulse.carrier_freq + abs(transition_freq):g} would alias"
        )


def _simpson_weights(m: int) -> np.ndarray:
    w = np.ones(m + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w / 3.0


def _integrand(pulse: PulseSpec, transition_freq: float, t):
    return field_eval(pulse, t) * np.exp(1j * transition_freq * t)


def pulse_area(
    pulse: PulseSpec,
    transition_freq: float,
    t_start: float,
    t: float,
    grid_step: float,
) -> complex:
    """Complex area of ``pulse`` over ``[t_start, t]``.

    The interval is split into the smallest even number of equal panels no
    wider than ``grid_step``, so the whole range is covered by Simpson's rule.
    """
    _check_step(pulse, transition_freq, grid_step)
    if t < t_start:
        raise ValueError(f"t={t} precedes t_start={t_start}")
    span = t - t_start
    if span == 0:
        return 0j
    n = 2 * math.ceil(span / (2 * grid_step))
    nodes = np.linspace(t_start, t, n + 1)
    h = span / n
    return complex(h * np.dot(_simpson_weights(n), _integrand(pulse, transition_freq, nodes)))


def area_on_grid(
    pulse: PulseSpec,
    transition_freq: float,
    times,
    grid_step: float,
    t_start: float | None = None,
) -> np.ndarray:
    """Cumulative complex area evaluated at every point of ``times``.

    Each gap between consecutive output times is integrated with its own
    composite Simpson rule (``m`` even panels, each ``<= grid_step``) and the
    pieces are summed, so every output point carries fourth-order accuracy.
    ``t_start`` defaults to ``times[0]``.
    """
    times = np.asarray(times, dtype=float)
    _check_step(pulse, transition_freq, grid_step)
    if times.ndim != 1 or times.size == 0:
        raise ValueError("times must be a non-empty 1-d array")
    if np.any(np.diff(times) <= 0):
        raise ValueError("times must be strictly increasing")
    t0 = times[0] if t_start is None else t_start
    head = pulse_area(pulse, transition_freq, t0, times[0], grid_step)
    if times.size == 1:
        return np.array([head])
    gaps = np.diff(times)
    m = 2 * math.ceil(gaps.max() / (2 * grid_step))
    frac = np.linspace(0.0, 1.0, m + 1)
    nodes = times[:-1, None] + gaps[:, None] * frac[None, :]
    values = _integrand(pulse, transition_freq, nodes)
    pieces = (gaps / m) * (values @ _simpson_weights(m))
    out = np.empty(times.size, dtype=complex)
    out[0] = head
    out[1:] = head + np.cumsum(pieces)
    return out
