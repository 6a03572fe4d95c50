"""Scenario documents: INI-style sections parsed with :mod:`configparser`.

Schema (``?`` marks optional keys, defaults in brackets)::

    [atom]       scheme (V | Lambda), omega_ab, omega_cb,
                 gamma_a? gamma_b? gamma_c? [no decay unless one is given; missing rates 0]
    [pulse_s]    peak_rabi, carrier_freq, q, tau_p,
                 carrier_mode? [real_cosine | rwa_exponential]
    [pulse_p]    same keys as pulse_s
    [time]?      t_start? [-1.5 tau_p], t_end? [+1.5 tau_p], n_outputs? [2000]
                 (tau_p is the larger of the two pulses')
    [integrator]? rel_tol? [1e-10], abs_tol? [1e-10],
                 max_step? [phase limit], initial_step? [automatic]
    [medium]?    omega_a_coll, omega_c_coll (required for theorem mode)
    [seed]?      theta_s? theta_p? dtheta_s? dtheta_p? [0, 0, 0.1, 0]
                 complex values in Python syntax, e.g. ``0.1+0.2j``

Theorem runs use ``[time]`` too, with defaults ``t_start = 0`` and
``t_end = 50`` when the section does not set them.
"""

from __future__ import annotations

import configparser
import enum
import math
from dataclasses import dataclass, field, replace
from typing import Any

from ..propagator import DEFAULT_N_OUTPUTS, IntegratorConfig
from ..pulses import AtomSpec, CarrierMode, PulseSpec, Scheme, TanhEnvelope
from ..theorem import FieldState, MediumSpec

__all__ = [
    "Mode",
    "Scenario",
    "ScenarioError",
    "load_scenario",
    "parse_scenario",
    "scenario_from_dict",
]

THEOREM_WINDOW = (0.0, 50.0)
DEFAULT_SEED = {"theta_s": 0j, "theta_p": 0j, "dtheta_s": 0.1 + 0j, "dtheta_p": 0j}

_REQUIRED = {
    "atom": ("scheme", "omega_ab", "omega_cb"),
    "pulse_s": ("peak_rabi", "carrier_freq", "q", "tau_p"),
    "pulse_p": ("peak_rabi", "carrier_freq", "q", "tau_p"),
    "medium": ("omega_a_coll", "omega_c_coll"),
}
_OPTIONAL = {
    "atom": ("gamma_a", "gamma_b", "gamma_c"),
    "pulse_s": ("carrier_mode",),
    "pulse_p": ("carrier_mode",),
    "time": ("t_start", "t_end", "n_outputs"),
    "integrator": ("rel_tol", "abs_tol", "max_step", "initial_step"),
    "medium": (),
    "seed": tuple(DEFAULT_SEED),
}
_SECTIONS = ("atom", "pulse_s", "pulse_p", "time", "integrator", "medium", "seed")


class ScenarioError(ValueError):
    """Malformed or invalid scenario document."""


class Mode(str, enum.Enum):
    ANALYTIC = "analytic"
    NUMERIC = "numeric"
    BOTH = "both"
    THEOREM = "theorem"


@dataclass(frozen=True)
class Scenario:
    atom: AtomSpec
    pulse_s: PulseSpec
    pulse_p: PulseSpec
    t_start: float | None = None
    t_end: float | None = None
    n_outputs: int = DEFAULT_N_OUTPUTS
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)
    mode: Mode = Mode.BOTH
    medium: MediumSpec | None = None
    seed: FieldState = field(default_factory=lambda: FieldState(**DEFAULT_SEED))

    def __post_init__(self) -> None:
        object.__setattr__(self, "mode", Mode(self.mode))
        for mode in (Mode.BOTH, Mode.THEOREM):
            t0, t1 = self.window(mode)
            if not t1 > t0:
                raise ScenarioError(f"time.t_end={t1} must exceed time.t_start={t0}")
        if self.n_outputs < 2:
            raise ScenarioError("time.n_outputs must be >= 2")
        if self.mode is Mode.THEOREM and self.medium is None:
            raise ScenarioError("theorem mode requires a [medium] section")

    def window(self, mode: Mode | str | None = None) -> tuple[float, float]:
        """Effective ``(t_start, t_end)``; unset ends take the mode's default."""
        mode = self.mode if mode is None else Mode(mode)
        if mode is Mode.THEOREM:
            default = THEOREM_WINDOW
        else:
            tau = max(self.pulse_s.envelope.tau_p, self.pulse_p.envelope.tau_p)
            default = (-1.5 * tau, 1.5 * tau)
        return (
            default[0] if self.t_start is None else self.t_start,
            default[1] if self.t_end is None else self.t_end,
        )

    def with_mode(self, mode: Mode | str) -> "Scenario":
        return replace(self, mode=Mode(mode))

    def small_parameters(self) -> tuple[float, float]:
        """Peak Rabi frequency over |w - nu| for the s and p channels."""
        return (
            _ratio(self.pulse_s.peak_rabi, self.atom.omega_ab - self.pulse_s.carrier_freq),
            _ratio(self.pulse_p.peak_rabi, self.atom.probe_freq - self.pulse_p.carrier_freq),
        )

    def to_dict(self, resolve_defaults: bool = True) -> dict[str, dict[str, Any]]:
        """Every schema field with its effective value.

        With ``resolve_defaults=False`` an unset time window stays ``None`` so
        that edited copies recompute it (used by sweeps over ``tau_p``).
        """
        atom: dict[str, Any] = {
            "scheme": self.atom.scheme.value,
            "omega_ab": self.atom.omega_ab,
            "omega_cb": self.atom.omega_cb,
        }
        if self.atom.decay is not None:
            atom.update(zip(("gamma_a", "gamma_b", "gamma_c"), self.atom.decay))
        out: dict[str, dict[str, Any]] = {
            "atom": atom,
            "pulse_s": _pulse_dict(self.pulse_s),
            "pulse_p": _pulse_dict(self.pulse_p),
            "time": dict(
                zip(
                    ("t_start", "t_end"),
                    self.window() if resolve_defaults else (self.t_start, self.t_end),
                ),
                n_outputs=self.n_outputs,
            ),
            "integrator": {
                "rel_tol": self.integrator.rel_tol,
                "abs_tol": self.integrator.abs_tol,
                "max_step": self.integrator.max_step,
                "initial_step": self.integrator.initial_step,
            },
            "seed": {k: _complex_str(getattr(self.seed, k)) for k in DEFAULT_SEED},
            "mode": {"mode": self.mode.value},
        }
        if self.medium is not None:
            out["medium"] = {
                "omega_a_coll": self.medium.omega_a_coll,
                "omega_c_coll": self.medium.omega_c_coll,
            }
        return out


def _ratio(num: float, den: float) -> float:
    return math.inf if den == 0 else num / abs(den)


def _pulse_dict(p: PulseSpec) -> dict[str, Any]:
    return {
        "peak_rabi": p.peak_rabi,
        "carrier_freq": p.carrier_freq,
        "q": p.envelope.q,
        "tau_p": p.envelope.tau_p,
        "carrier_mode": p.carrier_mode.value,
    }


def _complex_str(z: complex) -> str:
    return repr(complex(z)) if z.imag else repr(z.real)


def _number(section: str, key: str, raw: Any) -> float:
    try:
        value = float(raw)
    except (TypeError, ValueError):
        raise ScenarioError(f"{section}.{key}: expected a number, got {raw!r}") from None
    if not math.isfinite(value):
        raise ScenarioError(f"{section}.{key}: must be finite, got {raw!r}")
    return value


def _integer(section: str, key: str, raw: Any) -> int:
    value = _number(section, key, raw)
    if value != int(value):
        raise ScenarioError(f"{section}.{key}: expected an integer, got {raw!r}")
    return int(value)


def _complex(section: str, key: str, raw: Any) -> complex:
    try:
        return complex(str(raw).replace(" ", ""))
    except ValueError:
        raise ScenarioError(f"{section}.{key}: expected a complex number, got {raw!r}") from None


def _check_keys(data: dict[str, dict[str, Any]]) -> None:
    for section, values in data.items():
        if section == "mode":
            continue
        if section not in _SECTIONS:
            raise ScenarioError(f"unknown section [{section}]")
        allowed = set(_REQUIRED.get(section, ())) | set(_OPTIONAL.get(section, ()))
        for key in values:
            if key not in allowed:
                raise ScenarioError(f"unknown key {section}.{key}")
    for section in ("atom", "pulse_s", "pulse_p"):
        if section not in data:
            raise ScenarioError(f"missing section [{section}]")
    for section, keys in _REQUIRED.items():
        if section not in data:
            continue
        for key in keys:
            if data[section].get(key) is None:
                raise ScenarioError(f"missing required field {section}.{key}")


def _build(section: str, factory, *args, **kwargs):
    try:
        return factory(*args, **kwargs)
    except ScenarioError:
        raise
    except ValueError as exc:
        raise ScenarioError(f"{section}: {exc}") from None


def scenario_from_dict(data: dict[str, dict[str, Any]]) -> Scenario:
    """Validate a nested ``{section: {key: value}}`` mapping into a Scenario."""
    _check_keys(data)
    a = data["atom"]
    rates = [a.get(k) for k in ("gamma_a", "gamma_b", "gamma_c")]
    decay = None
    if any(r is not None for r in rates):
        decay = tuple(
            0.0 if r is None else _number("atom", k, r)
            for k, r in zip(("gamma_a", "gamma_b", "gamma_c"), rates)
        )
    atom = _build(
        "atom",
        AtomSpec,
        str(a["scheme"]).strip() if str(a["scheme"]).strip() != "Λ" else "Lambda",
        _number("atom", "omega_ab", a["omega_ab"]),
        _number("atom", "omega_cb", a["omega_cb"]),
        decay,
    )
    pulses = []
    for name in ("pulse_s", "pulse_p"):
        p = data[name]
        envelope = _build(
            name, TanhEnvelope, _number(name, "q", p["q"]), _number(name, "tau_p", p["tau_p"])
        )
        pulses.append(
            _build(
                name,
                PulseSpec,
                _number(name, "peak_rabi", p["peak_rabi"]),
                _number(name, "carrier_freq", p["carrier_freq"]),
                envelope,
                _build(name, CarrierMode, str(p.get("carrier_mode") or "real_cosine").strip()),
            )
        )

    def opt(section, key, default, conv=_number):
        raw = data.get(section, {}).get(key)
        return default if raw is None else conv(section, key, raw)

    integrator = _build(
        "integrator",
        IntegratorConfig,
        opt("integrator", "rel_tol", 1e-10),
        opt("integrator", "abs_tol", 1e-10),
        opt("integrator", "max_step", None),
        opt("integrator", "initial_step", None),
    )
    medium = None
    if "medium" in data:
        m = data["medium"]
        medium = _build(
            "medium",
            MediumSpec,
            _number("medium", "omega_a_coll", m["omega_a_coll"]),
            _number("medium", "omega_c_coll", m["omega_c_coll"]),
        )
    seed = _build(
        "seed",
        FieldState,
        **{k: opt("seed", k, v, _complex) for k, v in DEFAULT_SEED.items()},
    )
    mode = data.get("mode", {}).get("mode", Mode.BOTH)
    return _build(
        "scenario",
        Scenario,
        atom,
        pulses[0],
        pulses[1],
        opt("time", "t_start", None),
        opt("time", "t_end", None),
        opt("time", "n_outputs", DEFAULT_N_OUTPUTS, _integer),
        integrator,
        _build("mode", Mode, mode),
        medium,
        seed,
    )


def parse_scenario(text: str) -> Scenario:
    """Parse a scenario document; errors name the line or the field."""
    parser = configparser.ConfigParser(
        interpolation=None, inline_comment_prefixes=("#", ";"), default_section="__unused__"
    )
    parser.optionxform = str  # keep key case
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ScenarioError(f"parse error: {exc}") from None
    data = {section: dict(parser.items(section)) for section in parser.sections()}
    if "mode" in data:
        raise ScenarioError("unknown section [mode]; select the mode on the command line")
    return scenario_from_dict(data)


def load_scenario(path) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        return parse_scenario(fh.read())
