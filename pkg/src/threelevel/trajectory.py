from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .analytic import DensityObservables, StateVector, density_from_state
from .pulses import effective_area

__all__ = ["Trajectory"]


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Sampled run on a strictly increasing time grid.

    ``states`` has shape ``(N, 3)`` in the order ``(a, b, c)``. ``fields``,
    ``envelopes`` and ``areas`` have shape ``(N, 2)`` for the s and p
    channels. ``dareas`` holds the area time-derivatives of self-consistent
    runs and is ``None`` otherwise.
    """

    times: np.ndarray
    states: np.ndarray
    fields: np.ndarray
    envelopes: np.ndarray
    areas: np.ndarray
    dareas: np.ndarray | None = None

    def __post_init__(self) -> None:
        n = np.shape(self.times)[0]
        for name in ("states", "fields", "envelopes", "areas", "dareas"):
            arr = getattr(self, name)
            if arr is not None and np.shape(arr)[0] != n:
                raise ValueError(f"{name} has {np.shape(arr)[0]} rows, expected {n}")
        if n > 1 and np.any(np.diff(self.times) <= 0):
            raise ValueError("trajectory times must be strictly increasing")

    def __len__(self) -> int:
        return len(self.times)

    @property
    def state(self) -> StateVector:
        return StateVector.from_array(self.states)

    @property
    def observables(self) -> DensityObservables:
        return density_from_state(self.state)

    @property
    def theta_eff(self) -> np.ndarray:
        return effective_area(self.areas[:, 0], self.areas[:, 1])

    @property
    def norm_sq(self) -> np.ndarray:
        return np.sum(np.abs(self.states) ** 2, axis=1)

    @classmethod
    def empty(cls) -> "Trajectory":
        z = np.zeros((0, 2), dtype=complex)
        return cls(np.zeros(0), np.zeros((0, 3), dtype=complex), z, np.zeros((0, 2)), z)
