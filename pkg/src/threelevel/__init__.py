"""Driven three-level V and Lambda atoms beyond the rotating wave approximation.

``analytic`` holds the first-order Magnus states, ``propagator`` the exact
numerical reference, ``theorem`` the thin-medium pulse area theorem and
``harness`` the scenario files, reports and CLI.
"""

from .analytic import (
    DensityObservables,
    StateVector,
    density_from_state,
    magnus2_norm,
    rwa_state_lambda,
    rwa_state_v,
    state_lambda,
    state_v,
)
from .propagator import IntegratorConfig, analytic_trajectory, hamiltonian, integrate, integrate_with_decay
from .pulses import (
    AtomSpec,
    CarrierMode,
    ComplexArea,
    CustomEnvelope,
    PulseSpec,
    Scheme,
    TanhEnvelope,
    effective_area,
    envelope_eval,
    field_eval,
    pulse_area,
)
from .trajectory import Trajectory

__version__ = "0.1.0"
