import numpy as np
import pytest

from threelevel.pulses import AtomSpec, PulseSpec, TanhEnvelope


def fig_pulses(q=0.0, mode="real_cosine"):
    env = TanhEnvelope(q, 10.0)
    return PulseSpec(0.6, 3.0, env, mode), PulseSpec(0.5, 2.0, env, mode)


@pytest.fixture
def fig2():
    ps, pp = fig_pulses(0.0)
    return AtomSpec("V", 12.0, 10.0), ps, pp


@pytest.fixture
def fig3():
    ps, pp = fig_pulses(1.0)
    return AtomSpec("V", 12.0, 10.0), ps, pp


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)
