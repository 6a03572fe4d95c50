import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from threelevel.pulses import (
    AtomSpec,
    ComplexArea,
    CustomEnvelope,
    PulseSpec,
    ResolutionError,
    TanhEnvelope,
    area_on_grid,
    effective_area,
    envelope_eval,
    field_eval,
    max_grid_step,
    pulse_area,
)

# mpmath, 30 digits
TWO_TANH_1 = 1.5231883119115297762
TWO_TANH_10 = 1.9999999917553855272
FIG2_S_AREA = -0.015936435530048074679  # real part; imaginary part vanishes by symmetry


def box(t0=-1e3, t1=1e3):
    return CustomEnvelope([t0, t1], [1.0, 1.0])


class TestEnvelope:
    def test_tanh_peak(self):
        assert envelope_eval(TanhEnvelope(0, 10), 0.0) == pytest.approx(TWO_TANH_1, abs=1e-14)
        assert envelope_eval(TanhEnvelope(1, 10), 0.0) == pytest.approx(TWO_TANH_10, abs=1e-8)

    @pytest.mark.parametrize("t", [-1e6, 1e6])
    def test_tanh_saturates(self, t):
        assert abs(envelope_eval(TanhEnvelope(0, 10), t)) < 1e-12

    def test_tanh_nonnegative(self):
        t = np.linspace(-100, 100, 4001)
        for q in (-0.5, 0, 1, 2):
            assert np.all(envelope_eval(TanhEnvelope(q, 7.0), t) >= 0)

    def test_tanh_rejects_bad_width(self):
        with pytest.raises(ValueError):
            TanhEnvelope(0, 0.0)

    def test_custom_interpolates_and_vanishes_outside(self):
        env = CustomEnvelope([0.0, 1.0, 3.0], [0.0, 2.0, 1.0])
        assert envelope_eval(env, 0.5) == pytest.approx(1.0)
        assert envelope_eval(env, 2.0) == pytest.approx(1.5)
        assert envelope_eval(env, -0.1) == 0.0
        assert envelope_eval(env, 3.1) == 0.0

    def test_custom_requires_increasing_times(self):
        with pytest.raises(ValueError):
            CustomEnvelope([0.0, 0.0, 1.0], [1.0, 1.0, 1.0])


class TestField:
    def test_fig2_peak(self):
        pulse = PulseSpec(0.6, 3.0, TanhEnvelope(0, 10))
        value = field_eval(pulse, 0.0)
        assert value.imag == 0.0
        assert value.real == pytest.approx(0.91391298714691786574, abs=1e-14)

    def test_zero_field(self):
        pulse = PulseSpec(0.0, 3.0, TanhEnvelope(0, 10))
        assert np.all(field_eval(pulse, np.linspace(-20, 20, 11)) == 0)

    def test_rwa_half_amplitude(self):
        pulse = PulseSpec(1.0, 0.0, TanhEnvelope(1, 10), "rwa_exponential")
        assert field_eval(pulse, 0.0) == pytest.approx(0.5 * TWO_TANH_10, abs=1e-12)

    def test_rwa_phase(self):
        pulse = PulseSpec(2.0, 3.0, box(), "rwa_exponential")
        assert field_eval(pulse, 0.7) == pytest.approx(np.exp(-2.1j), abs=1e-15)

    def test_negative_inputs_rejected(self):
        with pytest.raises(ValueError):
            PulseSpec(-1.0, 1.0, box())
        with pytest.raises(ValueError):
            PulseSpec(1.0, -1.0, box())


class TestAtom:
    def test_lambda_ordering(self):
        assert AtomSpec("Lambda", 12.0, 10.0).omega_ac == 2.0
        with pytest.raises(ValueError):
            AtomSpec("Lambda", 10.0, 12.0)

    def test_probe_frequency(self):
        assert AtomSpec("V", 12.0, 10.0).probe_freq == 10.0
        assert AtomSpec("Lambda", 12.0, 10.0).probe_freq == 2.0

    def test_decay_validation(self):
        with pytest.raises(ValueError):
            AtomSpec("V", 1.0, 1.0, decay=(1.0, -1.0, 0.0))


class TestArea:
    def test_zero_field(self):
        pulse = PulseSpec(0.0, 3.0, TanhEnvelope(0, 10))
        assert pulse_area(pulse, 12.0, -15.0, 15.0, 0.01) == 0

    @pytest.mark.parametrize("duration", [0.3, 1.0, 7.25])
    def test_resonant_cw_rwa(self, duration):
        omega = 1.3
        pulse = PulseSpec(omega, 5.0, box(), "rwa_exponential")
        area = pulse_area(pulse, 5.0, 0.0, duration, 0.01)
        assert area == pytest.approx(omega * duration / 2, abs=1e-13)

    def test_fig2_against_adaptive_oracle(self):
        pulse = PulseSpec(0.6, 3.0, TanhEnvelope(0, 10))
        area = pulse_area(pulse, 12.0, -15.0, 15.0, 1e-3)
        assert abs(area - FIG2_S_AREA) <= 1e-8 * abs(FIG2_S_AREA)

    def test_fig2_oracle_is_independent(self):
        # The frozen constant comes from mpmath tanh-sinh quadrature.
        mpmath.mp.dps = 20
        f = lambda t: 0.6 * (mpmath.tanh((t + 10) / 10) - mpmath.tanh((t - 10) / 10)) * mpmath.cos(3 * t) * mpmath.cos(12 * t)
        assert float(mpmath.quad(f, mpmath.linspace(-15, 15, 61))) == pytest.approx(FIG2_S_AREA, rel=1e-12)

    def test_rejects_aliasing_step(self):
        pulse = PulseSpec(0.6, 3.0, TanhEnvelope(0, 10))
        limit = max_grid_step(pulse, 12.0)
        assert limit == pytest.approx(2 * math.pi / (20 * 15))
        with pytest.raises(ResolutionError):
            pulse_area(pulse, 12.0, -15.0, 15.0, 1.01 * limit)

    def test_rejects_reversed_interval(self):
        pulse = PulseSpec(0.6, 3.0, TanhEnvelope(0, 10))
        with pytest.raises(ValueError):
            pulse_area(pulse, 12.0, 1.0, 0.0, 0.01)

    def test_fourth_order_convergence(self):
        pulse = PulseSpec(0.6, 3.0, TanhEnvelope(0, 10))
        errors = [abs(pulse_area(pulse, 12.0, -15.0, 15.0, h) - FIG2_S_AREA) for h in (0.02, 0.01, 0.005)]
        assert errors[0] / errors[1] >= 8
        assert errors[1] / errors[2] >= 8

    def test_grid_matches_pointwise(self, fig2):
        atom, ps, _ = fig2
        times = np.linspace(-15, 15, 301)
        grid = area_on_grid(ps, atom.omega_ab, times, 0.005, t_start=-15.0)
        # Different panel layouts, both O(h^4) with h = 0.005: agree to ~1e-9.
        for i in (0, 1, 57, 150, 300):
            assert grid[i] == pytest.approx(pulse_area(ps, atom.omega_ab, -15.0, times[i], 0.005), abs=5e-9)

    def test_grid_continuity_bound(self, fig2):
        atom, ps, _ = fig2
        times = np.linspace(-15, 15, 3001)
        grid = area_on_grid(ps, atom.omega_ab, times, 0.005)
        h = times[1] - times[0]
        bound = h * np.abs(field_eval(ps, np.linspace(-15, 15, 30001))).max()
        assert np.all(np.abs(np.diff(grid)) <= bound * (1 + 1e-6))

    def test_grid_cw_rwa(self):
        pulse = PulseSpec(0.8, 4.0, box(), "rwa_exponential")
        times = np.linspace(0.0, 10.0, 51)
        grid = area_on_grid(pulse, 4.0, times, 0.01)
        np.testing.assert_allclose(grid, 0.4 * times, atol=1e-12)


class TestEffectiveArea:
    @pytest.mark.parametrize(
        "ts,tp,expected", [(3, 4, 5.0), (0, 0, 0.0), (1j, 1, math.sqrt(2))]
    )
    def test_values(self, ts, tp, expected):
        assert effective_area(ts, tp) == pytest.approx(expected, abs=1e-15)

    def test_complex_area_recomputes(self):
        area = ComplexArea(3j, -4)
        assert area.theta_eff == pytest.approx(5.0)

    @settings(max_examples=200, deadline=None)
    @given(
        st.complex_numbers(max_magnitude=1e3, allow_nan=False, allow_infinity=False),
        st.complex_numbers(max_magnitude=1e3, allow_nan=False, allow_infinity=False),
        st.floats(-math.pi, math.pi),
        st.floats(-math.pi, math.pi),
    )
    def test_phase_invariance(self, ts, tp, phi, chi):
        base = effective_area(ts, tp)
        rotated = effective_area(ts * complex(math.cos(phi), math.sin(phi)), tp * complex(math.cos(chi), math.sin(chi)))
        assert rotated == pytest.approx(base, rel=1e-12, abs=1e-300)
