import math

import numpy as np
import pytest

from threelevel.propagator import IntegratorConfig
from threelevel.pulses import AtomSpec, CustomEnvelope, PulseSpec, TanhEnvelope
from threelevel.theorem import (
    FieldState,
    MediumSpec,
    area_theorem_pointcheck,
    collective_frequency,
    conservation_residual,
    conservation_residual_lambda,
    conservation_residual_v,
    solve_self_consistent,
)

UNIT = MediumSpec(1.0, 1.0)
SEED = FieldState(dtheta_s=0.1)
# sqrt(3 / (8 pi)), computed with mpmath.
SQRT_3_OVER_8PI = 0.34549414947133547927


def soliton_run(t0=-20.0, t1=8.0, n=28001):
    init = FieldState(2 * math.atan(math.exp(t0)), 0, 1 / math.cosh(t0), 0)
    return solve_self_consistent("V", UNIT, init, IntegratorConfig(1e-13, 1e-18), t0, t1, n)


class TestCollectiveFrequency:
    def test_unit(self):
        assert collective_frequency(8 * math.pi / 3, 1, 1, 1) == pytest.approx(1.0, rel=1e-15)

    def test_wavelength_scaling(self):
        assert collective_frequency(8 * math.pi / 3, 2, 1, 1) == pytest.approx(2.0, rel=1e-15)

    def test_all_ones(self):
        assert collective_frequency(1, 1, 1, 1) == pytest.approx(SQRT_3_OVER_8PI, rel=1e-15)

    @pytest.mark.parametrize("bad", [0.0, -1.0])
    def test_nonpositive(self, bad):
        with pytest.raises(ValueError):
            collective_frequency(1, bad, 1, 1)

    def test_medium_from_raw(self):
        m = MediumSpec.from_raw(8 * math.pi / 3, 1.0, 2.0, 1.0, 1.0)
        assert m.omega_a_coll == pytest.approx(1.0)
        assert m.omega_c_coll == pytest.approx(2.0)

    def test_medium_validation(self):
        with pytest.raises(ValueError):
            MediumSpec(0.0, 1.0)


class TestSolve:
    @pytest.mark.parametrize("scheme", ["V", "Lambda"])
    def test_zero_fixed_point(self, scheme):
        traj = solve_self_consistent(scheme, UNIT, FieldState(), n_outputs=101)
        assert not np.any(traj.areas)
        np.testing.assert_array_equal(traj.observables.rho_bb, 1.0)
        np.testing.assert_array_equal(conservation_residual(traj), 0.0)

    @pytest.mark.parametrize("scheme", ["V", "Lambda"])
    def test_unseeded_p_channel_stays_zero(self, scheme):
        traj = solve_self_consistent(scheme, UNIT, SEED)
        assert not np.any(traj.areas[:, 1])
        assert np.max(np.abs(traj.areas[:, 0])) > 1

    def test_initial_values_kept(self):
        init = FieldState(0.2j, 0.1, 0.05, -0.03j)
        traj = solve_self_consistent("V", UNIT, init, n_outputs=11)
        assert traj.field_state(0) == init

    def test_v_residual(self):
        traj = solve_self_consistent("V", UNIT, SEED)
        assert traj.times[0] == 0 and traj.times[-1] == 50
        assert conservation_residual_v(traj).max() <= 1e-6

    def test_lambda_residual(self):
        traj = solve_self_consistent("Lambda", UNIT, SEED)
        assert conservation_residual_lambda(traj).max() <= 1e-6

    def test_two_level_reduction(self):
        # With theta_p = 0 both laws collapse to |theta_s'|^2 - sin^2|theta_s|.
        for scheme in ("V", "Lambda"):
            traj = solve_self_consistent(scheme, UNIT, SEED)
            ts, dts = traj.areas[:, 0], traj.dareas[:, 0]
            mh = np.abs(dts) ** 2 - np.sin(np.abs(ts)) ** 2
            assert np.max(np.abs(mh - mh[0])) <= 1e-6
            np.testing.assert_allclose(
                conservation_residual_v(traj), conservation_residual_lambda(traj), atol=1e-14
            )

    def test_v_both_channels_seeded(self):
        medium = MediumSpec(1.0, 1.7)
        init = FieldState(dtheta_s=0.1, dtheta_p=0.05j)
        traj = solve_self_consistent("V", medium, init)
        assert conservation_residual(traj).max() <= 1e-6

    def test_soliton(self):
        # theta = 2 arctan(e^t) solves theta'' = sin(theta) cos(theta) with zero
        # energy. The separatrix is unstable, hence the very small abs_tol.
        traj = soliton_run()
        exact = 2 * np.arctan(np.exp(traj.times))
        np.testing.assert_allclose(traj.areas[:, 0].real, exact, atol=1e-6)
        assert np.max(np.abs(traj.areas[:, 0].imag)) == 0
        assert conservation_residual(traj).max() <= 1e-6

    def test_energy_budget(self):
        traj = solve_self_consistent("V", MediumSpec(1.0, 1.3), FieldState(dtheta_s=0.1, dtheta_p=0.07))
        e = (
            np.abs(traj.dareas[:, 0]) ** 2
            + np.abs(traj.dareas[:, 1]) ** 2 / 1.3**2
            + traj.observables.rho_bb
        )
        assert np.max(np.abs(e - e[0])) <= 1e-6

    def test_a_c_symmetry(self):
        a = solve_self_consistent("V", MediumSpec(1.0, 1.6), FieldState(dtheta_s=0.1, dtheta_p=0.02j))
        b = solve_self_consistent("V", MediumSpec(1.6, 1.0), FieldState(dtheta_s=0.02j, dtheta_p=0.1))
        np.testing.assert_allclose(a.areas, b.areas[:, ::-1], atol=1e-8)
        np.testing.assert_allclose(a.observables.rho_aa, b.observables.rho_cc, atol=1e-8)

    def test_derivation_chain(self):
        traj = solve_self_consistent(
            "V", UNIT, FieldState(dtheta_s=0.1, dtheta_p=0.05j), t_end=20.0, n_outputs=20001
        )
        obs = traj.observables
        dts, dtp = traj.dareas[:, 0], traj.dareas[:, 1]
        rho_bc = np.conj(obs.rho_cb)
        lhs = -1j * (np.conj(obs.rho_ab) * dts - obs.rho_ab * np.conj(dts)) - 1j * (
            rho_bc * dtp - np.conj(rho_bc) * np.conj(dtp)
        )
        assert np.max(np.abs(lhs.imag)) < 1e-12
        fd = np.gradient(obs.rho_bb, traj.times, edge_order=2)
        assert np.max(np.abs(lhs.real - fd)) <= 1e-5


class TestPointcheck:
    def test_zero_fields(self):
        off = PulseSpec(0.0, 3.0, TanhEnvelope(0, 10))
        diff = area_theorem_pointcheck("V", UNIT, off, off, AtomSpec("V", 12, 10), np.linspace(-5, 5, 11))
        np.testing.assert_array_equal(diff, 0.0)

    def test_fig2_not_self_consistent(self, fig2):
        atom, ps, pp = fig2
        diff = area_theorem_pointcheck("V", UNIT, ps, pp, atom, np.linspace(-15, 15, 301))
        assert np.max(np.abs(diff)) > 0.1

    def test_self_consistent_fields_refed(self):
        # The soliton field theta' is real, so an RWA carrier resonant with
        # w_ab and peak_rabi = 2 reproduces it exactly as Omega(t) e^{i w t}.
        # Its area at t = -20 is about 4e-9, so starting the quadrature from
        # zero there is harmless.
        traj = soliton_run()
        w = 0.5
        env = CustomEnvelope(traj.times, traj.dareas[:, 0].real)
        ps = PulseSpec(2.0, w, env, "rwa_exponential")
        pp = PulseSpec(0.0, w, env, "rwa_exponential")
        step = traj.times[1] - traj.times[0]
        diff = area_theorem_pointcheck("V", UNIT, ps, pp, AtomSpec("V", w, 0.3), traj.times, step)
        assert np.max(np.abs(diff)) <= 1e-6
