import numpy as np
import pytest
from hypothesis import given, strategies as st

from torusgeo.extension import MagneticField, k_map
from torusgeo.flow import (
    BlowUpError,
    FlowState,
    SimConfig,
    energy,
    energy_rate,
    implied_pressure_gradient,
    integrate,
    rhs,
    rhs_central,
    rhs_charged,
    rhs_euler,
    rhs_superconductivity,
    rk4_step,
)
from torusgeo.random_fields import random_magnetic_field, random_scalar_field, random_single_pair, random_vector_field
from torusgeo.spectral import FourierScalarField, FourierVectorField, fields_close, gradient_project, leray_project

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def vf(rng, n=3, max_mode=2):
    return random_vector_field(rng, 3, n, max_mode)


def mag(rng):
    return MagneticField(random_magnetic_field(rng))


def random_state(rng, model):
    u = vf(rng)
    if model == "central":
        return FlowState(model, u, a=float(rng.uniform(-2, 2)))
    if model == "charged":
        return FlowState(model, u, rho=random_scalar_field(rng, 3, 3, 2))
    return FlowState(model, u)


class TestRightHandSides:
    def test_euler_single_mode_steady(self, rng):
        assert rhs_euler(random_single_pair(rng, 3, 3)).max_abs() < 1e-14

    def test_euler_zero(self):
        assert len(rhs_euler(FourierVectorField.zero(3))) == 0

    def test_supercond_zero_field(self, rng):
        u = vf(rng)
        assert fields_close(rhs_superconductivity(u, MagneticField.zero()), rhs_euler(u), rtol=0, atol=0)

    def test_central_charge_zero(self, rng):
        u = vf(rng)
        du, da = rhs_central(u, 0.0, mag(rng))
        assert fields_close(du, rhs_euler(u), rtol=1e-14) and da == 0.0

    def test_central_unit_charge_is_supercond(self, rng):
        u, B = vf(rng), mag(rng)
        du, _ = rhs_central(u, 1.0, B)
        assert fields_close(du, rhs_superconductivity(u, B), rtol=0, atol=0)

    def test_central_linear_in_charge(self, rng):
        u, B = vf(rng), mag(rng)
        d1, _ = rhs_central(u, 1.0, B)
        d2, _ = rhs_central(u, 2.0, B)
        assert fields_close(d1 - d2, k_map(u, B), rtol=1e-12, atol=1e-13)

    def test_charged_unit_density(self, rng):
        u, B = vf(rng), mag(rng)
        du, drho = rhs_charged(u, FourierScalarField.constant(1.0, 3), B)
        assert len(drho) == 0
        assert fields_close(du, rhs_superconductivity(u, B), rtol=1e-12)

    def test_charged_zero_density(self, rng):
        u = vf(rng)
        du, drho = rhs_charged(u, FourierScalarField.zero(3), mag(rng))
        assert fields_close(du, rhs_euler(u), rtol=1e-14) and len(drho) == 0

    @pytest.mark.parametrize("c", [0.0, 0.5, 3.0])
    def test_constant_density_matches_central(self, rng, c):
        u, B = vf(rng), mag(rng)
        du, _ = rhs_charged(u, FourierScalarField.constant(c, 3), B)
        dc, _ = rhs_central(u, c, B)
        assert fields_close(du, dc, rtol=1e-12, atol=1e-14)

    def test_missing_field(self, rng):
        with pytest.raises(ValueError):
            rhs(FlowState("supercond", vf(rng)))

    def test_unknown_model(self, rng):
        with pytest.raises(ValueError):
            FlowState("mhd", vf(rng))

    @pytest.mark.parametrize("model", ["euler", "supercond", "central", "charged"])
    @given(seed=seeds)
    def test_energy_rate_vanishes(self, model, seed):
        rng = np.random.default_rng(seed)
        s = random_state(rng, model)
        scale = max(1.0, energy(s)) * max(1.0, s.max_abs())
        assert abs(energy_rate(s, mag(rng))) <= 1e-10 * scale

    @pytest.mark.parametrize("model", ["euler", "supercond", "central", "charged"])
    def test_rhs_divergence_free_and_real(self, rng, model):
        d = rhs(random_state(rng, model), mag(rng))
        assert d.u.is_divergence_free() and d.u.is_real()

    def test_pressure_is_gradient(self, rng):
        s, B = random_state(rng, "charged"), mag(rng)
        gp = implied_pressure_gradient(s, B)
        assert leray_project(gp).max_abs() < 1e-12
        assert fields_close(gradient_project(gp), gp, rtol=1e-12, atol=1e-14)


class TestStepping:
    def test_dt_zero_identity(self, rng):
        s = random_state(rng, "supercond")
        assert rk4_step(s, 0.0, mag(rng)) is s

    def test_steady_mode(self, rng):
        s = FlowState("euler", random_single_pair(rng, 3, 2))
        out = s
        for _ in range(50):
            out = rk4_step(out, 1e-2)
        assert fields_close(out.u, s.u, rtol=0, atol=1e-15)

    def test_fourth_order(self):
        """Halving dt shrinks the one-interval error by about 16."""
        rng = np.random.default_rng(5)
        s = FlowState("central", random_vector_field(rng, 3, 2, 1), a=0.7)
        B = MagneticField.constant([0.3, -0.2, 0.5])

        def run(n):
            out = s
            for _ in range(n):
                out = rk4_step(out, 0.4 / n, B, truncation_radius=2)
            return out.u

        ref = run(32)
        ratio = (run(4) - ref).max_abs() / (run(8) - ref).max_abs()
        assert 12 < ratio < 20

    def test_truncation_and_invariants(self, rng):
        s, B = random_state(rng, "charged"), mag(rng)
        out = rk4_step(s, 1e-2, B, truncation_radius=2)
        assert out.max_mode() <= 2
        assert out.u.is_divergence_free() and out.u.is_real() and out.rho.is_real()
        assert out.rho.mean() == pytest.approx(s.rho.mean(), abs=1e-14)

    def test_central_charge_constant(self, rng):
        s, B = random_state(rng, "central"), mag(rng)
        assert rk4_step(s, 1e-2, B, truncation_radius=3).a == s.a

    def test_blow_up(self):
        rng = np.random.default_rng(2)
        s = FlowState("euler", 1e5 * random_vector_field(rng, 3, 3, 1))
        with pytest.raises(BlowUpError) as exc:
            integrate(s, SimConfig(dt=1.0, t_end=20.0, truncation_radius=2))
        assert exc.value.time > 0

    def test_initial_state_outside_cube(self, rng):
        with pytest.raises(ValueError):
            integrate(FlowState("euler", single_mode()), SimConfig(dt=0.1, t_end=0.1, truncation_radius=1))


def single_mode():
    return FourierVectorField.from_modes(3, {(0, 0, 3): [1.0, 0, 0]}, complete_conjugates=True)


class TestIntegrate:
    def test_steady_energy(self, rng):
        s = FlowState("euler", random_single_pair(rng, 3, 2))
        traj = integrate(s, SimConfig(dt=1e-2, t_end=1.0, truncation_radius=2, record_every=10))
        assert len(traj.samples) == 11
        assert traj.relative_energy_drift() <= 1e-13

    def test_charged_unit_density(self, rng):
        s = FlowState("charged", vf(rng), rho=FourierScalarField.constant(1.0, 3))
        traj = integrate(s, SimConfig(dt=1e-2, t_end=0.5, truncation_radius=2), mag(rng))
        assert traj.rho_deviation <= 1e-12
        assert all(sm.rho_mean == 1.0 for sm in traj.samples)

    def test_csv(self, rng):
        s = FlowState("supercond", vf(rng))
        traj = integrate(s, SimConfig(dt=1e-2, t_end=0.05, truncation_radius=2), mag(rng))
        lines = traj.to_csv().splitlines()
        assert lines[0] == "t,energy,energy_u,energy_aux,rho_mean,max_mode"
        assert len(lines) == 7

    def test_config_validation(self):
        with pytest.raises(ValueError):
            SimConfig(dt=0, t_end=1, truncation_radius=2)
        with pytest.raises(ValueError):
            SimConfig(dt=0.1, t_end=1, truncation_radius=2, record_every=0)
