import numpy as np
import pytest
from hypothesis import given, strategies as st

from torusgeo.curvature import (
    CENTRAL_THRESHOLD,
    GAUGE_THRESHOLD,
    DegeneratePlaneError,
    curvature_central,
    curvature_diffvol,
    curvature_gauge,
    curvature_gauge_full,
    curvature_general,
    levi_civita_at_identity,
    prop6_closed_form,
    prop6_numeric,
    sign_changes,
    sweep,
    sweep_to_csv,
)
from torusgeo.extension import CentralElement, GaugeElement, MagneticField, eta_norm_sq, lichnerowicz_omega
from torusgeo.random_fields import (
    random_magnetic_field,
    random_scalar_field,
    random_single_pair,
    random_vector_field,
)
from torusgeo.spectral import (
    TWO_PI,
    FourierScalarField,
    FourierVectorField,
    covariant_derivative,
    gradient_project,
    l2_norm_sq,
    stream_function_field,
)

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def vf(rng, n=4, dim=3):
    return random_vector_field(rng, dim, n, 3)


def close(a, b, rtol=1e-10):
    return abs(a - b) <= rtol * max(1.0, abs(a), abs(b))


class TestGeneralAndDiffvol:
    def test_degenerate(self, rng):
        x = vf(rng)
        with pytest.raises(DegeneratePlaneError):
            curvature_general(x, x)
        with pytest.raises(DegeneratePlaneError):
            curvature_diffvol(x, 2.0 * x)

    def test_constant_fields_flat(self):
        x, y = FourierVectorField.constant([1.0, 0, 0]), FourierVectorField.constant([0, 1.0, 0.5])
        assert curvature_general(x, y).unnormalized == 0
        assert curvature_diffvol(x, y).unnormalized == 0

    @given(seeds)
    def test_oracle_equivalence(self, seed):
        rng = np.random.default_rng(seed)
        x, y = vf(rng, 3), vf(rng, 3)
        g, d = curvature_general(x, y), curvature_diffvol(x, y)
        assert close(g.unnormalized, d.unnormalized)
        assert g.gram == pytest.approx(d.gram, rel=1e-14)

    def test_two_torus_equivalence(self, rng):
        x, y = vf(rng, 4, 2), vf(rng, 4, 2)
        assert close(curvature_general(x, y).unnormalized, curvature_diffvol(x, y).unnormalized)

    @given(seeds)
    def test_swap_and_scale(self, seed):
        rng = np.random.default_rng(seed)
        x, y = vf(rng), vf(rng)
        s, t = rng.uniform(0.2, 3, size=2)
        r = curvature_diffvol(x, y).unnormalized
        assert close(curvature_diffvol(y, x).unnormalized, r)
        assert close(curvature_diffvol(s * x, t * y).unnormalized, s * s * t * t * r)

    @given(seeds)
    def test_sectional_basis_invariant(self, seed):
        rng = np.random.default_rng(seed)
        x, y = vf(rng), vf(rng)
        m = rng.normal(size=(2, 2))
        if abs(np.linalg.det(m)) < 0.1:
            m += np.eye(2)
        x2, y2 = m[0, 0] * x + m[0, 1] * y, m[1, 0] * x + m[1, 1] * y
        assert close(curvature_diffvol(x2, y2).sectional, curvature_diffvol(x, y).sectional)

    @given(seeds)
    def test_arnold_non_positivity(self, seed):
        rng = np.random.default_rng(seed)
        u, x = random_single_pair(rng, 3, 3), vf(rng)
        expected = -l2_norm_sq(gradient_project(covariant_derivative(u, x)))
        value = curvature_diffvol(u, x).unnormalized
        assert abs(value - expected) <= 1e-12 * max(1.0, abs(expected))
        assert value <= 0

    @given(seeds, st.integers(1, 3), st.integers(-3, 3))
    def test_two_torus_stream_function_planes(self, seed, k1, k2):
        rng = np.random.default_rng(seed)
        xk = stream_function_field((k1, k2), 1.0)
        y = vf(rng, 4, 2)
        assert curvature_diffvol(xk, y).unnormalized <= 1e-12
        assert curvature_general(xk, y).unnormalized <= 1e-12


class TestLeviCivita:
    def test_single_mode_steady(self, rng):
        u = random_single_pair(rng, 3, 2)
        assert levi_civita_at_identity(u, u).max_abs() < 1e-14

    def test_constant(self):
        x, y = FourierVectorField.constant([1.0, 2, 3]), FourierVectorField.constant([0.0, 1, 0])
        assert levi_civita_at_identity(x, y).max_abs() == 0


class TestExtensions:
    @given(seeds)
    def test_central_matches_generic(self, seed):
        rng = np.random.default_rng(seed)
        B = MagneticField(random_magnetic_field(rng))
        x1, x2 = vf(rng, 3), vf(rng, 3)
        a1, a2 = rng.uniform(-1, 1, size=2)
        c = curvature_central(x1, a1, x2, a2, B)
        g = curvature_general(CentralElement(x1, a1), CentralElement(x2, a2), B)
        assert close(c.unnormalized, g.unnormalized)
        assert c.gram == pytest.approx(g.gram, rel=1e-12)

    @given(seeds)
    def test_gauge_full_matches_generic(self, seed):
        rng = np.random.default_rng(seed)
        B = MagneticField(random_magnetic_field(rng))
        x1, x2 = vf(rng, 3), vf(rng, 3)
        f1, f2 = random_scalar_field(rng, 3, 3, 2), random_scalar_field(rng, 3, 3, 2)
        full = curvature_gauge_full(x1, f1, x2, f2, B)
        g = curvature_general(GaugeElement(x1, f1), GaugeElement(x2, f2), B)
        assert close(full.unnormalized, g.unnormalized)

    def test_central_zero_charges(self, rng):
        B = MagneticField(random_magnetic_field(rng))
        x1, x2 = vf(rng), vf(rng)
        rep = curvature_central(x1, 0.0, x2, 0.0, B)
        expected = curvature_diffvol(x1, x2).unnormalized - 0.75 * lichnerowicz_omega(x1, x2, B) ** 2
        assert close(rep.unnormalized, expected)
        assert rep.terms["k"] == rep.terms["nabla_1"] == rep.terms["nabla_2"] == 0.0

    def test_zero_field_reduces_to_diffvol(self, rng):
        x1, x2 = vf(rng), vf(rng)
        a1, a2 = 0.4, -1.2
        B = MagneticField.zero()
        c = curvature_central(x1, a1, x2, a2, B)
        g = curvature_gauge(x1, a1, x2, a2, B)
        assert c.unnormalized == pytest.approx(curvature_diffvol(x1, x2).unnormalized, rel=1e-14)
        assert g.unnormalized == c.unnormalized

    def test_central_and_gauge_differ_only_in_cocycle_term(self, rng):
        B = MagneticField.constant(rng.normal(size=3))
        x1, x2 = vf(rng), vf(rng)
        c = curvature_central(x1, 0.3, x2, 0.8, B)
        g = curvature_gauge(x1, 0.3, x2, 0.8, B)
        for key in ("base", "k", "nabla_1", "nabla_2"):
            assert c.terms[key] == g.terms[key]
        diff = c.unnormalized - g.unnormalized
        expected = 0.75 * (eta_norm_sq(x1, x2, B) - lichnerowicz_omega(x1, x2, B) ** 2)
        assert diff == pytest.approx(expected, rel=1e-10)

    def test_gauge_full_constant_fibres(self, rng):
        B = MagneticField(random_magnetic_field(rng))
        x1, x2 = vf(rng), vf(rng)
        full = curvature_gauge_full(x1, FourierScalarField.constant(0.7, 3), x2, FourierScalarField.constant(-0.2, 3), B)
        assert close(full.unnormalized, curvature_gauge(x1, 0.7, x2, -0.2, B).unnormalized, 1e-12)

    def test_gauge_full_zero_field(self, rng):
        x1, x2 = vf(rng), vf(rng)
        f1, f2 = random_scalar_field(rng, 3, 3, 2), random_scalar_field(rng, 3, 3, 2)
        full = curvature_gauge_full(x1, f1, x2, f2, MagneticField.zero())
        assert full.unnormalized == pytest.approx(curvature_diffvol(x1, x2).unnormalized, rel=1e-14)

    def test_gauge_full_flat_fibres(self, rng):
        z = FourierVectorField.zero(3)
        f1, f2 = random_scalar_field(rng, 3, 3, 2), random_scalar_field(rng, 3, 3, 2)
        rep = curvature_gauge_full(z, f1, z, f2, MagneticField(random_magnetic_field(rng)))
        assert rep.unnormalized == 0

    def test_omega_fourier_identity(self):
        # Squared cocycle via the explicit triple sum over zero-sum index triples.
        rng = np.random.default_rng(3)
        Bf = random_magnetic_field(rng)
        x, y = vf(rng, 3), vf(rng, 3)
        total = 0.0
        for kb, bk in Bf.as_dict().items():
            for kx, xl in x.as_dict().items():
                km = tuple(-(a + b) for a, b in zip(kb, kx))
                ym = y.coeff(km)
                total += np.linalg.det(np.array([bk, xl, ym]))
        expected = (TWO_PI**3 * total) ** 2
        assert lichnerowicz_omega(x, y, MagneticField(Bf)) ** 2 == pytest.approx(expected.real, rel=1e-10)


class TestProp6:
    def test_closed_form_example(self):
        a, b, beta = 0.01, 1.7, 0.6
        cf = prop6_closed_form((0, 0, 1), (a, 0, 0), (0, beta, 0), (0, 0, b))
        assert cf.value == pytest.approx(0.5 * TWO_PI**3 * b * b * beta * beta * (1 - 6 * TWO_PI**3 * a * a), rel=1e-14)
        assert cf.positive

    def test_closed_form_at_threshold(self):
        cf = prop6_closed_form((0, 0, 1), (np.sqrt(CENTRAL_THRESHOLD), 0, 0), (0, 1, 0), (0, 0, 1))
        assert abs(cf.value) < 1e-12 and not cf.positive

    def test_perpendicular_field(self):
        for u in (0.0, 0.01, 1.0):
            cf = prop6_closed_form((0, 0, 1), (u, 0, 0), (0, 1, 0), (1.0, 2.0, 0))
            assert cf.value == 0 and not cf.positive

    def test_rejects_non_orthogonal(self):
        with pytest.raises(ValueError):
            prop6_closed_form((0, 0, 1), (1, 0, 0.1), (0, 1, 0), (0, 0, 1))
        with pytest.raises(ValueError):
            prop6_closed_form((0, 0, 1), (1, 0, 0), (1, 1, 0), (0, 0, 1))

    @pytest.mark.parametrize("setting", ["central", "gauge"])
    @given(seed=seeds)
    def test_numeric_matches_closed_form(self, setting, seed):
        rng = np.random.default_rng(seed)
        p = tuple(int(v) for v in rng.integers(-2, 3, size=3))
        if not any(p):
            p = (1, 0, 0)
        pv = np.array(p, float)
        e1 = np.cross(pv, rng.normal(size=3))
        e2 = np.cross(pv, e1)
        u_p = e1 / np.linalg.norm(e1) * rng.uniform(0, 0.05)
        v_p = e2 / np.linalg.norm(e2) * rng.uniform(0.2, 2)
        B0 = rng.normal(size=3)
        num = prop6_numeric(p, u_p, v_p, B0, setting).unnormalized
        cf = prop6_closed_form(p, u_p, v_p, B0, setting).value
        assert abs(num - cf) <= 1e-10 * max(abs(num), abs(cf), 1e-300) + 1e-13 * np.linalg.norm(B0) ** 2

    def test_coupled_terms_vanish(self):
        rep = prop6_numeric((0, 0, 1), (0.01, 0, 0), (0, 0.8, 0), (0.2, 0.1, 1.3))
        assert abs(rep.terms["nabla_1"]) < 1e-12 and abs(rep.terms["nabla_2"]) < 1e-12
        assert abs(rep.terms["base"]) < 1e-12

    def test_central_sweep_sign_change(self):
        grid = np.linspace(0, 2 * CENTRAL_THRESHOLD, 100)
        rows = sweep(grid, setting="central")
        cells = sign_changes(rows)
        assert len(cells) == 1
        assert cells[0][0] <= CENTRAL_THRESHOLD <= cells[0][1]
        assert max(r.rel_diff for r in rows) <= 1e-10

    def test_gauge_sweep_positive_below_threshold(self):
        rows = sweep(np.linspace(0, 0.5, 200), setting="gauge")
        assert all(r.positive for r in rows if r.param < GAUGE_THRESHOLD * (1 - 1e-9))
        assert not any(r.positive for r in rows if r.param > GAUGE_THRESHOLD)
        assert max(r.rel_diff for r in rows) <= 1e-10

    def test_sweep_csv(self):
        text = sweep_to_csv(sweep([0.0, 1e-3]))
        lines = text.splitlines()
        assert lines[0] == "param,value_numeric,value_closed_form,rel_diff,positive"
        assert lines[1].endswith(",true") and lines[2].endswith(",false")

    def test_sweep_records_degenerate_rows(self):
        rows = sweep([0.0, 1e-3], v_p=(0.0, 0.0, 0.0))
        assert all(r.error for r in rows) and not any(r.positive for r in rows)
