"""Grid construction, field algebra and the difference calculus."""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import rough_field, smooth_field
from pfcetd.grid import (
    GridSpec,
    RealField,
    StaggeredField,
    divergence,
    grad,
    inner,
    laplacian,
    mean,
    norms,
    random_field,
    staggered_inner,
)


class TestGridSpec:
    def test_derived_quantities(self):
        spec = GridSpec(dim=2, n=8, length=4.0)
        assert spec.h == 0.5
        assert spec.volume == 16.0
        assert spec.shape == (8, 8)
        assert spec.size == 64

    def test_h_times_n_reproduces_length(self):
        spec = GridSpec(dim=3, n=48, length=0.7)
        assert spec.h * spec.n == pytest.approx(spec.length, rel=1e-15)

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(dim=1, n=8, length=1.0),
            dict(dim=4, n=8, length=1.0),
            dict(dim=2, n=3, length=1.0),
            dict(dim=2, n=8, length=0.0),
            dict(dim=2, n=8, length=-2.0),
            dict(dim=2, n=8, length=float("inf")),
        ],
    )
    def test_rejects_bad_parameters(self, kwargs):
        with pytest.raises(ValueError):
            GridSpec(**kwargs)


class TestRealField:
    def test_rejects_nan_and_shape_mismatch(self, spec2d):
        bad = np.zeros(spec2d.shape)
        bad[0, 0] = np.nan
        with pytest.raises(ValueError, match="finite"):
            RealField(spec2d, bad)
        with pytest.raises(ValueError, match="shape"):
            RealField(spec2d, np.zeros((3, 3)))

    def test_values_are_frozen(self, spec2d):
        f = RealField.zeros(spec2d)
        with pytest.raises(ValueError):
            f.values[0, 0] = 1.0

    def test_algebra(self, spec2d):
        f = rough_field(spec2d, 1)
        g = rough_field(spec2d, 2)
        h = 2.0 * f - g
        assert np.allclose(h.values, 2.0 * f.values - g.values)

    def test_mixed_grids_rejected(self, spec2d):
        other = GridSpec(dim=2, n=16, length=1.0)
        with pytest.raises(ValueError, match="different grids"):
            rough_field(spec2d, 0) + rough_field(other, 0)


class TestMeanAndInner:
    def test_mean_of_zero_and_constant(self, spec2d):
        assert mean(RealField.zeros(spec2d)) == 0.0
        assert mean(RealField.constant(spec2d, -1.7)) == pytest.approx(-1.7, abs=1e-15)

    def test_mean_after_centering(self, spec3d):
        f = rough_field(spec3d, 3)
        centered = RealField(spec3d, f.values - mean(f))
        assert abs(mean(centered)) <= 1e-14 * np.max(np.abs(f.values))

    def test_inner_with_zero_and_ones(self, spec2d):
        f = rough_field(spec2d, 4)
        assert inner(f, RealField.zeros(spec2d)) == 0.0
        one = RealField.constant(spec2d, 1.0)
        assert inner(one, one) == pytest.approx(spec2d.volume, rel=1e-14)

    def test_inner_symmetry(self, spec2d):
        f = rough_field(spec2d, 5)
        g = rough_field(spec2d, 6)
        assert inner(f, g) == pytest.approx(inner(g, f), rel=1e-14)

    def test_spec_mismatch_raises(self, spec2d):
        other = GridSpec(dim=2, n=16, length=1.0)
        with pytest.raises(ValueError, match="different grids"):
            inner(rough_field(spec2d, 0), rough_field(other, 0))


class TestOperators:
    def test_grad_of_constant_vanishes(self, spec2d):
        g = grad(RealField.constant(spec2d, 3.0))
        for comp in g.components:
            assert np.all(comp == 0.0)

    def test_grad_matches_pointwise_difference_of_sine(self, spec2d):
        x = spec2d.coordinates(0)
        f = RealField(
            spec2d, np.sin(2 * np.pi * x / spec2d.length)[:, None] * np.ones(spec2d.shape)
        )
        expected = (
            np.sin(2 * np.pi * np.roll(x, -1) / spec2d.length)
            - np.sin(2 * np.pi * x / spec2d.length)
        ) / spec2d.h
        got = grad(f).components[0]
        assert np.allclose(got, expected[:, None], atol=1e-14)

    def test_divergence_of_grad_is_laplacian(self, spec3d):
        f = rough_field(spec3d, 7)
        lap = laplacian(f)
        composed = divergence(grad(f))
        tol = 1e-13 * np.max(np.abs(lap.values))
        assert np.max(np.abs(composed.values - lap.values)) <= tol

    def test_laplacian_of_constant_vanishes(self, spec2d):
        lap = laplacian(RealField.constant(spec2d, 2.5))
        assert np.max(np.abs(lap.values)) == 0.0

    def test_laplacian_eigenmode(self, spec2d):
        k = 3
        x = spec2d.coordinates(0)
        f = RealField(
            spec2d,
            np.cos(2 * np.pi * k * x / spec2d.length)[:, None] * np.ones(spec2d.shape),
        )
        lam = 4.0 / spec2d.h**2 * np.sin(np.pi * k / spec2d.n) ** 2
        lap = laplacian(f)
        assert np.allclose(lap.values, -lam * f.values, atol=1e-12 * lam)

    def test_laplacian_sums_to_zero(self, spec2d):
        f = rough_field(spec2d, 8)
        lap = laplacian(f)
        bound = 1e-14 * np.max(np.abs(f.values)) / spec2d.h**2
        assert abs(mean(lap)) <= bound

    def test_staggered_inner_of_zero(self, spec2d):
        z = grad(RealField.zeros(spec2d))
        assert staggered_inner(z, z) == 0.0

    def test_staggered_inner_nonnegative_on_gradients(self, spec3d):
        g = grad(rough_field(spec3d, 9))
        assert staggered_inner(g, g) >= 0.0

    def test_component_count_enforced(self, spec2d):
        with pytest.raises(ValueError, match="components"):
            StaggeredField(spec2d, (np.zeros(spec2d.shape),))

    @given(alpha=st.floats(-10, 10), beta=st.floats(-10, 10))
    def test_operators_are_linear(self, alpha, beta):
        spec = GridSpec(dim=2, n=8, length=1.0)
        f = rough_field(spec, 10)
        g = rough_field(spec, 11)
        combo = alpha * f + beta * g
        lap_combo = laplacian(combo)
        lap_split = alpha * laplacian(f) + beta * laplacian(g)
        scale = np.max(np.abs(lap_combo.values)) + 1.0
        assert np.max(np.abs(lap_combo.values - lap_split.values)) <= 1e-12 * scale
        grad_combo = grad(combo)
        for ax in range(spec.dim):
            split = alpha * grad(f).components[ax] + beta * grad(g).components[ax]
            assert np.max(np.abs(grad_combo.components[ax] - split)) <= 1e-12 * scale


class TestNorms:
    def test_constant_field(self, spec2d):
        c = -0.8
        res = norms(RealField.constant(spec2d, c))
        expected_l2 = abs(c) * spec2d.length ** (spec2d.dim / 2)
        assert res.l2 == pytest.approx(expected_l2, rel=1e-14)
        assert res.h1 == pytest.approx(expected_l2, rel=1e-14)
        assert res.h2 == pytest.approx(expected_l2, rel=1e-14)
        assert res.linf == pytest.approx(abs(c))

    def test_single_spike_max_norm(self, spec2d):
        v = np.zeros(spec2d.shape)
        v[3, 5] = -7.25
        assert norms(RealField(spec2d, v)).linf == 7.25

    def test_single_mode_gradient_norm_matches_symbol(self, spec2d):
        x = spec2d.coordinates(0)
        f = RealField(
            spec2d,
            np.cos(2 * np.pi * x / spec2d.length)[:, None] * np.ones(spec2d.shape),
        )
        g = grad(f)
        lam = 4.0 / spec2d.h**2 * np.sin(np.pi / spec2d.n) ** 2
        expected = lam * spec2d.volume / 2.0
        assert staggered_inner(g, g) == pytest.approx(expected, rel=1e-13)


class TestSummationByParts:
    @pytest.mark.parametrize("dim,n", [(2, 16), (3, 8)])
    def test_five_identities_on_random_pairs(self, dim, n):
        spec = GridSpec(dim=dim, n=n, length=2 * np.pi)
        for seed in range(5):
            psi = rough_field(spec, 100 + seed)
            phi = smooth_field(spec, 200 + seed)
            rng = np.random.default_rng(300 + seed)
            vec = grad(rough_field(spec, 400 + seed)) + StaggeredField(
                spec, tuple(rng.uniform(-1, 1, spec.shape) for _ in range(dim))
            )
            lap_phi = laplacian(phi)
            lap2_phi = laplacian(lap_phi)
            lap_psi = laplacian(psi)
            lap2_psi = laplacian(lap_psi)
            lap3_psi = laplacian(lap2_psi)
            pairs = [
                (inner(psi, divergence(vec)), -staggered_inner(grad(psi), vec)),
                (inner(psi, lap_phi), -staggered_inner(grad(psi), grad(phi))),
                (inner(psi, lap2_phi), inner(lap_psi, lap_phi)),
                (
                    inner(lap_psi, lap2_phi),
                    -staggered_inner(grad(psi), grad(lap2_phi)),
                ),
                (
                    inner(lap3_psi, lap2_phi),
                    -staggered_inner(grad(lap2_psi), grad(lap2_phi)),
                ),
            ]
            for lhs, rhs in pairs:
                assert abs(lhs - rhs) <= 1e-12 * max(abs(lhs), abs(rhs))

    def test_self_pairing_is_square_norm(self, spec2d):
        psi = rough_field(spec2d, 12)
        lap = laplacian(psi)
        lhs = inner(psi, laplacian(lap))
        rhs = inner(lap, lap)
        assert rhs >= 0.0
        assert lhs == pytest.approx(rhs, rel=1e-12)

    def test_constant_pairs_to_zero_against_laplacian(self, spec2d):
        psi = RealField.constant(spec2d, 4.0)
        phi = rough_field(spec2d, 13)
        lap_phi = laplacian(phi)
        bound = 1e-13 * spec2d.volume * np.max(np.abs(lap_phi.values)) + 1e-13
        assert abs(inner(psi, lap_phi)) <= 4.0 * bound


def test_random_field_is_seeded_and_bounded():
    spec = GridSpec(dim=2, n=8, length=1.0)
    a = random_field(spec, np.random.default_rng(5), amplitude=0.3, shift=1.0)
    b = random_field(spec, np.random.default_rng(5), amplitude=0.3, shift=1.0)
    assert np.array_equal(a.values, b.values)
    assert np.all(np.abs(a.values - 1.0) <= 0.3)
