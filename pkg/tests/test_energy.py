"""Energy parts, the equivalent form, the chemical potential and the
Laplacian-norm bound."""

import math

import numpy as np
import pytest

from conftest import rough_field, smooth_field
from pfcetd.energy import chemical_potential, energy, energy_equivalent, h2_bound
from pfcetd.grid import GridSpec, RealField, inner, laplacian


class TestEnergyBreakdown:
    def test_zero_field(self, spec2d):
        e = energy(RealField.zeros(spec2d), 0.25)
        assert e.total == 0.0

    def test_constant_field_closed_form(self, spec2d):
        c, eps = 0.7, 0.3
        e = energy(RealField.constant(spec2d, c), eps)
        expected = spec2d.volume * (c**4 / 4.0 + (1.0 - eps) * c**2 / 2.0)
        assert e.total == pytest.approx(expected, rel=1e-14)
        assert e.gradient == 0.0
        assert e.biharmonic == 0.0

    def test_part_signs_and_total(self, spec2d):
        e = energy(rough_field(spec2d, 70), 0.25)
        assert e.quartic >= 0.0
        assert e.biharmonic >= 0.0
        assert e.gradient <= 0.0
        regrouped = math.fsum((e.biharmonic, e.gradient, e.quadratic, e.quartic))
        assert e.total == pytest.approx(regrouped, rel=1e-14)

    def test_total_matches_reordered_summation(self, spec2d):
        u = rough_field(spec2d, 71)
        e = energy(u, 0.25)
        # independent accumulation of the same integrand in a different order
        parts = sorted((e.quartic, e.quadratic, e.gradient, e.biharmonic))
        assert e.total == pytest.approx(math.fsum(parts), rel=1e-13)

    def test_rejects_bad_epsilon(self, spec2d):
        with pytest.raises(ValueError, match="epsilon"):
            energy(RealField.zeros(spec2d), 0.0)
        with pytest.raises(ValueError, match="epsilon"):
            energy(RealField.zeros(spec2d), 1.0)


class TestEquivalentForm:
    def test_constant_field(self, spec2d):
        c, eps = -0.4, 0.2
        u = RealField.constant(spec2d, c)
        assert energy_equivalent(u, eps) == pytest.approx(
            energy(u, eps).total, rel=1e-13
        )

    @pytest.mark.parametrize("dim,n", [(2, 16), (3, 8)])
    def test_agreement_on_random_fields(self, dim, n):
        spec = GridSpec(dim=dim, n=n, length=2 * np.pi)
        for seed in range(10):
            u = rough_field(spec, 80 + seed, amplitude=1.5)
            for eps in (0.1, 0.5, 0.9):
                a = energy(u, eps).total
                b = energy_equivalent(u, eps)
                assert abs(a - b) <= 1e-12 * (1.0 + abs(a))

    def test_single_mode_matches_hand_assembled_value(self, spec2d):
        # for u = A*cos(2*pi*x/L): <u^2> = A^2 vol/2, <u^4> = 3A^4 vol/8,
        # and the quadratic operators act through the mode eigenvalue
        amp, eps = 0.8, 0.25
        x = spec2d.coordinates(0)
        u = RealField(
            spec2d,
            amp * np.cos(2 * np.pi * x / spec2d.length)[:, None]
            * np.ones(spec2d.shape),
        )
        lam = 4.0 / spec2d.h**2 * np.sin(np.pi / spec2d.n) ** 2
        vol = spec2d.volume
        expected = (
            3.0 * amp**4 * vol / 32.0
            + (1.0 - eps) / 2.0 * amp**2 * vol / 2.0
            - lam * amp**2 * vol / 2.0
            + 0.5 * lam**2 * amp**2 * vol / 2.0
        )
        assert energy(u, eps).total == pytest.approx(expected, rel=1e-12)
        assert energy_equivalent(u, eps) == pytest.approx(expected, rel=1e-12)


class TestChemicalPotential:
    def test_zero_field(self, spec2d):
        mu = chemical_potential(RealField.zeros(spec2d), 0.25)
        assert np.max(np.abs(mu.values)) == 0.0

    def test_constant_field(self, spec2d):
        c, eps = 0.6, 0.25
        mu = chemical_potential(RealField.constant(spec2d, c), eps)
        assert np.allclose(mu.values, c**3 - eps * c + c, atol=1e-13)

    def test_directional_derivative_of_energy(self):
        # low-frequency fields keep the energy small enough that the probe
        # differences stay far above the roundoff floor
        eps = 0.25
        spec = GridSpec(dim=2, n=16, length=4 * np.pi)
        u = smooth_field(spec, 90, amplitude=1.5, cutoff=2)
        v = smooth_field(spec, 91, amplitude=1.5, cutoff=2)
        mu = chemical_potential(u, eps)
        pairing = inner(mu, v)
        errors = []
        for s in (1e-3, 1e-4):
            plus = energy(RealField(spec, u.values + s * v.values), eps).total
            minus = energy(RealField(spec, u.values - s * v.values), eps).total
            errors.append(abs((plus - minus) / (2.0 * s) - pairing))
        floor = np.finfo(float).eps * abs(energy(u, eps).total) / 2e-4
        assert errors[1] > 100.0 * floor
        # central differences converge at second order in the probe step
        ratio = errors[0] / errors[1]
        assert 90.0 <= ratio <= 110.0


class TestH2Bound:
    def test_zero_field(self, spec2d):
        res = h2_bound(RealField.zeros(spec2d), 0.25)
        assert res.lhs == 0.0
        assert res.rhs == pytest.approx(2.0 * np.sqrt(spec2d.volume), rel=1e-14)
        assert res.holds

    @pytest.mark.parametrize("eps", [0.1, 0.25, 0.9])
    def test_random_smooth_sweep(self, spec2d, eps):
        for seed in range(50):
            u = smooth_field(spec2d, 1000 + seed, amplitude=2.0)
            assert h2_bound(u, eps).holds

    def test_amplitude_scaling_keeps_inequality(self, spec2d):
        base = smooth_field(spec2d, 95)
        small = h2_bound(base, 0.25)
        big = h2_bound(RealField(spec2d, 10.0 * base.values), 0.25)
        assert small.holds and big.holds
        assert big.lhs == pytest.approx(10.0 * small.lhs, rel=1e-12)

    def test_bound_consistent_with_direct_norm(self, spec3d):
        u = rough_field(spec3d, 96)
        res = h2_bound(u, 0.5)
        lap = laplacian(u)
        assert res.lhs == pytest.approx(float(np.sqrt(inner(lap, lap))), rel=1e-14)
