"""Radius maps, curvature floors, and the comparison ODE."""

import math

import numpy as np
import pytest

from nevlab.surface import (JacobiSolution, SurfaceError, SurfaceModel,
                            MetricProfile, green_lower_bound_check,
                            jacobi_solve)


class TestRadiusMaps:
    def test_euclidean_is_identity(self):
        surf = SurfaceModel.euclidean()
        for r in (0.0, 0.3, 1.0, 7.5, 120.0):
            assert surf.euclidean_radius(r) == r
            assert surf.geodesic_radius(r) == r

    def test_poincare_closed_form(self):
        # rho_e(r) = tanh(a r / 2), checked densely
        surf = SurfaceModel.poincare(1.0)
        rs = np.linspace(0.1, 10.0, 400)
        for r in rs:
            assert surf.euclidean_radius(r) == pytest.approx(
                math.tanh(r / 2.0), abs=1e-12)

    def test_poincare_scaled(self):
        surf = SurfaceModel.poincare(2.5)
        for r in (0.2, 1.0, 3.0):
            assert surf.euclidean_radius(r) == pytest.approx(
                math.tanh(2.5 * r / 2.0), abs=1e-12)
            assert surf.geodesic_radius(surf.euclidean_radius(r)) == \
                pytest.approx(r, abs=1e-10)

    def test_callable_profile_roundtrip(self):
        # same hyperbolic metric, but entered as a plain callable so the
        # generic quadrature/Newton path is exercised
        prof = MetricProfile.from_callable(
            lambda rho: 4.0 / (1.0 - rho ** 2) ** 2, 1.0)
        surf = SurfaceModel(prof)
        for r in (0.1, 0.5, 2.0, 5.0):
            rho = surf.euclidean_radius(r)
            assert rho == pytest.approx(math.tanh(r / 2.0), abs=1e-9)
            assert surf.geodesic_radius(rho) == pytest.approx(r, abs=1e-9)

    def test_rejects_bad_radii(self):
        surf = SurfaceModel.poincare(1.0)
        with pytest.raises(SurfaceError):
            surf.euclidean_radius(-0.1)
        with pytest.raises(SurfaceError):
            surf.geodesic_radius(1.5)  # outside the unit chart


class TestCurvature:
    def test_euclidean_flat(self):
        surf = SurfaceModel.euclidean()
        assert surf.kappa(3.0) == 0.0
        assert float(surf.curvature(2.0)) == pytest.approx(0.0, abs=1e-12)

    def test_poincare_constant(self):
        surf = SurfaceModel.poincare(1.0)
        assert surf.kappa(5.0) == pytest.approx(-1.0, abs=1e-12)
        rhos = np.linspace(0.0, 0.95, 40)
        assert np.allclose(surf.curvature(rhos), -1.0, atol=1e-9)
        assert SurfaceModel.poincare(2.0).kappa(1.0) == pytest.approx(-4.0)

    def test_callable_profile_curvature(self):
        prof = MetricProfile.from_callable(
            lambda rho: 4.0 / (1.0 - rho ** 2) ** 2, 1.0)
        surf = SurfaceModel(prof)
        # numerical differentiation of the profile should recover -1
        assert surf.kappa(2.0) == pytest.approx(-1.0, abs=1e-5)


class TestGreenFunction:
    def test_value_and_rim_zero(self):
        surf = SurfaceModel.euclidean()
        assert surf.green(2.0, 1.0 + 0j) == pytest.approx(
            math.log(2.0) / math.pi)
        assert surf.green(2.0, 2.0 + 0j) == pytest.approx(0.0, abs=1e-15)

    def test_conformal_invariance(self):
        # only rho_e enters, h does not
        poi = SurfaceModel.poincare(1.0)
        r = 2.0
        rho = poi.euclidean_radius(r)
        assert poi.green(r, rho / 3) == pytest.approx(
            math.log(3.0) / math.pi)

    def test_errors(self):
        surf = SurfaceModel.euclidean()
        with pytest.raises(SurfaceError):
            surf.green(1.0, 0j)
        with pytest.raises(SurfaceError):
            surf.green(1.0, 2.0 + 0j)

    def test_harmonic_measure_uniform(self):
        surf = SurfaceModel.poincare(1.0)
        th = np.linspace(0, 2 * math.pi, 9)
        assert np.allclose(surf.harmonic_measure_density(1.0, th),
                           1.0 / (2 * math.pi))


class TestJacobi:
    def test_flat_is_linear(self):
        sol = jacobi_solve(lambda t: 0.0, 10.0)
        ts = np.linspace(0.01, 10.0, 97)
        assert np.max(np.abs(sol.G(ts) - ts)) < 1e-10
        assert np.max(np.abs(sol.Gprime(ts) - 1.0)) < 1e-10
        # equality case of the log bound
        assert sol.integral_inv_G(1.0, 10.0) == pytest.approx(
            math.log(10.0), abs=1e-9)

    def test_constant_negative_matches_sinh(self):
        sol = jacobi_solve(lambda t: -1.0, 10.0)
        ts = np.linspace(0.0, 10.0, 513)
        assert np.max(np.abs(sol.G(ts) - np.sinh(ts))) < 1e-8
        assert np.max(np.abs(sol.Gprime(ts) - np.cosh(ts))) < 1e-7

    def test_comparison_bounds_hold(self):
        kf = lambda t: -(1.0 + 0.5 * t)  # genuinely varying floor
        sol = jacobi_solve(kf, 4.0)
        ts = np.linspace(0.01, 4.0, 301)
        g = sol.G(ts)
        assert np.all(g >= ts - 1e-9)
        upper = ts * np.exp(ts * np.sqrt(-np.array([kf(t) for t in ts])))
        assert np.all(g <= upper * (1 + 1e-6))
        assert sol.integral_inv_G(1.0, 4.0) <= math.log(4.0) + 1e-10

    def test_rejects_positive_curvature(self):
        with pytest.raises(SurfaceError):
            jacobi_solve(lambda t: 0.5, 3.0)

    def test_rejects_bad_inputs(self):
        with pytest.raises(SurfaceError):
            jacobi_solve(lambda t: -1.0, 0.0)
        sol = jacobi_solve(lambda t: -1.0, 3.0)
        with pytest.raises(SurfaceError):
            sol.integral_inv_G(0.0, 1.0)
        with pytest.raises(SurfaceError):
            sol.integral_inv_G(2.0, 1.0)

    def test_direct_construction(self):
        sol = JacobiSolution(kappa_floor=lambda t: -0.25, r_max=6.0)
        assert sol.G(2.0) == pytest.approx(2.0 * math.sinh(1.0), rel=1e-10)


class TestGreenLowerBound:
    def test_positive_on_poincare(self):
        rep = green_lower_bound_check(SurfaceModel.poincare(1.0), 0.5, 4.0)
        assert rep.positive
        assert rep.min_ratio > 0
        assert rep.ratios.shape == (256,)

    def test_positive_on_euclidean(self):
        rep = green_lower_bound_check(SurfaceModel.euclidean(), 1.0, 8.0,
                                      samples=64)
        assert rep.positive

    def test_deterministic_default_rng(self):
        a = green_lower_bound_check(SurfaceModel.poincare(1.0), 0.5, 3.0,
                                    samples=32)
        b = green_lower_bound_check(SurfaceModel.poincare(1.0), 0.5, 3.0,
                                    samples=32)
        assert np.array_equal(a.ratios, b.ratios)

    def test_rejects_bad_window(self):
        with pytest.raises(SurfaceError):
            green_lower_bound_check(SurfaceModel.euclidean(), 2.0, 1.0)
