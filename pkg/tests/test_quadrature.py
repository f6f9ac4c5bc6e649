"""Rim averages and Green-weighted area integrals against closed forms."""

import math

import numpy as np
import pytest

from nevlab.quadrature import QuadResult, boundary_average, green_area_integral


class TestBoundaryAverage:
    def test_constant(self):
        res = boundary_average(lambda th: np.full_like(th, 2.5))
        assert res.require(1e-12) == pytest.approx(2.5)

    def test_trig_moments(self):
        res = boundary_average(lambda th: np.cos(th) ** 2)
        assert res.value == pytest.approx(0.5, abs=1e-12)
        res = boundary_average(lambda th: np.cos(3 * th))
        assert abs(res.value) < 1e-12

    def test_mean_value_property(self):
        # avg_theta log|rho e^{i theta} - a| = log rho for |a| < rho
        rho, a = 2.0, 0.7 + 0.4j
        res = boundary_average(
            lambda th: np.log(np.abs(rho * np.exp(1j * th) - a)))
        assert res.value == pytest.approx(math.log(rho), abs=1e-10)

    def test_outside_point_mean_value(self):
        # ... and log|a| for |a| > rho
        rho, a = 1.0, 3.0 - 1.0j
        res = boundary_average(
            lambda th: np.log(np.abs(rho * np.exp(1j * th) - a)))
        assert res.value == pytest.approx(math.log(abs(a)), abs=1e-10)

    def test_kink_converges(self):
        # |cos| is not smooth; the doubling loop must still get there
        res = boundary_average(lambda th: np.abs(np.cos(th)), tol=1e-9)
        assert res.value == pytest.approx(2.0 / math.pi, abs=1e-8)


class TestGreenAreaIntegral:
    def test_constant_density(self):
        # int_{|z|<rho} log(rho/|z|) dA = pi rho^2 / 2
        for rho in (0.5, 1.0, 3.0):
            res = green_area_integral(lambda z: np.ones(z.shape), rho)
            assert res.value == pytest.approx(math.pi * rho * rho / 2,
                                              rel=1e-9)

    def test_quadratic_density(self):
        # int |z|^2 log(rho/|z|) dA = pi rho^4 / 8
        rho = 2.0
        res = green_area_integral(lambda z: np.abs(z) ** 2, rho)
        assert res.value == pytest.approx(math.pi * rho ** 4 / 8, rel=1e-9)

    def test_angular_dependence_integrates_out(self):
        # int Re(z) log(rho/|z|) dA = 0 by symmetry
        res = green_area_integral(lambda z: z.real, 1.5)
        assert abs(res.value) < 1e-9

    def test_error_estimate_is_honest(self):
        rho = 1.0
        res = green_area_integral(lambda z: np.exp(-np.abs(z) ** 2), rho)
        brute = _brute_green(lambda z: np.exp(-np.abs(z) ** 2), rho)
        assert abs(res.value - brute) <= max(res.err_estimate, 1e-6)


def _brute_green(density, rho, n_r=4000, n_th=256):
    # midpoint in radius, trapezoid in angle; crude but independent
    rs = (np.arange(n_r) + 0.5) * rho / n_r
    th = np.linspace(0.0, 2 * math.pi, n_th, endpoint=False)
    zz = rs[:, None] * np.exp(1j * th[None, :])
    vals = density(zz) * np.log(rho / rs)[:, None]
    return float(np.sum(vals * rs[:, None]) * (rho / n_r) * (2 * math.pi / n_th))


class TestQuadResult:
    def test_require_raises_on_stall(self):
        res = QuadResult(value=1.0, err_estimate=1e-3, nodes=64,
                         converged=False)
        with pytest.raises(RuntimeError, match="stalled"):
            res.require(1e-6)
        assert res.require(1e-2) == 1.0

    def test_require_scaled_relative_above_one(self):
        res = QuadResult(value=1000.0, err_estimate=1e-4, nodes=64,
                         converged=True)
        # absolute 1e-6 would fail, relative passes
        assert res.require_scaled(1e-6) == 1000.0
        with pytest.raises(RuntimeError):
            res.require(1e-6)
