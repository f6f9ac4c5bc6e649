"""Entire-function calculus: expressions, fields, Wronskians."""

import math

import numpy as np
import pytest

from nevlab.holo import (HoloExpr, MeromorphicFn, ProjectiveCurve,
                         VectorField, exp_expr, linearly_independent,
                         log_wronskian_eval, wronskian, xderive)

Z = HoloExpr.var()
ONE = HoloExpr.constant(1)


def _close(a, b, tol=1e-9):
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


class TestHoloExpr:
    def test_arithmetic_evaluation(self):
        f = (Z + 1) * (Z - 1) - Z * Z
        assert complex(f(5 + 2j)) == pytest.approx(-1.0)

    def test_exp_products(self):
        f = Z * exp_expr(2 * Z)
        z = 0.4 - 0.3j
        assert complex(f(z)) == pytest.approx(z * np.exp(2 * z))

    def test_derivative(self):
        f = Z * exp_expr(Z)
        fp = f.derivative()
        z = 1.1 + 0.2j
        assert complex(fp(z)) == pytest.approx((1 + z) * np.exp(z))

    def test_eval_log_handles_huge_arguments(self):
        f = exp_expr(Z)
        lm, ph = f.eval_log(np.array([1000.0 + 0j]))
        assert lm[0] == pytest.approx(1000.0)
        assert abs(ph[0]) == pytest.approx(1.0)

    def test_eval_log_at_zero(self):
        lm, ph = Z.eval_log(np.array([0j]))
        assert lm[0] == -math.inf
        assert ph[0] == 1.0

    def test_power(self):
        f = (Z + 1) ** 3
        assert complex(f(1 + 0j)) == pytest.approx(8.0)


class TestProjectiveCurve:
    def test_fs_density_rational_closed_form(self):
        # [1:z] pulls back the unit-mass form to 1 / (pi (1+|z|^2)^2)
        curve = ProjectiveCurve([ONE, Z])
        zs = np.array([0j, 1 + 0j, 0.5 - 2j, 3 + 3j])
        want = 1.0 / (math.pi * (1 + np.abs(zs) ** 2) ** 2)
        assert np.allclose(curve.fs_density(zs), want, rtol=1e-12)

    def test_fs_density_scale_invariant(self):
        a = ProjectiveCurve([ONE, exp_expr(Z)])
        b = ProjectiveCurve([3 * ONE, 3 * exp_expr(Z)])
        zs = np.array([0.2 + 0.1j, -1 + 0.5j])
        assert np.allclose(a.fs_density(zs), b.fs_density(zs), rtol=1e-12)

    def test_fs_density_survives_overflow_range(self):
        curve = ProjectiveCurve([ONE, exp_expr(Z)])
        # naive |exp(900)|^2 would overflow; the rescaled form must not
        val = curve.fs_density(900.0 + 0j)
        assert np.isfinite(val) and val >= 0

    def test_degenerate_inputs_rejected(self):
        zero = HoloExpr.constant(0)
        with pytest.raises(ValueError, match="identically zero"):
            ProjectiveCurve([zero, zero])
        with pytest.raises(ValueError, match="common zero"):
            ProjectiveCurve([Z, Z * Z])
        with pytest.raises(ValueError, match="two components"):
            ProjectiveCurve([ONE])

    def test_constant_map_allowed(self):
        # [1:0] is a point, not an error; its pullback density vanishes
        c = ProjectiveCurve([ONE, HoloExpr.constant(0)])
        assert c.fs_density(1 + 0j) == 0.0


class TestVectorField:
    def test_d_dz(self):
        f = Z ** 2
        assert complex(VectorField.d_dz().apply(f)(3 + 0j)) == pytest.approx(6.0)

    def test_exp_coefficient_accepted(self):
        fld = VectorField(exp_expr(Z))
        assert complex(fld.apply(Z)(1 + 0j)) == pytest.approx(math.e)

    def test_polynomial_zeros_on_plane_rejected(self):
        with pytest.raises(ValueError, match="zero"):
            VectorField(Z)

    def test_polynomial_zeros_outside_chart_ok(self):
        fld = VectorField(Z - 2, domain_radius=1.5)
        assert fld.domain_radius == 1.5
        with pytest.raises(ValueError):
            VectorField(Z - 2, domain_radius=3.0)

    def test_zero_and_multiterm_rejected(self):
        with pytest.raises(ValueError):
            VectorField(HoloExpr.constant(0))
        with pytest.raises(ValueError):
            VectorField(ONE + exp_expr(Z))

    def test_xderive_orders(self):
        fld = VectorField.d_dz()
        assert complex(xderive(Z ** 3, fld, 2)(2 + 0j)) == pytest.approx(12.0)
        assert complex(xderive(Z, fld, 0)(5 + 0j)) == pytest.approx(5.0)
        with pytest.raises(ValueError):
            xderive(Z, fld, -1)


class TestWronskian:
    def test_polynomial_family(self):
        w = wronskian([ONE, Z, Z * Z], VectorField.d_dz())
        assert complex(w(7 + 0j)) == pytest.approx(2.0)

    def test_exponential_family(self):
        w = wronskian([exp_expr(Z), exp_expr(2 * Z)], VectorField.d_dz())
        z = 0.3 + 0.2j
        assert complex(w(z)) == pytest.approx(np.exp(3 * z))

    def test_log_form_matches_ratio(self):
        comps = [ONE, exp_expr(Z), exp_expr(2 * Z)]
        val = log_wronskian_eval(comps, VectorField.d_dz(), 0.7 + 0.1j)
        # det[[1,1,1],[0,1,2],[0,1,4]] = 2, independent of z
        assert val == pytest.approx(2.0)

    def test_dependent_family_vanishes(self):
        w = wronskian([Z, 2 * Z], VectorField.d_dz())
        assert w.is_zero() or abs(complex(w(1.3 + 0j))) < 1e-14


def _random_expr(rng, allow_zero=False):
    """Small random entire function: poly + poly * exp(linear)."""
    def poly():
        deg = int(rng.integers(0, 3))
        acc = HoloExpr.constant(0)
        for k in range(deg + 1):
            c = int(rng.integers(-3, 4))
            if c:
                acc = acc + c * Z ** k
        return acc

    f = poly()
    if rng.random() < 0.5:
        a = int(rng.integers(-2, 3))
        if a:
            f = f + poly() * exp_expr(a * Z)
    if not allow_zero and f.is_zero():
        return f + ONE
    return f


def _random_field(rng):
    if rng.random() < 0.5:
        return VectorField.d_dz()
    c = int(rng.integers(1, 3))
    a = int(rng.integers(-1, 2))
    return VectorField(c * exp_expr(a * Z)) if a else \
        VectorField(HoloExpr.constant(c))


class TestWronskianIdentities:
    """Leibniz-only identities, so they hold for any derivation."""

    def test_common_factor_scales_by_power(self):
        rng = np.random.default_rng(7)
        pts = np.array([0.4 + 0.3j, -0.7 + 0.2j, 0.1 - 0.9j])
        for _ in range(25):
            n1 = int(rng.integers(2, 4))
            fs = [_random_expr(rng) for _ in range(n1)]
            phi = _random_expr(rng)
            fld = _random_field(rng)
            lhs = wronskian([phi * f for f in fs], fld)
            rhs = wronskian(fs, fld)
            for z in pts:
                want = complex(phi(z)) ** n1 * complex(rhs(z))
                assert _close(complex(lhs(z)), want)

    def test_constant_change_of_basis_scales_by_det(self):
        rng = np.random.default_rng(11)
        pts = np.array([0.5 + 0.1j, -0.2 - 0.6j])
        for _ in range(25):
            n1 = int(rng.integers(2, 4))
            fs = [_random_expr(rng) for _ in range(n1)]
            while True:
                A = rng.integers(-2, 3, size=(n1, n1))
                det = round(float(np.linalg.det(A)))
                if det != 0:
                    break
            gs = []
            for col in range(n1):
                acc = HoloExpr.constant(0)
                for row in range(n1):
                    acc = acc + int(A[row, col]) * fs[row]
                gs.append(acc)
            fld = _random_field(rng)
            lhs = wronskian(gs, fld)
            rhs = wronskian(fs, fld)
            for z in pts:
                assert _close(complex(lhs(z)), det * complex(rhs(z)))


class TestLinearIndependence:
    def test_exact_polynomial_dependence(self):
        assert not linearly_independent([ONE, Z, ONE + Z])
        assert linearly_independent([ONE, Z, Z ** 2])

    def test_transcendental_families(self):
        assert linearly_independent([ONE, exp_expr(Z), exp_expr(2 * Z)])
        assert not linearly_independent([exp_expr(Z), 2 * exp_expr(Z)])

    def test_zero_component_dependent(self):
        assert not linearly_independent([HoloExpr.constant(0), Z])


class TestMeromorphicFn:
    def test_evaluation_and_log_abs(self):
        psi = MeromorphicFn(Z * Z - 1, Z)
        z = 2 + 0j
        assert complex(psi(z)) == pytest.approx(1.5)
        assert float(psi.log_abs(z)) == pytest.approx(math.log(1.5))

    def test_as_curve_roundtrip(self):
        psi = MeromorphicFn(exp_expr(Z), ONE)
        curve = psi.as_curve()
        assert len(curve.components) == 2
