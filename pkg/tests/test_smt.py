"""Growth inequalities: log-derivative bounds, calculus lemma, Cartan."""

import math

import numpy as np
import pytest

from nevlab import smt
from nevlab.divisor import DivisorSum, WeilSpec, hyperplane
from nevlab.holo import (HoloExpr, MeromorphicFn, ProjectiveCurve,
                         VectorField, exp_expr)
from nevlab.nevanlinna import boundary_T, proximity_m
from nevlab.stochastic import PathPolicy
from nevlab.surface import SurfaceModel

EUC = SurfaceModel.euclidean()
POI = SurfaceModel.poincare(1.0)
DZ = VectorField.d_dz()
Z = HoloExpr.var()
ONE = HoloExpr.constant(1)


class TestLogDerivativeM:
    def test_exponential_is_exact_zero(self):
        # (e^z)'/e^z = 1: no proximity at all
        psi = MeromorphicFn(exp_expr(Z))
        assert abs(smt.log_derivative_m(psi, DZ, 1, EUC, 7.0)) < 1e-9

    def test_gaussian_gives_log_2r(self):
        # (e^{z^2})'/e^{z^2} = 2z: m = log(2 rho)
        psi = MeromorphicFn(exp_expr(Z * Z))
        for r in (2.0, 100.0):
            v = smt.log_derivative_m(psi, DZ, 1, EUC, r)
            assert v == pytest.approx(math.log(2 * r), abs=1e-6)

    def test_pole_at_origin(self):
        # z'/z = 1/z: log+ vanishes once rho >= 1, log(1/rho) below
        psi = MeromorphicFn(Z)
        assert abs(smt.log_derivative_m(psi, DZ, 1, EUC, 3.0)) < 1e-9
        rho = math.tanh(0.5)
        v = smt.log_derivative_m(psi, DZ, 1, POI, 1.0)
        assert v == pytest.approx(math.log(1 / rho), abs=1e-6)

    def test_second_order(self):
        # X^2(e^{z^2})/e^{z^2} = 2 + 4z^2
        psi = MeromorphicFn(exp_expr(Z * Z))
        v = smt.log_derivative_m(psi, DZ, 2, EUC, 50.0)
        assert v == pytest.approx(math.log(4 * 50.0 ** 2), abs=1e-2)


class TestLDLReport:
    def test_gaussian_trace(self):
        psi = MeromorphicFn(exp_expr(Z * Z))
        tr = smt.ldl_report(psi, DZ, 1, EUC, np.geomspace(5, 100, 10))
        assert not any(tr.flagged)
        assert tr.max_ratio() <= 1.5
        last = len(tr.r_values) - 1
        # lhs is exactly m(r, 2z) = log(2r)
        assert tr.lhs[last] == pytest.approx(math.log(200.0), abs=1e-5)
        T100 = 100.0 ** 2 / math.pi
        denom = 1.5 * math.log(T100) + math.log(math.log(100.0)) + 1.0
        assert tr.ratio[last] == pytest.approx(math.log(200.0) / denom,
                                               abs=1e-3)
        assert tr.r0 == tr.r_values[0]

    def test_degenerate_lhs_is_zero(self):
        tr = smt.ldl_report(MeromorphicFn(exp_expr(Z)), DZ, 3, EUC,
                            np.geomspace(5, 100, 10))
        assert max(abs(x) for x in tr.lhs) < 1e-9
        assert tr.min_margin() > 0

    def test_bounded_characteristic_domain(self):
        # z on the hyperbolic disc: T stays bounded, ratio crashes to 0
        tr = smt.ldl_report(MeromorphicFn(Z), DZ, 1, POI,
                            np.linspace(2, 12, 6))
        assert tr.ratio[-1] < tr.ratio[0]
        assert tr.ratio[-1] < 5e-3
        assert all(math.isfinite(m) for m in tr.margin)

    def test_trace_serialization(self):
        psi = MeromorphicFn(exp_expr(Z * Z))
        tr = smt.ldl_report(psi, DZ, 1, EUC, np.geomspace(5, 50, 5))
        d = tr.to_dict()
        assert d["name"] == "ldl"
        assert len(d["points"]) == 5
        assert set(d["points"][0]) >= {"r", "lhs", "margin", "flagged"}

    def test_input_validation(self):
        psi = MeromorphicFn(exp_expr(Z))
        with pytest.raises(ValueError):
            smt.ldl_report(psi, DZ, 0, EUC, np.geomspace(2, 10, 5))
        with pytest.raises(ValueError):
            smt.ldl_report(psi, DZ, 1, EUC, [2.0, 3.0])
        with pytest.raises(ValueError):
            smt.ldl_report(MeromorphicFn(HoloExpr.constant(2)), DZ, 1, EUC,
                           np.geomspace(2, 10, 5))


class TestDerivativeGrowth:
    def test_polynomial_margins_positive(self):
        tr = smt.derivative_growth_check(MeromorphicFn(Z * Z), DZ, 1, EUC,
                                         np.geomspace(2, 50, 8))
        assert tr.min_margin() > 0

    def test_exponential_margin_closed_form(self):
        # T(r, e^z) = T(r, (e^z)') exactly, so the margin collapses to
        # T + log+ T + log+ log r
        tr = smt.derivative_growth_check(MeromorphicFn(exp_expr(Z)), DZ, 1,
                                         EUC, np.geomspace(2, 50, 8))
        for i in range(len(tr.r_values)):
            expect = tr.r_values[i] / math.pi + tr.log_T[i] + tr.loglog[i]
            assert tr.margin[i] == pytest.approx(expect, abs=1e-6)

    def test_constant_rejected(self):
        with pytest.raises(ValueError):
            smt.derivative_growth_check(MeromorphicFn(HoloExpr.constant(3)),
                                        DZ, 1, EUC, np.geomspace(2, 10, 4))


class TestCalculusLemma:
    def test_unit_density(self):
        rep = smt.calculus_lemma_report(EUC, lambda z: np.ones(np.shape(z)),
                                        np.linspace(2, 20, 6))
        assert all(abs(x - 1.0) < 1e-9 for x in rep.lhs)
        assert rep.ratio[-1] < rep.ratio[0]
        assert not any(rep.flagged)

    def test_quadratic_density_closed_forms(self):
        rs = np.array([2.0, 5.0, 10.0, 15.0, 20.0])
        rep = smt.calculus_lemma_report(EUC, lambda z: np.abs(z) ** 2, rs)
        for i, r in enumerate(rep.r_values):
            assert rep.lhs[i] == pytest.approx(r * r, rel=1e-6)
        # occupation of |z|^2 is r^4/8; main wraps it in the calibrated
        # log factors, pinned here at r = 10
        r = 10.0
        i = list(rep.r_values).index(r)
        khat = math.log(r) * (r ** 4 / 8)
        lk = math.log(khat)
        F = (lk * math.log(r * khat * lk ** 1.1)) ** 1.1
        expect = (r ** 4 / 8) * math.log(r) * (1 + F)
        assert rep.main[i] == pytest.approx(expect, rel=1e-4)

    def test_monte_carlo_cross_check_agrees(self):
        rep = smt.calculus_lemma_report(
            EUC, lambda z: np.abs(z) ** 2, np.linspace(2, 8, 4),
            policy=PathPolicy(seed=0, n_paths=4096))
        assert not any(rep.flagged)

    def test_singular_density_rejected(self):
        def capped_blowup(z):
            a = np.abs(z)
            with np.errstate(divide="ignore"):
                return np.where(a > 0, a ** -2.5, 0.0)

        # finite at the very center but ~|z|^-2.5 on the probe shells
        with pytest.raises(ValueError, match="-2 or worse"):
            smt.calculus_lemma_report(EUC, capped_blowup,
                                      np.linspace(2, 10, 4))

    def test_unbounded_center_rejected(self):
        with pytest.raises(ValueError, match="bounded at the center"):
            with np.errstate(divide="ignore"):
                smt.calculus_lemma_report(EUC, lambda z: np.abs(z) ** -2.5,
                                          np.linspace(2, 10, 4))

    def test_negative_density_rejected(self):
        with pytest.raises(ValueError, match="nonnegative"):
            smt.calculus_lemma_report(EUC, lambda z: -np.ones(np.shape(z)),
                                      np.linspace(2, 10, 4))


class TestBorel:
    def test_tame_growth_never_flagged(self):
        rs = np.linspace(3, 50, 100)
        rep = smt.borel_exceptional(np.column_stack([rs, rs]), 0.5)
        assert rep.total_measure == 0.0
        assert rep.c_phi == 2.0

    def test_delta_sets_budget(self):
        rs = np.linspace(3, 50, 100)
        assert smt.borel_exceptional(
            np.column_stack([rs, rs]), 1.0).c_phi == 1.0

    def test_genuine_jump_is_localized(self):
        # slope 1e4 against T ~ 1e2: the climb cells must be flagged and
        # the flagged set must stay inside the jump
        rr = np.linspace(1, 10, 901)
        TT = 10 + np.where(rr < 5, 0.0, np.minimum((rr - 5) * 1e4, 2e4))
        rep = smt.borel_exceptional(np.column_stack([rr, TT]), 0.5)
        assert rep.total_measure > 0
        assert all(lo >= 4.99 and hi < 5.2 for lo, hi in rep.intervals)
        assert rep.total_measure <= rep.c_phi + (rr[1] - rr[0]) + 1e-12

    def test_non_monotone_rejected(self):
        rr = np.linspace(1, 10, 50)
        TT = rr.copy()
        TT[20] = TT[19] - 1
        with pytest.raises(ValueError):
            smt.borel_exceptional(np.column_stack([rr, TT]), 0.5)


CURVE3 = ProjectiveCurve([ONE, exp_expr(Z), exp_expr(2 * Z)])
COORDS = [hyperplane([1, 0, 0]), hyperplane([0, 1, 0]), hyperplane([0, 0, 1])]


class TestMaxSumWeil:
    def test_full_flag_equals_sum_of_singles(self):
        # q = n+1 hyperplanes in general position: the admissible-set max
        # is the whole collection at every rim point
        spec = WeilSpec("fs")
        ms = smt.max_sum_weil_boundary(CURVE3, COORDS, EUC, 6.0, spec)
        parts = [proximity_m(CURVE3, DivisorSum([H]), EUC, 6.0, spec)
                 for H in COORDS]
        assert ms == pytest.approx(sum(parts), abs=1e-7)

    def test_proportional_sections_pick_the_winner(self):
        spec = WeilSpec("fs")
        prop = [hyperplane([1, 0, 0]), hyperplane([2, 0, 0])]
        ms = smt.max_sum_weil_boundary(CURVE3, prop, EUC, 6.0, spec)
        parts = [proximity_m(CURVE3, DivisorSum([H]), EUC, 6.0, spec)
                 for H in prop]
        # heights differ by the constant log 2, so one single integral
        # wins pointwise everywhere
        assert ms == pytest.approx(max(parts), abs=1e-7)

    def test_four_hyperplanes_bounded_by_3T(self):
        spec = WeilSpec("fs")
        H4 = COORDS + [hyperplane([1, 1, 1])]
        ms = smt.max_sum_weil_boundary(CURVE3, H4, EUC, 50.0, spec)
        T = boundary_T(CURVE3, EUC, 50.0, spec)
        assert ms <= 3.5 * T


class TestCartan:
    def test_margin_floor(self):
        H4 = COORDS + [hyperplane([1, 1, 1])]
        tr = smt.cartan_smt_report(CURVE3, H4, EUC, np.geomspace(5, 50, 6))
        for i in tr.unflagged():
            assert tr.margin[i] >= -0.5 * tr.log_T[i] - 10.0

    def test_degenerate_curve_rejected(self):
        bad = ProjectiveCurve([ONE, exp_expr(Z), 2 * exp_expr(Z)])
        with pytest.raises(ValueError):
            smt.cartan_smt_report(bad, COORDS, EUC, np.geomspace(5, 50, 6))


class TestLogWronskianProximity:
    def test_exponential_family_constant(self):
        # W/(f0 f1 f2) = 2 for [1:e^z:e^{2z}]
        v = smt.log_wronskian_proximity(CURVE3, COORDS, DZ, EUC, 10.0)
        assert v == pytest.approx(math.log(2.0), abs=1e-7)

    def test_polynomial_family_zero(self):
        curve = ProjectiveCurve([ONE, Z, Z * Z])
        v = smt.log_wronskian_proximity(curve, COORDS, DZ, EUC, 10.0)
        assert abs(v) < 1e-9

    def test_subset_size_checked(self):
        curve = ProjectiveCurve([ONE, Z, Z * Z])
        with pytest.raises(ValueError):
            smt.log_wronskian_proximity(curve, COORDS[:2], DZ, EUC, 5.0)
