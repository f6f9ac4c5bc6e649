"""Characteristics, proximity, counting, and their classical values."""

import math
import warnings

import numpy as np
import pytest

from nevlab.divisor import DivisorSum, WeilSpec, hyperplane
from nevlab.exprgrammar import parse_curve, parse_meromorphic
from nevlab.nevanlinna import (OriginOnDivisorError, RGrid, boundary_T,
                               characteristic_T, counting_N,
                               counting_from_table, crofton_T, defect_report,
                               fmt_report, merom_T, proximity_m,
                               pullback_zero_table)
from nevlab.surface import SurfaceModel

EUC = SurfaceModel.euclidean()
POI = SurfaceModel.poincare(1.0)
W0 = DivisorSum([hyperplane([1, 0])])
W1 = DivisorSum([hyperplane([0, 1])])


class TestClassicalValues:
    def test_rational_characteristic(self):
        # [1:z] on the unit disc: log(2)/2
        T = characteristic_T(parse_curve("[1:z]"), EUC, 1.0)
        assert T == pytest.approx(math.log(2.0) / 2.0, abs=1e-7)

    def test_exponential_characteristic(self):
        # classical T(r, e^z) = r/pi, so T(pi) = 1 exactly
        rep = merom_T(parse_meromorphic("exp(z)"), EUC, math.pi)
        assert rep.T == pytest.approx(1.0, abs=1e-6)
        assert rep.N_poles == 0.0

    def test_exponential_proximity_to_zero(self):
        # m(r, 0) = avg max(-r cos, 0) = r/pi; equals 1 at r = pi
        m = proximity_m(parse_curve("[1:exp(z)]"), W1, EUC, math.pi,
                        WeilSpec("max"))
        assert m == pytest.approx(1.0, abs=1e-6)

    def test_polynomial_counting(self):
        # z^2 - 1 vanishes at +-1; N(e) = 2 log(e/1) = 2
        N = counting_N(parse_curve("[1:z^2-1]"), W1, EUC, math.e)
        assert N == pytest.approx(2.0, abs=1e-9)


class TestDualRoutes:
    def test_area_and_rim_forms_agree(self):
        # smooth characteristic as curvature integral vs 2-norm Jensen form
        for text, r in (("[1:z]", 2.0), ("[1:exp(z)]", 3.0),
                        ("[1:exp(z):exp(2*z)]", 2.0)):
            curve = parse_curve(text)
            a = characteristic_T(curve, EUC, r)
            b = boundary_T(curve, EUC, r, WeilSpec("fs"))
            assert a == pytest.approx(b, abs=5e-6, rel=5e-6)

    def test_norm_gap_bounded(self):
        # rim and center corrections each sit between the two norms, so
        # the characteristics differ by at most (1/2) log(dim)
        curve = parse_curve("[1:exp(z):exp(2*z)]")
        gap = boundary_T(curve, EUC, 4.0, WeilSpec("fs")) - \
            boundary_T(curve, EUC, 4.0, WeilSpec("max"))
        assert abs(gap) <= 0.5 * math.log(3) + 1e-9

    def test_graph_characteristic_gauge(self):
        # T and T_graph differ by at most log max(1,|psi(0)|) + log 2
        psi = parse_meromorphic("(z^2-1)/(z-3)")
        rep = merom_T(psi, EUC, 2.0)
        assert abs(rep.T_graph - rep.T) <= math.log(2.0) + \
            max(0.0, float(psi.log_abs(0j))) + 1e-9


class TestCounting:
    def test_zero_table_contents(self):
        table = pullback_zero_table(parse_curve("[1:z^2-1]"), W1, 2.0)
        assert table.origin_weight == 0
        assert len(table.entries) == 2
        assert all(abs(a - 1.0) < 1e-9 for a, _, _ in table.entries)

    def test_counting_monotone_in_radius(self):
        table = pullback_zero_table(parse_curve("[1:z^2-1]"), W1, 5.0)
        vals = [counting_from_table(table, rho) for rho in (1.5, 2.0, 4.0)]
        assert vals == sorted(vals)

    def test_multiplicity_counts_double(self):
        N1 = counting_N(parse_curve("[1:z^2-1]"), W1, EUC, 2.0)
        N2 = counting_N(parse_curve("[1:(z^2-1)^2]"), W1, EUC, 2.0)
        assert N2 == pytest.approx(2 * N1, rel=1e-9)

    def test_center_zero_is_clipped_with_warning(self):
        table = pullback_zero_table(parse_curve("[1:z]"), W1, 1.0)
        assert table.origin_weight == 1
        with pytest.warns(RuntimeWarning, match="clipped"):
            counting_from_table(table, 1.0)

    def test_curve_inside_divisor_rejected(self):
        # the constant map [1:0] lies inside {w1 = 0}; its pullback is
        # identically zero and no zero table exists
        with pytest.raises(ValueError, match="maps into"):
            pullback_zero_table(parse_curve("[1:0*z]"), W1, 1.0)


class TestFirstMainTheorem:
    def test_residual_constancy_linear(self):
        rep = fmt_report(parse_curve("[1:z]"), W0, EUC,
                         np.geomspace(2.0, 20.0, 8))
        assert rep.max_deviation < 1e-4
        osc = max(rep.residual) - min(rep.residual)
        assert osc < 1e-5

    def test_residual_constancy_exponential(self):
        rep = fmt_report(parse_curve("[1:exp(z)]"), W1, EUC,
                         np.geomspace(2.0, 10.0, 6))
        assert rep.predicted == pytest.approx(0.0, abs=1e-12)
        assert rep.max_deviation < 1e-3

    def test_divisor_through_center_rejected(self):
        with pytest.raises(OriginOnDivisorError):
            fmt_report(parse_curve("[1:z]"), W1, EUC, [2.0, 3.0])

    def test_monotone_T(self):
        rep = fmt_report(parse_curve("[1:exp(z)]"), W1, EUC, [2.0, 5.0, 9.0])
        assert list(rep.T) == sorted(rep.T)


class TestCrofton:
    def test_target_average_matches_characteristic(self):
        curve = parse_curve("[1:z]")
        r = 5.0
        est = crofton_T(curve, EUC, r, n_samples=300, seed=1)
        T = characteristic_T(curve, EUC, r)
        # singular-vs-smooth metric gauge stays within a unit
        assert abs(est.mean - T) <= 3 * est.stderr + 1.0

    def test_seeded_reproducible(self):
        a = crofton_T(parse_curve("[1:z^2]"), EUC, 3.0, n_samples=50, seed=7)
        b = crofton_T(parse_curve("[1:z^2]"), EUC, 3.0, n_samples=50, seed=7)
        assert a.mean == b.mean and a.n_retried == b.n_retried

    def test_needs_plane_target(self):
        with pytest.raises(ValueError):
            crofton_T(parse_curve("[1:z:z^2]"), EUC, 2.0)


class TestDefects:
    def test_omitted_value_has_full_defect(self):
        # e^z never hits 0: proximity carries everything, counting nothing
        rep = defect_report(parse_curve("[1:exp(z)]"), W1, EUC, 40.0, n_r=4)
        assert rep.delta_proximity == pytest.approx(1.0, abs=0.02)
        assert rep.delta_counting == pytest.approx(1.0, abs=1e-9)

    def test_attained_values_have_no_defect(self):
        rep = defect_report(parse_curve("[1:exp(z)]"),
                            DivisorSum([hyperplane([1, 1])]), EUC, 60.0,
                            n_r=4)
        assert rep.delta_proximity == pytest.approx(0.0, abs=0.05)

    def test_divisor_through_center_rejected(self):
        with pytest.raises(OriginOnDivisorError):
            defect_report(parse_curve("[1:z]"), W1, EUC, 10.0)


class TestGridKnobs:
    def test_defaults(self):
        g = RGrid()
        assert g.boundary_n0 == 64 and g.tol == 1e-7

    def test_tight_tolerance_still_converges(self):
        T1 = characteristic_T(parse_curve("[1:z]"), EUC, 1.0,
                              RGrid(tol=1e-9))
        assert T1 == pytest.approx(math.log(2.0) / 2.0, abs=1e-8)
