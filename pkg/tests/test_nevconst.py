"""Filtration certificates for the growth-constant bound."""

import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nevlab import nevconst as nc
from nevlab.divisor import DivisorSum, HomogeneousPoly, hyperplane
from nevlab.gaussian import qi
from nevlab.holo import HoloExpr, ProjectiveCurve, exp_expr
from nevlab.surface import SurfaceModel

EUC = SurfaceModel.euclidean()
Z = HoloExpr.var()
ONE = HoloExpr.constant(1)

H0, H1, H2 = (hyperplane([1, 0, 0]), hyperplane([0, 1, 0]),
              hyperplane([0, 0, 1]))
D3 = DivisorSum([H0, H1, H2])
P0, P1 = hyperplane([1, 0]), hyperplane([0, 1])
DP = DivisorSum([P0, P1])

# degree-2 monomial sections of P^1, the workhorse triple
M20 = HomogeneousPoly({(2, 0): qi(1)}, 2)
M11 = HomogeneousPoly({(1, 1): qi(1)}, 2)
M02 = HomogeneousPoly({(0, 2): qi(1)}, 2)
BASES = {frozenset({0}): (M20, M11, M02), frozenset({1}): (M02, M11, M20)}

W0, W1, W2 = (HomogeneousPoly({(1, 0, 0): qi(1)}, 3),
              HomogeneousPoly({(0, 1, 0): qi(1)}, 3),
              HomogeneousPoly({(0, 0, 1): qi(1)}, 3))


class TestStratify:
    def test_coordinate_hyperplanes_p2(self):
        st_ = nc.stratify(D3, 2)
        # empty set, three singletons, three pairs, never a triple
        assert sorted(len(s) for s in st_.strata) == [0, 1, 1, 1, 2, 2, 2]
        w01 = st_.witnesses[frozenset({0, 1})]
        assert H0.eval_exact(w01).is_zero()
        assert H1.eval_exact(w01).is_zero()

    def test_two_points_p1(self):
        st_ = nc.stratify(DP, 1)
        assert sorted(len(s) for s in st_.strata) == [0, 1, 1]

    def test_four_general_hyperplanes(self):
        D4 = DivisorSum([H0, H1, H2, hyperplane([1, 1, 1])])
        st_ = nc.stratify(D4, 2)
        assert sorted(len(s) for s in st_.strata) == [0] + [1] * 4 + [2] * 6

    def test_nonlinear_meet(self):
        conic = HomogeneousPoly({(2, 0, 0): qi(1), (0, 1, 1): qi(-1)}, 3)
        st_ = nc.stratify(DivisorSum([conic, H0]), 2)
        assert frozenset({0, 1}) in st_.strata

    def test_degree_cap(self):
        quart = HomogeneousPoly({(4, 0, 0): qi(1), (0, 4, 0): qi(1),
                                 (0, 0, 4): qi(1)}, 3)
        with pytest.raises(nc.NevError):
            nc.stratify(DivisorSum([quart]), 2)


class TestComponentOrder:
    def test_monomials(self):
        sq = HomogeneousPoly({(2, 0): qi(1)}, 2)
        mixed = HomogeneousPoly({(1, 1): qi(1)}, 2)
        assert nc.component_order(sq, P0) == 2
        assert nc.component_order(mixed, P0) == 1
        assert nc.component_order(HomogeneousPoly({(0, 2): qi(1)}, 2),
                                  P0) == 0

    def test_nonlinear_component(self):
        conic = HomogeneousPoly({(2, 0, 0): qi(1), (0, 1, 1): qi(-1)}, 3)
        q = conic * conic * H0
        assert nc.component_order(q, conic) == 2
        assert nc.component_order(q, H0) == 1


class TestVerifyTriple:
    def test_hyperplane_p2_gives_three(self):
        t = nc.NevTriple(k=1, V=(W0, W1, W2),
                         stratum_bases={frozenset({0}): (W0, W1, W2)},
                         mu=Fraction(1))
        cert = nc.verify_triple(DivisorSum([H0]), t)
        assert cert.passed and cert.bound == 3
        assert all(c.achieved == 1 for c in cert.conditions)

    def test_point_pair_p1_gives_two(self):
        t = nc.NevTriple(k=2, V=(M20, M11, M02), stratum_bases=BASES,
                         mu=Fraction(3, 2))
        cert = nc.verify_triple(DP, t)
        assert cert.passed and cert.bound == 2
        for c in cert.conditions:
            assert c.achieved == 3 and c.required == 3
            assert sorted(c.orders, reverse=True) == [2, 1, 0]

    def test_overdrawn_mu_fails_with_names(self):
        t = nc.NevTriple(k=2, V=(M20, M11, M02), stratum_bases=BASES,
                         mu=Fraction(2))
        cert = nc.verify_triple(DP, t)
        assert not cert.passed
        f = cert.failures[0]
        assert f.stratum == (0,) and f.component == 0
        assert f.achieved == 3 and f.required == 4
        assert "stratum {0}" in f.describe()
        assert "component 0" in f.describe()

    def test_non_spanning_basis_rejected(self):
        with pytest.raises(nc.NevError):
            nc.verify_triple(DP, nc.NevTriple(
                k=2, V=(M20, M11, M02),
                stratum_bases={frozenset({0}): (M20, M20, M02)},
                mu=Fraction(1)))

    @settings(max_examples=40, deadline=None)
    @given(num=st.integers(1, 6), den=st.integers(1, 4))
    def test_monotone_in_mu(self, num, den):
        # passing at mu means passing at every smaller mu; 3/2 is the
        # exact threshold for this triple
        mu = Fraction(num, den)
        t = nc.NevTriple(k=2, V=(M20, M11, M02), stratum_bases=BASES, mu=mu)
        cert = nc.verify_triple(DP, t)
        assert cert.passed == (mu <= Fraction(3, 2))

    @settings(max_examples=20, deadline=None)
    @given(perm=st.permutations([0, 1, 2]))
    def test_basis_order_irrelevant(self, perm):
        reordered = {
            s: tuple(b[i] for i in perm) for s, b in BASES.items()}
        t = nc.NevTriple(k=2, V=(M20, M11, M02), stratum_bases=reordered,
                         mu=Fraction(3, 2))
        assert nc.verify_triple(DP, t).passed


class TestUpperBound:
    def test_single_hyperplane(self):
        cands = nc.monomial_filtration_candidates(DivisorSum([H0]), 2,
                                                  k_values=range(1, 4))
        nb = nc.nev_upper_bound(DivisorSum([H0]), cands)
        assert nb.value == 3

    def test_point_pair(self):
        cands = nc.monomial_filtration_candidates(DP, 1,
                                                  k_values=range(1, 7))
        assert [str(c.mu) for c in cands] == \
            ["1", "3/2", "2", "5/2", "3", "7/2"]
        nb = nc.nev_upper_bound(DP, cands)
        assert nb.value == 2

    def test_parallel_map_hook(self):
        cands = nc.monomial_filtration_candidates(DP, 1,
                                                  k_values=range(1, 7))
        ser = nc.nev_upper_bound(DP, cands)
        par = nc.nev_upper_bound(DP, cands, pmap=map)
        assert par.value == ser.value

    def test_empty_candidates_flagged_infinite(self):
        nb = nc.nev_upper_bound(DP, [])
        assert nb.value == math.inf
        assert not nb.is_finite

    def test_trivial_mu_bound(self):
        t = nc.NevTriple(k=2, V=(M20, M11, M02), stratum_bases=BASES,
                         mu=Fraction(1))
        nb = nc.nev_upper_bound(DP, [t])
        assert nb.value <= 3

    def test_certificate_serializes(self):
        cands = nc.monomial_filtration_candidates(DivisorSum([H0]), 2,
                                                  k_values=range(1, 3))
        nb = nc.nev_upper_bound(DivisorSum([H0]), cands)
        js = json.dumps(nb.to_dict(), sort_keys=True)
        assert "certificates" in js


class TestSMTFullCheck:
    def test_exponential_extremal_pair(self):
        curve = ProjectiveCurve([ONE, exp_expr(Z)])
        rs = np.linspace(5, 100, 12)
        tr = nc.smt_full_check(curve, DP, 1, 2, EUC, rs)
        assert all(tr.margin[i] + 10 >= 0 for i in tr.unflagged())
        assert tr.flagged_measure <= tr.borel_bound + 0.1

    def test_slow_curve_has_room(self):
        curve = ProjectiveCurve([ONE, Z])
        tr = nc.smt_full_check(curve, DP, 1, 2, EUC, np.linspace(5, 60, 8))
        assert min(tr.margin[i] for i in tr.unflagged()) > 0

    def test_bounded_domain_notes_liminf(self):
        curve = ProjectiveCurve([ONE, Z])
        tr = nc.smt_full_check(curve, DP, 1, 2, SurfaceModel.poincare(1.0),
                               np.linspace(2, 12, 6))
        assert tr.notes and "liminf" in tr.notes[0]
        assert all(m > 0 for m in tr.margin)

    def test_degenerate_curve_rejected(self):
        with pytest.raises(nc.NevError):
            nc.smt_full_check(ProjectiveCurve([exp_expr(Z), exp_expr(Z)]),
                              DP, 1, 2, EUC, np.linspace(5, 100, 12))


class TestVeronese:
    def test_degree_two_sections_of_plane_curve(self):
        curve = ProjectiveCurve([ONE, exp_expr(Z)])
        secs = nc.veronese_sections(curve, 2)
        assert len(secs) == 3
