"""Path engine: exit laws, occupation functionals, reproducibility."""

import math

import numpy as np
import pytest

from nevlab.exprgrammar import parse_curve
from nevlab.quadrature import green_area_integral
from nevlab.stochastic import (MCEstimate, PathPolicy,
                               dynkin_residual, exit_time_estimate,
                               mc_nevanlinna, occupation_estimate,
                               sample_exit_angle)
from nevlab.stochastic import TestFunction as Probe
from nevlab.surface import SurfaceModel

EUC = SurfaceModel.euclidean()
POI = SurfaceModel.poincare(1.0)
FAST = PathPolicy(seed=0, n_paths=8192)


def one(z):
    return np.ones(np.shape(z))


class TestExitTime:
    def test_euclidean_closed_form(self):
        # E[tau_r] = r^2 / 2 for the flat disc
        for r in (0.5, 1.5):
            est = exit_time_estimate(EUC, r, FAST)
            assert est.consistent_with(r * r / 2, sigmas=3.5)

    def test_negative_curvature_exits_sooner(self):
        r = 1.5
        est = exit_time_estimate(POI, r, FAST)
        assert est.mean < r * r / 2

    def test_equals_unit_occupation(self):
        a = exit_time_estimate(POI, 1.0, FAST)
        b = occupation_estimate(POI, 1.0, one, FAST)
        assert a.mean == b.mean and a.stderr == b.stderr


class TestOccupation:
    def test_quadratic_moment_euclid(self):
        # int G |z|^2 dA = rho^4 / 8 with the flat clock
        rho = 1.3
        est = occupation_estimate(EUC, rho, lambda z: np.abs(z) ** 2, FAST)
        assert est.consistent_with(rho ** 4 / 8, sigmas=3.5)

    def test_matches_green_quadrature_on_poincare(self):
        r = 1.0
        rho = POI.euclidean_radius(r)
        est = occupation_estimate(POI, r, lambda z: np.abs(z) ** 2, FAST)
        q = green_area_integral(
            lambda z: np.abs(z) ** 2 * POI.h(np.abs(z)), rho)
        assert est.consistent_with(q.value / math.pi, sigmas=3.5)

    def test_euclidean_clock(self):
        r = 1.0
        est = occupation_estimate(EUC, r, one, FAST, clock="euclidean")
        assert est.consistent_with(r * r / 2, sigmas=3.5)
        with pytest.raises(ValueError):
            occupation_estimate(EUC, r, one, FAST, clock="lebesgue")

    def test_odd_integrand_cancels_exactly(self):
        # antithetic partners are point reflections with identical step
        # sizes, so an odd integrand sums to zero pairwise, not just in law
        est = occupation_estimate(EUC, 1.0, lambda z: z.real,
                                  PathPolicy(seed=3, n_paths=512))
        assert est.mean == 0.0
        assert est.stderr == 0.0

    def test_shared_paths_match_standalone(self):
        phis = [one, lambda z: np.abs(z) ** 2]
        pol = PathPolicy(seed=11, n_paths=2048)
        joint = occupation_estimate(POI, 0.8, phis, pol)
        solo = [occupation_estimate(POI, 0.8, p, pol) for p in phis]
        for j, s in zip(joint, solo):
            assert j.mean == s.mean and j.stderr == s.stderr


class TestReproducibility:
    def test_same_seed_same_result(self):
        a = occupation_estimate(EUC, 1.0, one, PathPolicy(seed=9, n_paths=1024))
        b = occupation_estimate(EUC, 1.0, one, PathPolicy(seed=9, n_paths=1024))
        assert a == b

    def test_different_seed_differs(self):
        a = occupation_estimate(EUC, 1.0, one, PathPolicy(seed=1, n_paths=1024))
        b = occupation_estimate(EUC, 1.0, one, PathPolicy(seed=2, n_paths=1024))
        assert a.mean != b.mean

    def test_grouping_invariance(self):
        # each path owns its stream, so chunk/block bookkeeping must not
        # leak into the numbers at all
        base = PathPolicy(seed=4, n_paths=1000)
        a = occupation_estimate(EUC, 1.0, one, base)
        for chunk, block in ((64, 32), (1000, 512), (128, 8)):
            pol = PathPolicy(seed=4, n_paths=1000, chunk=chunk, block=block)
            b = occupation_estimate(EUC, 1.0, one, pol)
            assert a.mean == b.mean and a.stderr == b.stderr

    def test_antithetic_needs_even_count(self):
        with pytest.raises(ValueError, match="even"):
            exit_time_estimate(EUC, 1.0, PathPolicy(seed=0, n_paths=7))


class TestDynkin:
    def test_quadratic_test_function(self):
        # u = |z|^2: E[u(exit)] - u(0) - E[int (1/2) 4 dt] = rho^2 - 2 E[tau]
        tf = Probe(value=lambda z: np.abs(z) ** 2,
                          laplacian=lambda z: np.full(np.shape(z), 4.0))
        est = dynkin_residual(EUC, 1.0, tf, FAST)
        assert est.consistent_with(0.0, sigmas=3.5)

    def test_harmonic_test_function(self):
        # harmonic u: residual reduces to E[u(exit)] - u(0); still zero
        tf = Probe(value=lambda z: z.real,
                          laplacian=lambda z: np.zeros(np.shape(z)))
        est = dynkin_residual(POI, 1.0, tf, FAST)
        assert est.consistent_with(0.0, sigmas=3.5)


class TestExitAngles:
    def test_uniform_in_law(self):
        th = sample_exit_angle(EUC, 1.0, 20000, seed=0)
        assert np.all((0 <= th) & (th < 2 * math.pi))
        # first circular moment of the uniform law vanishes
        m1 = np.abs(np.mean(np.exp(1j * th)))
        assert m1 < 3.0 / math.sqrt(20000)

    def test_seeded(self):
        a = sample_exit_angle(POI, 2.0, 64, seed=5)
        b = sample_exit_angle(POI, 2.0, 64, seed=5)
        assert np.array_equal(a, b)


class TestMCNevanlinna:
    def test_characteristic_tracks_quadrature(self):
        curve = parse_curve("[1:z]")
        rep = mc_nevanlinna(curve, None, EUC, 2.0, policy=FAST)
        q = green_area_integral(curve.fs_density, 2.0)
        assert rep.T.consistent_with(q.value, sigmas=3.5)
        assert math.isnan(rep.m.mean) or rep.m.n_paths == FAST.n_paths

    def test_policy_refinement_shrinks_steps(self):
        pol = PathPolicy(seed=0, n_paths=256)
        fine = pol.refined()
        assert fine.shrink < pol.shrink
        assert fine.exit_frac < pol.exit_frac


class TestMCEstimate:
    def test_consistency_gate(self):
        est = MCEstimate(mean=1.0, stderr=0.1, n_paths=100, mean_steps=10.0)
        assert est.consistent_with(1.25, sigmas=3.0)
        assert not est.consistent_with(1.5, sigmas=3.0)
        assert est.consistent_with(1.5, sigmas=3.0, bias=0.25)
