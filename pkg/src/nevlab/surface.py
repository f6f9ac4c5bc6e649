"""Radially symmetric conformal surfaces and their potential theory.

A surface is a disc {|z| < R} or the plane carrying the metric
h(|z|)|dz|^2 with smooth radial density h > 0. Conventions:

    Laplacian        Delta = (4/h) d^2/dz dzbar = (1/h) Delta_euclidean
    curvature        K    = -(2/h) d^2/dz dzbar log h
    geodesic radius  r(rho) = int_0^rho sqrt(h(s)) ds

With these normalizations poincare(a), h = 4/(a^2 (1-rho^2)^2), has
constant curvature -a^2 and rho_e(r) = tanh(a r / 2).

Everything downstream leans on one conformal-invariance fact: the Green
function of Delta/2 on the geodesic disc of radius r with pole at the
origin is (1/pi) log(rho_e(r)/|z|) regardless of h, and Brownian exit
angles are uniform. The density h only enters through the radius maps,
the running curvature floor kappa(r), and occupation-time clocks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.integrate import quad, solve_ivp
from scipy.interpolate import CubicSpline


class SurfaceError(ValueError):
    pass


def _golden_min(f: Callable, lo: float, hi: float, iters: int = 60) -> float:
    """Golden-section minimum value of f on [lo, hi]."""
    if hi <= lo:
        return f(lo)
    invphi = (math.sqrt(5) - 1) / 2
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return min(fc, fd)


class MetricProfile:
    """Radial metric density rho -> h(rho) on a disc or the plane."""

    def __init__(self, kind: str, domain_radius: float,
                 h_func: Optional[Callable] = None,
                 a: float = 1.0,
                 table: Optional[tuple] = None):
        if domain_radius <= 0:
            raise SurfaceError("domain radius must be positive")
        self.kind = kind
        self.domain_radius = float(domain_radius)
        self.a = float(a)
        self._h_func = h_func
        self._table = table
        self._logh_spline = None
        self._length_spline = None

    # -- factories -------------------------------------------------------------

    @staticmethod
    def euclidean() -> "MetricProfile":
        return MetricProfile("euclidean", math.inf)

    @staticmethod
    def poincare(a: float = 1.0) -> "MetricProfile":
        if a <= 0:
            raise SurfaceError("poincare scale must be positive")
        return MetricProfile("poincare", 1.0, a=a)

    @staticmethod
    def from_callable(h: Callable, domain_radius: float) -> "MetricProfile":
        return MetricProfile("callable", domain_radius, h_func=h)

    @staticmethod
    def from_table(rhos, hs, domain_radius: float) -> "MetricProfile":
        rhos = np.asarray(rhos, dtype=float)
        hs = np.asarray(hs, dtype=float)
        if rhos.ndim != 1 or rhos.size < 4 or rhos.size != hs.size:
            raise SurfaceError("table needs matching 1-d arrays, length >= 4")
        if np.any(np.diff(rhos) <= 0) or rhos[0] != 0.0:
            raise SurfaceError("table radii must start at 0 and increase")
        if np.any(hs <= 0):
            raise SurfaceError("metric density must be positive")
        return MetricProfile("table", domain_radius, table=(rhos, hs))

    # -- density and its logarithmic derivatives ---------------------------------

    def h(self, rho):
        rho = np.asarray(rho, dtype=float)
        if self.kind == "euclidean":
            return np.ones_like(rho)
        if self.kind == "poincare":
            return 4.0 / (self.a ** 2 * (1.0 - rho ** 2) ** 2)
        if self.kind == "callable":
            return np.asarray(self._h_func(rho), dtype=float)
        spl = self._table_spline()
        return np.exp(spl(rho))

    def _table_spline(self) -> CubicSpline:
        if self._logh_spline is None:
            if self.kind == "table":
                rhos, hs = self._table
                vals = np.log(hs)
            else:
                # dense sample of a callable profile; radial smoothness gives
                # zero slope of log h at the origin
                rmax = self.domain_radius if math.isfinite(self.domain_radius) else 64.0
                rhos = np.linspace(0.0, rmax * (1 - 1e-9), 4097)
                vals = np.log(self.h(rhos))
            self._logh_spline = CubicSpline(rhos, vals, bc_type=((1, 0.0), "not-a-knot"))
        return self._logh_spline

    def curvature(self, rho):
        """K = -(2/h) dd-bar log h = -(1/2h)(u'' + u'/rho), u = log h."""
        rho = np.asarray(rho, dtype=float)
        if self.kind == "euclidean":
            return np.zeros_like(rho)
        if self.kind == "poincare":
            return np.full_like(rho, -self.a ** 2)
        spl = self._table_spline()
        u1 = spl(rho, 1)
        u2 = spl(rho, 2)
        with np.errstate(divide="ignore", invalid="ignore"):
            lap = np.where(rho > 1e-12, u2 + u1 / np.where(rho > 0, rho, 1.0), 2 * u2)
        return -lap / (2.0 * self.h(rho))


def curvature_at(profile: MetricProfile, rho_e):
    """Gauss curvature of the profile at euclidean radius rho_e."""
    rho = np.asarray(rho_e, dtype=float)
    if np.any(rho < 0) or np.any(rho >= profile.domain_radius):
        raise SurfaceError("rho_e outside the chart")
    out = profile.curvature(rho)
    return float(out) if np.isscalar(rho_e) else out


class SurfaceModel:
    """A metric profile together with cached radius maps and kappa."""

    def __init__(self, profile: MetricProfile):
        self.profile = profile
        self._length_cache = None
        self._kappa_cache = {}

    # -- constructors mirrored for convenience -----------------------------------

    @staticmethod
    def euclidean() -> "SurfaceModel":
        return SurfaceModel(MetricProfile.euclidean())

    @staticmethod
    def poincare(a: float = 1.0) -> "SurfaceModel":
        return SurfaceModel(MetricProfile.poincare(a))

    @property
    def domain_radius(self) -> float:
        return self.profile.domain_radius

    def h(self, rho):
        return self.profile.h(rho)

    def curvature(self, rho):
        return self.profile.curvature(rho)

    # -- radius maps ---------------------------------------------------------------

    def _length_interp(self):
        """Monotone sampled geodesic length rho -> l(rho) for Newton seeds."""
        if self._length_cache is None:
            R = self.domain_radius
            if math.isfinite(R):
                # approach the rim geometrically: hyperbolic-type profiles
                # have l -> inf there
                base = 1.0 - np.geomspace(1.0, 1e-12, 1200)
                rhos = np.concatenate(([0.0], base[1:] * R, [R * (1 - 1e-12)]))
                rhos = np.unique(rhos)
            else:
                rhos = np.concatenate(([0.0], np.geomspace(1e-6, 1e6, 1600)))
            sq = np.sqrt(self.profile.h(rhos))
            spl = CubicSpline(rhos, sq)
            lengths = np.concatenate(([0.0], np.cumsum(
                [spl.integrate(a, b) for a, b in zip(rhos[:-1], rhos[1:])])))
            self._length_cache = (rhos, lengths)
        return self._length_cache

    def geodesic_radius(self, rho_e: float) -> float:
        """r(rho_e) = int_0^rho_e sqrt(h)."""
        if rho_e < 0 or rho_e >= self.domain_radius * (1 + 1e-15):
            raise SurfaceError("euclidean radius outside the chart")
        kind = self.profile.kind
        if kind == "euclidean":
            return float(rho_e)
        if kind == "poincare":
            return float(2.0 / self.profile.a * np.arctanh(rho_e))
        val, _ = quad(lambda s: math.sqrt(float(self.profile.h(s))), 0.0, rho_e,
                      limit=200, epsabs=1e-13, epsrel=1e-12)
        return float(val)

    def euclidean_radius(self, r: float) -> float:
        """Inverse of geodesic_radius; Newton with exact slope sqrt(h)."""
        if r < 0:
            raise SurfaceError("geodesic radius must be nonnegative")
        if r == 0:
            return 0.0
        kind = self.profile.kind
        if kind == "euclidean":
            return float(r)
        if kind == "poincare":
            return float(np.tanh(self.profile.a * r / 2.0))
        rhos, lengths = self._length_interp()
        if r >= lengths[-1]:
            raise SurfaceError("geodesic radius beyond the chart")
        i = int(np.searchsorted(lengths, r))
        rho = float(np.interp(r, lengths, rhos))
        hi = self.domain_radius if math.isfinite(self.domain_radius) else math.inf
        for _ in range(60):
            ell = self.geodesic_radius(rho)
            slope = math.sqrt(float(self.profile.h(rho)))
            step = (ell - r) / slope
            rho_new = rho - step
            if rho_new <= 0:
                rho_new = rho / 2
            if math.isfinite(hi) and rho_new >= hi:
                rho_new = (rho + hi) / 2
            if abs(rho_new - rho) < 1e-15 * max(1.0, rho):
                rho = rho_new
                break
            rho = rho_new
        return float(rho)

    # -- kappa: running curvature floor ---------------------------------------------

    def kappa(self, r: float) -> float:
        """min K over the closed geodesic disc of radius r (<= 0 in scope)."""
        key = round(float(r), 14)
        got = self._kappa_cache.get(key)
        if got is not None:
            return got
        rho = self.euclidean_radius(r)
        kind = self.profile.kind
        if kind == "euclidean":
            val = 0.0
        elif kind == "poincare":
            val = -self.profile.a ** 2
        else:
            grid = np.linspace(0.0, rho, 2048)
            vals = self.profile.curvature(grid)
            j = int(np.argmin(vals))
            lo = grid[max(j - 1, 0)]
            hi = grid[min(j + 1, grid.size - 1)]
            val = _golden_min(lambda s: float(self.profile.curvature(s)), lo, hi)
            val = min(val, float(np.min(vals)))
        self._kappa_cache[key] = val
        return val

    # -- Green function and harmonic measure -------------------------------------------

    def green(self, r: float, z):
        """g_r(o, z) = (1/pi) log(rho_e(r)/|z|), zero on the rim.

        Conformally invariant: h never appears. Raises at the pole and
        outside the closed disc.
        """
        rho = self.euclidean_radius(r)
        za = np.asarray(z, dtype=complex)
        az = np.abs(za)
        if np.any(az == 0):
            raise SurfaceError("Green function evaluated at its pole")
        if np.any(az > rho * (1 + 1e-12)):
            raise SurfaceError("point outside the geodesic disc")
        out = np.log(rho / az) / math.pi
        return float(out) if np.isscalar(z) or za.ndim == 0 else out

    def harmonic_measure_density(self, r: float, theta):
        """Exit-angle density of Brownian motion from the center: 1/(2 pi)."""
        th = np.asarray(theta, dtype=float)
        out = np.full_like(th, 1.0 / (2 * math.pi))
        return float(out) if np.isscalar(theta) else out


# -- module-level functional forms of the operations --------------------------------


def geodesic_radius(surface: SurfaceModel, rho_e: float) -> float:
    return surface.geodesic_radius(rho_e)


def euclidean_radius(surface: SurfaceModel, r: float) -> float:
    return surface.euclidean_radius(r)


def kappa(surface: SurfaceModel, r: float) -> float:
    return surface.kappa(r)


def green(surface: SurfaceModel, r: float, z):
    return surface.green(r, z)


def harmonic_measure_density(surface: SurfaceModel, r: float, theta):
    return surface.harmonic_measure_density(r, theta)


# -- comparison ODE -------------------------------------------------------------------


@dataclass
class JacobiSolution:
    """Solution of G'' + kappa(t) G = 0, G(0) = 0, G'(0) = 1.

    kappa must be a nonpositive, nonincreasing curvature floor. The
    standard comparison facts are enforced on construction:
    G(t) >= t, and G(t) <= t exp(t sqrt(-kappa(t))).
    """

    kappa_floor: Callable
    r_max: float
    tol: float = 1e-13
    _dense: object = field(default=None, repr=False)
    grid: np.ndarray = field(default=None, repr=False)
    values: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        if self.r_max <= 0:
            raise SurfaceError("r_max must be positive")

        def rhs(t, y):
            return [y[1], -self.kappa_floor(t) * y[0]]

        # DOP853: its dense output is high order, which the solver tol
        # alone does not buy (RK45 interpolants lose 4 digits here)
        sol = solve_ivp(rhs, (0.0, self.r_max), [0.0, 1.0], method="DOP853",
                        rtol=self.tol, atol=self.tol, dense_output=True)
        if not sol.success:
            raise SurfaceError(f"comparison ODE failed: {sol.message}")
        self._dense = sol.sol
        self.grid = np.linspace(0.0, self.r_max, 513)
        self.values = self.G(self.grid)
        self._check_invariants()

    def G(self, t):
        ta = np.asarray(t, dtype=float)
        out = self._dense(np.atleast_1d(ta))[0]
        out = out.reshape(ta.shape)
        return float(out) if np.isscalar(t) else out

    def Gprime(self, t):
        ta = np.asarray(t, dtype=float)
        out = self._dense(np.atleast_1d(ta))[1]
        out = out.reshape(ta.shape)
        return float(out) if np.isscalar(t) else out

    def integral_inv_G(self, a: float, b: float) -> float:
        """int_a^b dt / G(t); needs 0 < a <= b <= r_max."""
        if not (0 < a <= b <= self.r_max * (1 + 1e-12)):
            raise SurfaceError("integration limits must satisfy 0 < a <= b <= r_max")
        if a == b:
            return 0.0
        val, _ = quad(lambda t: 1.0 / float(self._dense(t)[0]), a, b,
                      limit=200, epsabs=1e-12, epsrel=1e-10)
        return float(val)

    def _check_invariants(self):
        t = self.grid[1:]
        g = self.values[1:]
        slack = 1e-7 * np.maximum(1.0, t)
        if np.any(g < t - slack):
            raise SurfaceError("comparison solution dipped below G(t) = t")
        kap = np.array([self.kappa_floor(x) for x in t])
        if np.any(kap > 1e-12):
            raise SurfaceError("curvature floor must be nonpositive")
        upper = t * np.exp(t * np.sqrt(np.maximum(-kap, 0.0)))
        if np.any(g > upper * (1 + 1e-6) + slack):
            raise SurfaceError("comparison solution exceeded its exponential bound")
        if self.r_max >= 1.0:
            v = self.integral_inv_G(1.0, self.r_max)
            if v > math.log(self.r_max) + 1e-8:
                raise SurfaceError("int_1^r dt/G exceeded log r")


def jacobi_solve(kappa_floor: Callable, r_max: float, tol: float = 1e-13) -> JacobiSolution:
    return JacobiSolution(kappa_floor=kappa_floor, r_max=r_max, tol=tol)


# -- Green lower bound ------------------------------------------------------------------


@dataclass
class GreenBoundReport:
    eta: float
    r: float
    ratios: np.ndarray
    min_ratio: float
    positive: bool


def green_lower_bound_check(surface: SurfaceModel, eta: float, r: float,
                            samples: int = 256, rng=None) -> GreenBoundReport:
    """Empirical floor of  g_r(o,x) int_eta^r dt/G  /  int_{r(x)}^r dt/G.

    The comparison principle promises a positive constant independent of
    x with geodesic radius in (eta, r); no explicit constant is claimed,
    so the report only asserts positivity of the observed infimum.
    """
    if not (0 < eta < r):
        raise SurfaceError("need 0 < eta < r")
    rng = np.random.default_rng(0) if rng is None else rng
    sol = jacobi_solve(lambda t: min(surface.kappa(max(t, 1e-9)), 0.0), r)
    denom_full = sol.integral_inv_G(eta, r)
    rho_r = surface.euclidean_radius(r)
    rs = rng.uniform(eta * (1 + 1e-6), r * (1 - 1e-6), size=samples)
    ratios = np.empty(samples)
    for i, rx in enumerate(rs):
        gx = math.log(rho_r / surface.euclidean_radius(rx)) / math.pi
        tail = sol.integral_inv_G(rx, r)
        ratios[i] = gx * denom_full / tail if tail > 0 else math.inf
    mn = float(np.min(ratios))
    return GreenBoundReport(eta=eta, r=r, ratios=ratios, min_ratio=mn,
                            positive=bool(mn > 0))
