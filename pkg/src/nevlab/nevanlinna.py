"""Characteristic, proximity and counting functions over disc exhaustions.

Conventions, fixed once for the whole package:

* the exhaustion parameter r is the geodesic radius; every integral is
  carried out in the chart over the euclidean disc |z| < rho_e(r);
* the Green function of that disc is (1/pi) log(rho_e/|z|), so counting
  terms are log(rho_e/|z_k|) and the characteristic is the Green-weighted
  area integral of the pullback curvature density;
* T_norm(r) = avg_{|z|=rho_e} log||f|| - log||f(o)|| is the boundary
  (Jensen) form of the characteristic. For the 2-norm it equals the area
  integral exactly; pairing proximity functions with the characteristic
  of the matching norm is what makes the first main theorem residual an
  exact constant, namely the Weil function of the center.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .divisor import DivisorSum, WeilSpec, pullback, weil_sum
from .holo import MeromorphicFn, ProjectiveCurve
from .quadrature import boundary_average, green_area_integral
from .roots import BoundaryZeroError, expr_zeros_in_disc
from .surface import SurfaceModel

__all__ = [
    "OriginOnDivisorError",
    "RGrid",
    "characteristic_T",
    "boundary_T",
    "ZeroTable",
    "pullback_zero_table",
    "counting_from_table",
    "counting_N",
    "proximity_m",
    "FMTReport",
    "fmt_report",
    "MeromCharacteristic",
    "merom_T",
    "CroftonEstimate",
    "crofton_T",
    "DefectReport",
    "defect_report",
]

# below this fraction of the disc radius a pullback zero is treated as
# sitting at the center; the counting function clips it to the fraction
# instead of diverging
ORIGIN_FRACTION = 1e-6
ORIGIN_CLIP = 1e-9


class OriginOnDivisorError(RuntimeError):
    """The curve meets the divisor at the center, where the identities
    under test have a logarithmic pole by design."""


@dataclass(frozen=True)
class RGrid:
    """Quadrature resolution. Defaults sit at or above the floors used
    throughout (64 boundary nodes, 128 x 12*32 area nodes) and refine
    adaptively from there."""

    boundary_n0: int = 64
    boundary_n_max: int = 1 << 17
    area_theta0: int = 128
    gauss_n: int = 32
    tol: float = 1e-7


def characteristic_T(curve: ProjectiveCurve, surface: SurfaceModel, r: float,
                     grid: RGrid = RGrid(), bundle_degree: int = 1) -> float:
    """Smooth characteristic: bundle_degree * int g_r f*(curvature) * pi.

    Computed as the area integral of log(rho_e/|z|) against the pullback
    density of the unit line form.
    """
    rho = surface.euclidean_radius(r)
    res = green_area_integral(curve.fs_density, rho, tol=grid.tol,
                              theta_n0=grid.area_theta0, gauss_n=grid.gauss_n)
    return bundle_degree * res.require_scaled(10 * grid.tol)


def boundary_T(curve: ProjectiveCurve, surface: SurfaceModel, r: float,
               spec: WeilSpec = WeilSpec("fs"), grid: RGrid = RGrid()) -> float:
    """Jensen form of the characteristic in the norm of spec.

    avg log||f|| on the rim minus log||f(o)||; with the 2-norm this matches
    characteristic_T, with the max norm it is the companion of max-norm
    Weil functions (their first-main-theorem residual is exactly constant).
    """
    rho = surface.euclidean_radius(r)

    def fn(theta: np.ndarray) -> np.ndarray:
        ls, dirs = curve.eval_projective(rho * np.exp(1j * theta))
        return ls + spec.log_norm(dirs)

    avg = boundary_average(fn, tol=grid.tol, n0=grid.boundary_n0,
                           n_max=grid.boundary_n_max)
    ls0, dir0 = curve.eval_projective(0j)
    return avg.require_scaled(10 * grid.tol) - (ls0 + float(spec.log_norm(dir0)))


@dataclass(frozen=True)
class ZeroTable:
    """Zeros of the divisor pullback in |z| < rho, weighted and sorted."""

    rho: float
    entries: Tuple[Tuple[float, int, int], ...]  # (|z|, mult * comp weight, comp index)
    origin_weight: int  # total weight sitting at the center

    def weighted_count(self) -> int:
        return self.origin_weight + sum(w for _, w, _ in self.entries)


def pullback_zero_table(curve: ProjectiveCurve, D: DivisorSum,
                        rho: float) -> ZeroTable:
    entries = []
    origin_weight = 0
    for idx, (Q, mult) in enumerate(D):
        expr = pullback(Q, curve.components)
        if expr is None or expr.is_zero():
            raise ValueError("curve maps into a divisor component")
        for zero in expr_zeros_in_disc(expr, rho):
            w = mult * zero.multiplicity
            a = abs(zero.z)
            if a < ORIGIN_FRACTION * rho:
                origin_weight += w
            else:
                entries.append((a, w, idx))
    entries.sort()
    return ZeroTable(rho, tuple(entries), origin_weight)


def counting_from_table(table: ZeroTable, rho: float) -> float:
    """N at euclidean radius rho <= table.rho, center zeros clipped."""
    if rho > table.rho * (1 + 1e-12):
        raise ValueError("counting radius exceeds the zero table radius")
    total = 0.0
    if table.origin_weight:
        warnings.warn(
            "divisor passes through the center; its counting term is "
            f"clipped at {ORIGIN_CLIP:g} of the radius", RuntimeWarning,
            stacklevel=2)
        total += table.origin_weight * math.log(1.0 / ORIGIN_CLIP)
    for a, w, _ in table.entries:
        if a >= rho:
            break
        total += w * math.log(rho / a)
    return total


def counting_N(curve: ProjectiveCurve, D: DivisorSum, surface: SurfaceModel,
               r: float, table: Optional[ZeroTable] = None) -> float:
    rho = surface.euclidean_radius(r)
    if table is None:
        table = pullback_zero_table(curve, D, rho)
    return counting_from_table(table, rho)


def proximity_m(curve: ProjectiveCurve, D: DivisorSum, surface: SurfaceModel,
                r: float, spec: WeilSpec = WeilSpec(),
                grid: RGrid = RGrid()) -> float:
    """Boundary average of the Weil function sum of D along the curve."""
    rho = surface.euclidean_radius(r)

    def fn(theta: np.ndarray) -> np.ndarray:
        _, dirs = curve.eval_projective(rho * np.exp(1j * theta))
        return weil_sum(D, dirs, spec)

    avg = boundary_average(fn, tol=grid.tol, n0=grid.boundary_n0,
                           n_max=grid.boundary_n_max)
    return avg.require_scaled(100 * grid.tol)


def _weil_at_center(curve: ProjectiveCurve, D: DivisorSum,
                    spec: WeilSpec) -> float:
    _, dir0 = curve.eval_projective(0j)
    lam = float(weil_sum(D, dir0, spec))
    if not math.isfinite(lam):
        raise OriginOnDivisorError(
            "curve meets the divisor at the center; pick a divisor (or "
            "center) off the curve's value there")
    return lam


@dataclass(frozen=True)
class FMTReport:
    """First main theorem bookkeeping over an r grid.

    residual[i] = m + N - deg(D) * T at r_values[i] should equal
    `predicted` (the center Weil value) up to quadrature and root-finding
    error; max_deviation is the sup difference actually observed.
    """

    r_values: Tuple[float, ...]
    T: Tuple[float, ...]
    m: Tuple[float, ...]
    N: Tuple[float, ...]
    residual: Tuple[float, ...]
    predicted: float
    max_deviation: float
    norm: str


def fmt_report(curve: ProjectiveCurve, D: DivisorSum, surface: SurfaceModel,
               r_values: Sequence[float], spec: WeilSpec = WeilSpec(),
               grid: RGrid = RGrid()) -> FMTReport:
    rs = sorted(float(r) for r in r_values)
    if not rs:
        raise ValueError("need at least one radius")
    predicted = _weil_at_center(curve, D, spec)
    rho_max = surface.euclidean_radius(rs[-1])
    table = pullback_zero_table(curve, D, rho_max)
    if table.origin_weight:
        raise OriginOnDivisorError(
            "divisor pullback vanishes at the center; the residual "
            "identity has no finite statement there")
    deg = D.degree
    Ts, ms, Ns, res = [], [], [], []
    for r in rs:
        T = boundary_T(curve, surface, r, spec, grid)
        m = proximity_m(curve, D, surface, r, spec, grid)
        N = counting_from_table(table, surface.euclidean_radius(r))
        Ts.append(T)
        ms.append(m)
        Ns.append(N)
        res.append(m + N - deg * T)
    dev = max(abs(x - predicted) for x in res)
    return FMTReport(tuple(rs), tuple(Ts), tuple(ms), tuple(Ns), tuple(res),
                     predicted, dev, spec.norm)


@dataclass(frozen=True)
class MeromCharacteristic:
    r: float
    m: float          # avg log+ |psi| on the rim
    N_poles: float
    T: float          # m + N_poles, the classical characteristic
    T_graph: float    # max-norm Jensen characteristic of [den : num]


def merom_T(psi: MeromorphicFn, surface: SurfaceModel, r: float,
            grid: RGrid = RGrid(),
            pole_table: Optional[ZeroTable] = None,
            graph: bool = True) -> MeromCharacteristic:
    """Classical characteristic of a meromorphic function.

    T_graph differs from T by the bounded center term
    log max(1, |psi(o)|) - gauge freedom, not substance - and the two are
    reported side by side so tests can pin the relation.  Callers that
    only need T may pass graph=False to skip the second rim integral;
    T_graph is then nan.
    """
    rho = surface.euclidean_radius(r)

    def fn(theta: np.ndarray) -> np.ndarray:
        la = psi.log_abs(rho * np.exp(1j * theta))
        return np.maximum(la, 0.0)

    m = boundary_average(fn, tol=grid.tol, n0=grid.boundary_n0,
                         n_max=grid.boundary_n_max).require_scaled(100 * grid.tol)
    if pole_table is None:
        poles = expr_zeros_in_disc(psi.den, rho)
        entries = tuple(sorted(
            (abs(p.z), p.multiplicity, 0) for p in poles
            if abs(p.z) >= ORIGIN_FRACTION * rho))
        origin = sum(p.multiplicity for p in poles
                     if abs(p.z) < ORIGIN_FRACTION * rho)
        pole_table = ZeroTable(rho, entries, origin)
    N = counting_from_table(pole_table, rho)
    if graph:
        Tg = boundary_T(psi.as_curve(), surface, r, WeilSpec("max"), grid)
    else:
        Tg = math.nan
    return MeromCharacteristic(r, m, N, m + N, Tg)


@dataclass(frozen=True)
class CroftonEstimate:
    mean: float
    stderr: float
    n_samples: int
    n_retried: int
    r: float
    seed: int


def crofton_T(curve: ProjectiveCurve, surface: SurfaceModel, r: float,
              n_samples: int = 200, seed: int = 0) -> CroftonEstimate:
    """Monte Carlo characteristic via averaged counting functions.

    Target points a on the line are drawn from the unit-mass singular
    form: log|a| standard Cauchy, phase uniform. The average of
    N(r, f, a) over that law estimates the characteristic of the singular
    metric, which stays within a bounded gauge of the smooth one. A draw
    whose level set touches the rim is retried on an infinitesimally
    inflated disc.
    """
    if len(curve.components) != 2:
        raise ValueError("point targets only make sense for curves to P^1")
    rho = surface.euclidean_radius(r)
    rng = np.random.default_rng(seed)
    xi = rng.standard_cauchy(n_samples)
    phase = rng.uniform(0.0, 2.0 * math.pi, n_samples)
    f0, f1 = curve.components
    samples = np.empty(n_samples)
    retried = 0
    for i in range(n_samples):
        a = complex(np.exp(np.clip(xi[i], -700, 700)) * np.exp(1j * phase[i]))
        expr = (f1 - f0 * a).to_float()
        total = 0.0
        for attempt in range(4):
            try:
                zeros = expr_zeros_in_disc(expr, rho * (1 + 1e-9) ** attempt)
                break
            except BoundaryZeroError:
                retried += 1
        else:
            raise BoundaryZeroError(
                "level set keeps touching the rim after inflation retries")
        for zero in zeros:
            az = max(abs(zero.z), ORIGIN_CLIP * rho)
            if az < rho:
                total += zero.multiplicity * math.log(rho / az)
        samples[i] = total
    mean = float(np.mean(samples))
    stderr = float(np.std(samples, ddof=1) / math.sqrt(n_samples)) \
        if n_samples > 1 else math.inf
    return CroftonEstimate(mean, stderr, n_samples, retried, r, seed)


@dataclass(frozen=True)
class DefectReport:
    r_values: Tuple[float, ...]
    m_ratio: Tuple[float, ...]   # m / (deg T)
    N_ratio: Tuple[float, ...]   # N / (deg T)
    delta_proximity: float       # min of m_ratio, the defect estimate
    delta_counting: float        # 1 - max of N_ratio


def defect_report(curve: ProjectiveCurve, D: DivisorSum,
                  surface: SurfaceModel, r_max: float,
                  spec: WeilSpec = WeilSpec(), n_r: int = 8,
                  grid: RGrid = RGrid()) -> DefectReport:
    """Defect estimates from the top decade [r_max/10, r_max].

    The liminf/limsup in the definitions are approximated by the extreme
    values over a geometric grid of the largest decade of radii.
    """
    _weil_at_center(curve, D, spec)
    rs = np.geomspace(r_max / 10.0, r_max, n_r)
    rho_max = surface.euclidean_radius(float(rs[-1]))
    table = pullback_zero_table(curve, D, rho_max)
    if table.origin_weight:
        raise OriginOnDivisorError(
            "defects are undefined for a divisor through the center")
    deg = D.degree
    m_ratio, N_ratio = [], []
    for r in rs:
        r = float(r)
        T = boundary_T(curve, surface, r, spec, grid)
        if T <= 0:
            raise ValueError("characteristic not positive; enlarge r_max")
        m = proximity_m(curve, D, surface, r, spec, grid)
        N = counting_from_table(table, surface.euclidean_radius(r))
        m_ratio.append(m / (deg * T))
        N_ratio.append(N / (deg * T))
    return DefectReport(tuple(float(r) for r in rs), tuple(m_ratio),
                        tuple(N_ratio), min(m_ratio), 1.0 - max(N_ratio))
