"""Growth-inequality harnesses over radius grids.

Every bound of the slow-term family has the shape

    LHS(r) <= main(r) + c1*log T(r) + |kappa(r)| r^2 + log+ log r + O(1)

outside an exceptional set of radii of finite measure. The O(1) is not
knowable, so each harness records the full right-hand decomposition per
radius together with margin = RHS - LHS, and assertions are made against
declared slack constants at unflagged radii only. Flagging uses the Borel
growth mechanism: intervals where the measured characteristic grows
faster than T log^{1+delta} T are excluded and their total measure is
reported (it must stay below 1/delta, up to grid resolution).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np

from .divisor import (DivisorError, DivisorSum, HomogeneousPoly, WeilSpec,
                      general_position_check, pullback, weil_component)
from .gaussian import exact_rank
from .holo import (MeromorphicFn, ProjectiveCurve, VectorField,
                   linearly_independent, log_wronskian_eval)
from .nevanlinna import (ORIGIN_FRACTION, RGrid, ZeroTable,
                         counting_from_table, merom_T)
from .quadrature import boundary_average, green_area_integral
from .roots import expr_zeros_in_disc
from .stochastic import PathPolicy, occupation_estimate
from .surface import SurfaceModel

__all__ = [
    "QuadratureNodeError",
    "InequalityTrace",
    "BorelReport",
    "borel_exceptional",
    "log_derivative_m",
    "ldl_report",
    "derivative_growth_check",
    "calculus_lemma_report",
    "max_sum_weil_boundary",
    "cartan_smt_report",
    "log_wronskian_proximity",
]


class QuadratureNodeError(RuntimeError):
    """A boundary node sat on a singularity and refused to be nudged off."""


def _logplus(x: float) -> float:
    return math.log(x) if x > 1.0 else 0.0


def _loglog(r: float) -> float:
    """log+ log r, zero whenever log r <= 1."""
    return math.log(math.log(r)) if r > math.e else 0.0


def _curvature_term(surface: SurfaceModel, r: float) -> float:
    return abs(surface.kappa(r)) * r * r


def _finite_nodes(fn: Callable[[np.ndarray], np.ndarray]):
    """Wrap a boundary integrand so singular nodes get nudged sideways.

    Zeros and poles crossing the rim produce isolated +-inf/nan samples;
    the integral itself is finite, so shifting the offending angles by a
    few nanoradians changes nothing at quadrature accuracy.
    """

    def wrapped(theta: np.ndarray) -> np.ndarray:
        vals = np.asarray(fn(theta), dtype=float)
        shift = 0.0
        for _ in range(5):
            bad = ~np.isfinite(vals)
            if not bad.any():
                return vals
            shift += 1e-9
            vals = vals.copy()
            vals[bad] = np.asarray(fn(theta[bad] + shift), dtype=float)
        raise QuadratureNodeError(
            "boundary integrand stayed singular after node perturbation")

    return wrapped


# -- trace and report types ---------------------------------------------------------


@dataclass(frozen=True)
class InequalityTrace:
    """Per-radius decomposition of a growth bound.

    margin[i] = main + log_T + curvature + loglog - lhs at r_values[i].
    Flagged radii carry a reason and are excluded from assertions; their
    total length (from the Borel mechanism) is flagged_measure, to be
    compared with borel_bound. r0 is the first unflagged radius at which
    the bound is active (None when it never activates).
    """

    name: str
    r_values: Tuple[float, ...]
    lhs: Tuple[float, ...]
    main: Tuple[float, ...]
    log_T: Tuple[float, ...]
    curvature: Tuple[float, ...]
    loglog: Tuple[float, ...]
    margin: Tuple[float, ...]
    flagged: Tuple[bool, ...]
    reasons: Tuple[str, ...]
    ratio: Optional[Tuple[float, ...]]
    flagged_measure: float
    borel_bound: float
    r0: Optional[float]
    slack_note: str
    notes: Tuple[str, ...] = ()

    def __post_init__(self):
        n = len(self.r_values)
        for name in ("lhs", "main", "log_T", "curvature", "loglog",
                     "margin", "flagged", "reasons"):
            if len(getattr(self, name)) != n:
                raise ValueError(f"field {name} does not match the r grid")
        if self.ratio is not None and len(self.ratio) != n:
            raise ValueError("ratio does not match the r grid")
        for i in range(n):
            if self.flagged[i] and not self.reasons[i]:
                raise ValueError("flagged radius without a reason")
            if not self.flagged[i] and not math.isfinite(self.margin[i]):
                raise ValueError("non-finite margin at an unflagged radius")

    def unflagged(self) -> Tuple[int, ...]:
        return tuple(i for i, f in enumerate(self.flagged) if not f)

    def min_margin(self) -> float:
        idx = self.unflagged()
        if not idx:
            return math.inf
        return min(self.margin[i] for i in idx)

    def max_ratio(self, r_min: float = 0.0) -> float:
        if self.ratio is None:
            raise ValueError(f"trace {self.name!r} records no ratio")
        vals = [self.ratio[i] for i in self.unflagged()
                if self.r_values[i] >= r_min]
        return max(vals) if vals else -math.inf

    def to_dict(self) -> Dict:
        def num(x):
            if x is None:
                return None
            x = float(x)
            return x if math.isfinite(x) else None

        points = []
        for i, r in enumerate(self.r_values):
            points.append({
                "r": r,
                "lhs": num(self.lhs[i]),
                "main": num(self.main[i]),
                "log_T": num(self.log_T[i]),
                "curvature": num(self.curvature[i]),
                "loglog": num(self.loglog[i]),
                "margin": num(self.margin[i]),
                "ratio": num(self.ratio[i]) if self.ratio is not None else None,
                "flagged": self.flagged[i],
                "reason": self.reasons[i],
            })
        return {
            "name": self.name,
            "points": points,
            "flagged_measure": self.flagged_measure,
            "borel_bound": num(self.borel_bound),
            "r0": self.r0,
            "slack_note": self.slack_note,
            "notes": list(self.notes),
        }


@dataclass(frozen=True)
class BorelReport:
    """Where a monotone growth table outruns T log^{1+delta} T.

    total_measure collects the flagged intervals; for any table whose
    underlying function satisfies the growth hypothesis it stays below
    c_phi = 1/delta, up to one grid cell (grid_resolution).
    """

    delta: float
    intervals: Tuple[Tuple[float, float], ...]
    total_measure: float
    c_phi: float
    grid_resolution: float
    row_flags: Tuple[bool, ...] = field(repr=False, default=())

    def covers(self, r: float) -> bool:
        return any(lo <= r <= hi for lo, hi in self.intervals)


def _merge_intervals(spans):
    merged = []
    for lo, hi in sorted(spans):
        if merged and lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return tuple((lo, hi) for lo, hi in merged)


def borel_exceptional(samples, delta: float) -> BorelReport:
    """Flag grid intervals where a difference quotient beats the growth bound.

    samples is a table of (r, T(r)) rows with r strictly increasing and T
    strictly positive and non-decreasing. An interval [r_i, r_{i+1}] is
    flagged when (T_{i+1}-T_i)/(r_{i+1}-r_i) exceeds the right-endpoint
    value of T log^{1+delta} T; by the mean value theorem the interval
    then genuinely contains a radius violating the differential bound.
    Intervals whose right endpoint has T < e are outside the lemma's
    active range and never flagged.
    """
    arr = np.asarray(samples, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] < 3:
        raise ValueError("need a table of at least 3 rows (r, T)")
    if delta <= 0:
        raise ValueError("delta must be positive")
    rs, Ts = arr[:, 0], arr[:, 1]
    if np.any(np.diff(rs) <= 0):
        raise ValueError("radii must be strictly increasing")
    if np.any(Ts <= 0):
        raise ValueError("T samples must be strictly positive")
    if np.any(np.diff(Ts) < -1e-9 * Ts[:-1]):
        raise ValueError("T samples must be non-decreasing")

    n = rs.size
    flags = np.zeros(n, dtype=bool)
    spans = []
    for i in range(n - 1):
        t_hi = Ts[i + 1]
        if t_hi < math.e:
            continue
        dq = (Ts[i + 1] - Ts[i]) / (rs[i + 1] - rs[i])
        bound = t_hi * math.log(t_hi) ** (1.0 + delta)
        if dq > bound * (1 + 1e-12):
            spans.append((rs[i], rs[i + 1]))
            flags[i] = flags[i + 1] = True
    intervals = _merge_intervals(spans)
    total = float(sum(hi - lo for lo, hi in intervals))
    resolution = float(np.max(np.diff(rs)))
    return BorelReport(float(delta), intervals, total, 1.0 / float(delta),
                       resolution, tuple(bool(f) for f in flags))


def _growth_flags(rs, Ts, delta):
    """Borel row flags for a measured characteristic (noise-tolerant).

    Quadrature jitter can dent monotonicity at the last digit, so the
    table is clamped to its running maximum before testing. Rows where T
    has not yet reached e are left unflagged: the growth lemma is silent
    below its activation point.
    """
    Ts = np.maximum.accumulate(np.asarray(Ts, dtype=float))
    rs = np.asarray(rs, dtype=float)
    if rs.size < 3 or np.any(Ts <= 0):
        n = rs.size
        return (np.zeros(n, dtype=bool),
                BorelReport(float(delta), (), 0.0, 1.0 / float(delta),
                            float(np.max(np.diff(rs))) if n > 1 else 0.0,
                            (False,) * n))
    rep = borel_exceptional(np.column_stack([rs, Ts]), delta)
    return np.asarray(rep.row_flags, dtype=bool), rep


# -- logarithmic derivative bound ---------------------------------------------------


def _reject_constant(psi: MeromorphicFn, field_: VectorField):
    if psi.xderive(field_, 1).num.is_zero():
        raise ValueError("the function is constant along the field")


def log_derivative_m(psi: MeromorphicFn, field_: VectorField, k: int,
                     surface: SurfaceModel, r: float,
                     grid: RGrid = RGrid()) -> float:
    """Boundary average of log+ |X^k(psi)/psi|.

    The k-th derivative along the field is formed symbolically; the ratio
    is evaluated through log-magnitudes so huge exponential factors cancel
    before any floating overflow can happen.
    """
    if k < 1:
        raise ValueError("derivative order must be >= 1")
    _reject_constant(psi, field_)
    dk = psi.xderive(field_, k)
    num, den = psi.num, psi.den
    rho = surface.euclidean_radius(r)

    def fn(theta: np.ndarray) -> np.ndarray:
        z = rho * np.exp(1j * theta)
        lk, _ = dk.num.eval_log(z)
        ln, _ = num.eval_log(z)
        ld, _ = den.eval_log(z)
        # X^k(psi)/psi = N_k / (den^k * num)
        return np.maximum(lk - k * ld - ln, 0.0)

    avg = boundary_average(_finite_nodes(fn), tol=grid.tol,
                           n0=grid.boundary_n0, n_max=grid.boundary_n_max)
    return avg.require_scaled(100 * grid.tol)


def _den_pole_table(psi: MeromorphicFn, rho: float, raise_by: int = 0) -> ZeroTable:
    """Pole table of X^{raise_by}(psi): each denominator zero of order m
    becomes a pole of order m + raise_by (the field coefficient never
    vanishes in scope, so differentiation raises orders by exactly one)."""
    poles = expr_zeros_in_disc(psi.den, rho)
    entries = []
    origin = 0
    for p in poles:
        w = p.multiplicity + raise_by
        if abs(p.z) < ORIGIN_FRACTION * rho:
            origin += w
        else:
            entries.append((abs(p.z), w, 0))
    return ZeroTable(rho, tuple(sorted(entries)), origin)


def ldl_report(psi: MeromorphicFn, field_: VectorField, k: int,
               surface: SurfaceModel, rgrid: Sequence[float],
               delta: float = 0.1, grid: RGrid = RGrid()) -> InequalityTrace:
    """Trace of m(r, X^k(psi)/psi) against (3k/2) log T + error terms.

    ratio[i] = lhs / ((3k/2) log+ T + |kappa| r^2 + log+ log r + 1); the
    bound predicts limsup ratio <= 1 for unbounded T. Radii are flagged
    by the Borel mechanism on the measured characteristic, plus wherever
    T has not yet reached e (the bound says nothing there).
    """
    if k < 1:
        raise ValueError("derivative order must be >= 1")
    rs = sorted(float(r) for r in rgrid)
    if len(rs) < 3:
        raise ValueError("need at least 3 radii")
    _reject_constant(psi, field_)
    rho_max = surface.euclidean_radius(rs[-1])
    poles = _den_pole_table(psi, rho_max)

    lhs, main, curv, llog, Ts = [], [], [], [], []
    for r in rs:
        T = merom_T(psi, surface, r, grid, pole_table=poles, graph=False).T
        Ts.append(T)
        lhs.append(log_derivative_m(psi, field_, k, surface, r, grid))
        main.append(1.5 * k * _logplus(T))
        curv.append(_curvature_term(surface, r))
        llog.append(_loglog(r))

    bflags, brep = _growth_flags(rs, Ts, delta)
    flags, reasons = [], []
    for i, T in enumerate(Ts):
        if bflags[i]:
            flags.append(True)
            reasons.append("growth quotient exceeds the Borel bound")
        elif T < math.e:
            flags.append(True)
            reasons.append("characteristic below e; bound not active")
        else:
            flags.append(False)
            reasons.append("")
    margin = [main[i] + curv[i] + llog[i] - lhs[i] for i in range(len(rs))]
    ratio = [lhs[i] / (main[i] + curv[i] + llog[i] + 1.0)
             for i in range(len(rs))]
    r0 = next((rs[i] for i in range(len(rs)) if not flags[i]), None)
    return InequalityTrace(
        name="ldl", r_values=tuple(rs), lhs=tuple(lhs), main=tuple(main),
        log_T=(0.0,) * len(rs), curvature=tuple(curv), loglog=tuple(llog),
        margin=tuple(margin), flagged=tuple(flags), reasons=tuple(reasons),
        ratio=tuple(ratio), flagged_measure=brep.total_measure,
        borel_bound=brep.c_phi, r0=r0,
        slack_note=("main = 1.5*k*log+ T; ratio denominator adds +1; "
                    "acceptance asserts ratio <= 1 + slack at unflagged r"))


def derivative_growth_check(psi: MeromorphicFn, field_: VectorField, k: int,
                            surface: SurfaceModel, rgrid: Sequence[float],
                            delta: float = 0.1,
                            grid: RGrid = RGrid()) -> InequalityTrace:
    """Margins of 2^k T(r, psi) + log+ T + |kappa| r^2 + log+ log r
    against T(r, X^k psi)."""
    if k < 1:
        raise ValueError("derivative order must be >= 1")
    rs = sorted(float(r) for r in rgrid)
    if len(rs) < 3:
        raise ValueError("need at least 3 radii")
    _reject_constant(psi, field_)
    dk = psi.xderive(field_, k)
    rho_max = surface.euclidean_radius(rs[-1])
    poles = _den_pole_table(psi, rho_max)
    poles_k = _den_pole_table(psi, rho_max, raise_by=k)

    lhs, main, logT, curv, llog, Ts = [], [], [], [], [], []
    for r in rs:
        T = merom_T(psi, surface, r, grid, pole_table=poles, graph=False).T
        Tk = merom_T(dk, surface, r, grid, pole_table=poles_k, graph=False).T
        Ts.append(T)
        lhs.append(Tk)
        main.append((2.0 ** k) * T)
        logT.append(_logplus(T))
        curv.append(_curvature_term(surface, r))
        llog.append(_loglog(r))

    bflags, brep = _growth_flags(rs, Ts, delta)
    flags = [bool(b) for b in bflags]
    reasons = ["growth quotient exceeds the Borel bound" if b else ""
               for b in flags]
    margin = [main[i] + logT[i] + curv[i] + llog[i] - lhs[i]
              for i in range(len(rs))]
    r0 = next((rs[i] for i in range(len(rs)) if not flags[i]), None)
    return InequalityTrace(
        name="derivative_growth", r_values=tuple(rs), lhs=tuple(lhs),
        main=tuple(main), log_T=tuple(logT), curvature=tuple(curv),
        loglog=tuple(llog), margin=tuple(margin), flagged=tuple(flags),
        reasons=tuple(reasons), ratio=None,
        flagged_measure=brep.total_measure, borel_bound=brep.c_phi, r0=r0,
        slack_note=("lhs = T(r, X^k psi); assertions allow an additive "
                    "constant slack at unflagged r"))


# -- exit value vs occupation -------------------------------------------------------


def _screen_density(kfun, rho: float):
    """Cheap admissibility screen: nonnegative, bounded at the center,
    and no power blowup steep enough to break local integrability."""
    angles = np.exp(1j * np.linspace(0.0, 2 * math.pi, 8, endpoint=False))
    v0 = np.asarray(kfun(np.zeros(1, dtype=complex)), dtype=float)
    if not np.all(np.isfinite(v0)):
        raise ValueError("density must be bounded at the center")
    shells = []
    for s in (1e-4 * rho, 1e-3 * rho):
        vals = np.asarray(kfun(s * angles), dtype=float)
        if np.any(vals < 0) or np.any(~np.isfinite(vals) & (vals < 0)):
            raise ValueError("density must be nonnegative")
        shells.append(float(np.mean(np.minimum(vals, 1e300))))
    if np.any(v0 < 0):
        raise ValueError("density must be nonnegative")
    lo, hi = shells[1], shells[0]
    if hi > 0 and lo > 0:
        p = math.log10(hi / lo)  # v ~ |z|^(-p) between the probe shells
        if p >= 1.95:
            raise ValueError(
                "density grows like |z|^-2 or worse near the center; "
                "the occupation integral does not converge")
    elif not math.isfinite(hi):
        raise ValueError("density unbounded on the inner probe shell")


def calculus_lemma_report(surface: SurfaceModel, kfun, rgrid: Sequence[float],
                          policy: Optional[PathPolicy] = None,
                          delta: float = 0.1, C: float = 1.0,
                          grid: RGrid = RGrid()) -> InequalityTrace:
    """Exit-value expectation against the occupation-time bound.

    Per radius: lhs = E[k at exit] (rim quadrature; the exit law from the
    center is uniform), occupation = E[int k dt] (Green quadrature of
    k * h), and main = occupation * exp(r sqrt(-kappa)) * log r * (1+F)
    with F the iterated-log growth factor evaluated at khat =
    occupation * log(r)/C. The existential constant is absorbed by
    declaring C (default 1). A path policy adds a Monte Carlo cross-check
    of the occupation side; disagreement beyond 4 sigma flags the radius.
    """
    rs = sorted(float(r) for r in rgrid)
    if len(rs) < 3:
        raise ValueError("need at least 3 radii")
    rho_max = surface.euclidean_radius(rs[-1])
    _screen_density(kfun, rho_max)
    h = surface.h

    lhs, main, ratio, khats, notes = [], [], [], [], []
    mc_bad = [False] * len(rs)
    for i, r in enumerate(rs):
        rho = surface.euclidean_radius(r)

        def rim(theta: np.ndarray) -> np.ndarray:
            return np.asarray(kfun(rho * np.exp(1j * theta)), dtype=float)

        def dens(z: np.ndarray) -> np.ndarray:
            return np.asarray(kfun(z), dtype=float) * h(np.abs(z))

        exit_side = boundary_average(_finite_nodes(rim), tol=grid.tol,
                                     n0=grid.boundary_n0,
                                     n_max=grid.boundary_n_max)
        occupation = green_area_integral(dens, rho, tol=grid.tol,
                                         theta_n0=grid.area_theta0,
                                         gauss_n=grid.gauss_n)
        e_exit = exit_side.require_scaled(100 * grid.tol)
        e_occ = occupation.require_scaled(100 * grid.tol) / math.pi

        if policy is not None:
            est = occupation_estimate(surface, r, kfun, policy)
            if not est.consistent_with(e_occ, sigmas=4.0):
                mc_bad[i] = True
            notes.append(f"r={r:g}: mc occupation {est.mean:.6g} "
                         f"+- {est.stderr:.2g}, quadrature {e_occ:.6g}")

        sq = math.sqrt(max(0.0, -surface.kappa(r)))
        khat = (math.log(r) * e_occ / C) if r > 1 else math.nan
        if r > 1 and e_occ > 0:
            lk = _logplus(khat)
            inner = r * math.exp(min(r * sq, 700.0)) * khat * lk ** (1 + delta)
            F = (lk * _logplus(inner)) ** (1 + delta)
            denom = e_occ * math.exp(min(r * sq, 700.0)) * math.log(r) * (1 + F)
        else:
            denom = math.nan
        lhs.append(e_exit)
        main.append(denom)
        ratio.append(e_exit / denom if denom and math.isfinite(denom)
                     else math.nan)
        khats.append(khat if math.isfinite(khat) else 0.0)

    bflags, brep = _growth_flags(rs, khats, delta)
    flags, reasons = [], []
    for i, r in enumerate(rs):
        if r <= 1:
            flags.append(True)
            reasons.append("bound stated for r > 1 only")
        elif mc_bad[i]:
            flags.append(True)
            reasons.append("monte carlo cross-check disagrees beyond 4 sigma")
        elif bflags[i]:
            flags.append(True)
            reasons.append("growth quotient exceeds the Borel bound")
        else:
            flags.append(False)
            reasons.append("")
    n = len(rs)
    margin = [main[i] - lhs[i] for i in range(n)]
    r0 = next((rs[i] for i in range(n) if not flags[i]), None)
    return InequalityTrace(
        name="calculus", r_values=tuple(rs), lhs=tuple(lhs), main=tuple(main),
        log_T=(0.0,) * n, curvature=(0.0,) * n, loglog=(0.0,) * n,
        margin=tuple(margin), flagged=tuple(flags), reasons=tuple(reasons),
        ratio=tuple(ratio), flagged_measure=brep.total_measure,
        borel_bound=brep.c_phi, r0=r0,
        slack_note=("main = occupation * exp(r*sqrt(-kappa)) * log r * (1+F) "
                    f"with C={C:g} declared; curvature sits inside main"),
        notes=tuple(notes))


# -- max over independent subsets on the boundary -----------------------------------


def _section_vectors(sections: Sequence[HomogeneousPoly]):
    monomials = sorted({e for s in sections for e in s.terms})
    index = {e: i for i, e in enumerate(monomials)}
    rows = []
    for s in sections:
        row = [0] * len(monomials)
        for e, c in s.terms.items():
            row[index[e]] = c
        rows.append(row)
    return rows


def _independent_subsets(rows) -> Tuple[Tuple[int, ...], ...]:
    """All exactly linearly independent index subsets, by size."""
    q = len(rows)
    dim = exact_rank(rows)
    out = [(i,) for i in range(q)]  # sections are nonzero by construction
    frontier = out[:]
    for _ in range(1, dim):
        nxt = []
        for subset in frontier:
            for j in range(subset[-1] + 1, q):
                cand = subset + (j,)
                if exact_rank([rows[i] for i in cand]) == len(cand):
                    nxt.append(cand)
        out.extend(nxt)
        frontier = nxt
    return tuple(out)


def max_sum_weil_boundary(curve: ProjectiveCurve,
                          sections: Sequence[HomogeneousPoly],
                          surface: SurfaceModel, r: float,
                          spec: WeilSpec = WeilSpec("fs"),
                          grid: RGrid = RGrid()) -> float:
    """Rim average of max_Q sum_{k in Q} lambda_{s_k}, Q independent.

    Subsets are certified independent by exact rank of the coefficient
    rows; the pointwise max runs over every independent subset, though
    with nonnegative Weil functions only the maximal ones can win.
    """
    secs = list(sections)
    q = len(secs)
    if q == 0:
        raise DivisorError("no sections")
    if q > 12:
        raise DivisorError("subset enumeration is capped at q <= 12")
    n_vars = len(curve.components)
    if n_vars > 6:
        raise DivisorError("ambient dimension is capped at n <= 5")
    deg = secs[0].degree
    for s in secs:
        if s.n_vars != n_vars:
            raise DivisorError("sections and curve live in different spaces")
        if s.degree != deg:
            raise DivisorError("sections must share one degree (a linear system)")
        if not s.exact:
            raise DivisorError("independence certification needs exact coefficients")

    subsets = _independent_subsets(_section_vectors(secs))
    masks = np.zeros((len(subsets), q))
    for i, subset in enumerate(subsets):
        masks[i, list(subset)] = 1.0
    rho = surface.euclidean_radius(r)

    def fn(theta: np.ndarray) -> np.ndarray:
        _, dirs = curve.eval_projective(rho * np.exp(1j * theta))
        lam = np.stack([weil_component(s, dirs, spec) for s in secs])
        return (masks @ lam).max(axis=0)

    avg = boundary_average(_finite_nodes(fn), tol=grid.tol,
                           n0=grid.boundary_n0, n_max=grid.boundary_n_max)
    return avg.require_scaled(100 * grid.tol)


def cartan_smt_report(curve: ProjectiveCurve,
                      hyperplanes: Sequence[HomogeneousPoly],
                      surface: SurfaceModel, rgrid: Sequence[float],
                      spec: WeilSpec = WeilSpec("fs"), delta: float = 0.1,
                      grid: RGrid = RGrid()) -> InequalityTrace:
    """Margins of (n+1) T_f + log+ T + |kappa| r^2 + log+ log r against
    the max-subset Weil boundary integral of the hyperplanes."""
    rs = sorted(float(r) for r in rgrid)
    if len(rs) < 3:
        raise ValueError("need at least 3 radii")
    if not linearly_independent(curve.components):
        raise ValueError(
            "curve components are linearly dependent (the iterated-derivative "
            "determinant vanishes identically); the bound needs a "
            "nondegenerate curve")
    D = DivisorSum(list(hyperplanes))
    if not general_position_check(D):
        raise DivisorError("hyperplanes are not in general position")
    n1 = len(curve.components)

    from .nevanlinna import boundary_T

    lhs, main, logT, curv, llog, Ts = [], [], [], [], [], []
    for r in rs:
        T = boundary_T(curve, surface, r, spec, grid)
        Ts.append(T)
        lhs.append(max_sum_weil_boundary(curve, hyperplanes, surface, r,
                                         spec, grid))
        main.append(n1 * T)
        logT.append(_logplus(T))
        curv.append(_curvature_term(surface, r))
        llog.append(_loglog(r))

    bflags, brep = _growth_flags(rs, Ts, delta)
    flags = [bool(b) for b in bflags]
    reasons = ["growth quotient exceeds the Borel bound" if b else ""
               for b in flags]
    margin = [main[i] + logT[i] + curv[i] + llog[i] - lhs[i]
              for i in range(len(rs))]
    r0 = next((rs[i] for i in range(len(rs)) if not flags[i]), None)
    return InequalityTrace(
        name="cartan", r_values=tuple(rs), lhs=tuple(lhs), main=tuple(main),
        log_T=tuple(logT), curvature=tuple(curv), loglog=tuple(llog),
        margin=tuple(margin), flagged=tuple(flags), reasons=tuple(reasons),
        ratio=None, flagged_measure=brep.total_measure,
        borel_bound=brep.c_phi, r0=r0,
        slack_note=("lhs = max-subset Weil rim integral; acceptance asserts "
                    "margin >= -0.5 log T - 10 at unflagged r"))


def log_wronskian_proximity(curve: ProjectiveCurve,
                            subset: Sequence[HomogeneousPoly],
                            field_: VectorField, surface: SurfaceModel,
                            r: float, grid: RGrid = RGrid()) -> float:
    """Rim average of log+ |scaling-invariant derivative determinant| of
    the subset's pullbacks; callers pair it with log T + |kappa| r^2 +
    log+ log r for ratio tracking."""
    n1 = len(curve.components)
    if len(subset) != n1:
        raise ValueError(f"need exactly {n1} sections, got {len(subset)}")
    pulls = []
    for s in subset:
        expr = pullback(s, curve.components)
        if expr is None or expr.is_zero():
            raise ValueError("a section pulls back to the zero function")
        pulls.append(expr)
    rho = surface.euclidean_radius(r)

    def fn(theta: np.ndarray) -> np.ndarray:
        det = log_wronskian_eval(pulls, field_, rho * np.exp(1j * theta))
        with np.errstate(divide="ignore"):
            la = np.log(np.abs(det))
        return np.maximum(la, 0.0)

    avg = boundary_average(_finite_nodes(fn), tol=grid.tol,
                           n0=grid.boundary_n0, n_max=grid.boundary_n_max)
    return avg.require_scaled(100 * grid.tol)
