"""Zeros of entire expressions, with multiplicities.

Two engines, matched to the expression structure:

* polynomials: companion-matrix eigenvalues, Newton polish, and exact
  multiplicities through Yun's square-free decomposition when the
  coefficients are exact (floating coefficients fall back to clustering);

* genuine exponential polynomials: recursive box subdivision driven by
  the argument principle, phase-continuation winding numbers on each box
  boundary, multiplicity-aware Newton polish, and a mandatory whole-disc
  winding cross-check (mismatch is a hard error, never a warning).

All evaluation goes through the log-rescaled form, so boxes whose corners
sit at |e^{2z}| ~ e^{1000} are routine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from .holo import HoloExpr, Poly, _poly_gcd


class ZeroFindingError(RuntimeError):
    pass


class BoundaryZeroError(ZeroFindingError):
    """A zero sits (numerically) on the counting circle."""


class _ContourNearZero(ZeroFindingError):
    pass


@dataclass(frozen=True)
class LocatedZero:
    z: complex
    multiplicity: int


# -- polynomial route -----------------------------------------------------------


def _squarefree_decomposition(p: Poly) -> List[tuple]:
    """Yun's algorithm: [(factor, multiplicity)] with square-free factors."""
    g = _poly_gcd(p, p.derivative())
    c, _ = p.divmod(g)
    d = p.derivative().divmod(g)[0] - c.derivative()
    out = []
    m = 1
    while c.degree > 0:
        a = _poly_gcd(c, d)
        if a.degree > 0:
            out.append((a, m))
        c, _ = c.divmod(a)
        d = d.divmod(a)[0] - c.derivative()
        m += 1
    return out


def _newton_polish_poly(coeffs: np.ndarray, z: complex, iters: int = 30) -> complex:
    dcoeffs = coeffs[1:] * np.arange(1, coeffs.size)
    for _ in range(iters):
        f = 0j
        for c in coeffs[::-1]:
            f = f * z + c
        fp = 0j
        for c in dcoeffs[::-1]:
            fp = fp * z + c
        if fp == 0:
            break
        step = f / fp
        z = z - step
        if abs(step) < 1e-15 * (1 + abs(z)):
            break
    return z


def poly_roots(p: Poly) -> List[LocatedZero]:
    """All complex roots of p with multiplicities."""
    if p.is_zero():
        raise ZeroFindingError("zero polynomial has no root set")
    if p.degree == 0:
        return []
    if p.exact:
        out = []
        for factor, mult in _squarefree_decomposition(p):
            cs = factor.float_coeffs()
            for r in np.roots(cs[::-1]):
                out.append(LocatedZero(_newton_polish_poly(cs, complex(r)), mult))
        total = sum(z.multiplicity for z in out)
        if total != p.degree:
            raise ZeroFindingError(
                f"square-free decomposition lost roots ({total} != {p.degree})")
        return out
    cs = p.float_coeffs()
    roots = [_newton_polish_poly(cs, complex(r)) for r in np.roots(cs[::-1])]
    scale = max([1.0] + [abs(r) for r in roots])
    clusters: List[List[complex]] = []
    for r in sorted(roots, key=lambda w: (w.real, w.imag)):
        for cl in clusters:
            if abs(cl[0] - r) < 1e-7 * scale:
                cl.append(r)
                break
        else:
            clusters.append([r])
    return [LocatedZero(complex(np.mean(cl)), len(cl)) for cl in clusters]


# -- phase-continuation winding numbers -------------------------------------------


_MAX_CONTOUR_POINTS = 1 << 17


def _winding_number(f: HoloExpr, fp: HoloExpr, param_to_point,
                    n0: int = 64) -> int:
    """Winding of f along the closed contour t in [0,1) -> point.

    Phase steps above pi/2 are the obvious refinement trigger, but they
    miss a zero sitting between two samples much closer than their
    spacing: the 2 pi swing aliases to almost nothing. |f/f'| estimates
    the distance to the nearest zero, so each interval is also refined
    until its chord is shorter than that scale. A sample whose magnitude
    falls dozens of orders below the contour median trips the near-zero
    guard instead of refining forever.
    """
    ts = np.linspace(0.0, 1.0, n0, endpoint=False)

    def sample(t):
        pts = np.asarray(param_to_point(t), dtype=complex)
        lm, ph = f.eval_log(pts)
        lmp, _ = fp.eval_log(pts)
        with np.errstate(over="ignore", invalid="ignore"):
            dist = np.exp(np.clip(lm - lmp, -700, 700))
        dist[~np.isfinite(dist)] = np.inf
        return pts, lm, ph, dist

    pts, lm, ph, dist = sample(ts)
    for _round in range(64):
        order = np.argsort(ts)
        ts, pts, lm, ph, dist = (
            ts[order], pts[order], lm[order], ph[order], dist[order])
        if not np.all(np.isfinite(lm)) or (
                np.min(lm) < np.median(lm) - 120):
            raise _ContourNearZero("contour passes too close to a zero")
        dphi = np.angle(np.roll(ph, -1) / ph)
        chord = np.abs(np.roll(pts, -1) - pts)
        unresolved = chord > 0.5 * np.minimum(dist, np.roll(dist, -1))
        bad = np.where((np.abs(dphi) > 0.5 * math.pi) | unresolved)[0]
        if bad.size == 0:
            k = float(np.sum(dphi)) / (2 * math.pi)
            kr = round(k)
            if abs(k - kr) <= 0.25:
                return int(kr)
            bad = np.arange(ts.size)
        if ts.size + bad.size > _MAX_CONTOUR_POINTS:
            raise ZeroFindingError("contour refinement exceeded its budget")
        t_next = np.roll(ts, -1).copy()
        t_next[-1] += 1.0
        mids = (ts[bad] + t_next[bad]) / 2.0 % 1.0
        npts, nlm, nph, ndist = sample(mids)
        ts = np.concatenate([ts, mids])
        pts = np.concatenate([pts, npts])
        lm = np.concatenate([lm, nlm])
        ph = np.concatenate([ph, nph])
        dist = np.concatenate([dist, ndist])
    # a zero essentially on the contour keeps its neighborhood unresolved
    # round after round; everything legitimate settles in well under 64
    raise ZeroFindingError("contour refinement stalled near a zero")


def _circle_winding(f: HoloExpr, fp: HoloExpr, radius: float) -> int:
    return _winding_number(
        f, fp, lambda t: radius * np.exp(2j * math.pi * np.asarray(t)),
        n0=256)


def _box_param(box):
    x0, x1, y0, y1 = box
    w, h = x1 - x0, y1 - y0
    per = 2 * (w + h)
    c0, c1, c2 = w / per, (w + h) / per, (2 * w + h) / per

    def param(t):
        t = np.asarray(t, dtype=float) % 1.0
        pts = np.empty(t.shape, dtype=complex)
        m = t < c0
        pts[m] = x0 + (t[m] / c0) * w + 1j * y0
        m = (t >= c0) & (t < c1)
        pts[m] = x1 + 1j * (y0 + (t[m] - c0) / (c1 - c0) * h)
        m = (t >= c1) & (t < c2)
        pts[m] = x1 - (t[m] - c1) / (c2 - c1) * w + 1j * y1
        m = t >= c2
        pts[m] = x0 + 1j * (y1 - (t[m] - c2) / (1 - c2) * h)
        return pts

    return param


def _box_winding(f: HoloExpr, fp: HoloExpr, box) -> int:
    return _winding_number(f, fp, _box_param(box), n0=64)


def _newton_step_log(f: HoloExpr, fp: HoloExpr, z: complex):
    lf, pf = f.eval_log(z)
    if lf == float("-inf"):
        return 0j, True, lf
    lfp, pfp = fp.eval_log(z)
    if not math.isfinite(lfp):
        return None, False, lf
    diff = lf - lfp
    if diff > 200:
        return None, False, lf
    return math.exp(diff) * pf / pfp, False, lf


def _newton_root(f: HoloExpr, fp: HoloExpr, z0: complex, mult: int,
                 leash: float, iters: int = 80) -> Optional[complex]:
    """Multiplicity-aware Newton z -> z - mult * f/f', kept on a leash.

    Near a multiple zero the iterates stall once evaluation noise takes
    over, so the iterate with the smallest |f| wins rather than the last.
    """
    z = z0
    last = math.inf
    best = None
    best_lf = math.inf
    for _ in range(iters):
        step, exact_hit, lf = _newton_step_log(f, fp, z)
        if lf < best_lf:
            best, best_lf = z, lf
        if exact_hit:
            return z
        if step is None:
            return best if best is not None and best_lf < -30 else None
        step = mult * step
        if abs(step) > leash:
            return None
        z = z - step
        s = abs(step)
        if s < 1e-13 * (1 + abs(z)) and last < 1e-10 * (1 + abs(z)):
            return z
        last = s
    if last < 1e-10 * (1 + abs(z)):
        return z
    return best if best_lf < -30 else None


_CUT_JITTERS = (0.5380261867739, 0.4702983948133, 0.5213672901566, 0.4860492750543)


def _subdivide(box, attempt: int):
    x0, x1, y0, y1 = box
    jx = _CUT_JITTERS[attempt % 4]
    jy = _CUT_JITTERS[(attempt + 1) % 4]
    cx = x0 + (x1 - x0) * jx
    cy = y0 + (y1 - y0) * jy
    return [(x0, cx, y0, cy), (cx, x1, y0, cy), (x0, cx, cy, y1), (cx, x1, cy, y1)]


def _expr_zeros_by_subdivision(f: HoloExpr, radius: float) -> List[LocatedZero]:
    fp = f.derivative()
    try:
        total = _circle_winding(f, fp, radius)
    except ZeroFindingError as exc:
        raise BoundaryZeroError(
            f"zero on or too close to the counting circle |z| = {radius:g}"
        ) from exc

    found: List[LocatedZero] = []
    R = radius
    stack = [((-R, R, -R, R), 0)]
    budget = 40000
    while stack:
        box, attempt = stack.pop()
        budget -= 1
        if budget < 0:
            raise ZeroFindingError("box subdivision exceeded its budget")
        x0, x1, y0, y1 = box
        size = max(x1 - x0, y1 - y0)
        try:
            k = _box_winding(f, fp, box)
        except ZeroFindingError:
            # a zero is hugging this box's boundary (an interior cut, since
            # the outer circle was handled above): grow the box past the
            # offender; the resulting sliver overlap with siblings is
            # reconciled by the position dedup below
            if attempt >= 8:
                raise ZeroFindingError(
                    f"could not separate a zero from box cuts near "
                    f"({(x0 + x1) / 2:.6g}, {(y0 + y1) / 2:.6g})")
            eps = size * 1e-5 * 4.0 ** attempt
            stack.append(((x0 - eps, x1 + eps, y0 - eps, y1 + eps), attempt + 1))
            continue
        if k == 0:
            continue
        center = complex((x0 + x1) / 2, (y0 + y1) / 2)
        if k == 1:
            z = _newton_root(f, fp, center, 1, leash=4 * size)
            margin = 1e-9 * size
            if z is not None and x0 - margin <= z.real <= x1 + margin \
                    and y0 - margin <= z.imag <= y1 + margin:
                found.append(LocatedZero(z, 1))
                continue
        # stop shrinking before float cancellation turns the contour values
        # into noise (a multiplicity-m zero of unit-scale terms is only
        # resolvable down to eps**(1/m) ~ 1e-8 .. 1e-5); Newton recovers
        # whatever accuracy the evaluation supports
        if size < 1e-5 * max(1.0, R):
            z = _newton_root(f, fp, center, k, leash=1000 * size)
            found.append(LocatedZero(z if z is not None else center, k))
            continue
        stack.extend((b, attempt) for b in _subdivide(box, attempt))

    # merge entries that are the same zero seen from overlapping grown boxes;
    # max multiplicity per location is the faithful merge (a true m-fold zero
    # reports m from every box containing it, a duplicate simple zero
    # reports 1 twice). Distinct zeros closer than the cluster radius are
    # outside this engine's resolution and would fail the cross-check.
    tol = 3e-5 * max(1.0, R)
    merged: List[LocatedZero] = []
    for z in sorted(found, key=lambda w: (w.z.real, w.z.imag)):
        for i, m in enumerate(merged):
            if abs(m.z - z.z) < tol:
                merged[i] = LocatedZero(m.z, max(m.multiplicity, z.multiplicity))
                break
        else:
            merged.append(z)

    near_rim = [z for z in merged if abs(abs(z.z) - R) <= 1e-9 * max(1.0, R)]
    if near_rim:
        raise BoundaryZeroError(
            f"zero at {near_rim[0].z:.9g} sits on the counting circle")
    inside = [z for z in merged if abs(z.z) < R]
    got = sum(z.multiplicity for z in inside)
    if got != total:
        raise ZeroFindingError(
            f"argument-principle cross-check failed: boxes found {got} zeros "
            f"inside |z| < {R:g} but the circle integral counts {total}")
    return inside


def expr_zeros_in_disc(f: HoloExpr, radius: float) -> List[LocatedZero]:
    """Zeros of f with |z| < radius, with multiplicities.

    Polynomial content is routed through the companion matrix; genuine
    exponential polynomials go through argument-principle subdivision.
    The open disc is used; a zero on the circle raises BoundaryZeroError.
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    if f.is_zero():
        raise ZeroFindingError("expression is identically zero")
    st = f.single_term()
    if st is not None:
        _, p = st
        if p.degree < 1:
            return []
        out = []
        for z in poly_roots(p):
            az = abs(z.z)
            if abs(az - radius) <= 1e-9 * max(1.0, radius):
                raise BoundaryZeroError(
                    f"zero at {z.z:.9g} sits on the counting circle")
            if az < radius:
                out.append(z)
        return out
    return _expr_zeros_by_subdivision(f, radius)
