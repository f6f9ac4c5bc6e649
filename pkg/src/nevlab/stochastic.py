"""Brownian motion on the surface: exit laws, clocks, occupation integrals.

The conformal chart does the heavy lifting. A Brownian path of the
surface metric is a euclidean Brownian path run with the reweighted
clock ds = h(Z) dt, and exit from a centered geodesic disc is exit from
the euclidean disc |z| < rho_e(r). Everything here simulates plain
euclidean paths and folds metric factors into the integrands, so the
characteristic and proximity estimates below are exact in law and the
only systematic errors are the step overshoot and the absorption rim,
both of which shrink with the policy parameters.

Reproducibility: each path owns a counter-based generator keyed by
(seed, path index). Results are a fixed-order pairwise sum over path
indices, so the estimate is independent of chunking and of how many
threads the linear algebra underneath happens to use. Antithetic
partners rebuild the partner stream from the same key and negate it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .divisor import DivisorSum, WeilSpec, weil_sum
from .holo import ProjectiveCurve
from .surface import SurfaceModel

__all__ = [
    "PathPolicy",
    "MCEstimate",
    "TestFunction",
    "sample_exit_angle",
    "exit_time_estimate",
    "occupation_estimate",
    "dynkin_residual",
    "MCNevReport",
    "mc_nevanlinna",
]


@dataclass(frozen=True)
class PathPolicy:
    """Step-size and bookkeeping knobs for the path engine.

    dt = clip(shrink * dist^2, dt_min, base_frac * rho^2) keeps steps
    coarse in the bulk and quadratically refined near the rim; a path is
    absorbed once dist < exit_frac * rho. refined() halves the leading
    bias knobs, which is how the bias-vs-step checks are run.
    """

    seed: int = 0
    n_paths: int = 4096
    base_frac: float = 0.01
    shrink: float = 0.05
    exit_frac: float = 1e-4
    dt_min: float = 1e-12
    max_steps: int = 100_000
    chunk: int = 16384
    block: int = 256
    antithetic: bool = True

    def refined(self, factor: float = 2.0) -> "PathPolicy":
        return replace(self, shrink=self.shrink / factor,
                       exit_frac=self.exit_frac / factor)

    def stream_key(self, path_index: int) -> int:
        if self.antithetic:
            path_index //= 2
        return (int(self.seed) << 64) | path_index


@dataclass(frozen=True)
class MCEstimate:
    mean: float
    stderr: float
    n_paths: int
    mean_steps: float

    def consistent_with(self, value: float, sigmas: float = 3.0,
                        bias: float = 0.0) -> bool:
        return abs(self.mean - value) <= sigmas * self.stderr + bias


@dataclass(frozen=True)
class TestFunction:
    """A function with its euclidean Laplacian, for generator identities.

    The surface Laplacian is laplacian/h, and the surface clock is
    h * dt, so the h factors cancel in every Dynkin integral; only the
    euclidean Laplacian is ever needed.
    """

    value: Callable[[np.ndarray], np.ndarray]
    laplacian: Callable[[np.ndarray], np.ndarray]


def _simulate(rho: float, integrands: Sequence[Callable],
              policy: PathPolicy):
    """Run all paths; return (clock sums (n, k), exit points (n,), steps).

    integrands are vectorized complex->real densities accumulated against
    the euclidean clock by the trapezoid rule along each path.
    """
    n = policy.n_paths
    if policy.antithetic and n % 2:
        raise ValueError("antithetic pairing needs an even path count")
    k = len(integrands)
    sums = np.zeros((n, k))
    exits = np.zeros(n, dtype=complex)
    steps = np.zeros(n, dtype=np.int64)
    abandoned = 0
    dt_cap = policy.base_frac * rho * rho
    absorb = policy.exit_frac * rho

    for start in range(0, n, policy.chunk):
        m = min(policy.chunk, n - start)
        gens = [np.random.Generator(np.random.Philox(
            key=policy.stream_key(start + i))) for i in range(m)]
        all_signs = np.array([
            -1.0 if (policy.antithetic and (start + i) % 2) else 1.0
            for i in range(m)])
        buf = np.empty((m, policy.block, 2))
        ptr = np.full(m, policy.block, dtype=np.int64)
        acc = np.zeros((m, k))
        nsteps = np.zeros(m, dtype=np.int64)

        # live state is kept compacted: row j of z/signs/prev_vals belongs
        # to chunk position alive[j], so finished paths cost nothing
        alive = np.arange(m)
        z = np.zeros(m, dtype=complex)
        signs = all_signs.copy()
        prev_vals = np.stack([np.asarray(f(z), dtype=float)
                              for f in integrands], axis=1) if k else None

        while alive.size:
            need = ptr[alive] >= policy.block
            if np.any(need):
                for i in alive[need]:
                    buf[i] = gens[i].standard_normal((policy.block, 2))
                    ptr[i] = 0
            dist = rho - np.abs(z)
            dt = np.minimum(
                np.maximum(policy.shrink * dist * dist, policy.dt_min),
                dt_cap)
            draw = buf[alive, ptr[alive]]
            ptr[alive] += 1
            dz = np.sqrt(dt) * (draw[:, 0] + 1j * draw[:, 1]) * signs
            znew = z + dz
            r_new = np.abs(znew)
            if k:
                # integrands are clamped onto the closed disc: the slice of
                # a step that pokes past the rim is overshoot bias anyway,
                # and metric densities may be undefined outside the chart
                scale = np.minimum(1.0, rho / np.maximum(r_new, 1e-300))
                zeval = znew * scale
                if k == 1:
                    new_vals = np.asarray(integrands[0](zeval),
                                          dtype=float)[:, None]
                else:
                    new_vals = np.stack([np.asarray(f(zeval), dtype=float)
                                         for f in integrands], axis=1)
                acc[alive] += 0.5 * (prev_vals + new_vals) * dt[:, None]
                prev_vals = new_vals
            nsteps[alive] += 1
            out = (r_new >= rho) | (rho - r_new < absorb)
            if np.any(out):
                hit = alive[out]
                zh = znew[out]
                exits[start + hit] = rho * zh / r_new[out]
            keep = ~out
            tired = keep & (nsteps[alive] >= policy.max_steps)
            if np.any(tired):
                t_idx = alive[tired]
                abandoned += t_idx.size
                zt = znew[tired]
                exits[start + t_idx] = rho * zt / np.maximum(np.abs(zt),
                                                             1e-300)
                keep &= ~tired
            alive = alive[keep]
            z = znew[keep]
            signs = signs[keep]
            if k:
                prev_vals = prev_vals[keep]

        sums[start:start + m] = acc
        steps[start:start + m] = nsteps

    if abandoned > 0.01 * n:
        raise RuntimeError(
            f"{abandoned} of {n} paths hit the step cap; the policy "
            "cannot resolve this surface/radius combination")
    return sums, exits, steps


def _collapse_pairs(values: np.ndarray, policy: PathPolicy) -> np.ndarray:
    """Antithetic partners average into one observation before the stats."""
    if policy.antithetic and values.shape[0] % 2 == 0:
        return 0.5 * (values[0::2] + values[1::2])
    return values


def _estimate(values: np.ndarray, steps: np.ndarray,
              policy: PathPolicy) -> MCEstimate:
    obs = _collapse_pairs(values, policy)
    mean = float(np.add.reduce(obs) / obs.size)
    stderr = float(np.std(obs, ddof=1) / math.sqrt(obs.size)) \
        if obs.size > 1 else math.inf
    return MCEstimate(mean, stderr, policy.n_paths,
                      float(np.mean(steps)))


def sample_exit_angle(surface: SurfaceModel, r: float, n: int,
                      seed: int = 0) -> np.ndarray:
    """Exit angles from the center: the harmonic measure is exactly
    uniform by radial symmetry, so these are direct uniform draws."""
    surface.euclidean_radius(r)  # validates r against the chart
    gen = np.random.Generator(np.random.Philox(key=(int(seed) << 64)))
    return gen.uniform(0.0, 2.0 * math.pi, n)


def exit_time_estimate(surface: SurfaceModel, r: float,
                       policy: PathPolicy = PathPolicy()) -> MCEstimate:
    """E[surface exit time] = E[int h(Z) dt] from the disc center."""
    rho = surface.euclidean_radius(r)
    h = surface.h

    def dens(z: np.ndarray) -> np.ndarray:
        return h(np.abs(z))

    sums, _, steps = _simulate(rho, [dens], policy)
    return _estimate(sums[:, 0], steps, policy)


def occupation_estimate(surface: SurfaceModel, r: float,
                        phi,
                        policy: PathPolicy = PathPolicy(),
                        clock: str = "surface"):
    """E[int phi(Z) d(clock)] against the surface or euclidean clock.

    The deterministic counterpart is int G * phi * h dA (surface) or
    int G * phi dA (euclidean), G = (1/pi) log(rho/|z|).

    phi may also be a sequence of integrands. They then ride the same
    paths (the draws do not depend on how many integrands tag along) and
    a list of estimates comes back in order; each entry is distributed
    exactly as a standalone run under the same policy, only independence
    across entries is given up.
    """
    rho = surface.euclidean_radius(r)
    single = callable(phi)
    phis = [phi] if single else list(phi)
    if clock == "surface":
        h = surface.h

        def make(p):
            return lambda z: np.asarray(p(z), dtype=float) * h(np.abs(z))
    elif clock == "euclidean":
        def make(p):
            return lambda z: np.asarray(p(z), dtype=float)
    else:
        raise ValueError("clock must be 'surface' or 'euclidean'")
    sums, _, steps = _simulate(rho, [make(p) for p in phis], policy)
    ests = [_estimate(sums[:, j], steps, policy) for j in range(len(phis))]
    return ests[0] if single else ests


def dynkin_residual(surface: SurfaceModel, r: float, tf: TestFunction,
                    policy: PathPolicy = PathPolicy()) -> MCEstimate:
    """E[u(Z_exit)] - u(o) - E[int (1/2) lap u dt]; zero in law.

    Stated with the euclidean clock; by the h-cancellation this is the
    same statement as the surface-Laplacian form with the surface clock.
    """
    rho = surface.euclidean_radius(r)

    def halflap(z: np.ndarray) -> np.ndarray:
        return 0.5 * np.asarray(tf.laplacian(z), dtype=float)

    sums, exits, steps = _simulate(rho, [halflap], policy)
    u_exit = np.asarray(tf.value(exits), dtype=float)
    u0 = float(np.asarray(tf.value(np.zeros(1, dtype=complex)), dtype=float)[0])
    per_path = u_exit - u0 - sums[:, 0]
    return _estimate(per_path, steps, policy)


@dataclass(frozen=True)
class MCNevReport:
    r: float
    T: MCEstimate
    m: MCEstimate
    m_exact_angles: MCEstimate
    norm: str
    seed: int


def mc_nevanlinna(curve: ProjectiveCurve, D: Optional[DivisorSum],
                  surface: SurfaceModel, r: float,
                  spec: WeilSpec = WeilSpec(),
                  policy: PathPolicy = PathPolicy()) -> MCNevReport:
    """Characteristic and proximity by running the paths.

    T accumulates pi * (curvature pullback density) over the euclidean
    clock: its expectation is the Green-weighted area integral, i.e. the
    smooth characteristic. m averages the Weil sum at the simulated exit
    points; m_exact_angles does the same at directly sampled uniform
    angles, isolating the exit-law discretization error.
    """
    rho = surface.euclidean_radius(r)

    def t_dens(z: np.ndarray) -> np.ndarray:
        return math.pi * np.asarray(curve.fs_density(z), dtype=float)

    sums, exits, steps = _simulate(rho, [t_dens], policy)
    T = _estimate(sums[:, 0], steps, policy)

    if D is not None:
        _, dirs = curve.eval_projective(exits)
        lam = np.asarray(weil_sum(D, dirs, spec), dtype=float)
        if not np.all(np.isfinite(lam)):
            raise RuntimeError("an exit point landed on the divisor")
        m = _estimate(lam, steps, policy)
        angles = sample_exit_angle(surface, r, policy.n_paths,
                                   seed=policy.seed + 1)
        _, dirs2 = curve.eval_projective(rho * np.exp(1j * angles))
        lam2 = np.asarray(weil_sum(D, dirs2, spec), dtype=float)
        m_exact = _estimate(lam2, steps, policy)
    else:
        nanest = MCEstimate(math.nan, math.nan, policy.n_paths,
                            float(np.mean(steps)))
        m = m_exact = nanest
    return MCNevReport(r, T, m, m_exact, spec.norm, policy.seed)
