"""Experiment runner.

`nevlab run config.json` executes one experiment described by a JSON
config and writes report.json, tables/*.csv and plots/*.svg under the
output directory. `nevlab validate config.json` checks the config
(schema and expression parsing) without computing anything, and
`nevlab plot table.csv --x r --y residual` re-plots any emitted table.

Exit codes: 0 success, 1 config or engine error, 2 a named assertion
(margin or tolerance violation) failed. Assertions never abort the run;
all artifacts are written first so the failure can be inspected.

Configs are strict: unknown keys are rejected, defaults are filled in,
and the fully resolved config is echoed inside report.json. Worker
count comes from the NEVLAB_THREADS environment variable; it is spent
only on independent work items (Monte Carlo cases, certificate
candidates), so report.json is byte-identical for any thread count.
Wall-clock time and the thread count go to a timing.txt sidecar, never
into report.json.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import __version__
from .divisor import DivisorError, DivisorSum, HomogeneousPoly, WeilSpec
from .exprgrammar import (ExprParseError, parse_curve, parse_entire,
                          parse_meromorphic, parse_poly)
from .holo import VectorField
from .nevanlinna import RGrid, defect_report, fmt_report
from .nevconst import (NevError, NevTriple, monomial_filtration_candidates,
                       nev_upper_bound, smt_full_check)
from .quadrature import green_area_integral
from .smt import calculus_lemma_report, cartan_smt_report, ldl_report
from .stochastic import (PathPolicy, exit_time_estimate, mc_nevanlinna,
                         occupation_estimate)
from .surface import SurfaceModel, green_lower_bound_check, jacobi_solve
from .svg import line_plot

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_ASSERTION = 2

THREADS_ENV = "NEVLAB_THREADS"


class ConfigError(Exception):
    """Schema or semantic failure in a config; carries the offending key."""

    def __init__(self, message: str, key: Optional[str] = None):
        super().__init__(message)
        self.key = key


# -- thread pool --------------------------------------------------------------------


def _thread_count() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ConfigError(f"{THREADS_ENV} must be an integer, got {raw!r}")


def _pool_map(fn: Callable, items: Sequence) -> List:
    """Order-preserving map over independent items.

    Results cannot depend on the worker count: every item carries its
    own seed and nothing is shared, so this is safe to parallelize.
    """
    items = list(items)
    n = _thread_count()
    if n <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


# -- schema machinery ---------------------------------------------------------------

_REQUIRED = object()


@dataclass
class _Field:
    check: Callable
    default: object = _REQUIRED


def _expect(cond: bool, msg: str, key: str):
    if not cond:
        raise ConfigError(f"key '{key}': {msg}", key)


def _string(v, key):
    _expect(isinstance(v, str) and v != "", "must be a nonempty string", key)
    return v


def _str_in(*allowed):
    def check(v, key):
        _expect(isinstance(v, str) and v in allowed,
                f"must be one of {sorted(allowed)}", key)
        return v
    return check


def _number(lo=None, hi=None, none_ok=False):
    def check(v, key):
        if v is None and none_ok:
            return None
        _expect(isinstance(v, (int, float)) and not isinstance(v, bool)
                and math.isfinite(v), "must be a finite number", key)
        v = float(v)
        _expect(lo is None or v >= lo, f"must be >= {lo}", key)
        _expect(hi is None or v <= hi, f"must be <= {hi}", key)
        return v
    return check


def _integer(lo=None, hi=None):
    def check(v, key):
        _expect(isinstance(v, int) and not isinstance(v, bool),
                "must be an integer", key)
        _expect(lo is None or v >= lo, f"must be >= {lo}", key)
        _expect(hi is None or v <= hi, f"must be <= {hi}", key)
        return v
    return check


def _boolean(v, key):
    _expect(isinstance(v, bool), "must be true or false", key)
    return v


def _string_list(min_len=1):
    def check(v, key):
        _expect(isinstance(v, list) and len(v) >= min_len
                and all(isinstance(s, str) and s for s in v),
                f"must be a list of at least {min_len} nonempty strings", key)
        return list(v)
    return check


def _number_list(lo=None, min_len=1):
    num = _number(lo=lo)
    def check(v, key):
        _expect(isinstance(v, list) and len(v) >= min_len,
                f"must be a list of at least {min_len} numbers", key)
        return [num(x, f"{key}[{i}]") for i, x in enumerate(v)]
    return check


def _check_dict(v, key, schema: Dict[str, _Field]) -> Dict:
    _expect(isinstance(v, dict), "must be an object", key)
    out = {}
    for k in v:
        if k not in schema:
            raise ConfigError(f"unknown key '{key}.{k}'", k)
    for k, fld in schema.items():
        sub = f"{key}.{k}"
        if k in v:
            out[k] = fld.check(v[k], sub)
        elif fld.default is _REQUIRED:
            raise ConfigError(f"missing required key '{sub}'", key)
        else:
            out[k] = fld.default
    return out


def _surface_spec(v, key):
    _expect(isinstance(v, dict), "must be an object", key)
    kind = v.get("kind")
    _expect(kind in ("euclidean", "poincare"),
            "kind must be 'euclidean' or 'poincare'", key)
    if kind == "euclidean":
        return _check_dict(v, key, {"kind": _Field(_str_in("euclidean"))})
    return _check_dict(v, key, {
        "kind": _Field(_str_in("poincare")),
        "a": _Field(_number(lo=1e-6, hi=1e6), 1.0),
    })


def _rgrid_spec(v, key):
    out = _check_dict(v, key, {
        "min": _Field(_number(lo=1e-9)),
        "max": _Field(_number(lo=1e-9)),
        "n": _Field(_integer(lo=2, hi=100_000)),
        "spacing": _Field(_str_in("linear", "log"), "log"),
    })
    _expect(out["max"] > out["min"], "max must exceed min", key)
    return out


def _divisor_spec(v, key):
    out = _check_dict(v, key, {
        "components": _Field(_string_list()),
        "multiplicities": _Field(lambda x, k: x, None),
    })
    mult = out["multiplicities"]
    if mult is not None:
        _expect(isinstance(mult, list)
                and all(isinstance(m, int) and not isinstance(m, bool)
                        and m > 0 for m in mult),
                "multiplicities must be positive integers", key)
        _expect(len(mult) == len(out["components"]),
                "multiplicities must match components", key)
    return out


def _kfun_spec(v, key):
    _expect(isinstance(v, dict), "must be an object", key)
    kind = v.get("kind")
    _expect(kind in ("constant", "abs_square", "fs_density"),
            "kind must be 'constant', 'abs_square' or 'fs_density'", key)
    if kind == "constant":
        return _check_dict(v, key, {
            "kind": _Field(_str_in("constant")),
            "value": _Field(_number(lo=0.0), 1.0),
        })
    if kind == "abs_square":
        return _check_dict(v, key, {"kind": _Field(_str_in("abs_square"))})
    return _check_dict(v, key, {
        "kind": _Field(_str_in("fs_density")),
        "curve": _Field(_string),
    })


def _kfun_list(v, key):
    _expect(isinstance(v, list) and v, "must be a nonempty list", key)
    return [_kfun_spec(x, f"{key}[{i}]") for i, x in enumerate(v)]


def _surface_list(v, key):
    _expect(isinstance(v, list) and v, "must be a nonempty list", key)
    return [_surface_spec(x, f"{key}[{i}]") for i, x in enumerate(v)]


def _triple_spec(v, key):
    out = _check_dict(v, key, {
        "k": _Field(_integer(lo=1, hi=64)),
        "mu": _Field(lambda x, k: x),
        "label": _Field(_string, ""),
        "V": _Field(_string_list(min_len=2)),
        "bases": _Field(lambda x, k: x),
    })
    mu = out["mu"]
    _expect(isinstance(mu, (int, float, str)) and not isinstance(mu, bool),
            "mu must be a number or a fraction string", key)
    bases = out["bases"]
    _expect(isinstance(bases, dict) and bases,
            "bases must map stratum keys like '0,1' to lists of forms", key)
    for bk, bv in bases.items():
        _expect(isinstance(bk, str), "stratum keys must be strings", key)
        for tok in bk.split(","):
            if tok.strip() != "":
                _expect(tok.strip().isdigit(),
                        f"bad stratum key {bk!r}", key)
        _string_list()(bv, f"{key}.bases[{bk!r}]")
    return out


def _triples_or_monomial(v, key):
    if isinstance(v, str):
        return _str_in("monomial")(v, key)
    _expect(isinstance(v, list) and v,
            "must be 'monomial' or a nonempty list of triples", key)
    return [_triple_spec(x, f"{key}[{i}]") for i, x in enumerate(v)]


def _jacobi_spec(v, key):
    if v is None:
        return None
    return _check_dict(v, key, {
        "kappa_floor": _Field(_number(hi=0.0)),
        "r_max": _Field(_number(lo=0.5, hi=1e4), 10.0),
    })


# -- experiment schemas ------------------------------------------------------------

_COMMON = {
    "out": _Field(_string, None),  # None -> out/<experiment>
}

SCHEMAS: Dict[str, Dict[str, _Field]] = {
    "fmt": {
        **_COMMON,
        "experiment": _Field(_str_in("fmt")),
        "curve": _Field(_string),
        "divisor": _Field(_divisor_spec),
        "surface": _Field(_surface_spec, {"kind": "euclidean"}),
        "r_grid": _Field(_rgrid_spec),
        "norm": _Field(_str_in("max", "fs"), "max"),
        "residual_band": _Field(_number(lo=1e-12), 0.1),
        "engine": _Field(_str_in("quadrature", "both"), "quadrature"),
        "seed": _Field(_integer(lo=0), 0),
        "n_paths": _Field(_integer(lo=16, hi=10_000_000), 4096),
        "quad_tol": _Field(_number(lo=1e-12, hi=1e-2), 1e-7),
    },
    "ldl": {
        **_COMMON,
        "experiment": _Field(_str_in("ldl")),
        "function": _Field(_string),
        "field": _Field(_string, "1"),
        "k": _Field(_integer(lo=1, hi=16), 1),
        "surface": _Field(_surface_spec, {"kind": "euclidean"}),
        "r_grid": _Field(_rgrid_spec),
        "delta": _Field(_number(lo=1e-3, hi=10.0), 0.1),
        "ratio_cap": _Field(_number(lo=0.0, none_ok=True), 1.6),
        "quad_tol": _Field(_number(lo=1e-12, hi=1e-2), 1e-7),
    },
    "calculus": {
        **_COMMON,
        "experiment": _Field(_str_in("calculus")),
        "kfun": _Field(_kfun_spec),
        "surface": _Field(_surface_spec, {"kind": "euclidean"}),
        "r_grid": _Field(_rgrid_spec),
        "delta": _Field(_number(lo=1e-3, hi=10.0), 0.1),
        "constant_C": _Field(_number(lo=1e-6), 1.0),
        # no default cap: small radii genuinely exceed the bound and the
        # exceptional set containing them is invisible at coarse grids
        "ratio_cap": _Field(_number(lo=0.0, none_ok=True), None),
        "engine": _Field(_str_in("quadrature", "both"), "quadrature"),
        "seed": _Field(_integer(lo=0), 0),
        "n_paths": _Field(_integer(lo=16, hi=10_000_000), 4096),
        "quad_tol": _Field(_number(lo=1e-12, hi=1e-2), 1e-7),
    },
    "cartan": {
        **_COMMON,
        "experiment": _Field(_str_in("cartan")),
        "curve": _Field(_string),
        "hyperplanes": _Field(_string_list()),
        "surface": _Field(_surface_spec, {"kind": "euclidean"}),
        "r_grid": _Field(_rgrid_spec),
        "norm": _Field(_str_in("max", "fs"), "fs"),
        "delta": _Field(_number(lo=1e-3, hi=10.0), 0.1),
        "floor_log_T_coef": _Field(_number(), -0.5),
        "floor_offset": _Field(_number(), -10.0),
        "defects": _Field(_boolean, False),
        "quad_tol": _Field(_number(lo=1e-12, hi=1e-2), 1e-7),
    },
    "smt": {
        **_COMMON,
        "experiment": _Field(_str_in("smt")),
        "curve": _Field(_string),
        "divisor": _Field(_divisor_spec),
        "bundle_degree": _Field(_integer(lo=1, hi=64), 1),
        "bound": _Field(lambda v, k: v),  # number or "auto", checked below
        "surface": _Field(_surface_spec, {"kind": "euclidean"}),
        "r_grid": _Field(_rgrid_spec),
        "norm": _Field(_str_in("max", "fs"), "fs"),
        "delta": _Field(_number(lo=1e-3, hi=10.0), 0.1),
        "veronese_degree": _Field(_integer(lo=1, hi=16), None),
        "slack_offset": _Field(_number(lo=0.0), 10.0),
        "k_values": _Field(_number_list(lo=1), [1, 2, 3, 4, 5, 6]),
        "quad_tol": _Field(_number(lo=1e-12, hi=1e-2), 1e-7),
    },
    "nev": {
        **_COMMON,
        "experiment": _Field(_str_in("nev")),
        "n": _Field(_integer(lo=1, hi=8)),
        "divisor": _Field(_divisor_spec),
        "candidates": _Field(_triples_or_monomial, "monomial"),
        "k_values": _Field(_number_list(lo=1), [1, 2, 3, 4, 5, 6]),
        "filtration_degree": _Field(_integer(lo=1, hi=8), 1),
        "expect_bound": _Field(lambda v, k: v, None),
    },
    "mc-validate": {
        **_COMMON,
        "experiment": _Field(_str_in("mc-validate")),
        "surfaces": _Field(_surface_list,
                           [{"kind": "euclidean"},
                            {"kind": "poincare", "a": 1.0}]),
        "radii": _Field(_number_list(lo=1e-6), [0.5, 1.0, 2.0]),
        "phis": _Field(_kfun_list,
                       [{"kind": "constant", "value": 1.0},
                        {"kind": "abs_square"},
                        {"kind": "fs_density", "curve": "[1:exp(z)]"}]),
        "n_paths": _Field(_integer(lo=16, hi=10_000_000), 100_000),
        "seed": _Field(_integer(lo=0), 0),
        "sigmas": _Field(_number(lo=0.5, hi=100.0), 3.0),
        "exit_time": _Field(_boolean, True),
        "quad_tol": _Field(_number(lo=1e-12, hi=1e-2), 1e-7),
    },
    "surface-validate": {
        **_COMMON,
        "experiment": _Field(_str_in("surface-validate")),
        "surface": _Field(_surface_spec, {"kind": "poincare", "a": 1.0}),
        "r_grid": _Field(_rgrid_spec,
                         {"min": 0.1, "max": 10.0, "n": 60,
                          "spacing": "linear"}),
        "tol": _Field(_number(lo=1e-14, hi=1e-2), 1e-8),
        "jacobi": _Field(_jacobi_spec, {"kappa_floor": -1.0, "r_max": 10.0}),
        "green_eta": _Field(_number_list(lo=1e-6), [0.5]),
    },
}


def _resolve_config(cfg: dict) -> dict:
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    name = cfg.get("experiment")
    if name not in SCHEMAS:
        raise ConfigError(
            f"key 'experiment' must be one of {sorted(SCHEMAS)}, got {name!r}",
            "experiment")
    schema = SCHEMAS[name]
    for k in cfg:
        if k not in schema:
            raise ConfigError(f"unknown key '{k}' for experiment {name}", k)
    out = {}
    for k, fld in schema.items():
        if k in cfg:
            out[k] = fld.check(cfg[k], k)
        elif fld.default is _REQUIRED:
            raise ConfigError(f"missing required key '{k}'", k)
        else:
            out[k] = fld.default
    if out["out"] is None:
        out["out"] = f"out/{name}"
    if name == "smt":
        b = out["bound"]
        if not (b == "auto"
                or (isinstance(b, (int, float)) and not isinstance(b, bool)
                    and b > 0)):
            raise ConfigError(
                "key 'bound' must be a positive number or 'auto'", "bound")
    if name == "nev" and out["expect_bound"] is not None:
        e = out["expect_bound"]
        if not (isinstance(e, str)
                or (isinstance(e, (int, float)) and not isinstance(e, bool))):
            raise ConfigError(
                "key 'expect_bound' must be a number or fraction string",
                "expect_bound")
    for lk in ("k_values",):
        if lk in out:
            out[lk] = [int(x) for x in out[lk]]
    return out


# -- builders -----------------------------------------------------------------------


def _parse_with(parser: Callable, text: str, key: str):
    try:
        return parser(text)
    except ExprParseError as exc:
        raise ConfigError(f"key '{key}': {exc}", key)


def _build_surface(spec: dict) -> SurfaceModel:
    if spec["kind"] == "euclidean":
        return SurfaceModel.euclidean()
    return SurfaceModel.poincare(spec["a"])


def _build_rgrid(spec: dict) -> List[float]:
    if spec["spacing"] == "log":
        rs = np.geomspace(spec["min"], spec["max"], spec["n"])
    else:
        rs = np.linspace(spec["min"], spec["max"], spec["n"])
    return [float(r) for r in rs]


def _build_divisor(spec: dict, n_vars: int, key: str) -> DivisorSum:
    comps = [_parse_with(lambda s: parse_poly(s, n_vars), s,
                         f"{key}.components[{i}]")
             for i, s in enumerate(spec["components"])]
    try:
        return DivisorSum(comps, spec["multiplicities"])
    except DivisorError as exc:
        raise ConfigError(f"key '{key}': {exc}", key)


def _build_kfun(spec: dict, key: str) -> Tuple[Callable, str]:
    kind = spec["kind"]
    if kind == "constant":
        c = spec["value"]
        return (lambda z: np.full(np.shape(z), c, dtype=float)), f"{c:g}"
    if kind == "abs_square":
        return (lambda z: np.abs(np.asarray(z)) ** 2), "|z|^2"
    curve = _parse_with(parse_curve, spec["curve"], f"{key}.curve")
    return curve.fs_density, f"fs{spec['curve']}"


def _build_triple(spec: dict, n_vars: int, key: str) -> NevTriple:
    if isinstance(spec["mu"], str):
        try:
            mu = Fraction(spec["mu"])
        except (ValueError, ZeroDivisionError):
            raise ConfigError(f"key '{key}.mu': bad fraction "
                              f"{spec['mu']!r}", key)
    elif isinstance(spec["mu"], int):
        mu = Fraction(spec["mu"])
    else:
        mu = Fraction(str(spec["mu"]))
    V = tuple(_parse_with(lambda s: parse_poly(s, n_vars), s,
                          f"{key}.V[{i}]")
              for i, s in enumerate(spec["V"]))
    bases = {}
    for bk, lst in spec["bases"].items():
        idxs = frozenset(int(t) for t in bk.split(",") if t.strip() != "")
        bases[idxs] = tuple(
            _parse_with(lambda s: parse_poly(s, n_vars), s,
                        f"{key}.bases[{bk!r}][{i}]")
            for i, s in enumerate(lst))
    try:
        return NevTriple(spec["k"], V, bases, mu, label=spec["label"])
    except NevError as exc:
        raise ConfigError(f"key '{key}': {exc}", key)


# -- output plumbing -----------------------------------------------------------------


@dataclass
class RunOutputs:
    results: dict
    tables: Dict[str, Tuple[List[str], List[List]]] = field(default_factory=dict)
    plots: Dict[str, str] = field(default_factory=dict)
    violations: List[str] = field(default_factory=list)
    rng: Optional[dict] = None


def _sanitize(obj):
    if isinstance(obj, dict):
        return {str(k): _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(_sanitize(v) for v in obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else repr(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return _sanitize(float(obj))
    if isinstance(obj, np.ndarray):
        return [_sanitize(v) for v in obj.tolist()]
    return str(obj)


def _versions() -> dict:
    try:
        from importlib import metadata
        def v(name):
            try:
                return metadata.version(name)
            except metadata.PackageNotFoundError:
                return "unknown"
        vers = {p: v(p) for p in ("numpy", "scipy", "sympy")}
    except Exception:  # pragma: no cover
        vers = {}
    vers["nevlab"] = __version__
    vers["python"] = ".".join(str(x) for x in sys.version_info[:3])
    return vers


def _csv_cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return str(v)


def _write_artifacts(out_dir: Path, resolved: dict, outputs: RunOutputs,
                     started: float) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    report = {
        "config": resolved,
        "experiment": resolved["experiment"],
        "passed": not outputs.violations,
        "violations": outputs.violations,
        "results": outputs.results,
        "rng": outputs.rng,
        "versions": _versions(),
        "wall_clock": "recorded in timing.txt, kept out of this file so "
                      "reruns compare byte for byte",
    }
    report_path = out_dir / "report.json"
    report_path.write_text(
        json.dumps(_sanitize(report), sort_keys=True, indent=2) + "\n")
    if outputs.tables:
        tdir = out_dir / "tables"
        tdir.mkdir(exist_ok=True)
        for name, (header, rows) in outputs.tables.items():
            with open(tdir / f"{name}.csv", "w", newline="") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(header)
                for row in rows:
                    w.writerow([_csv_cell(c) for c in row])
    if outputs.plots:
        pdir = out_dir / "plots"
        pdir.mkdir(exist_ok=True)
        for name, svg in outputs.plots.items():
            (pdir / f"{name}.svg").write_text(svg)
    (out_dir / "timing.txt").write_text(
        f"threads: {_thread_count()}\n"
        f"wall_clock_seconds: {time.monotonic() - started:.3f}\n")
    return report_path


def _flag_bands(rs: Sequence[float], flags: Sequence[bool]):
    bands = []
    n = len(rs)
    i = 0
    while i < n:
        if flags[i]:
            j = i
            while j + 1 < n and flags[j + 1]:
                j += 1
            lo = rs[i] if i == 0 else 0.5 * (rs[i - 1] + rs[i])
            hi = rs[j] if j == n - 1 else 0.5 * (rs[j] + rs[j + 1])
            bands.append((lo, hi))
            i = j + 1
        else:
            i += 1
    return bands


def _trace_table(trace) -> Tuple[List[str], List[List]]:
    header = ["r", "lhs", "main", "log_T", "curvature", "loglog",
              "margin", "ratio", "flagged", "reason"]
    rows = []
    for i, r in enumerate(trace.r_values):
        rows.append([r, trace.lhs[i], trace.main[i], trace.log_T[i],
                     trace.curvature[i], trace.loglog[i], trace.margin[i],
                     trace.ratio[i] if trace.ratio is not None else "",
                     trace.flagged[i], trace.reasons[i]])
    return header, rows


def _margin_plot(trace, title: str) -> str:
    rs = list(trace.r_values)
    return line_plot(
        [("margin", rs, list(trace.margin))],
        "r", "margin", title=title,
        shade=_flag_bands(rs, trace.flagged), logx=True)


def _borel_violation(trace, rs: Sequence[float]) -> Optional[str]:
    resolution = max(
        rs[i + 1] - rs[i] for i in range(len(rs) - 1)) if len(rs) > 1 else 0.0
    cap = trace.borel_bound + resolution
    if trace.flagged_measure > cap + 1e-12:
        return (f"{trace.name}: flagged measure {trace.flagged_measure:.6g} "
                f"exceeds borel bound {trace.borel_bound:.6g} "
                f"+ grid resolution {resolution:.6g}")
    return None


# -- runners ------------------------------------------------------------------------


def _run_fmt(cfg: dict) -> RunOutputs:
    curve = _parse_with(parse_curve, cfg["curve"], "curve")
    D = _build_divisor(cfg["divisor"], len(curve.components), "divisor")
    surface = _build_surface(cfg["surface"])
    rs = _build_rgrid(cfg["r_grid"])
    grid = RGrid(tol=cfg["quad_tol"])
    spec = WeilSpec(cfg["norm"])
    rep = fmt_report(curve, D, surface, rs, spec, grid)
    osc = max(rep.residual) - min(rep.residual)

    violations = []
    if osc > cfg["residual_band"]:
        violations.append(
            f"fmt residual oscillation {osc:.6g} exceeds band "
            f"{cfg['residual_band']:.6g}")

    points = [{"r": rep.r_values[i], "T": rep.T[i], "m": rep.m[i],
               "N": rep.N[i], "residual": rep.residual[i]}
              for i in range(len(rep.r_values))]
    results = {"points": points, "oscillation": osc,
               "predicted": rep.predicted,
               "max_deviation": rep.max_deviation, "norm": rep.norm}
    rng = None
    if cfg["engine"] == "both":
        policy = PathPolicy(seed=cfg["seed"], n_paths=cfg["n_paths"])
        mc = mc_nevanlinna(curve, D, surface, rs[-1], spec, policy)
        results["mc"] = {
            "r": mc.r,
            "T": {"mean": mc.T.mean, "stderr": mc.T.stderr},
            "m": {"mean": mc.m.mean, "stderr": mc.m.stderr},
            "T_quad": rep.T[-1], "m_quad": rep.m[-1],
        }
        rng = {"seed": cfg["seed"], "n_paths": cfg["n_paths"],
               "scheme": "philox, one counter stream per path"}

    header = ["r", "T", "m", "N", "residual"]
    rows = [[p["r"], p["T"], p["m"], p["N"], p["residual"]]
            for p in points]
    plots = {
        "residual": line_plot(
            [("T - m - N", rs, [p["residual"] for p in points])],
            "r", "residual", title="first main theorem residual", logx=True),
        "characteristic": line_plot(
            [("T", rs, [p["T"] for p in points]),
             ("m", rs, [p["m"] for p in points]),
             ("N", rs, [p["N"] for p in points])],
            "r", "value", title="characteristic split", logx=True),
    }
    return RunOutputs(results, {"fmt": (header, rows)}, plots, violations,
                      rng)


def _run_ldl(cfg: dict) -> RunOutputs:
    psi = _parse_with(parse_meromorphic, cfg["function"], "function")
    coeff = _parse_with(parse_entire, cfg["field"], "field")
    try:
        vf = VectorField(coeff)
    except ValueError as exc:
        raise ConfigError(f"key 'field': {exc}", "field")
    surface = _build_surface(cfg["surface"])
    rs = _build_rgrid(cfg["r_grid"])
    trace = ldl_report(psi, vf, cfg["k"], surface, rs, cfg["delta"],
                       RGrid(tol=cfg["quad_tol"]))

    violations = []
    cap = cfg["ratio_cap"]
    if cap is not None:
        worst = max((trace.ratio[i] for i in trace.unflagged()),
                    default=-math.inf)
        if worst > cap:
            violations.append(
                f"ldl ratio {worst:.6g} exceeds cap {cap:.6g} at an "
                f"unflagged radius")
    bv = _borel_violation(trace, rs)
    if bv:
        violations.append(bv)

    results = {"trace": trace.to_dict()}
    plots = {
        "ratio": line_plot(
            [("ratio", rs, list(trace.ratio))],
            "r", "lhs / bound", title="logarithmic derivative lemma",
            shade=_flag_bands(rs, trace.flagged), logx=True),
        "margin": _margin_plot(trace, "ldl margin"),
    }
    return RunOutputs(results, {"ldl": _trace_table(trace)}, plots,
                      violations)


def _run_calculus(cfg: dict) -> RunOutputs:
    kfun, klabel = _build_kfun(cfg["kfun"], "kfun")
    surface = _build_surface(cfg["surface"])
    rs = _build_rgrid(cfg["r_grid"])
    policy = None
    rng = None
    if cfg["engine"] == "both":
        policy = PathPolicy(seed=cfg["seed"], n_paths=cfg["n_paths"])
        rng = {"seed": cfg["seed"], "n_paths": cfg["n_paths"],
               "scheme": "philox, one counter stream per path"}
    trace = calculus_lemma_report(surface, kfun, rs, policy, cfg["delta"],
                                  cfg["constant_C"],
                                  RGrid(tol=cfg["quad_tol"]))

    violations = []
    cap = cfg["ratio_cap"]
    if cap is not None:
        worst = max((trace.ratio[i] for i in trace.unflagged()),
                    default=-math.inf)
        if worst > cap:
            violations.append(
                f"calculus ratio {worst:.6g} exceeds cap {cap:.6g} at an "
                f"unflagged radius")
    bv = _borel_violation(trace, rs)
    if bv:
        violations.append(bv)

    results = {"trace": trace.to_dict(), "kfun": klabel}
    plots = {
        "occupation": line_plot(
            [("exit value", rs, list(trace.lhs)),
             ("bound", rs, list(trace.main))],
            "r", "value", title=f"calculus lemma, k = {klabel}",
            shade=_flag_bands(rs, trace.flagged), logx=True, logy=True),
    }
    return RunOutputs(results, {"calculus": _trace_table(trace)}, plots,
                      violations, rng)


def _run_cartan(cfg: dict) -> RunOutputs:
    curve = _parse_with(parse_curve, cfg["curve"], "curve")
    n_vars = len(curve.components)
    planes = [_parse_with(lambda s: parse_poly(s, n_vars), s,
                          f"hyperplanes[{i}]")
              for i, s in enumerate(cfg["hyperplanes"])]
    for i, q in enumerate(planes):
        if q.degree != 1:
            raise ConfigError(
                f"key 'hyperplanes[{i}]': degree {q.degree}, expected 1")
    surface = _build_surface(cfg["surface"])
    rs = _build_rgrid(cfg["r_grid"])
    grid = RGrid(tol=cfg["quad_tol"])
    spec = WeilSpec(cfg["norm"])
    trace = cartan_smt_report(curve, planes, surface, rs, spec, cfg["delta"],
                              grid)

    violations = []
    coef, off = cfg["floor_log_T_coef"], cfg["floor_offset"]
    for i in trace.unflagged():
        floor = coef * trace.log_T[i] + off
        if trace.margin[i] < floor:
            violations.append(
                f"cartan margin {trace.margin[i]:.6g} at r = "
                f"{trace.r_values[i]:.6g} is below the floor {floor:.6g}")
    bv = _borel_violation(trace, rs)
    if bv:
        violations.append(bv)

    results = {"trace": trace.to_dict()}
    tables = {"cartan": _trace_table(trace)}
    if cfg["defects"]:
        defects = []
        for label, plane in zip(cfg["hyperplanes"], planes):
            rep = defect_report(curve, DivisorSum([plane]), surface, rs[-1],
                                spec, n_r=4, grid=grid)
            defects.append({"hyperplane": label,
                            "delta_proximity": rep.delta_proximity,
                            "delta_counting": rep.delta_counting})
        results["defects"] = defects
        results["defect_sum"] = sum(d["delta_proximity"] for d in defects)
        tables["defects"] = (
            ["hyperplane", "delta_proximity", "delta_counting"],
            [[d["hyperplane"], d["delta_proximity"], d["delta_counting"]]
             for d in defects])
    plots = {"margin": _margin_plot(trace, "cartan second main theorem")}
    return RunOutputs(results, tables, plots, violations)


def _run_smt(cfg: dict) -> RunOutputs:
    curve = _parse_with(parse_curve, cfg["curve"], "curve")
    n_vars = len(curve.components)
    D = _build_divisor(cfg["divisor"], n_vars, "divisor")
    surface = _build_surface(cfg["surface"])
    rs = _build_rgrid(cfg["r_grid"])
    grid = RGrid(tol=cfg["quad_tol"])
    d = cfg["bundle_degree"]

    results = {}
    violations = []
    if cfg["bound"] == "auto":
        cands = monomial_filtration_candidates(D, n_vars - 1, d,
                                               cfg["k_values"])
        nb = nev_upper_bound(D, cands, pmap=_pool_map)
        results["nev"] = nb.to_dict()
        if not nb.is_finite:
            violations.append(
                "smt bound: no candidate certified, the bound is infinite")
            return RunOutputs(results, {}, {}, violations)
        bound = float(nb.value)
        results["bound_source"] = "certified"
    else:
        bound = float(cfg["bound"])
        results["bound_source"] = "config"
    results["bound_used"] = bound

    trace = smt_full_check(curve, D, d, bound, surface, rs,
                           WeilSpec(cfg["norm"]), cfg["delta"],
                           cfg["veronese_degree"], grid)
    off = cfg["slack_offset"]
    for i in trace.unflagged():
        if trace.margin[i] + off < 0:
            violations.append(
                f"smt margin {trace.margin[i]:.6g} at r = "
                f"{trace.r_values[i]:.6g} is below {-off:.6g}")
    bv = _borel_violation(trace, rs)
    if bv:
        violations.append(bv)

    results["trace"] = trace.to_dict()
    plots = {"margin": _margin_plot(trace, "second main theorem margin")}
    return RunOutputs(results, {"smt": _trace_table(trace)}, plots,
                      violations)


def _run_nev(cfg: dict) -> RunOutputs:
    n_vars = cfg["n"] + 1
    D = _build_divisor(cfg["divisor"], n_vars, "divisor")
    if cfg["candidates"] == "monomial":
        cands = monomial_filtration_candidates(
            D, cfg["n"], cfg["filtration_degree"], cfg["k_values"])
    else:
        cands = [_build_triple(t, n_vars, f"candidates[{i}]")
                 for i, t in enumerate(cfg["candidates"])]
    nb = nev_upper_bound(D, cands, pmap=_pool_map)

    violations = []
    expect = cfg["expect_bound"]
    if expect is not None:
        want = Fraction(expect) if isinstance(expect, str) \
            else Fraction(str(expect))
        if not nb.is_finite:
            violations.append(
                f"nev bound: nothing certified, expected <= {want}")
        elif Fraction(nb.value) > want:
            violations.append(
                f"nev bound {nb.value} exceeds the expected {want}")

    header = ["candidate", "label", "k", "dim_V", "mu", "bound", "passed",
              "worst_margin"]
    rows = []
    for i, (cand, cert) in enumerate(zip(cands, nb.certificates)):
        worst = min((c.margin for c in cert.conditions), default="")
        rows.append([i, cert.label, cand.k, cert.dim_V, str(cert.mu),
                     str(cert.bound), cert.passed, worst])
    results = {"bound": nb.to_dict(),
               "bound_float": float(nb.value) if nb.is_finite else None}
    return RunOutputs(results, {"candidates": (header, rows)}, {},
                      violations)


def _run_mc_validate(cfg: dict) -> RunOutputs:
    surfaces = [(s, _build_surface(s)) for s in cfg["surfaces"]]
    phis = [_build_kfun(p, f"phis[{i}]") for i, p in enumerate(cfg["phis"])]
    quad_tol = cfg["quad_tol"]
    sigmas = cfg["sigmas"]

    cases = []
    idx = 0
    for sspec, surface in surfaces:
        slabel = sspec["kind"] if sspec["kind"] == "euclidean" \
            else f"poincare(a={sspec['a']:g})"
        for r in cfg["radii"]:
            for phi, plabel in phis:
                cases.append((idx, surface, slabel, float(r), phi, plabel))
                idx += 1

    def occupation_case(case):
        i, surface, slabel, r, phi, plabel = case
        policy = PathPolicy(seed=cfg["seed"] + i, n_paths=cfg["n_paths"])
        est = occupation_estimate(surface, r, phi, policy, clock="surface")
        rho = surface.euclidean_radius(r)
        quad = green_area_integral(
            lambda z: phi(z) * surface.h(np.abs(z)), rho, tol=quad_tol)
        ref = quad.value / math.pi
        combined = math.hypot(est.stderr, quad.err_estimate / math.pi)
        delta = est.mean - ref
        ok = abs(delta) <= sigmas * combined + 1e-12
        return {"surface": slabel, "r": r, "phi": plabel,
                "mc_mean": est.mean, "mc_stderr": est.stderr,
                "quadrature": ref, "delta": delta,
                "combined_stderr": combined, "pass": ok,
                "seed": cfg["seed"] + i}

    occ = _pool_map(occupation_case, cases)
    violations = [
        f"mc occupation {row['surface']} r = {row['r']:g} phi = "
        f"{row['phi']}: |delta| = {abs(row['delta']):.4g} > "
        f"{sigmas:g} * {row['combined_stderr']:.4g}"
        for row in occ if not row["pass"]]

    results = {"occupation": occ}
    tables = {"occupation": (
        ["surface", "r", "phi", "mc_mean", "mc_stderr", "quadrature",
         "delta", "combined_stderr", "pass"],
        [[r["surface"], r["r"], r["phi"], r["mc_mean"], r["mc_stderr"],
          r["quadrature"], r["delta"], r["combined_stderr"], r["pass"]]
         for r in occ])}

    if cfg["exit_time"]:
        tcases = []
        i = 10_000
        for sspec, surface in surfaces:
            slabel = sspec["kind"] if sspec["kind"] == "euclidean" \
                else f"poincare(a={sspec['a']:g})"
            for r in cfg["radii"]:
                tcases.append((i, sspec["kind"], surface, slabel, float(r)))
                i += 1

        def exit_case(case):
            i, kind, surface, slabel, r = case
            policy = PathPolicy(seed=cfg["seed"] + i, n_paths=cfg["n_paths"])
            est = exit_time_estimate(surface, r, policy)
            row = {"surface": slabel, "r": r, "mc_mean": est.mean,
                   "mc_stderr": est.stderr, "flat_reference": r * r / 2.0,
                   "seed": cfg["seed"] + i}
            if kind == "euclidean":
                err = abs(est.mean - row["flat_reference"])
                # 1% of the closed form, but never tighter than the
                # noise floor of the requested path count
                gate = max(0.01 * row["flat_reference"], 3.0 * est.stderr)
                row["pass"] = err <= gate
                row["note"] = "closed form r^2/2, 1% or 3 sigma"
            else:
                margin = row["flat_reference"] - est.mean
                row["pass"] = margin > 0
                row["note"] = "curvature speeds exit, margin must be > 0"
            return row

        times = _pool_map(exit_case, tcases)
        violations += [
            f"mc exit time {row['surface']} r = {row['r']:g}: mean "
            f"{row['mc_mean']:.6g} vs r^2/2 = {row['flat_reference']:.6g} "
            f"({row['note']})"
            for row in times if not row["pass"]]
        results["exit_time"] = times
        tables["exit_time"] = (
            ["surface", "r", "mc_mean", "mc_stderr", "flat_reference",
             "pass"],
            [[r["surface"], r["r"], r["mc_mean"], r["mc_stderr"],
              r["flat_reference"], r["pass"]] for r in times])

    devs = [row["delta"] / row["combined_stderr"]
            if row["combined_stderr"] > 0 else 0.0 for row in occ]
    xs = list(range(len(devs)))
    plots = {"deviation": line_plot(
        [("delta / stderr", xs, devs),
         ("+3", xs, [3.0] * len(xs)), ("-3", xs, [-3.0] * len(xs))],
        "case", "standardized deviation", title="monte carlo vs quadrature")}
    rng = {"seed": cfg["seed"], "n_paths": cfg["n_paths"],
           "per_case_seed": "seed + case index",
           "scheme": "philox, one counter stream per path"}
    return RunOutputs(results, tables, plots, violations, rng)


def _run_surface_validate(cfg: dict) -> RunOutputs:
    surface = _build_surface(cfg["surface"])
    rs = _build_rgrid(cfg["r_grid"])
    tol = cfg["tol"]
    kind = cfg["surface"]["kind"]
    checks = []
    violations = []

    def record(name, max_err, ok, detail=""):
        checks.append({"name": name, "max_error": max_err, "pass": bool(ok),
                       "detail": detail})
        if not ok:
            violations.append(f"surface {name}: max error {max_err:.3e} "
                              f"exceeds {tol:.1e}" + (f" ({detail})"
                                                      if detail else ""))

    rho = [surface.euclidean_radius(r) for r in rs]
    back = [surface.geodesic_radius(p) for p in rho]
    err = max(abs(b - r) for b, r in zip(back, rs))
    record("radius roundtrip", err, err <= tol * max(1.0, rs[-1]))

    if kind == "poincare":
        a = cfg["surface"]["a"]
        closed = [math.tanh(a * r / 2.0) for r in rs]
        name = "euclidean radius vs tanh(a r / 2)"
    else:
        closed = list(rs)
        name = "euclidean radius identity"
    err = max(abs(p - c) for p, c in zip(rho, closed))
    record(name, err, err <= tol)

    jc = cfg["jacobi"]
    if jc is not None:
        kf = jc["kappa_floor"]
        sol = jacobi_solve(lambda t: kf, jc["r_max"])
        ts = np.linspace(jc["r_max"] / 400.0, jc["r_max"], 400)
        G = np.array([sol.G(float(t)) for t in ts])
        if kf == -1.0:
            err = float(np.max(np.abs(G - np.sinh(ts))))
            record("jacobi G vs sinh", err, err <= tol)
        low = float(np.max(ts - G))
        record("jacobi lower bound G >= t", max(low, 0.0), low <= tol)
        upper = G - ts * np.exp(ts * math.sqrt(-kf)) if kf < 0 else G - ts
        up = float(np.max(upper))
        record("jacobi upper bound", max(up, 0.0), up <= tol)
        ints = [(r, sol.integral_inv_G(1.0, float(r)))
                for r in ts if r > 1.0]
        if ints:
            worst = max(v - math.log(r) for r, v in ints)
            record("jacobi integral bound vs log r", max(worst, 0.0),
                   worst <= tol)

    for eta in cfg["green_eta"]:
        r_top = rs[-1]
        if eta >= r_top:
            raise ConfigError(
                f"key 'green_eta': {eta:g} must be below r_grid.max",
                "green_eta")
        rep = green_lower_bound_check(surface, eta, r_top)
        checks.append({"name": f"green lower bound, eta = {eta:g}",
                       "max_error": 0.0, "pass": rep.positive,
                       "detail": f"min ratio {rep.min_ratio:.6g}"})
        if not rep.positive:
            violations.append(
                f"surface green lower bound at eta = {eta:g}: observed "
                f"infimum {rep.min_ratio:.6g} is not positive")

    results = {"checks": checks}
    tables = {"radius": (
        ["r", "euclidean_radius", "closed_form", "roundtrip"],
        [[r, p, c, b] for r, p, c, b in zip(rs, rho, closed, back)])}
    plots = {"radius": line_plot(
        [("model", rs, rho), ("closed form", rs, closed)],
        "r", "euclidean radius", title=f"radius map, {kind}")}
    return RunOutputs(results, tables, plots, violations)


_RUNNERS = {
    "fmt": _run_fmt,
    "ldl": _run_ldl,
    "calculus": _run_calculus,
    "cartan": _run_cartan,
    "smt": _run_smt,
    "nev": _run_nev,
    "mc-validate": _run_mc_validate,
    "surface-validate": _run_surface_validate,
}


# -- config loading and command entry points ------------------------------------------


def _key_line(raw: str, key: Optional[str]) -> Optional[int]:
    if not key:
        return None
    needle = f'"{key}"'
    for i, line in enumerate(raw.splitlines(), 1):
        if needle in line:
            return i
    return None


def _load_config(path: str) -> Tuple[str, dict]:
    try:
        raw = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config: {exc}")
    try:
        cfg = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}")
    return raw, cfg


def _build_only(resolved: dict):
    """Parse every expression in the config without running anything."""
    name = resolved["experiment"]
    if name in ("fmt", "cartan", "smt"):
        curve = _parse_with(parse_curve, resolved["curve"], "curve")
        n_vars = len(curve.components)
        if name == "cartan":
            for i, s in enumerate(resolved["hyperplanes"]):
                _parse_with(lambda t: parse_poly(t, n_vars), s,
                            f"hyperplanes[{i}]")
        else:
            _build_divisor(resolved["divisor"], n_vars, "divisor")
    elif name == "ldl":
        _parse_with(parse_meromorphic, resolved["function"], "function")
        _parse_with(parse_entire, resolved["field"], "field")
    elif name == "calculus":
        _build_kfun(resolved["kfun"], "kfun")
    elif name == "nev":
        n_vars = resolved["n"] + 1
        _build_divisor(resolved["divisor"], n_vars, "divisor")
        if resolved["candidates"] != "monomial":
            for i, t in enumerate(resolved["candidates"]):
                _build_triple(t, n_vars, f"candidates[{i}]")
    elif name == "mc-validate":
        for i, p in enumerate(resolved["phis"]):
            _build_kfun(p, f"phis[{i}]")


def _cmd_run(args) -> int:
    raw, cfg = _load_config(args.config)
    try:
        resolved = _resolve_config(cfg)
        if args.out:
            resolved["out"] = args.out
        started = time.monotonic()
        outputs = _RUNNERS[resolved["experiment"]](resolved)
    except ConfigError as exc:
        line = _key_line(raw, exc.key)
        at = f"line {line}: " if line else ""
        print(f"error: {args.config}: {at}{exc}", file=sys.stderr)
        return EXIT_ERROR
    report_path = _write_artifacts(Path(resolved["out"]), resolved, outputs,
                                   started)
    print(f"wrote {report_path}")
    for v in outputs.violations:
        print(f"assertion failed: {v}", file=sys.stderr)
    if outputs.violations:
        print(f"FAIL ({len(outputs.violations)} assertion(s))")
        return EXIT_ASSERTION
    print("ok")
    return EXIT_OK


def _cmd_validate(args) -> int:
    raw, cfg = _load_config(args.config)
    try:
        resolved = _resolve_config(cfg)
        _build_only(resolved)
    except ConfigError as exc:
        line = _key_line(raw, exc.key)
        at = f"line {line}: " if line else ""
        print(f"error: {args.config}: {at}{exc}", file=sys.stderr)
        return EXIT_ERROR
    print(f"ok: valid {resolved['experiment']} config")
    return EXIT_OK


def _truthy(s: str) -> bool:
    return s.strip().lower() in ("1", "true", "yes")


def _cmd_plot(args) -> int:
    path = Path(args.csv)
    try:
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            fields = reader.fieldnames or []
            rows = list(reader)
    except OSError as exc:
        print(f"error: cannot read {path}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    wanted = [args.x] + list(args.y)
    for col in wanted:
        if col not in fields:
            print(f"error: column '{col}' not in {path} "
                  f"(has: {', '.join(fields)})", file=sys.stderr)
            return EXIT_ERROR

    def grab(col):
        out = []
        for row in rows:
            try:
                out.append(float(row[col]))
            except (TypeError, ValueError):
                out.append(math.nan)
        return out

    xs = grab(args.x)
    series = [(col, xs, grab(col)) for col in args.y]
    shade = ()
    if "flagged" in fields:
        flags = [_truthy(row["flagged"]) for row in rows]
        shade = _flag_bands(xs, flags)
    svg = line_plot(series, args.x, ", ".join(args.y),
                    title=args.title or path.stem, shade=shade,
                    logx=args.logx, logy=args.logy)
    out = Path(args.out) if args.out else path.with_suffix(".svg")
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(svg)
    print(f"wrote {out}")
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="nevlab",
        description="value distribution experiments on conformal discs")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run the experiment in a JSON config")
    p_run.add_argument("config")
    p_run.add_argument("--out", help="override the output directory")
    p_run.set_defaults(fn=_cmd_run)

    p_val = sub.add_parser("validate",
                           help="check a config without running it")
    p_val.add_argument("config")
    p_val.set_defaults(fn=_cmd_validate)

    p_plot = sub.add_parser("plot", help="plot columns of an emitted table")
    p_plot.add_argument("csv")
    p_plot.add_argument("--x", required=True)
    p_plot.add_argument("--y", action="append", required=True)
    p_plot.add_argument("--out")
    p_plot.add_argument("--title")
    p_plot.add_argument("--logx", action="store_true")
    p_plot.add_argument("--logy", action="store_true")
    p_plot.set_defaults(fn=_cmd_plot)

    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (DivisorError, NevError, ValueError, RuntimeError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
