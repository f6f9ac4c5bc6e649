"""Symbolic holomorphic expressions and projective curves.

Expressions are kept in the canonical form

    f(z) = sum_j  p_j(z) * exp(P_j(z))

with polynomial p_j, P_j. The class of such "exponential polynomials" is
closed under sums, products, integer powers and d/dz, which is exactly
what the derivative calculus, Wronskians and zero counting downstream
need. Coefficients are either exact Gaussian rationals (kept exact as
long as every input is exact) or complex floats.

Large arguments are the norm here (exp(2z) at Re z = 500 must not
overflow), so evaluation is done in log-rescaled form: every value is
carried as (log-magnitude, unit phase) and sums are rescaled by the
dominant term before mixing.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence, Tuple, Union

import numpy as np

from .gaussian import GaussianRational, exact_rank

ScalarIn = Union[int, float, complex, Fraction, GaussianRational]

_NEG_INF = float("-inf")


def _is_exact_scalar(x) -> bool:
    return isinstance(x, (int, Fraction, GaussianRational))


def _to_exact(x) -> GaussianRational:
    return GaussianRational.coerce(x)


def _scalar_zero(x) -> bool:
    if isinstance(x, GaussianRational):
        return x.is_zero()
    return x == 0


class Poly:
    """Univariate polynomial, ascending coefficients, exact or complex."""

    __slots__ = ("coeffs", "exact")

    def __init__(self, coeffs: Sequence, exact=None):
        if exact is None:
            exact = all(_is_exact_scalar(c) for c in coeffs)
        if exact:
            cs = [_to_exact(c) for c in coeffs]
        else:
            cs = [complex(c) for c in coeffs]
        while cs and _scalar_zero(cs[-1]):
            cs.pop()
        self.coeffs = tuple(cs)
        self.exact = exact

    # -- structure -------------------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def constant_value(self):
        return self.coeffs[0] if self.coeffs else (GaussianRational(0) if self.exact else 0j)

    def to_float(self) -> "Poly":
        if not self.exact:
            return self
        return Poly([complex(c) for c in self.coeffs], exact=False)

    def key(self) -> tuple:
        return self.coeffs

    # -- arithmetic --------------------------------------------------------------

    def _unify(self, other: "Poly"):
        if self.exact == other.exact:
            return self, other
        return self.to_float(), other.to_float()

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self._unify(other)
        n = max(len(a.coeffs), len(b.coeffs))
        zero = GaussianRational(0) if a.exact else 0j
        cs = [zero] * n
        for i, c in enumerate(a.coeffs):
            cs[i] = cs[i] + c
        for i, c in enumerate(b.coeffs):
            cs[i] = cs[i] + c
        return Poly(cs, exact=a.exact)

    def __neg__(self) -> "Poly":
        return Poly([-c for c in self.coeffs], exact=self.exact)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        a, b = self._unify(other)
        if a.is_zero() or b.is_zero():
            return Poly([], exact=a.exact)
        zero = GaussianRational(0) if a.exact else 0j
        cs = [zero] * (len(a.coeffs) + len(b.coeffs) - 1)
        for i, ca in enumerate(a.coeffs):
            if _scalar_zero(ca):
                continue
            for j, cb in enumerate(b.coeffs):
                cs[i + j] = cs[i + j] + ca * cb
        return Poly(cs, exact=a.exact)

    def scale(self, s) -> "Poly":
        if _is_exact_scalar(s) and self.exact:
            return Poly([c * _to_exact(s) for c in self.coeffs], exact=True)
        sf = complex(s)
        return Poly([complex(c) * sf for c in self.coeffs], exact=False)

    def derivative(self) -> "Poly":
        if len(self.coeffs) <= 1:
            return Poly([], exact=self.exact)
        return Poly([self.coeffs[k] * k for k in range(1, len(self.coeffs))],
                    exact=self.exact)

    def divmod(self, other: "Poly") -> Tuple["Poly", "Poly"]:
        """Exact-field polynomial division (used for gcd/multiplicities)."""
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        a, b = self._unify(other)
        rem = list(a.coeffs)
        zero = GaussianRational(0) if a.exact else 0j
        dq = len(rem) - len(b.coeffs)
        if dq < 0:
            return Poly([], exact=a.exact), a
        quot = [zero] * (dq + 1)
        lead = b.coeffs[-1]
        for k in range(dq, -1, -1):
            c = rem[k + len(b.coeffs) - 1] / lead
            quot[k] = c
            if _scalar_zero(c):
                continue
            for j, cb in enumerate(b.coeffs):
                rem[k + j] = rem[k + j] - c * cb
        return Poly(quot, exact=a.exact), Poly(rem[: len(b.coeffs) - 1], exact=a.exact)

    # -- evaluation ---------------------------------------------------------------

    def __call__(self, z):
        """Horner evaluation; z may be a complex scalar or a numpy array."""
        if isinstance(z, np.ndarray):
            out = np.zeros_like(z, dtype=complex)
            for c in reversed(self.coeffs):
                out = out * z + complex(c)
            return out
        out = 0j
        for c in reversed(self.coeffs):
            out = out * z + complex(c)
        return out

    def float_coeffs(self) -> np.ndarray:
        return np.array([complex(c) for c in self.coeffs], dtype=complex)

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = self._unify(other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly({list(self.coeffs)!r})"


def _exp_key(p: Poly) -> tuple:
    return p.coeffs


class HoloExpr:
    """Entire function represented as sum of p_j(z)*exp(P_j(z)) terms."""

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        # terms: dict  exponent-coeff-tuple -> (Poly exponent, Poly factor)
        self._terms = {}
        if terms:
            for expo, poly in terms.items() if isinstance(terms, dict) else terms:
                self._merge(expo, poly)

    def _merge(self, expo: Poly, poly: Poly):
        if poly.is_zero():
            return
        k = _exp_key(expo)
        if k in self._terms:
            prev_expo, prev_poly = self._terms[k]
            s = prev_poly + poly
            if s.is_zero():
                del self._terms[k]
            else:
                self._terms[k] = (prev_expo, s)
        else:
            self._terms[k] = (expo, poly)

    # -- constructors ---------------------------------------------------------

    @staticmethod
    def constant(c: ScalarIn) -> "HoloExpr":
        return HoloExpr([(Poly([]), Poly([c]))])

    @staticmethod
    def var() -> "HoloExpr":
        return HoloExpr([(Poly([]), Poly([0, 1]))])

    @staticmethod
    def from_poly(coeffs: Sequence[ScalarIn]) -> "HoloExpr":
        return HoloExpr([(Poly([]), Poly(list(coeffs)))])

    @staticmethod
    def exp_of(arg: "HoloExpr") -> "HoloExpr":
        """exp of a polynomial expression (the only allowed exp argument)."""
        p = arg.polynomial_part(strict=True)
        return HoloExpr([(p, Poly([1] if p.exact else [1.0 + 0j], exact=p.exact))])

    # -- structure --------------------------------------------------------------

    @property
    def terms(self):
        return tuple(sorted(self._terms.values(),
                            key=lambda t: (t[0].degree, repr(t[0].coeffs))))

    def n_terms(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_polynomial(self) -> bool:
        if not self._terms:
            return True
        if len(self._terms) != 1:
            return False
        (expo, _), = self._terms.values()
        return expo.is_zero()

    def is_exact(self) -> bool:
        return all(e.exact and p.exact for e, p in self._terms.values())

    def polynomial_part(self, strict=False) -> Poly:
        """The polynomial content; with strict=True, reject non-polynomials."""
        if self.is_zero():
            return Poly([])
        if self.is_polynomial():
            (_, p), = self._terms.values()
            return p
        if strict:
            raise ValueError("expression is not a polynomial")
        return self._terms.get((), (Poly([]), Poly([])))[1]

    def single_term(self):
        """(exponent Poly, factor Poly) if the expression is one term, else None."""
        if len(self._terms) == 1:
            return next(iter(self._terms.values()))
        return None

    # -- algebra ------------------------------------------------------------------

    def __add__(self, other):
        other = _coerce_expr(other)
        out = HoloExpr()
        for e, p in self._terms.values():
            out._merge(e, p)
        for e, p in other._terms.values():
            out._merge(e, p)
        return out

    __radd__ = __add__

    def __neg__(self):
        return HoloExpr([(e, -p) for e, p in self._terms.values()])

    def __sub__(self, other):
        return self + (-_coerce_expr(other))

    def __rsub__(self, other):
        return _coerce_expr(other) + (-self)

    def __mul__(self, other):
        other = _coerce_expr(other)
        out = HoloExpr()
        for e1, p1 in self._terms.values():
            for e2, p2 in other._terms.values():
                out._merge(e1 + e2, p1 * p2)
        return out

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers of expressions")
        out = HoloExpr.constant(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def derivative(self) -> "HoloExpr":
        out = HoloExpr()
        for e, p in self._terms.values():
            out._merge(e, p.derivative() + p * e.derivative())
        return out

    def to_float(self) -> "HoloExpr":
        return HoloExpr([(e.to_float(), p.to_float()) for e, p in self._terms.values()])

    def __eq__(self, other):
        if not isinstance(other, HoloExpr):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return hash(frozenset((e.coeffs, p.coeffs) for e, p in self._terms.values()))

    # -- evaluation ------------------------------------------------------------------

    def eval_log(self, z):
        """Evaluate as (log-magnitude, unit phase).

        z may be a complex scalar or numpy array; returns matching shapes.
        A true zero of the function yields (-inf, 1.0).
        """
        scalar = not isinstance(z, np.ndarray)
        za = np.asarray(z, dtype=complex)
        if not self._terms:
            lm = np.full(za.shape, _NEG_INF)
            ph = np.ones(za.shape, dtype=complex)
            return (float(lm.flat[0]), complex(ph.flat[0])) if scalar else (lm, ph)
        lms = []
        phs = []
        for e, p in self._terms.values():
            w = p(za)
            aw = np.abs(w)
            with np.errstate(divide="ignore", invalid="ignore"):
                lm = np.where(aw > 0, np.log(np.where(aw > 0, aw, 1.0)), _NEG_INF)
                ph = np.where(aw > 0, w / np.where(aw > 0, aw, 1.0), 1.0 + 0j)
            if not e.is_zero():
                pe = e(za)
                lm = lm + pe.real
                ph = ph * np.exp(1j * pe.imag)
            lms.append(lm)
            phs.append(ph)
        lms = np.array(lms)
        phs = np.array(phs)
        big = np.max(lms, axis=0)
        safe_big = np.where(np.isfinite(big), big, 0.0)
        with np.errstate(invalid="ignore"):
            weights = np.exp(lms - safe_big[None, ...])
        weights = np.where(np.isfinite(lms), weights, 0.0)
        mix = np.sum(weights * phs, axis=0)
        amp = np.abs(mix)
        with np.errstate(divide="ignore", invalid="ignore"):
            lm_out = np.where(amp > 0, safe_big + np.log(np.where(amp > 0, amp, 1.0)),
                              _NEG_INF)
            ph_out = np.where(amp > 0, mix / np.where(amp > 0, amp, 1.0), 1.0 + 0j)
        lm_out = np.where(np.isfinite(big), lm_out, _NEG_INF)
        if scalar:
            return float(lm_out.flat[0]), complex(ph_out.flat[0])
        return lm_out, ph_out

    def __call__(self, z):
        lm, ph = self.eval_log(z)
        if isinstance(lm, np.ndarray):
            with np.errstate(over="ignore"):
                return np.exp(lm) * ph
        if lm == _NEG_INF:
            return 0j
        return math.exp(lm) * ph if lm < 709 else complex(math.inf, 0) * ph

    def __repr__(self):
        if self.is_zero():
            return "HoloExpr(0)"
        bits = []
        for e, p in self.terms:
            s = f"({list(p.coeffs)})"
            if not e.is_zero():
                s += f"*exp({list(e.coeffs)})"
            bits.append(s)
        return "HoloExpr(" + " + ".join(bits) + ")"


def _coerce_expr(x) -> HoloExpr:
    if isinstance(x, HoloExpr):
        return x
    if isinstance(x, (int, float, complex, Fraction, GaussianRational)):
        return HoloExpr.constant(x)
    raise TypeError(f"cannot use {type(x).__name__} as an expression")


# convenience handles used all over the tests and demos
Z = HoloExpr.var()
ONE = HoloExpr.constant(1)


def exp_expr(arg: HoloExpr) -> HoloExpr:
    return HoloExpr.exp_of(arg)


class VectorField:
    """Holomorphic vector field a(z) d/dz with a zero-free on the domain.

    Zero-freeness is certified on construction: for a single-term
    expression p(z)exp(P(z)) the zeros are exactly those of p (the exp
    factor never vanishes), found by companion-matrix roots; multi-term
    coefficients cannot be certified and are rejected.
    """

    __slots__ = ("a", "domain_radius")

    def __init__(self, a: HoloExpr, domain_radius: float = math.inf):
        a = _coerce_expr(a)
        if a.is_zero():
            raise ValueError("vector field coefficient is identically zero")
        st = a.single_term()
        if st is None:
            raise ValueError(
                "cannot certify zero-freeness of a multi-term coefficient; "
                "use p(z)*exp(P(z)) form")
        _, p = st
        if p.degree >= 1:
            roots = np.roots(p.float_coeffs()[::-1])
            if math.isinf(domain_radius):
                raise ValueError(
                    f"coefficient has zeros (e.g. {roots[0]:.6g}) on the plane")
            inside = roots[np.abs(roots) < domain_radius]
            if inside.size:
                raise ValueError(
                    f"coefficient has a zero at {inside[0]:.6g} inside the domain")
        self.a = a
        self.domain_radius = domain_radius

    @staticmethod
    def d_dz(domain_radius: float = math.inf) -> "VectorField":
        return VectorField(ONE, domain_radius)

    def apply(self, expr: HoloExpr) -> HoloExpr:
        return expr.derivative() * self.a

    def __repr__(self):
        return f"VectorField({self.a!r})"


def xderive(expr: HoloExpr, field: VectorField, k: int = 1) -> HoloExpr:
    """k-fold application of the field: X^k expr."""
    if k < 0:
        raise ValueError("derivative order must be nonnegative")
    out = _coerce_expr(expr)
    for _ in range(k):
        out = field.apply(out)
    return out


class ProjectiveCurve:
    """Holomorphic map to P^n given by components without common zeros."""

    __slots__ = ("components", "domain_radius", "_derivs")

    def __init__(self, components: Sequence[HoloExpr],
                 domain_radius: float = math.inf, check: bool = True):
        comps = tuple(_coerce_expr(c) for c in components)
        if len(comps) < 2:
            raise ValueError("need at least two components")
        if all(c.is_zero() for c in comps):
            raise ValueError("all components identically zero")
        self.components = comps
        self.domain_radius = domain_radius
        self._derivs = None
        if check:
            self._reject_common_zeros()

    @property
    def n(self) -> int:
        return len(self.components) - 1

    def derivatives(self) -> Tuple[HoloExpr, ...]:
        if self._derivs is None:
            self._derivs = tuple(c.derivative() for c in self.components)
        return self._derivs

    def _reject_common_zeros(self):
        # cheap certificate first: if every component is polynomial and exact,
        # a common zero survives in the gcd of the polynomial parts
        polys = [c.polynomial_part(strict=False) for c in self.components
                 if c.is_polynomial() and not c.is_zero()]
        if len(polys) == len([c for c in self.components if not c.is_zero()]):
            if polys and all(p.exact for p in polys):
                g = polys[0]
                for p in polys[1:]:
                    g = _poly_gcd(g, p)
                if g.degree >= 1:
                    raise ValueError("components share a common zero")
                return
        # numeric screen on a grid covering the working disc
        r = self.domain_radius if math.isfinite(self.domain_radius) else 8.0
        th = np.linspace(0, 2 * np.pi, 48, endpoint=False)
        rad = np.linspace(0.05, 0.98, 12) * r
        zs = (rad[:, None] * np.exp(1j * th[None, :])).ravel()
        lms = np.array([c.eval_log(zs)[0] for c in self.components])
        big = np.max(lms, axis=0)
        if np.any(big < -200):
            bad = zs[np.argmin(big)]
            raise ValueError(f"components all nearly vanish near z = {bad:.6g}")

    def eval_projective(self, z):
        """(log_scale, direction) with max |direction entry| = 1.

        exp(log_scale) * direction reproduces the component values; the
        splitting keeps huge curves like [1 : e^z : e^{2z}] at Re z = 500
        finite in floating point.
        """
        scalar = not isinstance(z, np.ndarray)
        za = np.asarray(z, dtype=complex)
        lms, phs = [], []
        for c in self.components:
            lm, ph = c.eval_log(za)
            lms.append(np.asarray(lm, dtype=float))
            phs.append(np.asarray(ph, dtype=complex))
        lms = np.array(lms)
        phs = np.array(phs)
        scale = np.max(lms, axis=0)
        with np.errstate(invalid="ignore"):
            direction = np.exp(lms - scale[None, ...]) * phs
        direction = np.where(np.isfinite(lms), direction, 0.0)
        if scalar:
            return float(scale.flat[0]), np.array(
                [complex(v.flat[0]) for v in direction])
        return scale, direction

    def fs_density(self, z):
        """Pullback density of the unit-mass line form against euclidean area.

        Equals (1/2pi) * euclidean Laplacian of log ||f||; computed in
        rescaled closed form from first derivatives:
        (||f||^2 ||f'||^2 - |<f',f>|^2) / (pi ||f||^4),
        which is invariant under the rescaling used.
        """
        scalar = not isinstance(z, np.ndarray)
        za = np.asarray(z, dtype=complex)
        lms, phs = [], []
        for c in self.components:
            lm, ph = c.eval_log(za)
            lms.append(np.asarray(lm, dtype=float))
            phs.append(np.asarray(ph, dtype=complex))
        scale = np.max(np.array(lms), axis=0)
        v = np.empty((len(self.components),) + za.shape, dtype=complex)
        w = np.empty_like(v)
        for j, (lm, ph) in enumerate(zip(lms, phs)):
            with np.errstate(invalid="ignore", over="ignore"):
                v[j] = np.where(np.isfinite(lm), np.exp(lm - scale) * ph, 0.0)
        for j, d in enumerate(self.derivatives()):
            lm, ph = d.eval_log(za)
            lm = np.asarray(lm, dtype=float)
            ph = np.asarray(ph, dtype=complex)
            with np.errstate(invalid="ignore", over="ignore"):
                w[j] = np.where(np.isfinite(lm), np.exp(lm - scale) * ph, 0.0)
        n2v = np.sum(np.abs(v) ** 2, axis=0)
        n2w = np.sum(np.abs(w) ** 2, axis=0)
        inner = np.sum(w * np.conj(v), axis=0)
        num = n2v * n2w - np.abs(inner) ** 2
        num = np.maximum(num, 0.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            dens = num / (np.pi * n2v ** 2)
        if scalar:
            return float(dens.flat[0])
        return dens

    def __repr__(self):
        return f"ProjectiveCurve({list(self.components)!r})"


def eval_projective(curve: ProjectiveCurve, z):
    return curve.eval_projective(z)


def fs_density(curve: ProjectiveCurve, z):
    return curve.fs_density(z)


class MeromorphicFn:
    """Quotient num/den of entire expressions without common zeros."""

    __slots__ = ("num", "den")

    def __init__(self, num: HoloExpr, den: HoloExpr = None, check: bool = True):
        num = _coerce_expr(num)
        den = _coerce_expr(den if den is not None else 1)
        if den.is_zero():
            raise ZeroDivisionError("denominator identically zero")
        if check and num.is_polynomial() and den.is_polynomial():
            pn, pd = num.polynomial_part(), den.polynomial_part()
            if not pn.is_zero() and pd.degree >= 1 and pn.exact and pd.exact:
                if _poly_gcd(pn, pd).degree >= 1:
                    raise ValueError("numerator and denominator share a zero")
        self.num = num
        self.den = den

    def as_curve(self, domain_radius: float = math.inf) -> ProjectiveCurve:
        """The graph [den : num] in P^1."""
        return ProjectiveCurve([self.den, self.num], domain_radius, check=False)

    def log_abs(self, z):
        """log |num/den| (array-friendly, -inf/+inf at zeros/poles)."""
        ln, _ = self.num.eval_log(z)
        ld, _ = self.den.eval_log(z)
        return ln - ld

    def __call__(self, z):
        ln, pn = self.num.eval_log(z)
        ld, pd = self.den.eval_log(z)
        diff = ln - ld
        if isinstance(diff, np.ndarray):
            with np.errstate(over="ignore"):
                return np.exp(diff) * pn / pd
        return math.exp(min(diff, 709.0)) * pn / pd if math.isfinite(diff) else (
            0j if diff == _NEG_INF else complex(math.inf))

    def xderive(self, field: VectorField, k: int = 1) -> "MeromorphicFn":
        """X^k (num/den) as a reduced-growth quotient N_k / den^{k+1}."""
        nk = self.num
        den = self.den
        dend = den.derivative()
        for j in range(k):
            nk = (nk.derivative() * den - nk * dend.__mul__(j + 1)) * field.a
        return MeromorphicFn(nk, den ** (k + 1), check=False)

    def __repr__(self):
        return f"MeromorphicFn({self.num!r}, {self.den!r})"


def _poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd over the exact field (Euclid); inputs must be exact."""
    if not (a.exact and b.exact):
        raise ValueError("exact gcd needs exact coefficients")
    while not b.is_zero():
        _, r = a.divmod(b)
        a, b = b, r
    if a.is_zero():
        return a
    lead = a.coeffs[-1]
    return Poly([c / lead for c in a.coeffs], exact=True)


# -- Wronskians ------------------------------------------------------------------


def wronskian(components: Sequence[HoloExpr], field: VectorField) -> HoloExpr:
    """Symbolic Wronskian det[X^j f_k] for j,k = 0..n."""
    comps = [_coerce_expr(c) for c in components]
    n1 = len(comps)
    rows = [comps]
    for _ in range(n1 - 1):
        rows.append([field.apply(e) for e in rows[-1]])

    memo = {}

    def minor(r: int, cols: tuple) -> HoloExpr:
        if len(cols) == 1:
            return rows[r][cols[0]]
        key = (r, cols)
        got = memo.get(key)
        if got is not None:
            return got
        acc = HoloExpr()
        sign = 1
        for i, c in enumerate(cols):
            sub = minor(r + 1, cols[:i] + cols[i + 1:])
            term = rows[r][c] * sub
            acc = acc + (term if sign > 0 else -term)
            sign = -sign
        memo[key] = acc
        return acc

    return minor(0, tuple(range(n1)))


def log_wronskian_eval(components: Sequence[HoloExpr], field: VectorField, z):
    """The scaling-invariant determinant det[X^j f_k / f_k] at z.

    Entries are logarithmic derivatives, so the value stays moderate even
    when the components themselves overflow; it equals
    wronskian(components)(z) / prod components(z) wherever both exist.
    """
    comps = [_coerce_expr(c) for c in components]
    n1 = len(comps)
    scalar = not isinstance(z, np.ndarray)
    za = np.asarray(z, dtype=complex)
    mat = np.empty((n1, n1) + za.shape, dtype=complex)
    for k, f in enumerate(comps):
        lf, pf = f.eval_log(za)
        g = f
        for j in range(n1):
            if j == 0:
                mat[0, k] = 1.0
                continue
            g = field.apply(g)
            lg, pg = g.eval_log(za)
            with np.errstate(over="ignore", invalid="ignore"):
                mat[j, k] = np.exp(lg - lf) * pg / pf
    mat = np.moveaxis(mat, (0, 1), (-2, -1))
    det = np.linalg.det(mat)
    if scalar:
        return complex(det.flat[0])
    return det


def linearly_independent(components: Sequence[HoloExpr], rng=None) -> bool:
    """Linear independence over C.

    Exact polynomial families are decided by exact rank of the coefficient
    matrix; otherwise the scaling-invariant Wronskian determinant is
    sampled at random points (zero for dependent families, order-one for
    the generic independent family).
    """
    comps = [_coerce_expr(c) for c in components]
    if any(c.is_zero() for c in comps):
        return False
    if all(c.is_polynomial() and c.polynomial_part().exact for c in comps):
        deg = max(c.polynomial_part().degree for c in comps)
        rows = []
        for c in comps:
            cs = list(c.polynomial_part().coeffs)
            rows.append(cs + [GaussianRational(0)] * (deg + 1 - len(cs)))
        return exact_rank(rows) == len(comps)
    rng = np.random.default_rng(20240817) if rng is None else rng
    pts = rng.uniform(0.3, 2.2, size=8) * np.exp(
        1j * rng.uniform(0, 2 * np.pi, size=8))
    vals = log_wronskian_eval(comps, VectorField.d_dz(), pts)
    good = np.abs(vals[np.isfinite(vals)])
    return bool(good.size and np.max(good) > 1e-10)
