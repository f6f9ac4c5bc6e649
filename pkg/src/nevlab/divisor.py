"""Hypersurface divisors on projective space and their Weil functions.

A divisor component is the zero set of a homogeneous polynomial with
Gaussian-rational (or float) coefficients. Sums of components carry
integer multiplicities. The Weil function of a component,

    lambda(x) = deg Q * log||x|| + log height(Q) - log|Q(x)|,

is scale invariant and nonnegative because |Q(x)| <= height(Q) ||x||^d
for either supported norm of x (every monomial obeys |x^a| <= ||x||^d).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .gaussian import GaussianRational, exact_rank, qi

__all__ = [
    "DivisorError",
    "HomogeneousPoly",
    "hyperplane",
    "DivisorSum",
    "WeilSpec",
    "weil_component",
    "weil_sum",
    "ord_along",
    "general_position_check",
    "is_irreducible",
    "pullback",
]


class DivisorError(ValueError):
    pass


def _as_coeff(c):
    if isinstance(c, GaussianRational):
        return c
    if isinstance(c, (int, Fraction)):
        return qi(c)
    if isinstance(c, complex) and c.real == int(c.real) and c.imag == int(c.imag):
        return qi(int(c.real), int(c.imag))
    return complex(c)


def _is_exact(c) -> bool:
    return isinstance(c, GaussianRational)


class HomogeneousPoly:
    """Homogeneous polynomial in w_0..w_n, exponent dict representation."""

    __slots__ = ("terms", "n_vars", "degree", "exact")

    def __init__(self, terms: Dict[Tuple[int, ...], object], n_vars: int):
        clean: Dict[Tuple[int, ...], object] = {}
        degree = None
        exact = True
        for expo, c in terms.items():
            if len(expo) != n_vars:
                raise DivisorError("exponent arity does not match n_vars")
            c = _as_coeff(c)
            if isinstance(c, complex):
                exact = False
                if c == 0:
                    continue
            elif c.is_zero():
                continue
            d = sum(expo)
            if degree is None:
                degree = d
            elif d != degree:
                raise DivisorError("terms of unequal total degree")
            clean[tuple(expo)] = c
        if degree is None:
            raise DivisorError("the zero polynomial cuts out no divisor")
        self.terms = clean
        self.n_vars = n_vars
        self.degree = degree
        self.exact = exact and all(_is_exact(c) for c in clean.values())

    # -- constructors -------------------------------------------------

    @classmethod
    def from_monomials(cls, pairs: Iterable[Tuple[Tuple[int, ...], object]],
                       n_vars: int) -> "HomogeneousPoly":
        d: Dict[Tuple[int, ...], object] = {}
        for expo, c in pairs:
            expo = tuple(expo)
            if expo in d:
                d[expo] = d[expo] + _as_coeff(c)
            else:
                d[expo] = _as_coeff(c)
        return cls(d, n_vars)

    # -- basic queries ------------------------------------------------

    def coeff_height(self) -> float:
        """Sum of coefficient magnitudes; the normalizer in the Weil function."""
        tot = 0.0
        for c in self.terms.values():
            if isinstance(c, GaussianRational):
                tot += math.sqrt(float(c.abs2()))
            else:
                tot += abs(c)
        return tot

    def float_terms(self) -> List[Tuple[Tuple[int, ...], complex]]:
        out = []
        for expo, c in self.terms.items():
            if isinstance(c, GaussianRational):
                out.append((expo, complex(c)))
            else:
                out.append((expo, c))
        return out

    def is_linear(self) -> bool:
        return self.degree == 1

    def linear_coeffs(self) -> List[object]:
        if self.degree != 1:
            raise DivisorError("not a hyperplane")
        out = [qi(0)] * self.n_vars
        for expo, c in self.terms.items():
            out[expo.index(1)] = c
        return out

    def is_proportional(self, other: "HomogeneousPoly") -> bool:
        if self.n_vars != other.n_vars or self.degree != other.degree:
            return False
        if set(self.terms) != set(other.terms):
            return False
        ratio = None
        for expo, c in self.terms.items():
            oc = other.terms[expo]
            if self.exact and other.exact:
                r = c / oc
            else:
                r = complex(c) / complex(oc)
            if ratio is None:
                ratio = r
            elif isinstance(r, GaussianRational):
                if r != ratio:
                    return False
            elif abs(r - ratio) > 1e-12 * abs(ratio):
                return False
        return True

    # -- evaluation ---------------------------------------------------

    def __call__(self, w: np.ndarray) -> np.ndarray:
        """Evaluate at column vectors w of shape (n_vars,) or (n_vars, N).

        Callers keep entries O(1) (normalized directions); magnitudes stay
        below coeff_height so no overflow handling is needed here.
        """
        w = np.asarray(w, dtype=complex)
        single = w.ndim == 1
        if single:
            w = w[:, None]
        acc = np.zeros(w.shape[1], dtype=complex)
        for expo, c in self.float_terms():
            mono = np.ones(w.shape[1], dtype=complex)
            for i, e in enumerate(expo):
                if e == 1:
                    mono = mono * w[i]
                elif e:
                    mono = mono * w[i] ** e
            acc += c * mono
        return acc[0] if single else acc

    def eval_exact(self, w: Sequence[object]):
        """Exact value at a Gaussian-rational point."""
        acc = qi(0)
        for expo, c in self.terms.items():
            mono = c
            for i, e in enumerate(expo):
                if e:
                    mono = mono * (w[i] ** e)
            acc = acc + mono
        return acc

    def log_abs(self, log_scale, direction) -> np.ndarray:
        """log|Q| at w = exp(log_scale) * direction, homogeneity made explicit."""
        vals = np.abs(self(direction))
        with np.errstate(divide="ignore"):
            return self.degree * np.asarray(log_scale, dtype=float) + np.log(vals)

    # -- algebra used by the stratification code ----------------------

    def partial(self, i: int) -> Optional["HomogeneousPoly"]:
        out: Dict[Tuple[int, ...], object] = {}
        for expo, c in self.terms.items():
            if expo[i] == 0:
                continue
            e = list(expo)
            e[i] -= 1
            out[tuple(e)] = c * expo[i] if _is_exact(c) else complex(c) * expo[i]
        if not out:
            return None
        return HomogeneousPoly(out, self.n_vars)

    def __mul__(self, other):
        if not isinstance(other, HomogeneousPoly):
            return NotImplemented
        if other.n_vars != self.n_vars:
            raise DivisorError("factors live in different projective spaces")
        mixed = not (self.exact and other.exact)
        out: Dict[Tuple[int, ...], object] = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                prod = complex(ca) * complex(cb) if mixed else ca * cb
                out[e] = out[e] + prod if e in out else prod
        return HomogeneousPoly(out, self.n_vars)

    def compose_linear(self, matrix: Sequence[Sequence[object]]) -> "HomogeneousPoly":
        """Substitute w_i = sum_j matrix[i][j] u_j.

        matrix is (n_vars) x (m) over Gaussian rationals; the result lives
        in u_0..u_{m-1}. Exactness is preserved.
        """
        m = len(matrix[0])
        if len(matrix) != self.n_vars:
            raise DivisorError("substitution matrix has wrong height")
        rows = [[_as_coeff(v) for v in row] for row in matrix]
        # linear forms as degree-1 exponent dicts, then multiply out
        forms = []
        for row in rows:
            f: Dict[Tuple[int, ...], object] = {}
            for j, v in enumerate(row):
                if _is_exact(v) and v.is_zero():
                    continue
                if not _is_exact(v) and v == 0:
                    continue
                e = [0] * m
                e[j] = 1
                f[tuple(e)] = v
            forms.append(f)

        def mul(a: Dict, b: Dict) -> Dict:
            out: Dict[Tuple[int, ...], object] = {}
            for ea, ca in a.items():
                for eb, cb in b.items():
                    e = tuple(x + y for x, y in zip(ea, eb))
                    prod = ca * cb
                    if e in out:
                        out[e] = out[e] + prod
                    else:
                        out[e] = prod
            return out

        # powers of each substituted form by repeated products; degrees in
        # this laboratory stay small enough that no caching is needed
        acc: Dict[Tuple[int, ...], object] = {}
        for expo, c in self.terms.items():
            if any(e and not forms[i] for i, e in enumerate(expo)):
                continue  # monomial hits a zero substitution
            term = {tuple([0] * m): c}
            for i, e in enumerate(expo):
                for _ in range(e):
                    term = mul(term, forms[i])
            for e2, c2 in term.items():
                if e2 in acc:
                    acc[e2] = acc[e2] + c2
                else:
                    acc[e2] = c2
        if not acc or all(
                (c.is_zero() if _is_exact(c) else c == 0) for c in acc.values()):
            return None  # identically zero on the image
        return HomogeneousPoly(acc, m)

    def __repr__(self) -> str:
        names = [f"w{i}" for i in range(self.n_vars)]
        bits = []
        for expo, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(
                f"{names[i]}^{e}" if e > 1 else names[i]
                for i, e in enumerate(expo) if e)
            bits.append(f"({c})*{mono}" if mono else f"({c})")
        return " + ".join(bits)


def hyperplane(coeffs: Sequence[object]) -> HomogeneousPoly:
    """The hyperplane sum_i coeffs[i] w_i = 0."""
    n = len(coeffs)
    terms = {}
    for i, c in enumerate(coeffs):
        e = [0] * n
        e[i] = 1
        terms[tuple(e)] = c
    return HomogeneousPoly(terms, n)


class DivisorSum:
    """Effective divisor sum(m_j D_j) with pairwise nonproportional components."""

    def __init__(self, components: Sequence[HomogeneousPoly],
                 multiplicities: Optional[Sequence[int]] = None):
        comps = list(components)
        if not comps:
            raise DivisorError("empty divisor")
        n = comps[0].n_vars
        if any(c.n_vars != n for c in comps):
            raise DivisorError("components live in different projective spaces")
        for a, b in itertools.combinations(comps, 2):
            if a.is_proportional(b):
                raise DivisorError(
                    "proportional components; merge them into a multiplicity")
        if multiplicities is None:
            mult = [1] * len(comps)
        else:
            mult = [int(m) for m in multiplicities]
            if len(mult) != len(comps) or any(m <= 0 for m in mult):
                raise DivisorError("multiplicities must be positive, one per component")
        self.components = comps
        self.multiplicities = mult
        self.n_vars = n

    @property
    def degree(self) -> int:
        return sum(m * c.degree for m, c in zip(self.multiplicities, self.components))

    def __iter__(self):
        return iter(zip(self.components, self.multiplicities))

    def __len__(self) -> int:
        return len(self.components)


@dataclass(frozen=True)
class WeilSpec:
    """Choice of projective norm entering every Weil function.

    "max" uses max_i |x_i|; "fs" uses the 2-norm, the one whose Jensen
    boundary average reproduces the smooth characteristic exactly.
    """

    norm: str = "max"

    def __post_init__(self):
        if self.norm not in ("max", "fs"):
            raise DivisorError(f"unknown norm {self.norm!r}")

    def log_norm(self, direction: np.ndarray) -> np.ndarray:
        d = np.abs(np.asarray(direction, dtype=complex))
        if self.norm == "max":
            return np.log(np.max(d, axis=0))
        return 0.5 * np.log(np.sum(d * d, axis=0))


def weil_component(Q: HomogeneousPoly, direction: np.ndarray,
                   spec: WeilSpec = WeilSpec()) -> np.ndarray:
    """lambda_Q at the projective point(s) given by direction columns."""
    direction = np.asarray(direction, dtype=complex)
    lognorm = spec.log_norm(direction)
    with np.errstate(divide="ignore"):
        logq = np.log(np.abs(Q(direction)))
    lam = Q.degree * lognorm + math.log(Q.coeff_height()) - logq
    return lam


def weil_sum(D: DivisorSum, direction: np.ndarray,
             spec: WeilSpec = WeilSpec()) -> np.ndarray:
    parts = [m * weil_component(Q, direction, spec) for Q, m in D]
    return sum(parts[1:], parts[0])


def ord_along(Q: HomogeneousPoly, basis: Sequence[Sequence[object]],
              complement: Sequence[Sequence[object]]) -> int:
    """Vanishing order of Q along the linear subspace spanned by basis.

    basis and complement are lists of column vectors over the Gaussian
    rationals whose union spans the ambient space. Writing a generic
    point as B u + C v, the order is the least total v-degree appearing
    in Q(B u + C v); exact arithmetic throughout.
    """
    if not Q.exact:
        raise DivisorError("ord_along needs exact coefficients")
    nb, nc = len(basis), len(complement)
    cols = list(basis) + list(complement)
    mat = [[_as_coeff(col[i]) for col in cols] for i in range(Q.n_vars)]
    if exact_rank([[mat[i][j] for j in range(nb + nc)]
                   for i in range(Q.n_vars)]) != Q.n_vars:
        raise DivisorError("basis + complement do not span the ambient space")
    comp = Q.compose_linear(mat)
    if comp is None:
        raise DivisorError("polynomial vanishes identically under substitution")
    best = None
    for expo in comp.terms:
        vdeg = sum(expo[nb:])
        best = vdeg if best is None else min(best, vdeg)
        if best == 0:
            return 0
    return best


def general_position_check(D: DivisorSum) -> bool:
    """Every subset of size <= n+1 of the hyperplanes is linearly independent.

    Only defined for sums of hyperplanes; rank checks run over the exact
    field so there is no tolerance to tune.
    """
    if any(c.degree != 1 for c in D.components):
        raise DivisorError("general position check only covers hyperplanes")
    if not all(c.exact for c in D.components):
        raise DivisorError("general position check needs exact coefficients")
    rows = [c.linear_coeffs() for c in D.components]
    n1 = D.n_vars
    k = min(len(rows), n1)
    for subset in itertools.combinations(range(len(rows)), k):
        sub = [rows[i] for i in subset]
        if exact_rank(sub) != k:
            return False
    return True


def is_irreducible(Q: HomogeneousPoly) -> bool:
    """Irreducibility over Q(i), via factorization of the exact form."""
    if not Q.exact:
        raise DivisorError("irreducibility is only decided for exact coefficients")
    if Q.degree == 1:
        return True
    import sympy

    syms = sympy.symbols(f"w0:{Q.n_vars}")
    expr = sympy.Integer(0)
    for expo, c in Q.terms.items():
        mono = sympy.Integer(1)
        for s, e in zip(syms, expo):
            if e:
                mono *= s ** e
        cr = sympy.Rational(c.re.numerator, c.re.denominator)
        ci = sympy.Rational(c.im.numerator, c.im.denominator)
        expr += (cr + ci * sympy.I) * mono
    _, factors = sympy.factor_list(expr, *syms, domain="QQ_I")
    total = sum(m for f, m in factors if f.free_symbols)
    return total == 1


def pullback(Q: HomogeneousPoly, components: Sequence) -> object:
    """Q(f_0, ..., f_n) as a holomorphic expression.

    components are the entire-function coordinates of a curve; exact
    coefficients survive so downstream zero finding can stay exact.
    """
    from .holo import HoloExpr

    if len(components) != Q.n_vars:
        raise DivisorError("curve and divisor dimensions do not match")
    acc = None
    for expo, c in Q.terms.items():
        term = HoloExpr.constant(c)
        for comp, e in zip(components, expo):
            for _ in range(e):
                term = term * comp
        acc = term if acc is None else acc + term
    return acc
