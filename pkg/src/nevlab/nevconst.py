"""Upper bounds for the Nevanlinna constant, with exact certificates.

The constant is only ever approached from above. A candidate triple
(k, V, mu) consists of a linear system V of degree-(k*d) forms together
with one basis of V per stratum of the divisor; it certifies the bound
dim V / mu as soon as, for every stratum sigma and every component E
through it,

    sum_{s in B_sigma} ord_E(s)  >=  mu * k * ord_E(D).

Everything on this page is decided over the Gaussian rationals: strata
by rank or elimination, spanning by determinants, orders by polynomial
division. Floating point enters only in smt_full_check, where a
certified bound is played against measured proximity and characteristic
functions on a radius grid.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import (Callable, Dict, FrozenSet, List, Mapping, Optional,
                    Sequence, Tuple)

from .divisor import (DivisorError, DivisorSum, HomogeneousPoly, WeilSpec,
                      hyperplane, ord_along, pullback)
from .gaussian import exact_det, exact_nullspace_vector, exact_rank, qi
from .holo import HoloExpr, ProjectiveCurve, linearly_independent
from .nevanlinna import RGrid, boundary_T, proximity_m
from .smt import (InequalityTrace, _curvature_term, _growth_flags, _loglog,
                  _logplus)
from .surface import SurfaceModel

__all__ = [
    "NevError",
    "Stratification",
    "stratify",
    "NevTriple",
    "OrderCondition",
    "TripleCertificate",
    "verify_triple",
    "NevBound",
    "nev_upper_bound",
    "monomial_filtration_candidates",
    "veronese_sections",
    "smt_full_check",
]

MAX_COMPONENT_DEGREE = 3


class NevError(ValueError):
    pass


# -- stratification -----------------------------------------------------------------


@dataclass(frozen=True)
class Stratification:
    """Subsets of divisor components with a common projective zero.

    strata always contains the empty set (the open stratum away from the
    divisor, where the vanishing conditions are vacuous) and is closed
    downward: dropping components can only grow the intersection.
    Witnesses are stored for the nonempty subsets; exact Gaussian-rational
    points whenever the subset is cut out by hyperplanes, numeric points
    from elimination otherwise (or None when no closed-form point came
    out of the solver).
    """

    components: Tuple[HomogeneousPoly, ...]
    n: int
    strata: Tuple[FrozenSet[int], ...]
    witnesses: Mapping[FrozenSet[int], Optional[Tuple[object, ...]]]

    def nonempty(self) -> Tuple[FrozenSet[int], ...]:
        return tuple(s for s in self.strata if s)


def _to_sympy(Q: HomogeneousPoly, syms):
    import sympy

    expr = sympy.Integer(0)
    for expo, c in Q.terms.items():
        mono = sympy.Integer(1)
        for s, e in zip(syms, expo):
            if e:
                mono *= s ** e
        cr = sympy.Rational(c.re.numerator, c.re.denominator)
        ci = sympy.Rational(c.im.numerator, c.im.denominator)
        expr += (cr + ci * sympy.I) * mono
    return expr


def _linear_stratum(comps: Sequence[HomogeneousPoly], idx: Tuple[int, ...]):
    """(in_lambda, witness) for a set of hyperplanes, by exact rank."""
    rows = [comps[i].linear_coeffs() for i in idx]
    n1 = comps[idx[0]].n_vars
    if exact_rank(rows) >= n1:
        return False, None
    vec = exact_nullspace_vector(rows, n1)
    return True, tuple(vec) if vec is not None else None


def _chart_solve(polys, n1: int, chart: int):
    """(solvable, witness) for homogeneous polys on the chart w_chart = 1.

    Emptiness is exact: the dehomogenized system has no complex solution
    iff its Groebner basis is [1] (the field of definition does not
    matter for membership of 1). Witness extraction is best-effort.
    """
    import sympy

    syms = sympy.symbols(f"w0:{n1}")
    free = [s for i, s in enumerate(syms) if i != chart]
    subs = {syms[chart]: 1}
    system = [sympy.expand(_to_sympy(Q, syms).subs(subs)) for Q in polys]
    nonzero = [e for e in system if e != 0]
    if not nonzero:
        point = [0] * n1
        point[chart] = 1
        return True, tuple(point)
    if any(e.is_number for e in nonzero):
        return False, None
    gb = sympy.groebner(nonzero, *free, order="grevlex", domain="QQ_I")
    if any(e.is_number for e in gb.exprs):
        return False, None
    witness = None
    try:
        sols = sympy.solve(nonzero, free, dict=True)
    except Exception:
        sols = []
    for sol in sols:
        vals = []
        ok = True
        for i, s in enumerate(syms):
            if i == chart:
                vals.append(1.0 + 0.0j)
                continue
            v = sol.get(s, s)
            # parametric solutions stay valid for any parameter value
            v = v.subs({t: 1 for t in v.free_symbols})
            try:
                vals.append(complex(v))
            except (TypeError, ValueError):
                ok = False
                break
        if ok:
            witness = tuple(vals)
            break
    return True, witness


def stratify(divisor: DivisorSum, n: int) -> Stratification:
    """Enumerate the subsets of components with nonempty common zero in P^n.

    Hyperplane subsets are decided by exact rank; anything involving a
    higher-degree component (capped at degree 3) goes through elimination
    chart by chart. The enumeration prunes upward: a subset is only
    tested when all its maximal proper subsets already qualified.
    """
    comps = tuple(divisor.components)
    n1 = comps[0].n_vars
    if n1 != n + 1:
        raise NevError(f"divisor lives in P^{n1 - 1}, not P^{n}")
    for Q in comps:
        if not Q.exact:
            raise NevError("stratification needs exact coefficients")
        if Q.degree > MAX_COMPONENT_DEGREE:
            raise NevError(
                f"component of degree {Q.degree} exceeds exact solvability "
                f"(max {MAX_COMPONENT_DEGREE})")

    in_lambda = {frozenset(): True}
    witnesses: Dict[FrozenSet[int], Optional[Tuple[object, ...]]] = {}
    q = len(comps)
    for size in range(1, q + 1):
        found = False
        for idx in itertools.combinations(range(q), size):
            sigma = frozenset(idx)
            if not all(in_lambda.get(sigma - {i}, False) for i in idx):
                continue
            if all(comps[i].degree == 1 for i in idx):
                ok, wit = _linear_stratum(comps, idx)
            elif size == 1:
                # a positive-degree hypersurface always has projective zeros
                ok, wit = True, None
                for chart in range(n1):
                    ok, wit = _chart_solve([comps[idx[0]]], n1, chart)
                    if ok:
                        break
            else:
                ok, wit = False, None
                for chart in range(n1):
                    solvable, w = _chart_solve([comps[i] for i in idx],
                                               n1, chart)
                    if solvable:
                        ok = True
                        wit = w
                        break
            if ok:
                in_lambda[sigma] = True
                witnesses[sigma] = wit
                found = True
        if not found:
            break
    strata = tuple(sorted(in_lambda, key=lambda s: (len(s), sorted(s))))
    return Stratification(comps, n, strata, witnesses)


# -- triples and certificates -------------------------------------------------------


@dataclass(frozen=True)
class NevTriple:
    """Candidate (k, V, mu) with one basis of V per stratum.

    V is a basis of the linear system (degree k*d forms, exact
    coefficients); stratum_bases maps a component subset to the adapted
    basis used at its stratum. Strata without an entry fall back to V
    itself. mu is the vanishing weight; the implied bound is dim V / mu.
    """

    k: int
    V: Tuple[HomogeneousPoly, ...]
    stratum_bases: Mapping[FrozenSet[int], Tuple[HomogeneousPoly, ...]]
    mu: Fraction
    label: str = ""

    def __post_init__(self):
        if self.k < 1:
            raise NevError("k must be a positive integer")
        mu = Fraction(self.mu)
        object.__setattr__(self, "mu", mu)
        if mu <= 0:
            raise NevError("mu must be positive")
        V = tuple(self.V)
        object.__setattr__(self, "V", V)
        if len(V) < 2:
            raise NevError("dim V must exceed 1")
        deg = V[0].degree
        for s in V:
            if s.degree != deg:
                raise NevError("V mixes degrees; not a linear system")
            if not s.exact:
                raise NevError("certificates need exact coefficients")
        if deg % self.k:
            raise NevError(f"degree {deg} is not a multiple of k={self.k}")
        bases = {frozenset(key): tuple(val)
                 for key, val in dict(self.stratum_bases).items()}
        object.__setattr__(self, "stratum_bases", bases)

    @property
    def dim_V(self) -> int:
        return len(self.V)

    @property
    def bound(self) -> Fraction:
        return Fraction(self.dim_V) / self.mu

    def basis_at(self, sigma: FrozenSet[int]) -> Tuple[HomogeneousPoly, ...]:
        return self.stratum_bases.get(sigma, self.V)


def _monomial_axis(polys: Sequence[HomogeneousPoly]) -> List[Tuple[int, ...]]:
    monos = set()
    for p in polys:
        monos.update(p.terms)
    return sorted(monos)


def _coeff_rows(polys: Sequence[HomogeneousPoly],
                axis: Sequence[Tuple[int, ...]]):
    index = {e: j for j, e in enumerate(axis)}
    zero = qi(0)
    rows = []
    for p in polys:
        row = [zero] * len(axis)
        for e, c in p.terms.items():
            row[index[e]] = c
        rows.append(row)
    return rows


def _solve_exact(columns, rhs):
    """One exact solution x of (columns) x = rhs, or None.

    columns is a list of GaussianRational column vectors; plain Gaussian
    elimination on the augmented matrix, pivoting on the first nonzero
    entry (no stability concerns over an exact field).
    """
    m = len(rhs)
    k = len(columns)
    aug = [[columns[j][i] for j in range(k)] + [rhs[i]] for i in range(m)]
    pivots = []
    row = 0
    for col in range(k):
        piv = next((i for i in range(row, m) if not aug[i][col].is_zero()),
                   None)
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        inv = aug[row][col]
        aug[row] = [v / inv for v in aug[row]]
        for i in range(m):
            if i != row and not aug[i][col].is_zero():
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[row])]
        pivots.append(col)
        row += 1
        if row == m:
            break
    for i in range(row, m):
        if not aug[i][k].is_zero():
            return None
    x = [qi(0)] * k
    for r, col in enumerate(pivots):
        x[col] = aug[r][k]
    return x


def change_of_basis(V: Sequence[HomogeneousPoly],
                    B: Sequence[HomogeneousPoly]):
    """Exact matrix C with B[i] = sum_j C[i][j] V[j], or None.

    None means some element of B falls outside span(V); a square C with
    nonzero determinant certifies that B is again a basis of span(V).
    """
    axis = _monomial_axis(list(V) + list(B))
    columns = _coeff_rows(V, axis)  # row of V[j] = column j of the system
    brows = _coeff_rows(B, axis)
    C = []
    for row in brows:
        x = _solve_exact(columns, row)
        if x is None:
            return None
        C.append(x)
    return C


def component_order(s: HomogeneousPoly, E: HomogeneousPoly) -> int:
    """ord_E(s): the power of E's defining form dividing s, exactly."""
    if not (s.exact and E.exact):
        raise NevError("orders are only computed for exact coefficients")
    if E.degree == 1:
        a = E.linear_coeffs()
        n1 = E.n_vars
        p = next(i for i, c in enumerate(a) if not c.is_zero())
        basis = []
        for j in range(n1):
            if j == p:
                continue
            col = [qi(0)] * n1
            col[j] = qi(1)
            col[p] = -(a[j] / a[p])
            basis.append(col)
        comp = [qi(0)] * n1
        comp[p] = qi(1)
        return ord_along(s, basis, [comp])
    import sympy

    syms = sympy.symbols(f"w0:{s.n_vars}")
    ps = sympy.Poly(_to_sympy(s, syms), *syms, domain="QQ_I")
    pe = sympy.Poly(_to_sympy(E, syms), *syms, domain="QQ_I")
    order = 0
    while True:
        quo, rem = ps.div(pe)
        if not rem.is_zero or quo.is_zero:
            return order
        order += 1
        ps = quo


@dataclass(frozen=True)
class OrderCondition:
    """One inequality sum ord_E(B_sigma) >= mu * k * ord_E(D), exactly."""

    stratum: Tuple[int, ...]
    component: int
    component_desc: str
    orders: Tuple[int, ...]
    achieved: Fraction
    required: Fraction

    @property
    def margin(self) -> Fraction:
        return self.achieved - self.required

    @property
    def passed(self) -> bool:
        return self.achieved >= self.required

    def describe(self) -> str:
        verdict = "ok" if self.passed else "FAIL"
        return (f"stratum {set(self.stratum) or '{}'}, E = component "
                f"{self.component} ({self.component_desc}): "
                f"sum ord = {self.achieved} vs required {self.required} "
                f"[{verdict}]")


@dataclass(frozen=True)
class TripleCertificate:
    passed: bool
    dim_V: int
    mu: Fraction
    bound: Fraction
    conditions: Tuple[OrderCondition, ...]
    label: str = ""

    @property
    def failures(self) -> Tuple[OrderCondition, ...]:
        return tuple(c for c in self.conditions if not c.passed)

    def to_dict(self) -> Dict:
        return {
            "passed": self.passed,
            "dim_V": self.dim_V,
            "mu": str(self.mu),
            "bound": str(self.bound),
            "label": self.label,
            "conditions": [{
                "stratum": sorted(c.stratum),
                "component": c.component,
                "component_desc": c.component_desc,
                "orders": list(c.orders),
                "achieved": str(c.achieved),
                "required": str(c.required),
                "margin": str(c.margin),
                "passed": c.passed,
            } for c in self.conditions],
        }


def verify_triple(divisor: DivisorSum, triple: NevTriple,
                  strat: Optional[Stratification] = None) -> TripleCertificate:
    """Exact pass/fail certificate for one candidate triple.

    Spanning is checked first: every declared stratum basis must be a
    basis of span(V) (square exact change-of-basis matrix with nonzero
    determinant), otherwise the triple is rejected before any order is
    computed. The certificate then lists one condition per (stratum,
    component-through-it) pair with the per-element orders.
    """
    comps = tuple(divisor.components)
    n1 = comps[0].n_vars
    if triple.V[0].n_vars != n1:
        raise NevError("triple and divisor live in different spaces")
    if strat is None:
        strat = stratify(divisor, n1 - 1)

    axis = _monomial_axis(triple.V)
    if exact_rank(_coeff_rows(triple.V, axis)) != triple.dim_V:
        raise NevError("V is linearly dependent; not a basis")
    for sigma, basis in triple.stratum_bases.items():
        if len(basis) != triple.dim_V:
            raise NevError(
                f"stratum basis for {set(sigma) or '{}'} has "
                f"{len(basis)} elements, dim V = {triple.dim_V}")
        C = change_of_basis(triple.V, basis)
        if C is None or exact_det(C).is_zero():
            raise NevError(
                f"stratum basis for {set(sigma) or '{}'} does not span V")

    mults = {i: m for i, (_, m) in enumerate(divisor)}
    conditions = []
    for sigma in strat.nonempty():
        basis = triple.basis_at(sigma)
        for e in sorted(sigma):
            orders = tuple(component_order(s, comps[e]) for s in basis)
            achieved = Fraction(sum(orders))
            required = triple.mu * triple.k * mults[e]
            conditions.append(OrderCondition(
                stratum=tuple(sorted(sigma)), component=e,
                component_desc=repr(comps[e]), orders=orders,
                achieved=achieved, required=required))
    passed = all(c.passed for c in conditions)
    return TripleCertificate(passed, triple.dim_V, triple.mu, triple.bound,
                             tuple(conditions), triple.label)


@dataclass(frozen=True)
class NevBound:
    """min dim V / mu over the verified candidates; inf when none verify."""

    value: object  # Fraction, or math.inf when nothing verified
    best: Optional[int]
    certificates: Tuple[TripleCertificate, ...]
    explanation: str

    @property
    def is_finite(self) -> bool:
        return self.value != math.inf

    def to_dict(self) -> Dict:
        return {
            "value": str(self.value) if self.is_finite else "inf",
            "best": self.best,
            "explanation": self.explanation,
            "certificates": [c.to_dict() for c in self.certificates],
        }


def nev_upper_bound(divisor: DivisorSum,
                    candidates: Sequence[NevTriple],
                    pmap: Optional[Callable] = None) -> NevBound:
    """Best certified bound over the candidate triples.

    Candidates that fail (or are malformed) are kept in the certificate
    list with their failure recorded; an empty or fully failing list
    yields the infinity flag, matching the convention that the constant
    is infinite when no triple works. Candidates are independent, so a
    caller may pass an order-preserving parallel map as pmap; the result
    does not depend on the choice.
    """
    strat = stratify(divisor, divisor.components[0].n_vars - 1)

    def check(cand: NevTriple) -> TripleCertificate:
        try:
            return verify_triple(divisor, cand, strat)
        except NevError as exc:
            return TripleCertificate(False, cand.dim_V, cand.mu, cand.bound,
                                     (), f"{cand.label} [rejected: {exc}]")

    certs = list((pmap or map)(check, list(candidates)))
    best: Optional[int] = None
    value: object = math.inf
    for i, cert in enumerate(certs):
        if cert.passed and (best is None or cert.bound < value):
            best = i
            value = cert.bound
    if best is None:
        expl = ("no candidate verified" if candidates
                else "no candidates supplied")
        return NevBound(math.inf, None, tuple(certs), expl)
    return NevBound(value, best, tuple(certs),
                    f"candidate {best} certifies dim V / mu = {value}")


# -- bundled candidates -------------------------------------------------------------


def _unit_column(i: int, n1: int):
    col = [qi(0)] * n1
    col[i] = qi(1)
    return col


def _adapted_rows(forms, n1: int):
    """Invertible row set starting with an independent subset of forms."""
    rows = []
    for f in forms:
        if exact_rank(rows + [f]) == len(rows) + 1:
            rows.append(f)
    for i in range(n1):
        if len(rows) == n1:
            break
        cand = [qi(0)] * n1
        cand[i] = qi(1)
        if exact_rank(rows + [cand]) == len(rows) + 1:
            rows.append(cand)
    return rows


def _monomial_exponents(degree: int, n1: int):
    out = []
    for combo in itertools.combinations_with_replacement(range(n1), degree):
        e = [0] * n1
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    # leading powers of the first coordinate come first
    return sorted(out, reverse=True)


def _form_product(rows, expo) -> HomogeneousPoly:
    acc = None
    for row, e in zip(rows, expo):
        for _ in range(e):
            f = hyperplane(row)
            acc = f if acc is None else acc * f
    return acc


def monomial_filtration_candidates(divisor: DivisorSum, n: int,
                                   d: int = 1,
                                   k_values: Sequence[int] = range(1, 7),
                                   ) -> List[NevTriple]:
    """Monomial bases adapted to each stratum, one candidate per k.

    V is the full space of degree k*d monomials. At a stratum, the
    coordinates are changed so the stratum's hyperplanes come first; the
    adapted basis is the monomials in the new coordinates, ordered by
    decreasing leading powers so vanishing orders stack up. mu is then
    the best weight the candidate supports (smallest normalized order
    sum over the conditions); candidates that support no positive mu are
    dropped. Only hyperplane components are handled here; triples for
    higher-degree divisors must be supplied by hand.
    """
    comps = tuple(divisor.components)
    if any(c.degree != 1 for c in comps):
        return []
    strat = stratify(divisor, n)
    n1 = n + 1
    mults = {i: m for i, (_, m) in enumerate(divisor)}
    out = []
    for k in k_values:
        if k < 1:
            raise NevError("k must be positive")
        m = k * d
        V = tuple(HomogeneousPoly({e: qi(1)}, n1)
                  for e in _monomial_exponents(m, n1))
        bases: Dict[FrozenSet[int], Tuple[HomogeneousPoly, ...]] = {}
        mu: Optional[Fraction] = None
        for sigma in strat.nonempty():
            forms = [comps[i].linear_coeffs() for i in sorted(sigma)]
            rows = _adapted_rows(forms, n1)
            basis = tuple(_form_product(rows, e)
                          for e in _monomial_exponents(m, n1))
            bases[sigma] = basis
            for e in sorted(sigma):
                total = sum(component_order(s, comps[e]) for s in basis)
                weight = Fraction(total, k * mults[e])
                mu = weight if mu is None else min(mu, weight)
        if mu is None or mu <= 0:
            continue
        out.append(NevTriple(k=k, V=V, stratum_bases=bases, mu=mu,
                             label=f"monomial filtration k={k}, d={d}"))
    return out


# -- the full inequality ------------------------------------------------------------


def veronese_sections(curve: ProjectiveCurve, degree: int) -> List[HoloExpr]:
    """Pullbacks of all degree-d monomials along the curve."""
    comps = curve.components
    out = []
    for e in _monomial_exponents(degree, len(comps)):
        Q = HomogeneousPoly({e: qi(1)}, len(comps))
        expr = pullback(Q, comps)
        if expr is None or expr.is_zero():
            raise NevError("a Veronese monomial pulls back to zero; the "
                           "curve sits inside a coordinate hyperplane")
        out.append(expr)
    return out


def smt_full_check(curve: ProjectiveCurve, divisor: DivisorSum, d: int,
                   bound, surface: SurfaceModel, rgrid: Sequence[float],
                   spec: WeilSpec = WeilSpec("fs"), delta: float = 0.1,
                   veronese_degree: Optional[int] = None,
                   grid: RGrid = RGrid()) -> InequalityTrace:
    """Margins of bound*T + 0.1*T + |kappa| r^2 + log+ log r against m(r, D).

    bound is a certified value from nev_upper_bound (times the bundle
    degree d for the characteristic normalization T_{O(d)} = d*T). The
    curve must be nondegenerate under the degree-(veronese_degree)
    Veronese embedding, the working stand-in for Zariski density; the
    default checks the coordinate functions themselves.
    """
    rs = sorted(float(r) for r in rgrid)
    if len(rs) < 3:
        raise ValueError("need at least 3 radii")
    if d < 1:
        raise NevError("bundle degree must be positive")
    bound = Fraction(bound)
    if bound <= 0:
        raise NevError("need a positive certified bound")
    vdeg = veronese_degree if veronese_degree is not None else 1
    sections = (curve.components if vdeg == 1
                else veronese_sections(curve, vdeg))
    if not linearly_independent(sections):
        raise NevError(
            f"curve is linearly degenerate under the degree-{vdeg} Veronese; "
            "Zariski density is not certified")

    bad = [i for i, Q in enumerate(divisor.components)
           if Q.n_vars != len(curve.components)]
    if bad:
        raise DivisorError("divisor and curve dimensions do not match")

    bfl = float(bound)
    lhs, main, curv, llog, Ts = [], [], [], [], []
    for r in rs:
        T = d * boundary_T(curve, surface, r, spec, grid)
        Ts.append(T)
        lhs.append(proximity_m(curve, divisor, surface, r, spec, grid))
        main.append(bfl * T + 0.1 * T)
        curv.append(_curvature_term(surface, r))
        llog.append(_loglog(r))

    bflags, brep = _growth_flags(rs, Ts, delta)
    flags = [bool(b) for b in bflags]
    reasons = ["growth quotient exceeds the Borel bound" if b else ""
               for b in flags]
    margin = [main[i] + curv[i] + llog[i] - lhs[i] for i in range(len(rs))]
    ratio = [lhs[i] / (main[i] + curv[i] + llog[i] + 1.0)
             for i in range(len(rs))]
    r0 = next((rs[i] for i in range(len(rs)) if not flags[i]), None)
    notes = []
    if Ts and curv[-1] > Ts[-1] > 0:
        notes.append(
            "curvature term exceeds the characteristic at the largest "
            "radius; the defect-relation hypothesis "
            "liminf |kappa(r)| r^2 / T(r) = 0 fails on this domain")
    return InequalityTrace(
        name="nev_smt", r_values=tuple(rs), lhs=tuple(lhs), main=tuple(main),
        log_T=(0.0,) * len(rs), curvature=tuple(curv), loglog=tuple(llog),
        margin=tuple(margin), flagged=tuple(flags), reasons=tuple(reasons),
        ratio=tuple(ratio), flagged_measure=brep.total_measure,
        borel_bound=brep.c_phi, r0=r0,
        slack_note=("main = (bound + 0.1) * T, the o(T) slack taken "
                    "literally as 0.1 T; acceptance adds a further +10"),
        notes=tuple(notes))
