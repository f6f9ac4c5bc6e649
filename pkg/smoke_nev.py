import math
from fractions import Fraction

import numpy as np

from nevlab.divisor import DivisorSum, HomogeneousPoly, hyperplane
from nevlab.gaussian import qi
from nevlab.holo import HoloExpr, ProjectiveCurve, exp_expr
from nevlab.surface import SurfaceModel
from nevlab import nevconst as nc

euc = SurfaceModel.euclidean()
Z = HoloExpr.var()

# --- stratify: 3 coordinate hyperplanes of P^2 ---
H0, H1, H2 = (hyperplane([1, 0, 0]), hyperplane([0, 1, 0]),
              hyperplane([0, 0, 1]))
D3 = DivisorSum([H0, H1, H2])
st = nc.stratify(D3, 2)
sizes = sorted(len(s) for s in st.strata)
print("P^2 coords strata sizes:", sizes)
assert sizes == [0, 1, 1, 1, 2, 2, 2]  # no triple, empty-set convention
w01 = st.witnesses[frozenset({0, 1})]
assert w01 is not None
assert H0.eval_exact(w01).is_zero() and H1.eval_exact(w01).is_zero()

# --- stratify: 2 points of P^1 ---
P0, P1 = hyperplane([1, 0]), hyperplane([0, 1])
Dp = DivisorSum([P0, P1])
stp = nc.stratify(Dp, 1)
assert sorted(len(s) for s in stp.strata) == [0, 1, 1]
print("P^1 pair strata ok (no pairwise stratum)")

# --- stratify: 4 general-position hyperplanes in P^2 ---
D4 = DivisorSum([H0, H1, H2, hyperplane([1, 1, 1])])
st4 = nc.stratify(D4, 2)
assert sorted(len(s) for s in st4.strata) == [0] + [1] * 4 + [2] * 6
print("P^2 four hyperplanes: all pairs, no triples")

# --- stratify: nonlinear (conic + line through its point) ---
conic = HomogeneousPoly({(2, 0, 0): qi(1), (0, 1, 1): qi(-1)}, 3)  # w0^2 = w1 w2
line = hyperplane([1, 0, 0])
Dc = DivisorSum([conic, line])
stc = nc.stratify(Dc, 2)
assert frozenset({0, 1}) in stc.strata  # meet at [0:1:0] and [0:0:1]
print("conic+line stratum found; witness:", stc.witnesses[frozenset({0, 1})])

# degree cap
try:
    quart = HomogeneousPoly({(4, 0, 0): qi(1), (0, 4, 0): qi(1),
                             (0, 0, 4): qi(1)}, 3)
    nc.stratify(DivisorSum([quart]), 2)
    raise SystemExit("degree cap not enforced")
except nc.NevError as e:
    print("degree cap:", e)

# --- component_order oracles ---
w0, w1 = hyperplane([1, 0]), hyperplane([0, 1])
sq = HomogeneousPoly({(2, 0): qi(1)}, 2)        # w0^2
mixed = HomogeneousPoly({(1, 1): qi(1)}, 2)     # w0 w1
assert nc.component_order(sq, w0) == 2
assert nc.component_order(mixed, w0) == 1
assert nc.component_order(HomogeneousPoly({(0, 2): qi(1)}, 2), w0) == 0
# nonlinear: conic^2 * line along the conic
conic2 = conic * conic * line
assert nc.component_order(conic2, conic) == 2
assert nc.component_order(conic2, line) == 1
print("component_order oracles ok")

# --- verify_triple: single hyperplane in P^2, k=1, mu=1 -> bound 3 ---
W0, W1, W2 = (HomogeneousPoly({(1, 0, 0): qi(1)}, 3),
              HomogeneousPoly({(0, 1, 0): qi(1)}, 3),
              HomogeneousPoly({(0, 0, 1): qi(1)}, 3))
D1 = DivisorSum([H0])
t1 = nc.NevTriple(k=1, V=(W0, W1, W2),
                  stratum_bases={frozenset({0}): (W0, W1, W2)},
                  mu=Fraction(1))
c1 = nc.verify_triple(D1, t1)
print("P^2 single hyperplane:", c1.passed, "bound", c1.bound)
assert c1.passed and c1.bound == 3
assert all(cond.achieved == 1 for cond in c1.conditions)

# --- verify_triple: {w0}+{w1} in P^1, k=2 monomial triple ---
M20 = HomogeneousPoly({(2, 0): qi(1)}, 2)
M11 = HomogeneousPoly({(1, 1): qi(1)}, 2)
M02 = HomogeneousPoly({(0, 2): qi(1)}, 2)
t2 = nc.NevTriple(k=2, V=(M20, M11, M02),
                  stratum_bases={frozenset({0}): (M20, M11, M02),
                                 frozenset({1}): (M02, M11, M20)},
                  mu=Fraction(3, 2))
c2 = nc.verify_triple(Dp, t2)
print("P^1 pair k=2 mu=3/2:", c2.passed, "bound", c2.bound)
assert c2.passed and c2.bound == 2
for cond in c2.conditions:
    assert cond.achieved == 3 and cond.required == 3
    assert sorted(cond.orders, reverse=True) == [2, 1, 0]

# mu=2 fails naming (sigma={w0}, E=w0)
t2bad = nc.NevTriple(k=2, V=(M20, M11, M02),
                     stratum_bases=t2.stratum_bases, mu=Fraction(2))
c2bad = nc.verify_triple(Dp, t2bad)
assert not c2bad.passed
fail = c2bad.failures[0]
print("mu=2 failure:", fail.describe())
assert fail.stratum == (0,) and fail.component == 0
assert fail.achieved == 3 and fail.required == 4

# monotone in mu: anything below 3/2 passes
for mu in (Fraction(1), Fraction(5, 4), Fraction(3, 2)):
    assert nc.verify_triple(Dp, nc.NevTriple(
        k=2, V=(M20, M11, M02), stratum_bases=t2.stratum_bases,
        mu=mu)).passed

# spanning rejection before orders: basis with a repeated element
try:
    nc.verify_triple(Dp, nc.NevTriple(
        k=2, V=(M20, M11, M02),
        stratum_bases={frozenset({0}): (M20, M20, M02)}, mu=Fraction(1)))
    raise SystemExit("non-spanning basis not rejected")
except nc.NevError as e:
    print("non-spanning rejected:", e)

# permuted basis of the same span: same verdict
t2perm = nc.NevTriple(k=2, V=(M11, M02, M20),
                      stratum_bases={frozenset({0}): (M02, M20, M11),
                                     frozenset({1}): (M20, M02, M11)},
                      mu=Fraction(3, 2))
assert nc.verify_triple(Dp, t2perm).passed

# --- nev_upper_bound ---
cands = nc.monomial_filtration_candidates(D1, 2, k_values=range(1, 4))
nb = nc.nev_upper_bound(D1, cands)
print("P^2 single hyperplane nev bound:", nb.value)
assert nb.value == 3

candsp = nc.monomial_filtration_candidates(Dp, 1, k_values=range(1, 7))
nbp = nc.nev_upper_bound(Dp, candsp)
print("P^1 pair nev bound:", nbp.value,
      "mus:", [str(c.mu) for c in candsp])
assert nbp.value == 2

empty = nc.nev_upper_bound(Dp, [])
assert empty.value == math.inf and not empty.is_finite
print("empty candidates -> inf flag:", empty.explanation)

# trivial mu=1 candidate invariant: bound <= dim V
triv = nc.NevTriple(k=2, V=(M20, M11, M02),
                    stratum_bases=t2.stratum_bases, mu=Fraction(1))
nbt = nc.nev_upper_bound(Dp, [triv])
assert nbt.value <= 3

# serialization round trip stays plain data
import json
js = json.dumps(nb.to_dict(), sort_keys=True)
assert "3" in js
print("certificate json ok,", len(js), "bytes")

# --- smt_full_check: [1:e^z], {w0}+{w1}, bound 2 ---
one = HoloExpr.constant(1)
curve2 = ProjectiveCurve([one, exp_expr(Z)])
rs = np.linspace(5, 100, 12)
tr = nc.smt_full_check(curve2, Dp, 1, 2, euc, rs)
print("smt_full_check margins:", [f"{m:.3f}" for m in tr.margin])
print("flagged:", sum(tr.flagged), "measure:", tr.flagged_measure)
assert all(tr.margin[i] + 10 >= 0 for i in tr.unflagged())
assert tr.flagged_measure <= tr.borel_bound + 0.1
# extremality: m ~ 2T so margin ~ 0.1 T + small
i_last = len(rs) - 1
T_last = (tr.main[i_last]) / 2.1
print("margin/T at r=100:", tr.margin[i_last] / T_last)
assert abs(tr.margin[i_last]) < 0.2 * T_last + 5

# [1:z] same divisor: m = log r + O(1) << 2 log r, margins comfortably positive
curve_z = ProjectiveCurve([one, Z])
trz = nc.smt_full_check(curve_z, Dp, 1, 2, euc, np.linspace(5, 60, 8))
assert min(trz.margin[i] for i in trz.unflagged()) > 0
print("[1:z] margins positive:", [f"{m:.2f}" for m in trz.margin])

# poincare domain: bounded T, curvature term dominates, note reported
poi = SurfaceModel.poincare(1.0)
trp = nc.smt_full_check(curve_z, Dp, 1, 2, poi, np.linspace(2, 12, 6))
print("poincare notes:", trp.notes)
assert trp.notes and "liminf" in trp.notes[0]
assert all(m > 0 for m in trp.margin)

# degenerate curve rejected
try:
    nc.smt_full_check(ProjectiveCurve([exp_expr(Z), exp_expr(Z)]), Dp,
                      1, 2, euc, rs)
    raise SystemExit("degenerate curve not rejected")
except nc.NevError as e:
    print("degenerate rejected:", e)

# veronese nondegeneracy with explicit degree: [1:e^z] at degree 2
tr2 = nc.veronese_sections(curve2, 2)
assert len(tr2) == 3
print("ALL NEV SMOKE CHECKS PASSED")
