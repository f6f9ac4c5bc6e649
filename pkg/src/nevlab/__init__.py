"""Numerical laboratory for value-distribution theory on conformal surfaces.

The package measures how holomorphic curves on radially symmetric
conformal discs distribute their values: characteristic, proximity and
counting functions by adaptive quadrature, the same quantities by
Brownian paths, growth inequalities with explicit error budgets, and
exactly certified upper bounds for the Nevanlinna constant.
"""

from .divisor import (DivisorError, DivisorSum, HomogeneousPoly, WeilSpec,
                      hyperplane, pullback, weil_sum)
from .exprgrammar import (ExprParseError, parse_curve, parse_entire,
                          parse_meromorphic, parse_poly)
from .holo import (HoloExpr, MeromorphicFn, ProjectiveCurve, VectorField,
                   exp_expr, linearly_independent, log_wronskian_eval,
                   wronskian)
from .nevanlinna import (FMTReport, RGrid, boundary_T, characteristic_T,
                         counting_N, crofton_T, defect_report, fmt_report,
                         merom_T, proximity_m)
from .nevconst import (NevBound, NevError, NevTriple, Stratification,
                       monomial_filtration_candidates, nev_upper_bound,
                       smt_full_check, stratify, verify_triple)
from .smt import (BorelReport, InequalityTrace, borel_exceptional,
                  calculus_lemma_report, cartan_smt_report,
                  derivative_growth_check, ldl_report, log_derivative_m,
                  log_wronskian_proximity, max_sum_weil_boundary)
from .stochastic import (MCEstimate, PathPolicy, dynkin_residual,
                         exit_time_estimate, mc_nevanlinna,
                         occupation_estimate, sample_exit_angle)
from .surface import (JacobiSolution, SurfaceModel, green_lower_bound_check,
                      jacobi_solve)

__version__ = "0.1.0"

__all__ = [
    "BorelReport", "DivisorError", "DivisorSum", "ExprParseError",
    "FMTReport", "HoloExpr", "HomogeneousPoly", "InequalityTrace",
    "JacobiSolution", "MCEstimate", "MeromorphicFn", "NevBound", "NevError",
    "NevTriple", "PathPolicy", "ProjectiveCurve", "RGrid", "Stratification",
    "SurfaceModel", "VectorField", "WeilSpec", "borel_exceptional",
    "boundary_T", "calculus_lemma_report", "cartan_smt_report",
    "characteristic_T", "counting_N", "crofton_T", "defect_report",
    "derivative_growth_check", "dynkin_residual", "exit_time_estimate",
    "exp_expr", "fmt_report", "green_lower_bound_check", "hyperplane",
    "jacobi_solve", "ldl_report", "linearly_independent", "log_derivative_m",
    "log_wronskian_eval", "log_wronskian_proximity", "max_sum_weil_boundary",
    "mc_nevanlinna", "merom_T", "monomial_filtration_candidates",
    "nev_upper_bound", "occupation_estimate", "parse_curve", "parse_entire",
    "parse_meromorphic", "parse_poly", "proximity_m", "pullback",
    "sample_exit_angle", "smt_full_check", "stratify", "verify_triple",
    "weil_sum", "wronskian",
]
