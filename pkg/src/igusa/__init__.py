"""Igusa zeta functions I(s) = integral of f^s over a simplicial domain.

Exact moments, guessed recurrences in s, and the meromorphic continuation
(poles, Laurent coefficients, point values) for polynomials over Q.
"""
from .continuation import (
    Continuation,
    LaurentExpansion,
    PoleRecord,
    base_expansion,
    evaluate_continued,
    laurent_at,
    pole_report,
)
from .errors import IgusaError
from .exact import LaurentSeries, RatFunc, UniPoly, laurent_inv, laurent_mul, ratfunc_expand
from .moments import (
    Domain,
    MomentSequence,
    SimplexDomain,
    decompose_union,
    integrate_monomial,
    integrate_poly,
    moments,
    sup_estimate,
)
from .mpoly import MPoly, parse_poly, poly_pow, restrict_chart
from .quadrature import QuadConfig, QuadResult, integrate_box_rep, integrate_power_log, j_value
from .recurrence import (
    OdeRelation,
    Recurrence,
    guess_ode,
    guess_recurrence,
    normalize_recurrence,
    ode_to_recurrence,
    verify_recurrence,
)

__version__ = "0.1.0"

__all__ = [
    "Continuation", "LaurentExpansion", "PoleRecord", "base_expansion", "evaluate_continued",
    "laurent_at", "pole_report", "IgusaError", "LaurentSeries", "RatFunc", "UniPoly",
    "laurent_inv", "laurent_mul", "ratfunc_expand", "Domain", "MomentSequence", "SimplexDomain",
    "decompose_union", "integrate_monomial", "integrate_poly", "moments", "sup_estimate",
    "MPoly", "parse_poly", "poly_pow", "restrict_chart", "QuadConfig", "QuadResult",
    "integrate_box_rep", "integrate_power_log", "j_value", "OdeRelation", "Recurrence",
    "guess_ode", "guess_recurrence", "normalize_recurrence", "ode_to_recurrence",
    "verify_recurrence",
]
