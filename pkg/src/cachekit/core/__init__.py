"""Exact arithmetic core: rationals, binomials, GF(2) matrices, LP, curves."""

from cachekit.core.bitmatrix import (
    BitMatrix,
    conditional_rank,
    in_rowspan,
    rank,
    solve_combination,
)
from cachekit.core.combinat import binom
from cachekit.core.curve import PiecewiseCurve, lower_convex_envelope
from cachekit.core.lp import (
    EQ,
    GE,
    INFEASIBLE,
    LE,
    OPTIMAL,
    UNBOUNDED,
    Constraint,
    LinearProgram,
    LPResult,
    lp_maximize,
)
from cachekit.core.rational import (
    BACKEND,
    ONE,
    ZERO,
    Rat,
    as_rat,
    format_decimal,
    format_exact,
    num_den,
    rat,
    rat_from_str,
)

__all__ = [
    "BACKEND",
    "BitMatrix",
    "Constraint",
    "EQ",
    "GE",
    "INFEASIBLE",
    "LE",
    "LPResult",
    "LinearProgram",
    "ONE",
    "OPTIMAL",
    "PiecewiseCurve",
    "Rat",
    "UNBOUNDED",
    "ZERO",
    "as_rat",
    "binom",
    "conditional_rank",
    "format_decimal",
    "format_exact",
    "in_rowspan",
    "lower_convex_envelope",
    "lp_maximize",
    "num_den",
    "rank",
    "rat",
    "rat_from_str",
    "solve_combination",
]
