"""Exact arithmetic: rationals, sparse multivariate polynomials, GCDs."""

from .gcd import (
    SquarefreeDecomposition,
    poly_gcd,
    poly_gcd_many,
    radical,
    squarefree_decompose,
)
from .multipoly import (
    MultiPoly,
    VarSpace,
    chart_space,
    identity_witness,
    multiplicity_of,
    param_space,
    proj_space_of,
    random_identity_check,
    s_space,
    t_space,
)
from .parsing import format_poly, parse_poly
from .ratfunc import RatFunc

__all__ = [
    "MultiPoly",
    "RatFunc",
    "SquarefreeDecomposition",
    "VarSpace",
    "chart_space",
    "format_poly",
    "identity_witness",
    "multiplicity_of",
    "param_space",
    "parse_poly",
    "poly_gcd",
    "poly_gcd_many",
    "proj_space_of",
    "radical",
    "random_identity_check",
    "s_space",
    "squarefree_decompose",
    "t_space",
]
