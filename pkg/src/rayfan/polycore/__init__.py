"""Exact rational linear algebra, LP, Smith normal form and polyhedral cones."""

from .cone import (
    DimensionMismatch,
    Face,
    RationalCone,
    cone_from_generators,
    cone_from_halfspaces,
)
from .linalg import as_fraction, primitive
from .lp import LPResult, lp_feasible, lp_optimize
from .snf import (
    AbelianGroup,
    SNFResult,
    cokernel,
    integer_kernel,
    quotient_by_rows,
    saturated_column_basis,
    smith_normal_form,
    solve_integer,
)

__all__ = [
    "AbelianGroup",
    "DimensionMismatch",
    "Face",
    "LPResult",
    "RationalCone",
    "SNFResult",
    "as_fraction",
    "cokernel",
    "cone_from_generators",
    "cone_from_halfspaces",
    "integer_kernel",
    "lp_feasible",
    "lp_optimize",
    "primitive",
    "quotient_by_rows",
    "saturated_column_basis",
    "smith_normal_form",
    "solve_integer",
]
