"""Exact arithmetic kernel: rational functions over Q(params), gcds, dispersion, linear algebra"""

from pisigma.algebra.context import AlgebraContext, get_context, qq_to_fraction, transfer
from pisigma.algebra.polytools import (
    gcd_unipoly,
    dispersion_set,
    integer_roots,
    nonnegative_integer_roots,
    factor_integer_linear,
    normalize_x_primitive,
    x_coefficients,
)
from pisigma.algebra.linalg import constant_domain, nullspace, solve_linear, rref_with_transform
from pisigma.algebra.shiftclass import ShiftClassRegistry, shift_class, shift_quotient_factor

__all__ = [
    "AlgebraContext",
    "get_context",
    "qq_to_fraction",
    "transfer",
    "gcd_unipoly",
    "dispersion_set",
    "integer_roots",
    "nonnegative_integer_roots",
    "factor_integer_linear",
    "normalize_x_primitive",
    "x_coefficients",
    "constant_domain",
    "nullspace",
    "solve_linear",
    "rref_with_transform",
    "ShiftClassRegistry",
    "shift_class",
    "shift_quotient_factor",
]
