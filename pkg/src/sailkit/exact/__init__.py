"""Exact arithmetic: integer polynomials, real algebraic numbers, number
fields, integer matrices and exact eigen decompositions."""

from .algebraic import AlgebraicReal, Expr, NumberFieldElem, compare, sign_of, to_algebraic
from .eigen import eigen_decomposition
