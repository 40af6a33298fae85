"""Exact coefficient arithmetic: F_p, F_p(u), sparse polynomials, linear algebra."""
from .poly import (
    MPoly,
    PolyRing,
    PrimeField,
    divmod_poly,
    exact_div,
    format_poly,
    grlex_key,
    poly_gcd,
)
from .fields import FieldElem, FunctionField, make_field, reduce_fraction
from .linalg import FpEliminator, LinearSystem, Solution, fp_column_solve, fp_solve, gauss_solve


def frobenius(f: MPoly, e: int = 1) -> MPoly:
    """f^(p^e) over a field of characteristic p."""
    if e < 1:
        raise ValueError("Frobenius exponent must be >= 1")
    return f.frobenius(e)


__all__ = [
    "FieldElem",
    "FpEliminator",
    "FunctionField",
    "LinearSystem",
    "MPoly",
    "PolyRing",
    "PrimeField",
    "Solution",
    "divmod_poly",
    "exact_div",
    "format_poly",
    "fp_column_solve",
    "fp_solve",
    "frobenius",
    "gauss_solve",
    "grlex_key",
    "make_field",
    "poly_gcd",
    "reduce_fraction",
]
