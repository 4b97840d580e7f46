"""Exact arithmetic kernel: integer polynomials, rational matrices, real algebraic numbers."""

from .cone import image_minus_scalar, strict_system_feasible, subspace_meets_open_orthant
from .field import FieldElement
from .matrix import RationalMatrix, bareiss_det_poly, char_poly
from .numbers import (
    AlgebraicReal,
    algebraic_equal,
    algebraic_product,
    algebraic_ratio,
    compare,
    distinct,
    irreducible_factors,
    multiset_contains,
    real_eigenvalues,
    refine,
    spectral_radius_nonneg,
    sturm_isolate_real_roots,
)
from .poly import IntPoly, poly_gcd, squarefree_part
from .roots import root_bound, sturm_count, sturm_sequence

__all__ = [
    "AlgebraicReal",
    "FieldElement",
    "IntPoly",
    "RationalMatrix",
    "algebraic_equal",
    "algebraic_product",
    "algebraic_ratio",
    "bareiss_det_poly",
    "char_poly",
    "compare",
    "distinct",
    "image_minus_scalar",
    "irreducible_factors",
    "multiset_contains",
    "poly_gcd",
    "real_eigenvalues",
    "refine",
    "root_bound",
    "spectral_radius_nonneg",
    "squarefree_part",
    "strict_system_feasible",
    "sturm_count",
    "sturm_isolate_real_roots",
    "sturm_sequence",
    "subspace_meets_open_orthant",
]
