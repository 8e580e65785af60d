"""Ordered simplicial complexes, orientations, bordisms and the manifold library."""
from __future__ import annotations

from .bordism import Bordism, BoundaryPiece, closed_bordism, disjoint_union_bordism, glue, reverse
from .complex import (
    ComplexError,
    ManifoldReport,
    SimComplex,
    boundary_complex,
    euler_characteristic,
    validate_closed_manifold,
)
from .library import LibraryError, as_bordism, list_manifolds, manifold_library
from .orientation import (
    INTEGER,
    MOD2,
    NonOrientableError,
    Orientation,
    fundamental_class,
    induced_boundary_orientation,
    is_orientable,
)

__all__ = [
    "INTEGER",
    "MOD2",
    "Bordism",
    "BoundaryPiece",
    "ComplexError",
    "LibraryError",
    "ManifoldReport",
    "NonOrientableError",
    "Orientation",
    "SimComplex",
    "as_bordism",
    "boundary_complex",
    "closed_bordism",
    "disjoint_union_bordism",
    "euler_characteristic",
    "fundamental_class",
    "glue",
    "induced_boundary_orientation",
    "is_orientable",
    "list_manifolds",
    "manifold_library",
    "reverse",
    "validate_closed_manifold",
]
