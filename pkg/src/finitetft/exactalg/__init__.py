"""Exact integer linear algebra, finite abelian groups and cyclotomic scalars."""
from __future__ import annotations

from .cyclo import CycloRat, character_value, cyclotomic_polynomial
from .groups import (
    FinAbGroup,
    GradedFinGroup,
    QmodZ,
    double_dual_map,
    dual_group,
    graded_size,
    mu,
)
from .snf import (
    IntMatrix,
    LinearSystemMod,
    ModSolution,
    PresentedGroup,
    SnfResult,
    group_from_presentation,
    matmul,
    smith_normal_form,
    solve_mod,
)

__all__ = [
    "CycloRat",
    "FinAbGroup",
    "GradedFinGroup",
    "IntMatrix",
    "LinearSystemMod",
    "ModSolution",
    "PresentedGroup",
    "QmodZ",
    "SnfResult",
    "character_value",
    "cyclotomic_polynomial",
    "double_dual_map",
    "dual_group",
    "graded_size",
    "group_from_presentation",
    "matmul",
    "mu",
    "smith_normal_form",
    "solve_mod",
]
