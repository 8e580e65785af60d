"""Simplicial cohomology with finite abelian coefficients."""
from __future__ import annotations

from .groups import (
    CohGroup,
    DirectSum,
    GroupHom,
    block_hom,
    cohomology,
    hom_from_cochain_map,
    identity_hom,
    induced_map,
    relative_cohomology,
)
from .les import REGISTRY, ExactnessError, LongExactSequence, check_exact, connecting_hom, les_of_pair
from .oracle import OracleTooLarge, brute_cohomology_oracle
from .products import cap_chain, cup_cochain, cup_pair, evaluate_fundamental, pairing_matrix, poincare_pairing

__all__ = [
    "CohGroup",
    "DirectSum",
    "GroupHom",
    "block_hom",
    "cohomology",
    "hom_from_cochain_map",
    "identity_hom",
    "induced_map",
    "relative_cohomology",
    "REGISTRY",
    "ExactnessError",
    "LongExactSequence",
    "check_exact",
    "connecting_hom",
    "les_of_pair",
    "OracleTooLarge",
    "brute_cohomology_oracle",
    "cap_chain",
    "cup_cochain",
    "cup_pair",
    "evaluate_fundamental",
    "pairing_matrix",
    "poincare_pairing",
]
