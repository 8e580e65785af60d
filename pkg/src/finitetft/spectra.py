"""Theories of Eilenberg-MacLane type, their sizes and their Brown-Comenetz duals.

A theory ``X = ⊕_j Σ^{p_j} H A_j`` in spacetime dimension ``d`` has ``π_{p_j} X ⊇ A_j``, so the
mapping spectrum on a complex ``K`` has ``π_i X(K) = X^{-i}(K) = ⊕_j H^{p_j - i}(K; A_j)``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .cohomology.groups import relative_cohomology
from .exactalg.groups import FinAbGroup, alternating_size, dual_group
from .simplicial.complex import SimComplex


@dataclass(frozen=True)
class Summand:
    p: int
    A: FinAbGroup

    def key(self) -> tuple:
        return (self.p, self.A.invariant_factors)

    def __str__(self) -> str:
        return f"Σ^{self.p}H({self.A})"


class TheorySpec:
    """``X = ⊕ Σ^{p_j} H A_j`` in dimension ``d``; summands are kept sorted by ``(p, A)``."""

    def __init__(self, d: int, summands: Iterable[tuple[int, FinAbGroup] | Summand]) -> None:
        if int(d) < 1:
            raise ValueError(f"spacetime dimension must be >= 1, got {d}")
        items = []
        for s in summands:
            if isinstance(s, Summand):
                items.append(s)
            else:
                p, A = s
                A = A if isinstance(A, FinAbGroup) else FinAbGroup.parse(A)
                items.append(Summand(int(p), A))
        if not items:
            raise ValueError("a theory needs at least one summand")
        self.d = int(d)
        self.summands: tuple[Summand, ...] = tuple(sorted(items, key=Summand.key))

    @classmethod
    def single(cls, d: int, p: int, A: FinAbGroup | str | Sequence[int]) -> TheorySpec:
        return cls(d, [(p, A if isinstance(A, FinAbGroup) else FinAbGroup.parse(A))])

    @classmethod
    def from_json(cls, data: str | Mapping) -> TheorySpec:
        obj = json.loads(data) if isinstance(data, str) else data
        try:
            return cls(int(obj["d"]), [(int(s["p"]), FinAbGroup.parse(s["A"])) for s in obj["summands"]])
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed theory specification: {exc}") from exc

    def to_json_obj(self) -> dict:
        return {"d": self.d, "summands": [{"p": s.p, "A": list(s.A.invariant_factors)} for s in self.summands]}

    def key(self) -> tuple:
        return (self.d, tuple(s.key() for s in self.summands))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, TheorySpec) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __str__(self) -> str:
        return f"d={self.d}: " + " ⊕ ".join(str(s) for s in self.summands)

    __repr__ = __str__

    @property
    def conductor(self) -> int:
        """Common exponent of all coefficient groups (the cyclotomic field of the theory)."""
        from math import lcm

        return lcm(*(s.A.exponent for s in self.summands))


def theory_size(X: TheorySpec) -> Fraction:
    """``|X| = ∏_j |A_j|^{(-1)^{p_j}}``."""
    out = Fraction(1)
    for s in X.summands:
        out *= Fraction(s.A.order) if s.p % 2 == 0 else Fraction(1, s.A.order)
    return out


def bc_dual_theory(X: TheorySpec) -> TheorySpec:
    """``Σ^{d-1} X̂``: each summand ``(p, A)`` goes to ``(d - 1 - p, Â)``."""
    return TheorySpec(X.d, [(X.d - 1 - s.p, dual_group(s.A)) for s in X.summands])


def dual_permutation(X: TheorySpec) -> list[int]:
    """``perm[j]`` is the index in ``bc_dual_theory(X).summands`` of the dual of summand ``j``.

    Equal summands are matched in order, so the result is a bijection.
    """
    Y = bc_dual_theory(X)
    used: set[int] = set()
    perm = []
    for s in X.summands:
        target = (X.d - 1 - s.p, dual_group(s.A).invariant_factors)
        k = next(i for i, t in enumerate(Y.summands) if t.key() == target and i not in used)
        used.add(k)
        perm.append(k)
    return perm


@dataclass(frozen=True)
class MappingSpectrumSizes:
    """Orders ``|X^{-i}(K, L)|`` for every ``i`` where they can be nontrivial."""

    orders: Mapping[int, int]

    def total(self) -> Fraction:
        return alternating_size(self.orders)

    def tau_ge(self, i: int) -> Fraction:
        return alternating_size({k: n for k, n in self.orders.items() if k >= i})

    def tau_le(self, i: int) -> Fraction:
        return alternating_size({k: n for k, n in self.orders.items() if k <= i})

    def order(self, i: int) -> int:
        return self.orders.get(i, 1)


def graded_orders(K: SimComplex, X: TheorySpec, L: SimComplex | None = None) -> dict[int, int]:
    """``i -> |⊕_j H^{p_j - i}(K, L; A_j)|``."""
    out: dict[int, int] = {}
    top = max(K.dimension, 0)
    for s in X.summands:
        for k in range(0, top + 1):
            i = s.p - k
            out[i] = out.get(i, 1) * relative_cohomology(K, L, s.A, k).order
    return out


def mapping_sizes(K: SimComplex, X: TheorySpec, L: SimComplex | None = None) -> MappingSpectrumSizes:
    if K.is_empty():
        return MappingSpectrumSizes({})
    return MappingSpectrumSizes(graded_orders(K, X, L))


def tau_ge1(K: SimComplex, X: TheorySpec, L: SimComplex | None = None) -> Fraction:
    return mapping_sizes(K, X, L).tau_ge(1)


@dataclass(frozen=True)
class SizeReport:
    complex: str
    theory: str
    lhs: Fraction
    rhs: Fraction
    chi: int

    @property
    def ok(self) -> bool:
        return self.lhs == self.rhs

    def to_json_obj(self) -> dict:
        return {
            "complex": self.complex,
            "theory": self.theory,
            "lhs": str(self.lhs),
            "rhs": str(self.rhs),
            "chi": self.chi,
            "status": "pass" if self.ok else "fail",
        }


def verify_size_formula(K: SimComplex, X: TheorySpec, L: SimComplex | None = None) -> SizeReport:
    """``|X(K, L)| = |X|^{χ(K) - χ(L)}``, both sides reported."""
    chi = K.euler_characteristic() - (L.euler_characteristic() if L is not None and not L.is_empty() else 0)
    lhs = mapping_sizes(K, X, L).total()
    rhs = theory_size(X) ** chi
    name = K.name if L is None else f"({K.name},{L.name})"
    return SizeReport(name, str(X), lhs, rhs, chi)
