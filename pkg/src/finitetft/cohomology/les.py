"""Long exact sequences, connecting maps and the global exact-sequence registry."""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from ..exactalg.groups import FinAbGroup
from ..simplicial.complex import SimComplex, empty_complex
from .cochains import apply_coboundary, extend_by_zero
from .groups import CohGroup, GroupHom, cohomology, hom_from_cochain_map, induced_map, relative_cohomology


class ExactnessError(AssertionError):
    """A sequence that should be exact is not."""


@dataclass(frozen=True)
class SequenceRecord:
    name: str
    orders: tuple[int, ...]
    alternating: Fraction

    @property
    def ok(self) -> bool:
        return self.alternating == 1


class ExactSequenceRegistry:
    """Thread-safe log of every exact sequence built, with its alternating order product."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._records: list[SequenceRecord] = []

    def record(self, name: str, orders: Sequence[int]) -> SequenceRecord:
        alt = Fraction(1)
        for i, n in enumerate(orders):
            alt *= Fraction(n) if i % 2 == 0 else Fraction(1, n)
        rec = SequenceRecord(name, tuple(int(n) for n in orders), alt)
        with self._lock:
            self._records.append(rec)
        return rec

    def records(self) -> list[SequenceRecord]:
        with self._lock:
            return list(self._records)

    def failures(self) -> list[SequenceRecord]:
        return [r for r in self.records() if not r.ok]

    def clear(self) -> None:
        with self._lock:
            self._records.clear()

    def __len__(self) -> int:
        with self._lock:
            return len(self._records)


REGISTRY = ExactSequenceRegistry()


def check_exact(maps: Sequence[GroupHom], name: str = "sequence", register: bool = True) -> SequenceRecord:
    """Verify exactness of ``0 -> G0 -> G1 -> ... -> Gn -> 0`` given the maps ``G_i -> G_{i+1}``.

    At every node ``im = ker`` is checked by ``g∘f = 0`` plus equality of orders; the ends are
    checked for injectivity and surjectivity. The alternating order product is recorded.
    """
    if not maps:
        raise ValueError("empty sequence")
    groups = [maps[0].dom_group] + [m.cod_group for m in maps]
    for a, b in zip(maps, maps[1:]):
        if a.cod_group != b.dom_group:
            raise ValueError(f"{name}: consecutive maps do not match")
    if maps[0].kernel_order() != 1:
        raise ExactnessError(f"{name}: first map is not injective")
    if maps[-1].image_order() != groups[-1].order:
        raise ExactnessError(f"{name}: last map is not surjective")
    for i, (f, g) in enumerate(zip(maps, maps[1:])):
        if not g.compose(f).is_zero():
            raise ExactnessError(f"{name}: composite at node {i + 1} is not zero")
        if f.image_order() != g.kernel_order():
            raise ExactnessError(f"{name}: image and kernel orders differ at node {i + 1}")
    orders = [G.order for G in groups]
    if register:
        rec = REGISTRY.record(name, orders)
    else:
        rec = SequenceRecord(name, tuple(orders), Fraction(1))
    if not rec.ok:
        raise ExactnessError(f"{name}: alternating order product {rec.alternating} != 1")
    return rec


def inclusion_hom(rel: CohGroup, absolute: CohGroup) -> GroupHom:
    """``H^k(K, L) -> H^k(K)``: a relative cocycle is an absolute cocycle."""
    return hom_from_cochain_map(rel, absolute, lambda c: c, f"j*: H^{rel.degree}(K,L)->H^{rel.degree}(K)")


def restriction_hom(absolute: CohGroup, sub: CohGroup) -> GroupHom:
    """``H^k(K) -> H^k(L)`` for a subcomplex ``L``."""
    return induced_map(absolute, sub, name=f"i*: H^{absolute.degree}(K)->H^{absolute.degree}(L)")


def connecting_hom(K: SimComplex, L: SimComplex, A: FinAbGroup, k: int) -> GroupHom:
    """``∂*: H^k(L; A) -> H^{k+1}(K, L; A)``: extend a cocycle by zero and take its coboundary."""
    src = cohomology(L, A, k)
    dst = relative_cohomology(K, L, A, k + 1)
    fac = A.invariant_factors

    def f(c):
        return apply_coboundary(K, k, extend_by_zero(c, L, K, k), fac)

    return hom_from_cochain_map(src, dst, f, f"∂*: H^{k}(L)->H^{k + 1}(K,L)")


@dataclass
class LongExactSequence:
    """``... -> H^k(K,L) -> H^k(K) -> H^k(L) -> H^{k+1}(K,L) -> ...`` for ``k = 0..dim K``."""

    groups: list[CohGroup] = field(default_factory=list)
    maps: list[GroupHom] = field(default_factory=list)
    record: SequenceRecord | None = None

    def as_pairs(self) -> list[tuple[CohGroup, GroupHom | None]]:
        return [(g, self.maps[i] if i < len(self.maps) else None) for i, g in enumerate(self.groups)]


def les_of_pair(K: SimComplex, L: SimComplex | None, A: FinAbGroup, name: str = "") -> LongExactSequence:
    """The long exact sequence of the pair, verified exact before it is returned."""
    L = L if L is not None else empty_complex()
    top = K.dimension
    seq = LongExactSequence()
    for k in range(top + 1):
        rel = relative_cohomology(K, L, A, k)
        ab = cohomology(K, A, k)
        sub = cohomology(L, A, k)
        seq.groups += [rel, ab, sub]
        seq.maps += [inclusion_hom(rel, ab), restriction_hom(ab, sub), connecting_hom(K, L, A, k)]
    # the final connecting map lands in H^{top+1}(K,L) = 0; keep it so the sequence ends in zero
    label = name or f"LES({K.name or 'K'},{L.name or 'L'};{A})"
    seq.record = check_exact(seq.maps, label)
    seq.groups.append(relative_cohomology(K, L, A, top + 1))
    return seq


def alternating_order(orders: Sequence[int]) -> Fraction:
    out = Fraction(1)
    for i, n in enumerate(orders):
        out *= Fraction(n) if i % 2 == 0 else Fraction(1, n)
    return out


def hom_from_matrix(domain: FinAbGroup, codomain: FinAbGroup, matrix: np.ndarray, name: str = "") -> GroupHom:
    return GroupHom(domain, codomain, matrix, name)
