"""Triangulated bordisms with explicit boundary identifications, and their gluing."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from .complex import (
    ComplexError,
    SimComplex,
    Simplex,
    boundary_complex,
    sort_with_sign,
    validate_closed_manifold,
)
from .orientation import INTEGER, MOD2, Orientation, fundamental_class, induced_boundary_orientation

NONE = "none"


@dataclass(frozen=True)
class BoundaryPiece:
    """A closed (d-1)-manifold ``complex`` embedded in ``∂M`` by ``vertex_map`` (N-vertex to M-vertex)."""

    name: str
    complex: SimComplex
    vertex_map: dict = field(hash=False)

    def image(self, s: Sequence[int]) -> tuple[Simplex, int]:
        return sort_with_sign([self.vertex_map[v] for v in s])

    def compose(self, relabel: dict[int, int]) -> BoundaryPiece:
        return BoundaryPiece(self.name, self.complex, {v: relabel[w] for v, w in self.vertex_map.items()})


@lru_cache(maxsize=None)
def standard_orientation(N: SimComplex) -> Orientation:
    """The orientation used for every closed object: facet 0 of each component gets ``+1``."""
    return fundamental_class(N, INTEGER)


def piece_orientation_sign(piece: BoundaryPiece, bdry: Orientation) -> int:
    """``+1`` or ``-1`` if the boundary class pulls back to ``±[N]``; ``0`` if neither."""
    N = piece.complex
    std = standard_orientation(N)
    ratio = None
    for sigma, s in std.items():
        tau, eps = piece.image(sigma)
        c = eps * bdry.sign(tau)
        r = c * s
        if ratio is None:
            ratio = r
        elif r != ratio:
            return 0
    return ratio if ratio is not None else 1


def piece_flips(M: SimComplex, omega: Orientation, bdry: Orientation, piece: BoundaryPiece, wanted: int) -> dict[int, int] | None:
    """Sign by which each component of ``M`` touched by ``piece`` must be flipped so that the
    boundary class restricts to ``wanted · [N]``; ``None`` if no such choice exists."""
    comp_of = {v: ci for ci, comp in enumerate(M.components()) for v in comp}
    std = standard_orientation(piece.complex)
    out: dict[int, int] = {}
    for sigma, s in std.items():
        tau, eps = piece.image(sigma)
        need = eps * bdry.sign(tau) * s * wanted
        ci = comp_of[tau[0]]
        if out.setdefault(ci, need) != need:
            return None
    return out


def required_flips(
    M: SimComplex,
    omega: Orientation,
    boundary: SimComplex,
    incoming: Sequence[BoundaryPiece],
    outgoing: Sequence[BoundaryPiece],
) -> dict[int, int] | None:
    bd = induced_boundary_orientation(omega, boundary)
    flips: dict[int, int] = {}
    for wanted, pieces in ((1, incoming), (-1, outgoing)):
        for p in pieces:
            if p.complex.is_empty():
                continue
            got = piece_flips(M, omega, bd, p, wanted)
            if got is None:
                return None
            for ci, f in got.items():
                if flips.setdefault(ci, f) != f:
                    return None
    return flips


class Bordism:
    """A compact triangulated d-manifold ``M`` as a bordism from the disjoint union of the
    incoming pieces to the disjoint union of the outgoing pieces.

    ``orientation`` is ``"integer"`` (computed, then possibly flipped per component of ``M`` to
    satisfy the boundary convention), ``"mod2"``, ``"none"`` or an explicit ``Orientation``.
    With an integer orientation the induced boundary class must restrict to ``+[N]`` on every
    incoming piece and ``-[N']`` on every outgoing piece.
    """

    def __init__(
        self,
        M: SimComplex,
        incoming: Sequence[BoundaryPiece] = (),
        outgoing: Sequence[BoundaryPiece] = (),
        orientation: str | Orientation = INTEGER,
        name: str = "",
        dimension: int | None = None,
    ) -> None:
        self.M = M
        self.name = name or M.name
        self.incoming = tuple(incoming)
        self.outgoing = tuple(outgoing)
        self.d = M.dimension if dimension is None else dimension
        if M.is_empty():
            if self.incoming or self.outgoing:
                raise ComplexError("empty bordism cannot have boundary pieces")
            self.boundary = M
            self.orientation = None
            self.coeff = orientation if isinstance(orientation, str) else orientation.coeff
            return
        report = validate_closed_manifold(M, self.d)
        self.report = report
        self.boundary = report.boundary
        self._check_pieces()
        if isinstance(orientation, Orientation):
            self.coeff = orientation.coeff
            self.orientation: Orientation | None = orientation
            if orientation.complex != M:
                raise ComplexError("orientation belongs to a different complex")
        elif orientation == INTEGER:
            self.coeff = INTEGER
            self.orientation = self._auto_orient()
        elif orientation == MOD2:
            self.coeff = MOD2
            self.orientation = fundamental_class(M, MOD2)
        elif orientation == NONE:
            self.coeff = NONE
            self.orientation = None
        else:
            raise ValueError(f"unknown orientation tag {orientation!r}")
        if self.coeff == INTEGER:
            self._check_orientation()

    # validation -------------------------------------------------------------
    def _check_pieces(self) -> None:
        covered: set[Simplex] = set()
        for piece in self.incoming + self.outgoing:
            N = piece.complex
            if N.is_empty():
                continue
            rep = validate_closed_manifold(N, self.d - 1)
            if not rep.closed:
                raise ComplexError(f"boundary piece {piece.name!r} is not closed")
            vm = piece.vertex_map
            if set(vm) != set(N.vertices):
                raise ComplexError(f"vertex map of {piece.name!r} is not defined on exactly the vertices of N")
            if len(set(vm.values())) != len(vm):
                raise ComplexError(f"vertex map of {piece.name!r} is not injective")
            for sigma in N.top_simplices():
                tau, _ = piece.image(sigma)
                if not self.boundary.contains(tau):
                    raise ComplexError(f"piece {piece.name!r}: image {list(tau)} of {list(sigma)} is not a boundary simplex of M")
                if tau in covered:
                    raise ComplexError(f"boundary simplex {list(tau)} is covered twice")
                covered.add(tau)
        if self.d >= 1 and covered != set(self.boundary.top_simplices()):
            missing = sorted(set(self.boundary.top_simplices()) - covered)
            raise ComplexError(f"boundary simplices not covered by incoming/outgoing data: {missing[:5]}")

    def _piece_signs(self, omega: Orientation) -> list[int]:
        bd = induced_boundary_orientation(omega, self.boundary)
        return [piece_orientation_sign(p, bd) for p in self.incoming + self.outgoing]

    def _auto_orient(self) -> Orientation:
        omega = fundamental_class(self.M, INTEGER)
        flips = required_flips(self.M, omega, self.boundary, self.incoming, self.outgoing)
        if flips is None:
            raise ComplexError(
                f"{self.name}: no orientation of M restricts to +[N] on incoming and -[N'] on outgoing pieces"
            )
        comp_of = {v: ci for ci, comp in enumerate(self.M.components()) for v in comp}
        signs = [s * flips.get(comp_of[f[0]], 1) for f, s in omega.items()]
        return Orientation(self.M, INTEGER, tuple(signs))

    def _check_orientation(self) -> None:
        assert self.orientation is not None
        got = self._piece_signs(self.orientation)
        wanted = [1] * len(self.incoming) + [-1] * len(self.outgoing)
        for p, g, w in zip(self.incoming + self.outgoing, got, wanted):
            if not p.complex.is_empty() and g != w:
                side = "incoming" if w == 1 else "outgoing"
                raise ComplexError(f"{self.name}: boundary orientation on {side} piece {p.name!r} is wrong")

    # derived ----------------------------------------------------------------
    @property
    def chi(self) -> int:
        return self.M.euler_characteristic()

    @property
    def chi_in(self) -> int:
        return sum(p.complex.euler_characteristic() for p in self.incoming)

    @property
    def chi_out(self) -> int:
        return sum(p.complex.euler_characteristic() for p in self.outgoing)

    def is_closed(self) -> bool:
        return not self.incoming and not self.outgoing

    def __repr__(self) -> str:
        ins = "+".join(p.name for p in self.incoming) or "∅"
        outs = "+".join(p.name for p in self.outgoing) or "∅"
        return f"Bordism({self.name}: {ins} -> {outs}, d={self.d})"


def closed_bordism(M: SimComplex, orientation: str = INTEGER, name: str = "") -> Bordism:
    return Bordism(M, (), (), orientation=orientation, name=name or M.name)


def reverse(B: Bordism, name: str = "") -> Bordism:
    """The same manifold read backwards, with the opposite orientation."""
    orient: str | Orientation = B.coeff
    if B.orientation is not None and B.coeff == INTEGER:
        orient = -B.orientation
    return Bordism(B.M, B.outgoing, B.incoming, orientation=orient, name=name or f"rev({B.name})", dimension=B.d)


def _pieces_match(a: Sequence[BoundaryPiece], b: Sequence[BoundaryPiece]) -> bool:
    return len(a) == len(b) and all(x.complex == y.complex for x, y in zip(a, b))


def gluing_relabel(B1: Bordism, B2: Bordism) -> dict[int, int]:
    """Where each vertex of ``M2`` lands in ``B2 ∘ B1`` (whose ``M1`` vertices keep their IDs)."""
    if B1.d != B2.d:
        raise ComplexError("cannot glue bordisms of different dimensions")
    if not _pieces_match(B1.outgoing, B2.incoming):
        raise ComplexError("outgoing object of the first bordism differs from the incoming object of the second")
    relabel: dict[int, int] = {}
    for p1, p2 in zip(B1.outgoing, B2.incoming):
        for v in p1.complex.vertices:
            relabel[p2.vertex_map[v]] = p1.vertex_map[v]
    start = (max(B1.M.vertices) + 1) if B1.M.vertices else 0
    fresh = [v for v in B2.M.vertices if v not in relabel]
    for k, v in enumerate(fresh):
        relabel[v] = start + k
    return relabel


def glue(B1: Bordism, B2: Bordism, name: str = "") -> Bordism:
    """The composite ``B2 ∘ B1``: ``M1`` and ``M2`` identified along the shared object.

    Vertices of ``M2`` on the seam take the IDs of their partners in ``M1``; the rest are
    renumbered after the vertices of ``M1`` in their original order.
    """
    relabel = gluing_relabel(B1, B2)
    seam1 = {p1.vertex_map[v] for p1 in B1.outgoing for v in p1.complex.vertices}
    seam_simplices = {p1.image(s)[0] for p1 in B1.outgoing for dim in p1.complex.faces for s in dim}
    # simpliciality of the pushout: a simplex spanned by seam vertices must be a seam simplex
    for K, image in ((B1.M, lambda s: s), (B2.M, lambda s: tuple(sorted(relabel[v] for v in s)))):
        for dim in K.faces:
            for s in dim:
                t = image(s)
                if all(v in seam1 for v in t) and t not in seam_simplices:
                    raise ComplexError(
                        f"gluing is not simplicial: {list(t)} spans seam vertices but is not a seam simplex"
                    )
    M2r, signs2 = B2.M.relabel(relabel)
    facets = list(B1.M.facets) + list(M2r.facets)
    if len(set(facets)) != len(facets):
        raise ComplexError("gluing identifies two distinct facets")
    M = SimComplex(facets, name=name or f"{B2.name}∘{B1.name}")
    if B1.coeff == INTEGER and B2.coeff == INTEGER:
        sign_of = {f: s for f, s in B1.orientation.items()}  # type: ignore[union-attr]
        for f, s in B2.orientation.items():  # type: ignore[union-attr]
            img, eps = sort_with_sign([relabel[v] for v in f])
            sign_of[img] = s * eps
        orient: str | Orientation = Orientation(M, INTEGER, tuple(sign_of[f] for f in M.top_simplices()))
    elif B1.coeff != NONE and B2.coeff != NONE:
        orient = MOD2
    else:
        orient = NONE
    outgoing = [p.compose(relabel) for p in B2.outgoing]
    try:
        return Bordism(M, B1.incoming, outgoing, orientation=orient, name=M.name, dimension=B1.d)
    except ComplexError as exc:
        raise ComplexError(f"orientation conflict across the seam or invalid result: {exc}") from exc


def disjoint_union_bordism(B1: Bordism, B2: Bordism, name: str = "") -> Bordism:
    """``B1 ⊔ B2`` with ``M2`` renumbered after ``M1``; pieces are concatenated in order."""
    if B1.d != B2.d:
        raise ComplexError("dimension mismatch in disjoint union")
    start = (max(B1.M.vertices) + 1) if B1.M.vertices else 0
    relabel = {v: start + k for k, v in enumerate(B2.M.vertices)}
    M2r, _ = B2.M.relabel(relabel)
    M = SimComplex(list(B1.M.facets) + list(M2r.facets), name=name or f"{B1.name}⊔{B2.name}")
    if B1.coeff == INTEGER and B2.coeff == INTEGER:
        sign_of = dict(B1.orientation.items()) if B1.orientation else {}
        for f, s in (B2.orientation.items() if B2.orientation else []):
            sign_of[tuple(relabel[v] for v in f)] = s
        orient: str | Orientation = Orientation(M, INTEGER, tuple(sign_of[f] for f in M.top_simplices()))
    elif B1.coeff != NONE and B2.coeff != NONE:
        orient = MOD2
    else:
        orient = NONE
    return Bordism(
        M,
        list(B1.incoming) + [p.compose(relabel) for p in B2.incoming],
        list(B1.outgoing) + [p.compose(relabel) for p in B2.outgoing],
        orientation=orient,
        name=M.name,
        dimension=B1.d,
    )


def boundary_of(M: SimComplex) -> SimComplex:
    return boundary_complex(M)
