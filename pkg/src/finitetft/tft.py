"""The finite homotopy TFT ``Z_X`` of a theory ``X = ⊕ Σ^p HA``: state spaces, bordism maps,
partition functions and the gluing check.

A state on a closed ``(d-1)``-manifold ``N`` is a class in ``X⁰(N) = ⊕_j H^{p_j}(N; A_j)``; the
state space is the free vector space on ``X⁰(N)``. For a bordism ``M: N -> N'`` the matrix entry
from ``a`` to ``a'`` counts classes on ``M`` restricting to ``(a, a')``, weighted by
``|τ≥1 X(M)| / |τ≥1 X(N')|``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .cohomology.cochains import apply_coboundary, extend_by_zero, pullback, pushforward
from .cohomology.groups import (
    CohGroup,
    DirectSum,
    GroupHom,
    block_hom,
    cohomology,
    hom_from_cochain_map,
    induced_map,
)
from .cohomology.les import REGISTRY, SequenceRecord, check_exact
from .exactalg.cyclo import CycloRat
from .exactalg.matrices import ZERO, mat_eq, mat_mul, mat_to_json
from .exactalg.snf import LinearSystemMod
from .simplicial.bordism import Bordism, BoundaryPiece, glue, gluing_relabel
from .simplicial.complex import SimComplex
from .spectra import TheorySpec, mapping_sizes


# ---------------------------------------------------------------------------
# state spaces


@dataclass(frozen=True)
class Factor:
    """One tensor factor of a state space: summand ``j`` on component ``c`` of piece ``i``."""

    piece: int
    component: int
    summand: int
    complex: SimComplex
    group: CohGroup


class StateSpace:
    """``Z_X(N)`` for ``N`` the disjoint union of ``pieces``, with a product basis.

    Factors are ordered by piece, then by component (smallest vertex first), then by summand;
    basis vectors are tuples of factor elements in lexicographic order, so the state space of a
    disjoint union is the Kronecker product of the state spaces.
    """

    def __init__(self, pieces: Sequence[SimComplex], X: TheorySpec) -> None:
        self.pieces = tuple(pieces)
        self.X = X
        factors = []
        for i, N in enumerate(self.pieces):
            if N.is_empty():
                continue
            for c, comp in enumerate(N.component_complexes()):
                for j, s in enumerate(X.summands):
                    factors.append(Factor(i, c, j, comp, cohomology(comp, s.A, s.p)))
        self.factors = tuple(factors)
        self._sizes = [f.group.order for f in self.factors]
        self.dim = math.prod(self._sizes)

    @classmethod
    def of(cls, obj: SimComplex | Sequence[SimComplex] | Sequence[BoundaryPiece], X: TheorySpec) -> StateSpace:
        if isinstance(obj, SimComplex):
            return cls([obj], X)
        return cls([p.complex if isinstance(p, BoundaryPiece) else p for p in obj], X)

    def basis(self) -> Iterator[tuple[tuple[int, ...], ...]]:
        return itertools.product(*(list(f.group.elements()) for f in self.factors))

    def index(self, state: Sequence[Sequence[int]]) -> int:
        idx = 0
        for f, a, n in zip(self.factors, state, self._sizes):
            pos = 0
            for x, m in zip(a, f.group.factors):
                pos = pos * m + (int(x) % m)
            idx = idx * n + pos
        return idx

    def label(self, state: Sequence[Sequence[int]]) -> str:
        return "|" + ";".join(",".join(str(x) for x in a) or "0" for a in state) + ">"

    def labels(self) -> list[str]:
        return [self.label(s) for s in self.basis()]

    def tau_ge1(self) -> Fraction:
        out = Fraction(1)
        for N in self.pieces:
            if not N.is_empty():
                out *= mapping_sizes(N, self.X).tau_ge(1)
        return out

    def flatten(self, state: Sequence[Sequence[int]]) -> tuple[int, ...]:
        return tuple(int(x) for a in state for x in a)

    def __repr__(self) -> str:
        return f"StateSpace(dim={self.dim}, factors={[str(f.group.group) for f in self.factors]})"


# ---------------------------------------------------------------------------
# linear maps


@dataclass
class TftMap:
    """A linear map between state spaces, stored as an exact matrix (rows index the target)."""

    source: StateSpace
    target: StateSpace
    matrix: list
    name: str = ""

    @property
    def shape(self) -> tuple[int, int]:
        return (self.target.dim, self.source.dim)

    def entry(self, row: int, col: int) -> CycloRat:
        return self.matrix[row][col]

    def compose(self, first: TftMap) -> TftMap:
        """``self ∘ first``."""
        if first.target.dim != self.source.dim:
            raise ValueError("maps are not composable")
        return TftMap(first.source, self.target, mat_mul(self.matrix, first.matrix, inner=self.source.dim), f"{self.name}∘{first.name}")

    def equals(self, other: TftMap) -> bool:
        return self.shape == other.shape and mat_eq(self.matrix, other.matrix)

    def scalar(self) -> CycloRat:
        if self.shape != (1, 1):
            raise ValueError("not a scalar")
        return self.matrix[0][0]

    def to_json_obj(self) -> dict:
        return {
            "name": self.name,
            "shape": list(self.shape),
            "source_basis": self.source.labels(),
            "target_basis": self.target.labels(),
            "matrix": mat_to_json(self.matrix),
        }


# ---------------------------------------------------------------------------
# bordism maps


@dataclass
class RestrictionData:
    """Restriction ``X⁰(M) -> X⁰(N) ⊕ X⁰(N')`` in factor coordinates."""

    domain: DirectSum
    groups: list[CohGroup]
    in_space: StateSpace
    out_space: StateSpace
    in_homs: list[GroupHom]
    out_homs: list[GroupHom]
    in_maps: list[dict] = field(repr=False)
    out_maps: list[dict] = field(repr=False)

    def stacked(self) -> tuple[np.ndarray, list[int]]:
        rows = [h.matrix for h in self.in_homs + self.out_homs]
        moduli = [n for h in self.in_homs + self.out_homs for n in h.cod_group.invariant_factors]
        if rows and self.domain.rank:
            mat = np.concatenate([np.asarray(r, dtype=np.int64).reshape(-1, self.domain.rank) for r in rows], axis=0)
        else:
            mat = np.zeros((0, self.domain.rank), dtype=np.int64)
        return mat, moduli


def _factor_homs(B: Bordism, pieces: Sequence[BoundaryPiece], space: StateSpace, groups: list[CohGroup]) -> tuple[list[GroupHom], list[dict]]:
    homs, maps = [], []
    offsets = np.cumsum([0] + [G.group.rank for G in groups])
    for f in space.factors:
        piece = pieces[f.piece]
        vm = {v: piece.vertex_map[v] for v in f.complex.vertices}
        h = induced_map(groups[f.summand], f.group, vm, name=f"restrict to {piece.name}[{f.component}]")
        full = np.zeros((f.group.group.rank, int(offsets[-1])), dtype=np.int64)
        full[:, offsets[f.summand]:offsets[f.summand + 1]] = h.matrix
        homs.append(GroupHom(DirectSum(groups), f.group, full, h.name))
        maps.append(vm)
    return homs, maps


def restriction_data(B: Bordism, X: TheorySpec) -> RestrictionData:
    if X.d != B.d:
        raise ValueError(f"theory is {X.d}-dimensional but the bordism is {B.d}-dimensional")
    groups = [cohomology(B.M, s.A, s.p) for s in X.summands]
    sin = StateSpace.of(B.incoming, X)
    sout = StateSpace.of(B.outgoing, X)
    ih, im = _factor_homs(B, B.incoming, sin, groups)
    oh, om = _factor_homs(B, B.outgoing, sout, groups)
    return RestrictionData(DirectSum(groups), groups, sin, sout, ih, oh, im, om)


def bordism_weight(B: Bordism, X: TheorySpec) -> Fraction:
    """``|τ≥1 X(M)| / |τ≥1 X(N')|``."""
    return mapping_sizes(B.M, X).tau_ge(1) / StateSpace.of(B.outgoing, X).tau_ge1()


def bordism_map(B: Bordism, X: TheorySpec) -> TftMap:
    """``Z_X(B)``: entry ``(a', a)`` is ``weight · #{b ∈ X⁰(M) : b|N = a, b|N' = a'}``."""
    R = restriction_data(B, X)
    w = bordism_weight(B, X)
    dom = R.domain
    mat, moduli = R.stacked() if dom.rank else (None, [])
    out_states = list(R.out_space.basis())
    in_states = list(R.in_space.basis())
    rows = [[ZERO] * R.in_space.dim for _ in range(R.out_space.dim)]
    if not moduli or not dom.rank:
        for jo, ao in enumerate(out_states):
            for ji, ai in enumerate(in_states):
                if not any(R.in_space.flatten(ai)) and not any(R.out_space.flatten(ao)):
                    rows[jo][ji] = CycloRat.rational(w * dom.order)
        return TftMap(R.in_space, R.out_space, rows, B.name)
    system = LinearSystemMod(mat, moduli, dom.invariant_factors)
    kern = system.kernel_order
    assert kern is not None
    value = CycloRat.rational(w * kern)
    for jo, ao in enumerate(out_states):
        flat_o = R.out_space.flatten(ao)
        for ji, ai in enumerate(in_states):
            if system.is_solvable(R.in_space.flatten(ai) + flat_o):
                rows[jo][ji] = value
    return TftMap(R.in_space, R.out_space, rows, B.name)


def brute_bordism_map(B: Bordism, X: TheorySpec, cap: int = 1 << 16) -> TftMap:
    """The same matrix by enumerating every class on ``M`` and restricting its cocycle."""
    groups = [cohomology(B.M, s.A, s.p) for s in X.summands]
    total = math.prod(G.order for G in groups)
    if total > cap:
        raise ValueError(f"{total} classes on M exceed the enumeration cap {cap}")
    sin = StateSpace.of(B.incoming, X)
    sout = StateSpace.of(B.outgoing, X)
    counts: dict[tuple[int, int], int] = {}

    def restrict(space: StateSpace, pieces: Sequence[BoundaryPiece], reps: list) -> int:
        state = []
        for f in space.factors:
            piece = pieces[f.piece]
            vm = {v: piece.vertex_map[v] for v in f.complex.vertices}
            s = X.summands[f.summand]
            c = pullback(reps[f.summand], B.M, f.complex, vm, s.p, s.A.invariant_factors)
            state.append(f.group.coords(c))
        return space.index(state)

    for b in itertools.product(*(list(G.elements()) for G in groups)):
        reps = [G.representative(x) for G, x in zip(groups, b)]
        key = (restrict(sout, B.outgoing, reps), restrict(sin, B.incoming, reps))
        counts[key] = counts.get(key, 0) + 1
    w = bordism_weight(B, X)
    rows = [[ZERO] * sin.dim for _ in range(sout.dim)]
    for (jo, ji), n in counts.items():
        rows[jo][ji] = CycloRat.rational(w * n)
    return TftMap(sin, sout, rows, f"brute({B.name})")


def partition_function(M: SimComplex | Bordism, X: TheorySpec) -> Fraction:
    """``Z_X(M) = |X⁰(M)| · |τ≥1 X(M)|`` for a closed manifold."""
    K = M.M if isinstance(M, Bordism) else M
    if isinstance(M, Bordism) and not M.is_closed():
        raise ValueError("partition_function needs a closed manifold")
    return mapping_sizes(K, X).tau_ge(0)


def euler_tft(B: Bordism, lam: Fraction | int) -> Fraction:
    """The invertible Euler theory ``E_λ``: ``λ^{χ(M) - χ(N)}`` on a bordism ``M: N -> N'``."""
    return Fraction(lam) ** (B.chi - B.chi_in)


def euler_exponent_odd_d(B: Bordism) -> tuple[int, int]:
    """For odd ``d`` the exponent ``χ(M) - χ(N)`` equals ``(χ(N') - χ(N)) / 2``; both are returned."""
    return B.chi - B.chi_in, (B.chi_out - B.chi_in)


def verify_euler_triviality_odd_d(bordisms: Sequence[Bordism]) -> list[dict]:
    """In odd dimension ``2χ(M) = χ(∂M)``, so ``E_λ`` is a coboundary-type invertible theory."""
    out = []
    for B in bordisms:
        ok = B.d % 2 == 1 and 2 * B.chi == B.chi_in + B.chi_out
        out.append({"bordism": B.name, "d": B.d, "chi": B.chi, "chi_in": B.chi_in, "chi_out": B.chi_out, "ok": ok})
    return out


def determinism_check(B: Bordism, X: TheorySpec, runs: int = 2) -> bool:
    """Recomputing the bordism map gives an identical matrix."""
    first = bordism_map(B, X)
    return all(bordism_map(B, X).equals(first) for _ in range(runs - 1))


# ---------------------------------------------------------------------------
# gluing


@dataclass
class GluingReport:
    name: str
    matrix_ok: bool
    mv_record: SequenceRecord | None
    truncated: tuple[int, ...]
    identity_lhs: Fraction
    identity_rhs: Fraction
    glued: TftMap = field(repr=False)
    composite: TftMap = field(repr=False)

    @property
    def size_identity_ok(self) -> bool:
        return self.identity_lhs == self.identity_rhs

    @property
    def ok(self) -> bool:
        return self.matrix_ok and self.size_identity_ok and (self.mv_record is None or self.mv_record.ok)

    def to_json_obj(self) -> dict:
        return {
            "name": self.name,
            "matrix_equal": self.matrix_ok,
            "mayer_vietoris_exact": self.mv_record.ok if self.mv_record else None,
            "truncated_orders": list(self.truncated),
            "size_identity": [str(self.identity_lhs), str(self.identity_rhs)],
            "status": "pass" if self.ok else "fail",
        }


def _neg(h: GroupHom) -> GroupHom:
    return GroupHom(h.domain, h.codomain, -np.asarray(h.matrix, dtype=np.int64), f"-{h.name}")


def mayer_vietoris(B1: Bordism, B2: Bordism, W: SimComplex, A, k: int) -> tuple[GroupHom, GroupHom, GroupHom]:
    """The degree-``k`` maps ``H^k(W) -> H^k(M1) ⊕ H^k(M2) -> H^k(N') -> H^{k+1}(W)``."""
    relabel = gluing_relabel(B1, B2)
    M1, M2 = B1.M, B2.M
    HW, HW1 = cohomology(W, A, k), cohomology(W, A, k + 1)
    H1, H2 = cohomology(M1, A, k), cohomology(M2, A, k)
    pieces = [p.complex for p in B1.outgoing]
    HN = [cohomology(N, A, k) for N in pieces]
    r = block_hom(
        [HW],
        [H1, H2],
        {
            (0, 0): induced_map(HW, H1, {v: v for v in M1.vertices}),
            (1, 0): induced_map(HW, H2, relabel),
        },
        f"MV r^{k}",
    )
    blocks = {}
    for i, (p1, p2) in enumerate(zip(B1.outgoing, B2.incoming)):
        blocks[(i, 0)] = induced_map(H1, HN[i], p1.vertex_map)
        blocks[(i, 1)] = _neg(induced_map(H2, HN[i], p2.vertex_map))
    s = block_hom([H1, H2], HN, blocks, f"MV s^{k}")
    fac = A.invariant_factors
    conn = {}
    for i, p1 in enumerate(B1.outgoing):

        def f(c, N=pieces[i], vm=p1.vertex_map):
            u = pushforward(c, N, M1, vm, k, fac)
            return extend_by_zero(apply_coboundary(M1, k, u, fac), M1, W, k + 1)

        conn[(0, i)] = hom_from_cochain_map(HN[i], HW1, f, f"MV ∂^{k}")
    delta = block_hom(HN, [HW1], conn, f"MV ∂^{k}")
    return r, s, delta


def verify_gluing(B1: Bordism, B2: Bordism, X: TheorySpec, name: str = "") -> GluingReport:
    """Check ``Z(B2 ∘ B1) = Z(B2) Z(B1)`` and the Mayer-Vietoris size identity behind it.

    The Mayer-Vietoris sequence of ``W = M1 ∪_{N'} M2`` is verified exact for every summand,
    then its truncation at ``X^{-1}(N') -> C -> 0`` (``C`` the image in ``X⁰(W)``) gives
    ``|τ≥1 X(W)| · |C| = |τ≥1 X(M1)| |τ≥1 X(M2)| / |τ≥1 X(N')|``.
    """
    G = glue(B1, B2)
    label = name or G.name
    W = G.M
    top = W.dimension
    maps: list[GroupHom] = []
    # orders by grading i (π_i = X^{-i}) of the three spaces, and |C| at i = 0
    c_order = 1
    for s in X.summands:
        for k in range(top + 1):
            r, sm, dl = mayer_vietoris(B1, B2, W, s.A, k)
            maps += [r, sm, dl]
            if k == s.p - 1:
                c_order *= dl.image_order()
    record = None
    # one exact sequence per summand
    per = 3 * (top + 1)
    for j in range(len(X.summands)):
        record = check_exact(maps[j * per:(j + 1) * per], f"MV({label};{X.summands[j]})")
    sW = mapping_sizes(W, X)
    s1, s2 = mapping_sizes(B1.M, X), mapping_sizes(B2.M, X)
    sN = StateSpace.of(B1.outgoing, X)
    truncated: list[int] = []
    imax = max([i for i in sW.orders] + [1])
    for i in range(imax, 0, -1):
        nN = math.prod(mapping_sizes(p.complex, X).order(i) for p in B1.outgoing if not p.complex.is_empty())
        truncated += [sW.order(i), s1.order(i) * s2.order(i), nN]
    truncated.append(c_order)
    trunc_rec = REGISTRY.record(f"MV-truncated({label};{X})", truncated)
    lhs = sW.tau_ge(1) * c_order
    rhs = s1.tau_ge(1) * s2.tau_ge(1) / sN.tau_ge1()
    Zg = bordism_map(G, X)
    Zc = bordism_map(B2, X).compose(bordism_map(B1, X))
    ok = Zg.equals(Zc) and trunc_rec.ok
    return GluingReport(label, ok, record, tuple(truncated), lhs, rhs, Zg, Zc)
