"""Finite ordered simplicial complexes."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

Simplex = tuple[int, ...]


class ComplexError(ValueError):
    """Malformed simplicial input."""


class SimComplex:
    """A finite simplicial complex on integer vertices, ordered by vertex ID.

    ``faces[k]`` lists the k-simplices as increasing vertex tuples in lexicographic order;
    ``index[k]`` maps such a tuple to its position. Everything is computed at construction.
    """

    def __init__(self, facets: Iterable[Sequence[int]], name: str = "") -> None:
        fs: list[Simplex] = []
        for f in facets:
            t = tuple(int(v) for v in f)
            if not t:
                raise ComplexError("empty facet")
            if any(a >= b for a, b in zip(t, t[1:])):
                raise ComplexError(f"facet {list(t)} is not strictly increasing")
            if any(v < 0 for v in t):
                raise ComplexError(f"facet {list(t)} has a negative vertex ID")
            fs.append(t)
        if len(set(fs)) != len(fs):
            dup = next(f for f in fs if fs.count(f) > 1)
            raise ComplexError(f"duplicate facet {list(dup)}")
        # drop facets that are faces of other listed facets
        fset = set(fs)
        all_faces: set[Simplex] = set()
        for f in fs:
            for k in range(1, len(f) + 1):
                all_faces.update(itertools.combinations(f, k))
        maximal = [f for f in fs if not any(len(g) > len(f) and set(f) <= set(g) for g in fset)]
        self.name = name
        self.facets: tuple[Simplex, ...] = tuple(sorted(maximal, key=lambda s: (len(s), s)))
        self.dimension = max((len(f) for f in fs), default=0) - 1
        by_dim: list[list[Simplex]] = [[] for _ in range(self.dimension + 1)]
        for s in all_faces:
            by_dim[len(s) - 1].append(s)
        self.faces: tuple[tuple[Simplex, ...], ...] = tuple(tuple(sorted(x)) for x in by_dim)
        self.index: tuple[dict[Simplex, int], ...] = tuple(
            {s: i for i, s in enumerate(x)} for x in self.faces
        )
        self.vertices: tuple[int, ...] = tuple(s[0] for s in self.faces[0]) if self.faces else ()
        self._cob: dict[int, np.ndarray] = {}

    # basic data -------------------------------------------------------------
    def __repr__(self) -> str:
        return f"SimComplex({self.name or 'anonymous'}, dim={self.dimension}, f={self.f_vector})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SimComplex) and self.facets == other.facets

    def __hash__(self) -> int:
        return hash(self.facets)

    @property
    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(x) for x in self.faces)

    def count(self, k: int) -> int:
        return len(self.faces[k]) if 0 <= k < len(self.faces) else 0

    def simplices(self, k: int) -> tuple[Simplex, ...]:
        return self.faces[k] if 0 <= k < len(self.faces) else ()

    def is_empty(self) -> bool:
        return not self.faces

    def is_pure(self) -> bool:
        return all(len(f) == self.dimension + 1 for f in self.facets)

    def contains(self, s: Sequence[int]) -> bool:
        t = tuple(s)
        k = len(t) - 1
        return 0 <= k <= self.dimension and t in self.index[k]

    def top_simplices(self) -> tuple[Simplex, ...]:
        return self.simplices(self.dimension)

    # algebra ----------------------------------------------------------------
    def coboundary(self, k: int) -> np.ndarray:
        """Integer matrix of δ^k: C^k -> C^{k+1}, shape (#(k+1)-simplices, #k-simplices).

        ``(δc)(v0..v_{k+1}) = sum_i (-1)^i c(v0..v̂i..v_{k+1})``.
        """
        if k in self._cob:
            return self._cob[k]
        rows, cols = self.count(k + 1), self.count(k)
        D = np.zeros((rows, cols), dtype=np.int64)
        if k >= 0 and rows and cols:
            idx = self.index[k]
            for r, tau in enumerate(self.faces[k + 1]):
                for i in range(len(tau)):
                    D[r, idx[tau[:i] + tau[i + 1:]]] += -1 if i % 2 else 1
        D.setflags(write=False)
        self._cob[k] = D
        return D

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * n for k, n in enumerate(self.f_vector))

    # structure --------------------------------------------------------------
    def components(self) -> list[tuple[int, ...]]:
        """Vertex sets of connected components, ordered by least vertex."""
        parent = {v: v for v in self.vertices}

        def find(v: int) -> int:
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for e in self.simplices(1):
            a, b = find(e[0]), find(e[1])
            if a != b:
                parent[max(a, b)] = min(a, b)
        groups: dict[int, list[int]] = {}
        for v in self.vertices:
            groups.setdefault(find(v), []).append(v)
        return sorted((tuple(sorted(g)) for g in groups.values()), key=lambda g: g[0])

    def induced(self, vertices: Iterable[int], name: str = "") -> SimComplex:
        vs = set(vertices)
        return SimComplex([f for f in self.facets if set(f) <= vs], name=name)

    def component_complexes(self) -> list[SimComplex]:
        return [self.induced(c, name=f"{self.name}[{i}]") for i, c in enumerate(self.components())]

    def link(self, s: Sequence[int]) -> SimComplex:
        s = set(s)
        out = set()
        for f in self.facets:
            if s <= set(f):
                rest = tuple(v for v in f if v not in s)
                if rest:
                    out.add(rest)
        return SimComplex(sorted(out))

    def star_facets(self, s: Sequence[int]) -> list[Simplex]:
        s = set(s)
        return [f for f in self.facets if s <= set(f)]

    def relabel(self, mapping: dict[int, int], name: str = "") -> tuple[SimComplex, dict[Simplex, int]]:
        """Image under an injective vertex relabeling, with the sign of the sorting permutation
        of every top simplex."""
        signs = {}
        new = []
        for f in self.facets:
            img = [mapping[v] for v in f]
            srt, sgn = sort_with_sign(img)
            new.append(srt)
            signs[srt] = sgn
        return SimComplex(new, name=name or self.name), signs

    def is_subcomplex_of(self, other: SimComplex) -> bool:
        return all(other.contains(f) for f in self.facets)


def sort_with_sign(vs: Sequence[int]) -> tuple[Simplex, int]:
    """Sorted tuple and the sign of the sorting permutation (0 if two entries coincide)."""
    v = list(vs)
    sign = 1
    for i in range(len(v)):
        for j in range(len(v) - 1 - i):
            if v[j] > v[j + 1]:
                v[j], v[j + 1] = v[j + 1], v[j]
                sign = -sign
            elif v[j] == v[j + 1]:
                return tuple(v), 0
    return tuple(v), sign


def empty_complex(name: str = "empty") -> SimComplex:
    return SimComplex([], name=name)


def disjoint_union(complexes: Sequence[SimComplex], name: str = "") -> tuple[SimComplex, list[dict[int, int]]]:
    """Disjoint union with vertex IDs shifted so that each summand follows the previous one."""
    facets = []
    maps = []
    offset = 0
    for K in complexes:
        m = {v: v - (K.vertices[0] if K.vertices else 0) + offset for v in K.vertices}
        facets += [tuple(m[v] for v in f) for f in K.facets]
        maps.append(m)
        offset += (max(m.values()) + 1 - offset) if m else 0
    return SimComplex(facets, name=name), maps


@dataclass
class ManifoldReport:
    """Outcome of ``validate_closed_manifold``."""

    dimension: int
    pure: bool
    closed: bool
    max_ridge_degree: int
    boundary: SimComplex
    connected_components: int
    strongly_connected: bool
    bad_links: list[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.pure and self.max_ridge_degree <= 2 and self.strongly_connected and not self.bad_links


def ridge_facets(K: SimComplex) -> dict[Simplex, list[int]]:
    """Map each (d-1)-simplex to the indices (into ``K.top_simplices()``) of its cofaces."""
    out: dict[Simplex, list[int]] = {}
    for n, f in enumerate(K.top_simplices()):
        for i in range(len(f)):
            out.setdefault(f[:i] + f[i + 1:], []).append(n)
    return out


def validate_closed_manifold(K: SimComplex, d: int | None = None) -> ManifoldReport:
    """Pseudo-manifold checks: purity, ridge degrees, facet-graph connectivity per component
    and connectivity of every vertex link (of dimension >= 1).

    Raises ``ComplexError`` for non-pure input or a ridge in three or more facets.
    """
    if K.is_empty():
        raise ComplexError("empty complex")
    if d is None:
        d = K.dimension
    if K.dimension != d or not K.is_pure():
        raise ComplexError(f"complex is not pure of dimension {d}")
    ridges = ridge_facets(K) if d >= 1 else {}
    worst = max((len(v) for v in ridges.values()), default=0)
    if worst >= 3:
        bad = next(r for r, v in ridges.items() if len(v) >= 3)
        raise ComplexError(f"ridge {list(bad)} lies in {len(ridges[bad])} facets")
    bdry = SimComplex([r for r, v in ridges.items() if len(v) == 1], name=f"boundary({K.name})")
    # facet adjacency connectivity inside each vertex component
    tops = K.top_simplices()
    parent = list(range(len(tops)))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for v in ridges.values():
        if len(v) == 2:
            a, b = find(v[0]), find(v[1])
            parent[max(a, b)] = min(a, b)
    n_facet_components = len({find(i) for i in range(len(tops))})
    comps = K.components()
    bad_links = []
    if d >= 2:
        for v in K.vertices:
            if len(K.link((v,)).components()) != 1:
                bad_links.append(v)
    return ManifoldReport(
        dimension=d,
        pure=True,
        closed=bdry.is_empty(),
        max_ridge_degree=worst,
        boundary=bdry,
        connected_components=len(comps),
        strongly_connected=n_facet_components == len(comps),
        bad_links=bad_links,
    )


def boundary_complex(K: SimComplex) -> SimComplex:
    if K.dimension < 1:
        return empty_complex()
    return SimComplex([r for r, v in ridge_facets(K).items() if len(v) == 1], name=f"boundary({K.name})")


def euler_characteristic(K: SimComplex) -> int:
    return K.euler_characteristic()
