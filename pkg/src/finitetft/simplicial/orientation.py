"""Fundamental classes: integer orientations and the everywhere-defined mod-2 class."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .complex import ComplexError, SimComplex, Simplex, ridge_facets

INTEGER = "integer"
MOD2 = "mod2"


class NonOrientableError(ComplexError):
    """No compatible choice of facet signs exists; ``cycle`` lists facets along a violating loop."""

    def __init__(self, message: str, cycle: list[Simplex]) -> None:
        super().__init__(message)
        self.cycle = cycle


@dataclass(frozen=True)
class Orientation:
    """A top-degree relative cycle with multiplicity ±1 on every top simplex of ``complex``."""

    complex: SimComplex
    coeff: str
    signs: tuple[int, ...]  # aligned with complex.top_simplices()

    def __post_init__(self) -> None:
        if self.coeff not in (INTEGER, MOD2):
            raise ValueError(f"unknown orientation coefficients {self.coeff!r}")
        if len(self.signs) != len(self.complex.top_simplices()):
            raise ValueError("one sign per top simplex is required")
        if any(s not in (1, -1) for s in self.signs):
            raise ValueError("orientation multiplicities must be units")

    def sign(self, s: Simplex) -> int:
        return self.signs[self.complex.index[self.complex.dimension][s]]

    def items(self) -> list[tuple[Simplex, int]]:
        return list(zip(self.complex.top_simplices(), self.signs))

    def __neg__(self) -> Orientation:
        return Orientation(self.complex, self.coeff, tuple(-s for s in self.signs))

    def boundary_chain(self) -> dict[Simplex, int]:
        """``∂`` of the cycle, as coefficients on (d-1)-simplices (never reduced mod 2)."""
        out: dict[Simplex, int] = {}
        for f, s in self.items():
            for i in range(len(f)):
                r = f[:i] + f[i + 1:]
                out[r] = out.get(r, 0) + s * (-1) ** i
        if self.coeff == MOD2:
            return {r: c for r, c in out.items() if c % 2}
        return {r: c for r, c in out.items() if c}

    def is_relative_cycle(self, boundary: SimComplex) -> bool:
        return all(boundary.contains(r) for r in self.boundary_chain())


def facet_graph_path(parent: dict[int, int | None], a: int) -> list[int]:
    path = [a]
    while parent[path[-1]] is not None:
        path.append(parent[path[-1]])  # type: ignore[arg-type]
    return path


def fundamental_class(K: SimComplex, coeff: str = INTEGER) -> Orientation:
    """The fundamental class of a pseudo-manifold (possibly with boundary).

    Over the integers the signs are propagated by breadth-first search over shared ridges
    from the first top simplex of each facet-connected component, which gets ``+1``.
    """
    tops = K.top_simplices()
    if coeff == MOD2:
        return Orientation(K, MOD2, (1,) * len(tops))
    if coeff != INTEGER:
        raise ValueError(f"unknown orientation coefficients {coeff!r}")
    if K.dimension == 0:
        return Orientation(K, INTEGER, (1,) * len(tops))
    ridges = ridge_facets(K)
    nbrs: list[list[tuple[int, int]]] = [[] for _ in tops]
    for r, fs in ridges.items():
        if len(fs) > 2:
            raise ComplexError(f"ridge {list(r)} lies in {len(fs)} facets")
        if len(fs) == 2:
            a, b = fs
            ia = _omitted_index(tops[a], r)
            ib = _omitted_index(tops[b], r)
            rel = -((-1) ** (ia + ib))  # sign[b] = rel * sign[a]
            nbrs[a].append((b, rel))
            nbrs[b].append((a, rel))
    signs: list[int | None] = [None] * len(tops)
    parent: dict[int, int | None] = {}
    for root in range(len(tops)):
        if signs[root] is not None:
            continue
        signs[root] = 1
        parent[root] = None
        queue = deque([root])
        while queue:
            a = queue.popleft()
            for b, rel in nbrs[a]:
                want = rel * signs[a]  # type: ignore[operator]
                if signs[b] is None:
                    signs[b] = want
                    parent[b] = a
                    queue.append(b)
                elif signs[b] != want:
                    pa, pb = facet_graph_path(parent, a), facet_graph_path(parent, b)
                    common = next(x for x in pa if x in set(pb))
                    loop = pa[: pa.index(common) + 1] + list(reversed(pb[: pb.index(common)]))
                    cycle = [tops[i] for i in loop]
                    raise NonOrientableError(
                        f"{K.name or 'complex'} is not orientable over Z: sign conflict between "
                        f"facets {list(tops[a])} and {list(tops[b])} along a loop of {len(cycle)} facets",
                        cycle,
                    )
    return Orientation(K, INTEGER, tuple(int(s) for s in signs))  # type: ignore[arg-type]


def _omitted_index(f: Simplex, r: Simplex) -> int:
    for i, v in enumerate(f):
        if v not in r:
            return i
    raise AssertionError("ridge is not a face")


def is_orientable(K: SimComplex) -> bool:
    try:
        fundamental_class(K, INTEGER)
    except NonOrientableError:
        return False
    return True


def induced_boundary_orientation(omega: Orientation, boundary: SimComplex) -> Orientation:
    """Restriction of ``∂[M]`` to the boundary complex, as an orientation of it."""
    chain = omega.boundary_chain()
    tops = boundary.top_simplices()
    if set(chain) - set(tops):
        raise ComplexError("fundamental class is not a cycle relative to the boundary")
    signs = []
    for r in tops:
        c = chain.get(r, 0)
        if omega.coeff == MOD2:
            c = 1 if c % 2 else 0
        if c not in (1, -1):
            raise ComplexError(f"boundary ridge {list(r)} has multiplicity {c}")
        signs.append(c)
    return Orientation(boundary, omega.coeff, tuple(signs))
