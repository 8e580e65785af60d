"""Built-in triangulations of closed manifolds and bordisms.

Every constructor returns a fresh, validated object. Closed objects that appear as boundary
pieces are always the library complexes themselves, so gluing can compare them directly.
"""
from __future__ import annotations

import itertools
import re
from functools import lru_cache
from typing import Callable

from .bordism import Bordism, BoundaryPiece, closed_bordism, glue, reverse
from .complex import ComplexError, SimComplex, Simplex, validate_closed_manifold
from .orientation import INTEGER, MOD2, fundamental_class, induced_boundary_orientation, is_orientable
from .bordism import piece_flips


class LibraryError(KeyError):
    """Unknown library name or unsupported parameter."""

    def __str__(self) -> str:  # KeyError quotes its message otherwise
        return str(self.args[0]) if self.args else ""


# ---------------------------------------------------------------------------
# closed complexes


@lru_cache(maxsize=None)
def point() -> SimComplex:
    return SimComplex([(0,)], name="point")


@lru_cache(maxsize=None)
def sphere(d: int) -> SimComplex:
    """Boundary of the (d+1)-simplex."""
    if d < 0:
        raise LibraryError(f"sphere dimension must be nonnegative, got {d}")
    return SimComplex(itertools.combinations(range(d + 2), d + 1), name=f"S{d}")


@lru_cache(maxsize=None)
def circle(n: int = 3) -> SimComplex:
    if n < 3:
        raise LibraryError(f"a simplicial circle needs at least 3 vertices, got {n}")
    name = "S1" if n == 3 else f"S1({n})"
    return SimComplex([tuple(sorted((i, (i + 1) % n))) for i in range(n)], name=name)


@lru_cache(maxsize=None)
def torus7() -> SimComplex:
    """The 7-vertex torus."""
    facets = []
    for i in range(7):
        facets.append(tuple(sorted((i, (i + 1) % 7, (i + 3) % 7))))
        facets.append(tuple(sorted((i, (i + 2) % 7, (i + 3) % 7))))
    return SimComplex(facets, name="T2")


def _grid_id(i: int, j: int, m: int, n: int) -> int:
    return (i % m) * n + (j % n)


def _grid_triangles(m: int, n: int) -> list[tuple[tuple[int, int], ...]]:
    tris = []
    for i in range(m):
        for j in range(n):
            tris.append(((i, j), (i, j + 1), (i + 1, j + 1)))
            tris.append(((i, j), (i + 1, j), (i + 1, j + 1)))
    return tris


@lru_cache(maxsize=None)
def torus_grid(m: int = 3, n: int = 3) -> SimComplex:
    """The m x n grid torus, each square cut along its (+1, +1) diagonal."""
    if m < 3 or n < 3:
        raise LibraryError("grid torus needs m, n >= 3")
    facets = [tuple(sorted(_grid_id(a, b, m, n) for a, b in t)) for t in _grid_triangles(m, n)]
    return SimComplex(facets, name="T2grid" if (m, n) == (3, 3) else f"T2grid({m},{n})")


@lru_cache(maxsize=None)
def rp2() -> SimComplex:
    """The 6-vertex real projective plane."""
    tris = [(1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 6, 2),
            (2, 3, 5), (3, 4, 6), (4, 5, 2), (5, 6, 3), (6, 2, 4)]
    return SimComplex([tuple(sorted(v - 1 for v in t)) for t in tris], name="RP2")


@lru_cache(maxsize=None)
def klein_bottle() -> SimComplex:
    """A 9-vertex Klein bottle: three 3-cycles joined by strips, the last strip reflected."""
    def x(k: int, i: int) -> int:
        return 3 * k + i % 3

    facets = []
    for k in range(2):
        for i in range(3):
            facets.append((x(k, i), x(k, i + 1), x(k + 1, i + 1)))
            facets.append((x(k, i), x(k + 1, i), x(k + 1, i + 1)))
    for i in range(3):
        facets.append((x(2, i), x(2, i + 1), x(0, -(i + 1))))
        facets.append((x(2, i), x(0, -i), x(0, -(i + 1))))
    return SimComplex([tuple(sorted(f)) for f in facets], name="K")


def _prism_layers(N: SimComplex, layers: int) -> tuple[list[Simplex], Callable[[int, int], int]]:
    """Staircase triangulation of ``N x [0, layers]``; vertex ``(v, t)`` has ID ``rank(v)*(layers+1)+t``."""
    rank = {v: r for r, v in enumerate(N.vertices)}

    def vid(v: int, t: int) -> int:
        return rank[v] * (layers + 1) + t

    facets = []
    for s in N.top_simplices():
        for t in range(layers):
            for i in range(len(s)):
                facets.append(tuple([vid(v, t) for v in s[: i + 1]] + [vid(v, t + 1) for v in s[i:]]))
    return facets, vid


@lru_cache(maxsize=None)
def three_torus(n: int = 3) -> SimComplex:
    """Freudenthal triangulation of the n x n x n cubical 3-torus (6 tetrahedra per cube)."""
    def vid(p: tuple[int, int, int]) -> int:
        return (p[0] % n) * n * n + (p[1] % n) * n + (p[2] % n)

    facets = []
    for c in itertools.product(range(n), repeat=3):
        for perm in itertools.permutations(range(3)):
            p = list(c)
            verts = [vid(tuple(p))]
            for axis in perm:
                p[axis] += 1
                verts.append(vid(tuple(p)))
            facets.append(tuple(sorted(verts)))
    return SimComplex(facets, name="T3")


def _solid_torus_tets(m: int, n: int, core: str) -> list[tuple]:
    """Tetrahedra of one of the two solid tori of the genus-one splitting of S^3.

    Vertices are symbolic: ``("c", i, j)`` on the m x n grid torus, ``("a", i)`` on the core
    running along ``i``, ``("b", j)`` on the core running along ``j``.
    """
    tets = []
    for i in range(m):
        for j in range(n):
            c = lambda a, b: ("c", a % m, b % n)  # noqa: E731
            if core == "a":
                a = lambda t: ("a", t % m)  # noqa: E731
                tets.append((a(i), c(i, j), c(i, j + 1), c(i + 1, j + 1)))
                tets.append((a(i), c(i, j), c(i + 1, j), c(i + 1, j + 1)))
                tets.append((a(i), a(i + 1), c(i + 1, j), c(i + 1, j + 1)))
            else:
                b = lambda t: ("b", t % n)  # noqa: E731
                tets.append((b(j), c(i, j), c(i + 1, j), c(i + 1, j + 1)))
                tets.append((b(j), c(i, j), c(i, j + 1), c(i + 1, j + 1)))
                tets.append((b(j), b(j + 1), c(i, j + 1), c(i + 1, j + 1)))
    return tets


def _symbolic_ids(m: int, n: int) -> Callable[[tuple], int]:
    def vid(v: tuple) -> int:
        if v[0] == "c":
            return v[1] * n + v[2]
        if v[0] == "a":
            return m * n + v[1]
        return m * n + m + v[1]

    return vid


@lru_cache(maxsize=None)
def sphere3_split() -> SimComplex:
    """S^3 as the union of the two solid tori over the 3 x 3 grid torus."""
    vid = _symbolic_ids(3, 3)
    tets = _solid_torus_tets(3, 3, "a") + _solid_torus_tets(3, 3, "b")
    return SimComplex([tuple(sorted(vid(v) for v in t)) for t in tets], name="S3split")


@lru_cache(maxsize=None)
def lens_space(p: int, q: int = 1) -> SimComplex:
    """L(p, q) as the quotient of a subdivided genus-one splitting of S^3 by a free Z/p action.

    The splitting uses a 3p x 3p grid torus; the generator acts by ``(i, j) -> (i + 3, j + 3q)``
    on the torus and by the matching shifts on the two cores.
    """
    if p < 2:
        raise LibraryError(f"lens space needs p >= 2, got {p}")
    if p > 7:
        raise LibraryError(f"lens spaces are provided for p <= 7, got {p}")
    if not 1 <= q < p or _gcd(p, q) != 1:
        raise LibraryError(f"lens space L({p},{q}) needs 1 <= q < p coprime to p")
    m = n = 3 * p

    def rep(v: tuple) -> tuple:
        if v[0] == "c":
            i, j = v[1], v[2]
            t = i // 3
            return ("c", i % 3, (j - 3 * q * t) % n)
        if v[0] == "a":
            return ("a", v[1] % 3)
        return ("b", v[1] % 3)

    reps = sorted({rep(v) for t in _solid_torus_tets(m, n, "a") + _solid_torus_tets(m, n, "b") for v in t})
    order = {v: k for k, v in enumerate(sorted(reps, key=lambda v: ({"c": 0, "a": 1, "b": 2}[v[0]],) + v[1:]))}
    facets = set()
    for t in _solid_torus_tets(m, n, "a") + _solid_torus_tets(m, n, "b"):
        img = tuple(sorted(order[rep(v)] for v in t))
        if len(set(img)) != 4:
            raise AssertionError("lens quotient collapses a simplex")
        facets.add(img)
    if len(facets) * p != 2 * 3 * m * n:
        raise AssertionError("lens quotient is not a free quotient")
    name = "RP3" if (p, q) == (2, 1) else f"L({p},{q})"
    return SimComplex(sorted(facets), name=name)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def stellar_subdivide(K: SimComplex, facet_index: int = 0) -> SimComplex:
    """Insert a new last vertex in the interior of one top simplex."""
    f = K.top_simplices()[facet_index]
    new = max(K.vertices) + 1
    facets = [g for g in K.facets if g != f]
    for i in range(len(f)):
        facets.append(f[:i] + f[i + 1:] + (new,))
    return SimComplex(facets, name=f"sd({K.name})")


# ---------------------------------------------------------------------------
# bordisms


def _piece(N: SimComplex, vm: dict[int, int], name: str | None = None) -> BoundaryPiece:
    return BoundaryPiece(name or N.name, N, dict(vm))


def _reflect_circle_piece(piece: BoundaryPiece) -> BoundaryPiece:
    """Precompose with the reflection ``j -> -j`` of the circle."""
    n = len(piece.complex.vertices)
    return BoundaryPiece(piece.name, piece.complex, {j: piece.vertex_map[(-j) % n] for j in range(n)})


def _oriented(M: SimComplex, incoming: list[BoundaryPiece], outgoing: list[BoundaryPiece], name: str) -> Bordism:
    """Build an integer-oriented bordism, reflecting circle pieces whose orientation disagrees
    with the one forced by the earlier pieces on their component."""
    omega = fundamental_class(M, INTEGER)
    bd = induced_boundary_orientation(omega, validate_closed_manifold(M).boundary)
    flips: dict[int, int] = {}
    fixed_in, fixed_out = [], []
    for wanted, pieces, acc in ((1, incoming, fixed_in), (-1, outgoing, fixed_out)):
        for p in pieces:
            for candidate in (p, _reflect_circle_piece(p) if p.complex.name.startswith("S1") else None):
                if candidate is None:
                    raise ComplexError(f"{name}: cannot orient piece {p.name}")
                got = piece_flips(M, omega, bd, candidate, wanted)
                if got is not None and all(flips.get(ci, f) == f for ci, f in got.items()):
                    flips.update(got)
                    acc.append(candidate)
                    break
    return Bordism(M, fixed_in, fixed_out, orientation=INTEGER, name=name)


def cylinder(N: SimComplex, layers: int = 1, name: str | None = None) -> Bordism:
    """``N x [0, layers]`` as a bordism N -> N (staircase triangulation)."""
    facets, vid = _prism_layers(N, layers)
    M = SimComplex(facets, name=name or f"cylinder({N.name})")
    inc = _piece(N, {v: vid(v, 0) for v in N.vertices})
    out = _piece(N, {v: vid(v, layers) for v in N.vertices})
    if not is_orientable(N):
        return Bordism(M, [inc], [out], orientation=MOD2, name=M.name)
    return _oriented(M, [inc], [out], M.name)


def interval() -> Bordism:
    return cylinder(point(), name="interval")


def disk(n: int = 3) -> Bordism:
    """Cone on the n-gon (apex last) as a bordism ∅ -> S^1(n)."""
    C = circle(n)
    facets = [tuple(sorted(e)) + (n,) for e in C.top_simplices()]
    M = SimComplex(facets, name=f"disk({n})" if n != 3 else "disk")
    return _oriented(M, [], [_piece(C, {v: v for v in C.vertices})], M.name)


def disk_in(n: int = 3) -> Bordism:
    """The disk read as S^1(n) -> ∅."""
    return reverse(disk(n), name=f"disk_in({n})" if n != 3 else "disk_in")


def pants() -> Bordism:
    """Pair of pants S^1 ⊔ S^1 -> S^1: a 5-band cylinder over the triangle with one triangle of
    the middle band removed. The three boundary circles are pairwise far apart, so gluings
    onto it stay simplicial."""
    N = circle(3)
    layers = 5
    facets, vid = _prism_layers(N, layers)
    hole = (vid(0, 2), vid(0, 3), vid(1, 3))
    facets = [f for f in facets if f != tuple(sorted(hole))]
    M = SimComplex(facets, name="pants")
    bottom = _piece(N, {v: vid(v, 0) for v in N.vertices})
    hole_piece = _piece(N, {0: hole[0], 1: hole[1], 2: hole[2]})
    top = _piece(N, {v: vid(v, layers) for v in N.vertices})
    return _oriented(M, [bottom, hole_piece], [top], "pants")


def copants() -> Bordism:
    return reverse(pants(), name="copants")


def handle() -> Bordism:
    """Torus with two boundary circles, S^1 -> S^1 (copants followed by pants)."""
    return glue(copants(), pants(), name="handle")


def surface(g: int) -> Bordism:
    """Closed orientable surface of genus g, glued from two disks and g handles."""
    if g < 0:
        raise LibraryError(f"genus must be nonnegative, got {g}")
    B = disk()
    for _ in range(g):
        B = glue(B, handle())
    B = glue(B, disk_in(), name=f"Sigma({g})")
    return B


def mobius() -> Bordism:
    """The 5-triangle Möbius band as a mod-2 oriented bordism ∅ -> S^1(5)."""
    M = SimComplex([tuple(sorted((i, (i + 1) % 5, (i + 2) % 5))) for i in range(5)], name="mobius")
    C = circle(5)
    return Bordism(M, [], [_piece(C, {j: (2 * j) % 5 for j in range(5)})], orientation=MOD2, name="mobius")


def solid_torus(core: str = "a") -> Bordism:
    """Solid torus ∅ -> T2grid; core ``"a"`` runs along the first grid direction, ``"b"`` the second."""
    vid = _symbolic_ids(3, 3)
    M = SimComplex([tuple(sorted(vid(v) for v in t)) for t in _solid_torus_tets(3, 3, core)],
                   name="solid_torus" if core == "a" else "solid_torus_b")
    T = torus_grid(3, 3)
    B = Bordism(M, [], [_piece(T, {v: v for v in T.vertices})], orientation=INTEGER, name=M.name)
    return B


def solid_torus_in(core: str = "b") -> Bordism:
    return reverse(solid_torus(core), name="solid_torus_in" if core == "b" else f"solid_torus_{core}_in")


# ---------------------------------------------------------------------------
# name resolution

_CLOSED: dict[str, Callable[..., SimComplex]] = {
    "point": lambda: point(),
    "S0": lambda: sphere(0),
    "S1": lambda n=3: circle(int(n)),
    "S2": lambda: sphere(2),
    "S3": lambda: sphere(3),
    "S4": lambda: sphere(4),
    "T2": lambda: torus7(),
    "T2grid": lambda m=3, n=3: torus_grid(int(m), int(n)),
    "RP2": lambda: rp2(),
    "K": lambda: klein_bottle(),
    "klein": lambda: klein_bottle(),
    "T3": lambda: three_torus(),
    "RP3": lambda: lens_space(2, 1),
    "L": lambda p, q=1: lens_space(int(p), int(q)),
    "S3split": lambda: sphere3_split(),
    "Sigma": lambda g: surface(int(g)).M,
    "sphere": lambda d: sphere(int(d)),
}

_BORDISMS: dict[str, Callable[..., Bordism]] = {
    "interval": lambda: interval(),
    "disk": lambda n=3: disk(int(n)),
    "disk_in": lambda n=3: disk_in(int(n)),
    "pants": lambda: pants(),
    "copants": lambda: copants(),
    "handle": lambda: handle(),
    "mobius": lambda: mobius(),
    "solid_torus": lambda core="a": solid_torus(str(core)),
    "solid_torus_in": lambda core="b": solid_torus_in(str(core)),
    "surface": lambda g: surface(int(g)),
}

_NAME = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*(?:\((.*)\))?\s*$")


def _split_args(s: str) -> list[str]:
    out, depth, cur = [], 0, ""
    for ch in s:
        if ch == "," and depth == 0:
            out.append(cur.strip())
            cur = ""
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur += ch
    if cur.strip():
        out.append(cur.strip())
    return out


def _parse_arg(a: str) -> str:
    if re.match(r"^[a-z]+\s*=", a):
        return a.split("=", 1)[1].strip()
    return a


def list_manifolds() -> dict[str, list[str]]:
    """Names accepted by ``manifold_library``, split into closed complexes and bordisms."""
    return {
        "closed": ["point", "S0", "S1", "S1(n)", "S2", "S3", "S4", "T2", "T2grid", "RP2", "K",
                   "T3", "RP3", "L(p,q)", "S3split", "Sigma(g)"],
        "bordism": ["interval", "disk", "disk(n)", "disk_in", "pants", "copants", "handle", "mobius",
                    "solid_torus", "solid_torus_in", "surface(g)", "cylinder(<closed name>)"],
    }


def manifold_library(name: str) -> SimComplex | Bordism:
    """Resolve a library name such as ``"T2"``, ``"L(5,1)"``, ``"S1(n=4)"`` or ``"cylinder(T2grid)"``."""
    m = _NAME.match(name)
    if not m:
        raise LibraryError(f"cannot parse manifold name {name!r}")
    head, argstr = m.group(1), m.group(2)
    args = [_parse_arg(a) for a in _split_args(argstr)] if argstr else []
    if head == "cylinder":
        if len(args) != 1:
            raise LibraryError("cylinder takes exactly one closed manifold")
        N = manifold_library(args[0])
        if isinstance(N, Bordism):
            raise LibraryError("cylinder needs a closed manifold, not a bordism")
        return cylinder(N)
    try:
        if head in _CLOSED:
            return _CLOSED[head](*args)
        if head in _BORDISMS:
            return _BORDISMS[head](*args)
    except TypeError as exc:
        raise LibraryError(f"bad parameters for {head!r}: {exc}") from exc
    raise LibraryError(f"unknown manifold {name!r}")


def as_bordism(obj: SimComplex | Bordism, orientation: str = INTEGER) -> Bordism:
    if isinstance(obj, Bordism):
        return obj
    return closed_bordism(obj, orientation=orientation)
