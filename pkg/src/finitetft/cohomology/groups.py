"""Cohomology groups with finite coefficients, their coordinates, and induced maps.

For a pair ``(K, L)`` the integral cochain complex is put in adapted form once: for every
degree ``k`` a unimodular basis ``B_k`` of ``C^k(K, L; Z)`` is chosen whose first vectors map
under δ to ``e_t`` times part of a basis of ``C^{k+1}``, and whose remaining vectors form a
basis of the cocycles in which the coboundaries are ``d_t`` times basis vectors. For a cyclic
coefficient group ``Z/n`` this gives, position by position,

* a ``Z/gcd(e_t, n)`` summand generated by ``(n/gcd) * b_t`` (cocycles that are not integral
  cocycles),
* a ``Z/gcd(d_t, n)`` summand generated by ``b_t`` (torsion and coboundary positions),
* a ``Z/n`` summand for every free position.

The resulting cyclic orders are brought to invariant-factor form by ``group_from_presentation``.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence

import numpy as np

from ..exactalg.groups import FinAbGroup
from ..exactalg.snf import LinearSystemMod, group_from_presentation, matmul, smith_normal_form
from ..simplicial.complex import ComplexError, SimComplex, empty_complex
from .cochains import Cochain, CochainComplex, apply_coboundary, pullback, vanishes_on

IMAGE, TORSION, FREE = "image", "torsion", "free"


@dataclass
class DegreeBasis:
    """Adapted integral basis of ``C^k(K, L; Z)``."""

    free_idx: np.ndarray  # positions in K.faces[k] of the relative simplices
    B: np.ndarray  # columns = basis vectors (in relative coordinates)
    Binv: np.ndarray
    kinds: tuple[tuple[str, int], ...]  # per basis position: (kind, e_t or d_t or 0)


def _empty(n: int) -> np.ndarray:
    return np.zeros((n, n), dtype=np.int64)


def _compute_degree(C: CochainComplex, k: int) -> DegreeBasis:
    free = C.free_indices(k)
    n = len(free)
    if n == 0:
        return DegreeBasis(free, _empty(0), _empty(0), ())
    Dk = C.coboundary(k)
    S = smith_normal_form(Dk)
    r = S.rank
    V, Vinv = np.asarray(S.V), np.asarray(S.Vinv)
    Dprev = C.coboundary(k - 1) if k >= 1 else np.zeros((n, 0), dtype=np.int64)
    zrank = n - r
    if zrank and Dprev.shape[1]:
        M = matmul(Vinv[r:, :], Dprev)
        if r and np.any(matmul(Vinv[:r, :], Dprev)):
            raise AssertionError("δ∘δ ≠ 0")
        S2 = smith_normal_form(M)
        U2, U2inv, dvals = np.asarray(S2.U), np.asarray(S2.Uinv), S2.diagonal
    else:
        U2 = U2inv = np.eye(zrank, dtype=np.int64)
        dvals = ()
    Zpart = matmul(V[:, r:], U2inv) if zrank else np.zeros((n, 0), dtype=np.int64)
    B = np.concatenate([V[:, :r], Zpart], axis=1) if r else Zpart
    Zinv = matmul(U2, Vinv[r:, :]) if zrank else np.zeros((0, n), dtype=np.int64)
    Binv = np.concatenate([Vinv[:r, :], Zinv], axis=0) if r else Zinv
    kinds = [(IMAGE, e) for e in S.diagonal]
    kinds += [(TORSION, d) for d in dvals]
    kinds += [(FREE, 0)] * (zrank - len(dvals))
    return DegreeBasis(free, B, Binv, tuple(kinds))


class IntegralData:
    """Lazily computed adapted bases of one pair ``(K, L)``, shared by all coefficients."""

    def __init__(self, K: SimComplex, L: SimComplex) -> None:
        self.complex = CochainComplex(K, L)
        self._deg: dict[int, DegreeBasis] = {}
        self._lock = threading.Lock()

    def degree(self, k: int) -> DegreeBasis:
        with self._lock:
            if k not in self._deg:
                self._deg[k] = _compute_degree(self.complex, k)
            return self._deg[k]


_INTEGRAL: dict[tuple, IntegralData] = {}
_GROUPS: dict[tuple, "CohGroup"] = {}
_CACHE_LOCK = threading.Lock()


def _key(K: SimComplex, L: SimComplex | None) -> tuple:
    return (K.facets, L.facets if L is not None else ())


def integral_data(K: SimComplex, L: SimComplex | None = None) -> IntegralData:
    L = L if L is not None else empty_complex()
    key = _key(K, L)
    with _CACHE_LOCK:
        data = _INTEGRAL.get(key)
        if data is None:
            data = IntegralData(K, L)
            _INTEGRAL[key] = data
        return data


def clear_cache() -> None:
    with _CACHE_LOCK:
        _INTEGRAL.clear()
        _GROUPS.clear()


@dataclass(frozen=True)
class _Raw:
    factor: int  # index into A.invariant_factors
    position: int  # basis position in the adapted basis
    order: int
    scale: int  # generator is scale * b_position


@dataclass(eq=False)
class CohGroup:
    """``H^k(K, L; A)`` with generator cocycles and a coordinate map.

    ``group`` is the abstract group in invariant-factor form; ``generators[i]`` is a cocycle
    representing the ``i``-th standard generator; ``coords`` sends any relative cocycle to its
    class in group coordinates.
    """

    K: SimComplex
    L: SimComplex
    degree: int
    coeff: FinAbGroup
    group: FinAbGroup
    generators: tuple
    _raw: tuple = field(repr=False)
    _proj: np.ndarray = field(repr=False)
    _basis: DegreeBasis | None = field(repr=False)

    @property
    def order(self) -> int:
        return self.group.order

    @property
    def factors(self) -> tuple[int, ...]:
        return self.group.invariant_factors

    def elements(self) -> Iterator[tuple[int, ...]]:
        return self.group.elements()

    def is_relative(self) -> bool:
        return not self.L.is_empty()

    def zero_cochain(self) -> Cochain:
        return tuple(np.zeros(self.K.count(self.degree), dtype=np.int64) for _ in self.coeff.invariant_factors)

    def representative(self, x: Sequence[int]) -> Cochain:
        """A cocycle in the class with coordinates ``x``."""
        fac = self.coeff.invariant_factors
        out = [np.zeros(self.K.count(self.degree), dtype=np.int64) for _ in fac]
        for xi, g in zip(x, self.generators):
            if int(xi) == 0:
                continue
            for j, n in enumerate(fac):
                out[j] = (out[j] + int(xi) * g[j]) % n
        return tuple(out)

    def coords(self, c: Cochain, check: bool = True) -> tuple[int, ...]:
        """Group coordinates of the class of the relative cocycle ``c``."""
        fac = self.coeff.invariant_factors
        if check:
            if not vanishes_on(self.L, self.K, self.degree, c):
                raise ValueError("cochain does not vanish on the subcomplex")
            if any(np.any(x) for x in apply_coboundary(self.K, self.degree, c, fac)):
                raise ValueError("cochain is not a cocycle")
        if not self.group.rank:
            return ()
        bas = self._basis
        assert bas is not None
        coeffs: dict[int, np.ndarray] = {}
        raw = []
        for r in self._raw:
            if r.factor not in coeffs:
                x = np.asarray(c[r.factor], dtype=np.int64)[bas.free_idx]
                coeffs[r.factor] = matmul(bas.Binv, x.reshape(-1, 1)).reshape(-1)
            n = fac[r.factor]
            v = int(coeffs[r.factor][r.position]) % n
            if v % r.scale:
                raise ValueError("cochain is not a cocycle (image coordinate not divisible)")
            raw.append((v // r.scale) % r.order)
        y = matmul(self._proj, np.array(raw, dtype=np.int64).reshape(-1, 1)).reshape(-1)
        return tuple(int(a) % m for a, m in zip(y, self.group.invariant_factors))

    def __repr__(self) -> str:
        rel = f", {self.L.name or 'L'}" if self.is_relative() else ""
        return f"H^{self.degree}({self.K.name or 'K'}{rel}; {self.coeff}) = {self.group}"


def _build(K: SimComplex, L: SimComplex, A: FinAbGroup, k: int) -> CohGroup:
    if k < 0 or k > K.dimension or K.is_empty():
        return CohGroup(K, L, k, A, FinAbGroup(), (), (), np.zeros((0, 0), dtype=np.int64), None)
    bas = integral_data(K, L).degree(k)
    raws: list[_Raw] = []
    for j, n in enumerate(A.invariant_factors):
        for pos, (kind, val) in enumerate(bas.kinds):
            if kind == IMAGE:
                g = math.gcd(val, n)
                if g > 1:
                    raws.append(_Raw(j, pos, g, n // g))
            elif kind == TORSION:
                g = math.gcd(val, n)
                if g > 1:
                    raws.append(_Raw(j, pos, g, 1))
            else:
                raws.append(_Raw(j, pos, n, 1))
    if not raws:
        return CohGroup(K, L, k, A, FinAbGroup(), (), (), np.zeros((0, 0), dtype=np.int64), bas)
    pres = group_from_presentation(np.diag([r.order for r in raws]).astype(np.int64))
    fac = A.invariant_factors
    nk = K.count(k)
    raw_vecs = []
    for r in raws:
        v = np.zeros(nk, dtype=np.int64)
        col = np.asarray(bas.B[:, r.position], dtype=object) * r.scale
        v[bas.free_idx] = np.array([int(x) % fac[r.factor] for x in col], dtype=np.int64)
        raw_vecs.append(v)
    gens = []
    lift = np.asarray(pres.lift)
    for i in range(pres.group.rank):
        cochain = [np.zeros(nk, dtype=np.int64) for _ in fac]
        for s, r in enumerate(raws):
            coef = int(lift[i, s])
            if coef % r.order:
                cochain[r.factor] = (cochain[r.factor] + (coef % fac[r.factor]) * raw_vecs[s]) % fac[r.factor]
        gens.append(tuple(cochain))
    return CohGroup(K, L, k, A, pres.group, tuple(gens), tuple(raws), np.asarray(pres.projection), bas)


def cohomology(K: SimComplex, A: FinAbGroup, k: int) -> CohGroup:
    """``H^k(K; A)`` (trivial outside ``0..dim K``)."""
    return relative_cohomology(K, None, A, k)


def relative_cohomology(K: SimComplex, L: SimComplex | None, A: FinAbGroup, k: int) -> CohGroup:
    """``H^k(K, L; A)``, computed from cochains of ``K`` vanishing on ``L``."""
    L = L if L is not None else empty_complex()
    if not L.is_subcomplex_of(K):
        raise ComplexError(f"{L.name or 'L'} is not a subcomplex of {K.name or 'K'}")
    key = _key(K, L) + (A.invariant_factors, k)
    with _CACHE_LOCK:
        hit = _GROUPS.get(key)
    if hit is not None:
        return hit
    H = _build(K, L, A, k)
    with _CACHE_LOCK:
        return _GROUPS.setdefault(key, H)


# ---------------------------------------------------------------------------
# homomorphisms


@dataclass(eq=False)
class GroupHom:
    """A homomorphism given by an integer matrix on group coordinates (codomain rank x domain rank)."""

    domain: object  # CohGroup or FinAbGroup-like with .group
    codomain: object
    matrix: np.ndarray
    name: str = ""

    @property
    def dom_group(self) -> FinAbGroup:
        return _grp(self.domain)

    @property
    def cod_group(self) -> FinAbGroup:
        return _grp(self.codomain)

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=np.int64).reshape(self.cod_group.rank, self.dom_group.rank)
        fac = self.cod_group.invariant_factors
        for i, n in enumerate(fac):
            m[i] %= n
        self.matrix = m
        # well defined on the domain: n_j * column j must vanish
        for j, n in enumerate(self.dom_group.invariant_factors):
            for i, mi in enumerate(fac):
                if (int(m[i, j]) * n) % mi:
                    raise ValueError(f"{self.name or 'map'}: matrix is not a homomorphism of the coordinate groups")

    def __call__(self, x: Sequence[int]) -> tuple[int, ...]:
        if not self.cod_group.rank:
            return ()
        y = matmul(self.matrix, np.array([int(t) for t in x], dtype=np.int64).reshape(-1, 1)).reshape(-1) if len(x) else np.zeros(self.cod_group.rank, dtype=np.int64)
        return tuple(int(a) % n for a, n in zip(y, self.cod_group.invariant_factors))

    def compose(self, first: GroupHom) -> GroupHom:
        """``self ∘ first``."""
        if first.cod_group != self.dom_group:
            raise ValueError("maps are not composable")
        if not self.dom_group.rank or not first.dom_group.rank or not self.cod_group.rank:
            mat = np.zeros((self.cod_group.rank, first.dom_group.rank), dtype=np.int64)
        else:
            mat = matmul(self.matrix, first.matrix)
        return GroupHom(first.domain, self.codomain, _reduce_rows(mat, self.cod_group), f"{self.name}∘{first.name}")

    def _system(self) -> LinearSystemMod:
        return LinearSystemMod(
            self.matrix if self.cod_group.rank else np.zeros((0, self.dom_group.rank), dtype=np.int64),
            self.cod_group.invariant_factors,
            self.dom_group.invariant_factors,
        )

    def kernel_order(self) -> int:
        if not self.dom_group.rank:
            return 1
        if not self.cod_group.rank:
            return self.dom_group.order
        ko = self._system().kernel_order
        assert ko is not None
        return ko

    def image_order(self) -> int:
        return self.dom_group.order // self.kernel_order()

    def contains_in_image(self, y: Sequence[int]) -> bool:
        if not self.cod_group.rank:
            return True
        if not self.dom_group.rank:
            return all(int(t) == 0 for t in y)
        return self._system().is_solvable(y)

    def is_zero(self) -> bool:
        return not np.any(self.matrix)

    def is_identity(self) -> bool:
        return self.dom_group == self.cod_group and np.array_equal(self.matrix, np.eye(self.dom_group.rank, dtype=np.int64))

    def equals(self, other: GroupHom) -> bool:
        return self.dom_group == other.dom_group and self.cod_group == other.cod_group and np.array_equal(self.matrix, other.matrix)


def _reduce_rows(mat: np.ndarray, G: FinAbGroup) -> np.ndarray:
    out = np.zeros(np.shape(mat), dtype=np.int64)
    for i, n in enumerate(G.invariant_factors):
        out[i] = [int(v) % n for v in mat[i]]
    return out


class DirectSum:
    """Coordinates of ``G_0 ⊕ G_1 ⊕ ...`` laid side by side (not regrouped into invariant factors)."""

    def __init__(self, parts: Sequence[object]) -> None:
        self.parts = tuple(parts)
        self.groups = tuple(_grp(g) for g in self.parts)
        self.invariant_factors = tuple(n for G in self.groups for n in G.invariant_factors)

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def order(self) -> int:
        return math.prod(self.invariant_factors)

    @property
    def group(self) -> DirectSum:
        return self

    def offsets(self) -> list[int]:
        out = [0]
        for G in self.groups:
            out.append(out[-1] + G.rank)
        return out

    def __eq__(self, other: object) -> bool:
        return hasattr(other, "invariant_factors") and tuple(other.invariant_factors) == self.invariant_factors  # type: ignore[attr-defined]

    def __hash__(self) -> int:
        return hash(self.invariant_factors)

    def __repr__(self) -> str:
        return " ⊕ ".join(str(G) for G in self.groups) or "0"


def block_hom(domain: Sequence[object], codomain: Sequence[object], blocks: Mapping[tuple[int, int], GroupHom], name: str = "") -> GroupHom:
    """Map between direct sums with the given ``(row, col)`` blocks; missing blocks are zero."""
    D, C = DirectSum(domain), DirectSum(codomain)
    mat = np.zeros((C.rank, D.rank), dtype=np.int64)
    ro, co = C.offsets(), D.offsets()
    for (i, j), h in blocks.items():
        mat[ro[i]:ro[i + 1], co[j]:co[j + 1]] = h.matrix
    return GroupHom(D, C, mat, name)


def _grp(x: object):
    if isinstance(x, (FinAbGroup, DirectSum)):
        return x
    return x.group  # type: ignore[attr-defined]


def hom_from_cochain_map(src: CohGroup, dst: CohGroup, f, name: str = "") -> GroupHom:
    """Matrix of the map induced by the cochain-level function ``f`` (generator by generator)."""
    cols = []
    for g in src.generators:
        img = f(g)
        try:
            cols.append(dst.coords(img))
        except ValueError as exc:
            raise AssertionError(f"{name}: image of a generator is not a relative cocycle ({exc})") from exc
    mat = np.array(cols, dtype=np.int64).T.reshape(dst.group.rank, src.group.rank) if cols else np.zeros((dst.group.rank, 0), dtype=np.int64)
    return GroupHom(src, dst, mat, name)


def induced_map(src: CohGroup, dst: CohGroup, vertex_map: Mapping[int, int] | None = None, name: str = "") -> GroupHom:
    """Pullback ``H^k(src pair) -> H^k(dst pair)`` along an injective simplicial map from the
    complex of ``dst`` into the complex of ``src`` (identity on vertices by default). The map
    must send the subcomplex of ``dst`` into the subcomplex of ``src``."""
    if src.degree != dst.degree or src.coeff != dst.coeff:
        raise ValueError("induced_map needs equal degrees and coefficients")
    vm = vertex_map if vertex_map is not None else {v: v for v in dst.K.vertices}
    if not dst.L.is_empty():
        for s in dst.L.facets:
            img = tuple(sorted(vm[v] for v in s))
            if not src.L.contains(img):
                raise ComplexError("map does not respect the subcomplexes")
    fac = src.coeff.invariant_factors
    return hom_from_cochain_map(
        src, dst, lambda c: pullback(c, src.K, dst.K, vm, src.degree, fac), name or f"H^{src.degree} restriction"
    )


def identity_hom(H: CohGroup) -> GroupHom:
    return GroupHom(H, H, np.eye(H.group.rank, dtype=np.int64), "id")
