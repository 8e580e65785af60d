"""Relative cochain complexes and cochain-level operations.

A cochain with coefficients in ``A = Z/n1 + ... + Z/nr`` is a tuple of integer vectors, one
per invariant factor, each indexed by all k-simplices of the ambient complex ``K``. Relative
cochains are those vanishing on the subcomplex ``L``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from ..exactalg.snf import matmul
from ..simplicial.complex import ComplexError, SimComplex, sort_with_sign

Cochain = tuple  # tuple[np.ndarray, ...], one vector per invariant factor


@dataclass(frozen=True)
class CochainComplex:
    """Cochains of ``K`` vanishing on ``L`` (``L`` may be empty)."""

    K: SimComplex
    L: SimComplex

    def __post_init__(self) -> None:
        if not self.L.is_subcomplex_of(self.K):
            raise ComplexError(f"{self.L.name or 'L'} is not a subcomplex of {self.K.name or 'K'}")

    def free_indices(self, k: int) -> np.ndarray:
        """Positions (in ``K.faces[k]``) of the k-simplices not in ``L``."""
        return np.array([i for i, s in enumerate(self.K.simplices(k)) if not self.L.contains(s)], dtype=np.int64)

    def rank(self, k: int) -> int:
        return len(self.free_indices(k))

    def coboundary(self, k: int) -> np.ndarray:
        """Relative δ^k in the bases of free simplices."""
        rows, cols = self.free_indices(k + 1), self.free_indices(k)
        if len(rows) == 0 or len(cols) == 0:
            return np.zeros((len(rows), len(cols)), dtype=np.int64)
        return self.K.coboundary(k)[np.ix_(rows, cols)]


def zero_cochain(K: SimComplex, k: int, factors: Sequence[int]) -> Cochain:
    return tuple(np.zeros(K.count(k), dtype=np.int64) for _ in factors)


def normalize(c: Cochain, factors: Sequence[int]) -> Cochain:
    """Entries reduced into ``[0, n)``, stored as ``int64``."""
    out = []
    for x, n in zip(c, factors):
        arr = np.array([int(v) % n for v in x], dtype=np.int64) if len(x) else np.zeros(0, dtype=np.int64)
        out.append(arr)
    return tuple(out)


def add_cochains(a: Cochain, b: Cochain, factors: Sequence[int]) -> Cochain:
    return tuple((x + y) % n for x, y, n in zip(a, b, factors))


def scale_cochain(k: int, a: Cochain, factors: Sequence[int]) -> Cochain:
    return tuple((k * x) % n for x, n in zip(a, factors))


def apply_coboundary(K: SimComplex, k: int, c: Cochain, factors: Sequence[int]) -> Cochain:
    D = K.coboundary(k)
    out = []
    for x, n in zip(c, factors):
        if D.shape[0] == 0:
            out.append(np.zeros(0, dtype=np.int64))
        elif D.shape[1] == 0:
            out.append(np.zeros(D.shape[0], dtype=np.int64))
        else:
            out.append(np.asarray(matmul(D, np.asarray(x).reshape(-1, 1)).reshape(-1) % n, dtype=np.int64))
    return tuple(out)


def is_cocycle(K: SimComplex, k: int, c: Cochain, factors: Sequence[int]) -> bool:
    return all(not np.any(x) for x in apply_coboundary(K, k, c, factors))


def vanishes_on(L: SimComplex, K: SimComplex, k: int, c: Cochain) -> bool:
    idx = [K.index[k][s] for s in L.simplices(k)] if 0 <= k <= K.dimension else []
    return all(not np.any(np.asarray(x)[idx]) for x in c) if idx else True


def pullback(
    c: Cochain,
    source: SimComplex,
    target: SimComplex,
    vertex_map: Mapping[int, int],
    k: int,
    factors: Sequence[int],
) -> Cochain:
    """``f^* c`` for an injective simplicial map ``f: target -> source`` given on vertices.

    A k-simplex ``σ`` of the target pulls back the value on the sorted image of ``σ``, times
    the sign of the sorting permutation.
    """
    sims = target.simplices(k)
    idx = np.zeros(len(sims), dtype=np.int64)
    sgn = np.zeros(len(sims), dtype=np.int64)
    src_index = source.index[k] if 0 <= k <= source.dimension else {}
    for t, s in enumerate(sims):
        img, e = sort_with_sign([vertex_map[v] for v in s])
        if e == 0 or img not in src_index:
            raise ComplexError(f"vertex map does not send {list(s)} to a simplex of the source")
        idx[t] = src_index[img]
        sgn[t] = e
    return tuple((np.asarray(x, dtype=np.int64)[idx] * sgn) % n if len(sims) else np.zeros(0, dtype=np.int64)
                 for x, n in zip(c, factors))


def extend_by_zero(c: Cochain, sub: SimComplex, K: SimComplex, k: int) -> Cochain:
    """A cochain on the subcomplex ``sub`` viewed on ``K`` (zero off ``sub``)."""
    out = []
    for x in c:
        y = np.zeros(K.count(k), dtype=np.int64)
        for t, s in enumerate(sub.simplices(k)):
            y[K.index[k][s]] = x[t]
        out.append(y)
    return tuple(out)


def pushforward(
    c: Cochain,
    sub: SimComplex,
    K: SimComplex,
    vertex_map: Mapping[int, int],
    k: int,
    factors: Sequence[int],
) -> Cochain:
    """Transport a cochain on ``sub`` to ``K`` along an injective vertex map (zero off the image)."""
    out = [np.zeros(K.count(k), dtype=np.int64) for _ in factors]
    for t, s in enumerate(sub.simplices(k)):
        img, e = sort_with_sign([vertex_map[v] for v in s])
        if e == 0 or not K.contains(img):
            raise ComplexError(f"vertex map does not send {list(s)} to a simplex of {K.name or 'K'}")
        pos = K.index[k][img]
        for j, n in enumerate(factors):
            out[j][pos] = (e * int(c[j][t])) % n
    return tuple(out)
