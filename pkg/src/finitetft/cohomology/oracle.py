"""Brute-force cohomology by enumerating every cochain (an independent check on the SNF route)."""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from ..exactalg.groups import FinAbGroup
from ..simplicial.complex import SimComplex, empty_complex
from .cochains import Cochain

DEFAULT_CAP = 10**6


class OracleTooLarge(ValueError):
    """The instance has more cochains than the configured cap."""


@dataclass
class OracleResult:
    """All classes of ``H^k(K, L; A)``, each with one representative cocycle."""

    K: SimComplex
    L: SimComplex
    coeff: FinAbGroup
    degree: int
    order: int
    n_cochains: int
    n_cocycles: int
    n_coboundaries: int
    representatives: list = field(repr=False)
    _class_of: dict = field(repr=False)
    _free: np.ndarray = field(repr=False)
    _radix: np.ndarray = field(repr=False)
    _place: np.ndarray = field(repr=False)

    def class_of(self, c: Cochain) -> int:
        """Index (into ``representatives``) of the class of a relative cocycle."""
        code = _encode(_flatten(c, self._free), self._radix, self._place)
        if code not in self._class_of:
            raise ValueError("not a relative cocycle")
        return self._class_of[code]

    def to_json(self) -> str:
        return json.dumps(
            {
                "complex": self.K.name,
                "subcomplex": self.L.name,
                "coefficients": list(self.coeff.invariant_factors),
                "degree": self.degree,
                "order": self.order,
                "cochains": self.n_cochains,
                "cocycles": self.n_cocycles,
                "coboundaries": self.n_coboundaries,
            },
            sort_keys=True,
        )


def _flatten(c: Cochain, free: np.ndarray) -> np.ndarray:
    return np.concatenate([np.asarray(x, dtype=np.int64)[free] for x in c]) if len(c) else np.zeros(0, dtype=np.int64)


def _encode(v: np.ndarray, radix: np.ndarray, place: np.ndarray) -> int:
    return int(np.dot(np.asarray(v) % radix, place)) if len(v) else 0


def brute_cohomology_oracle(
    K: SimComplex,
    A: FinAbGroup,
    k: int,
    L: SimComplex | None = None,
    cap: int = DEFAULT_CAP,
) -> OracleResult:
    """Enumerate ``C^k(K, L; A)``, keep the cocycles and quotient by the coboundary subgroup,
    itself generated by breadth-first search from the coboundaries of elementary cochains."""
    L = L if L is not None else empty_complex()
    fac = A.invariant_factors
    sims = K.simplices(k)
    free = np.array([i for i, s in enumerate(sims) if not L.contains(s)], dtype=np.int64)
    nf = len(free)
    radix = np.array([n for n in fac for _ in range(nf)], dtype=np.int64)
    total = A.order ** nf
    if total > cap:
        raise OracleTooLarge(f"{total} cochains exceed the oracle cap {cap}")
    place = np.ones(len(radix), dtype=np.int64)
    for i in range(len(radix) - 2, -1, -1):
        place[i] = place[i + 1] * radix[i + 1]
    D = None
    if 0 <= k < K.dimension and nf:
        rows_free = np.array([i for i, s in enumerate(K.simplices(k + 1)) if not L.contains(s)], dtype=np.int64)
        D = K.coboundary(k)[np.ix_(rows_free, free)] if len(rows_free) else np.zeros((0, nf), dtype=np.int64)
    chunks = []
    n_ok = 0
    step = 1 << 16
    for start in range(0, total, step):
        codes = np.arange(start, min(total, start + step), dtype=np.int64)
        digits = np.zeros((len(codes), len(radix)), dtype=np.int64)
        for i in range(len(radix)):
            digits[:, i] = (codes // place[i]) % radix[i]
        ok = np.ones(len(codes), dtype=bool)
        if D is not None:
            for j, n in enumerate(fac):
                block = digits[:, j * nf:(j + 1) * nf]
                ok &= ~np.any((block @ D.T) % n, axis=1)
        n_ok += int(ok.sum())
        chunks.append(digits[ok])
    cocycles = np.concatenate(chunks) if chunks else np.zeros((0, len(radix)), dtype=np.int64)
    # coboundary subgroup: closure of δ(e_σ ⊗ gen_j)
    gens = []
    if k >= 1 and nf:
        prev_free = [i for i, s in enumerate(K.simplices(k - 1)) if not L.contains(s)]
        Dp = K.coboundary(k - 1)[np.ix_(free, np.array(prev_free, dtype=np.int64))] if prev_free else np.zeros((nf, 0), dtype=np.int64)
        for j, n in enumerate(fac):
            for col in range(Dp.shape[1]):
                g = np.zeros(len(radix), dtype=np.int64)
                g[j * nf:(j + 1) * nf] = Dp[:, col] % n
                if g.any():
                    gens.append(g)
    zero = np.zeros(len(radix), dtype=np.int64)
    seen = {_encode(zero, radix, place)}
    B = [zero]
    queue = deque([zero])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = (x + g) % radix
            c = _encode(y, radix, place)
            if c not in seen:
                seen.add(c)
                B.append(y)
                queue.append(y)
    Barr = np.array(B, dtype=np.int64).reshape(len(B), len(radix))
    class_of: dict[int, int] = {}
    reps = []
    for z in cocycles:
        cz = _encode(z, radix, place)
        if cz in class_of:
            continue
        idx = len(reps)
        coset = (Barr + z) % radix
        for c in (coset @ place).tolist():
            class_of[int(c)] = idx
        reps.append(_unflatten(z, free, len(sims), fac))
    return OracleResult(
        K=K,
        L=L,
        coeff=A,
        degree=k,
        order=len(reps) if (0 <= k <= K.dimension) else 1,
        n_cochains=total,
        n_cocycles=n_ok,
        n_coboundaries=len(B),
        representatives=reps,
        _class_of=class_of,
        _free=free,
        _radix=radix,
        _place=place,
    )


def _unflatten(z: np.ndarray, free: np.ndarray, n: int, fac: tuple[int, ...]) -> Cochain:
    nf = len(free)
    out = []
    for j in range(len(fac)):
        v = np.zeros(n, dtype=np.int64)
        v[free] = z[j * nf:(j + 1) * nf]
        out.append(v)
    return tuple(out)
