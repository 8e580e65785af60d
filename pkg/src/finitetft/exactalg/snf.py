"""Smith normal form over the integers and linear systems modulo per-row moduli.

Matrices are numpy arrays. Arithmetic runs in ``int64`` while every intermediate value
provably fits, and transparently restarts on Python integers (``dtype=object``) otherwise,
so results are always exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .groups import FinAbGroup

_SAFE = 1 << 60


class _Overflow(Exception):
    pass


@dataclass(frozen=True)
class IntMatrix:
    """A dense exact integer matrix (thin wrapper used at API boundaries)."""

    entries: np.ndarray

    @classmethod
    def of(cls, data: object, rows: int | None = None, cols: int | None = None) -> IntMatrix:
        return cls(as_int_array(data, rows, cols))

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    def tolist(self) -> list[list[int]]:
        return [[int(x) for x in row] for row in self.entries]


def as_int_array(data: object, rows: int | None = None, cols: int | None = None) -> np.ndarray:
    """Coerce to a 2-d integer array; ``int64`` if all entries are small, else ``object``."""
    if isinstance(data, IntMatrix):
        data = data.entries
    if isinstance(data, np.ndarray) and data.ndim == 2:
        arr = data
    else:
        lst = [list(r) for r in data]  # type: ignore[union-attr]
        if not lst:
            arr = np.zeros((rows or 0, cols or 0), dtype=np.int64)
        else:
            arr = np.array([[int(x) for x in r] for r in lst], dtype=object)
            if arr.ndim != 2:
                raise ValueError("ragged matrix")
    if rows is not None and arr.shape[0] != rows or cols is not None and arr.shape[1] != cols:
        raise ValueError(f"matrix shape {arr.shape} does not match ({rows}, {cols})")
    return _shrink(arr)


def _shrink(arr: np.ndarray) -> np.ndarray:
    if arr.dtype == np.int64:
        return arr
    if arr.dtype.kind in "iub":
        return arr.astype(np.int64)
    if arr.size == 0:
        return np.zeros(arr.shape, dtype=np.int64)
    if arr.dtype != object:
        raise TypeError(f"non-integer matrix dtype {arr.dtype}")
    m = max(abs(int(x)) for x in arr.flat)
    if m < _SAFE:
        return arr.astype(np.int64)
    return arr


def _maxabs(a: np.ndarray) -> int:
    return int(np.abs(a).max()) if a.size else 0


@dataclass(frozen=True)
class SnfResult:
    """``U @ A @ V == D`` with ``U``, ``V`` unimodular and ``D`` diagonal with ``d1 | d2 | ...``.

    ``Uinv`` and ``Vinv`` are the exact inverses. ``diagonal`` lists the nonzero invariant
    factors (all positive), so ``rank == len(diagonal)``.
    """

    U: np.ndarray
    V: np.ndarray
    Uinv: np.ndarray
    Vinv: np.ndarray
    diagonal: tuple[int, ...]
    shape: tuple[int, int]

    @property
    def rank(self) -> int:
        return len(self.diagonal)

    @property
    def D(self) -> np.ndarray:
        out = np.zeros(self.shape, dtype=object)
        for k, d in enumerate(self.diagonal):
            out[k, k] = d
        return out


def smith_normal_form(A: object) -> SnfResult:
    """Smith normal form with deterministic pivoting.

    The pivot is the nonzero entry of least absolute value in the unreduced block, ties going
    to the lowest (row, column) of the input matrix. Divisibility is repaired by adding the
    first offending row onto the pivot row.
    """
    M = as_int_array(A)
    if M.dtype == np.int64:
        try:
            return _snf(M.copy(), np.int64)
        except _Overflow:
            pass
    return _snf(M.astype(object), object)


def _snf(A: np.ndarray, dtype: object) -> SnfResult:
    m, n = A.shape
    U = np.eye(m, dtype=np.int64).astype(dtype)
    Uinv = U.copy()
    V = np.eye(n, dtype=np.int64).astype(dtype)
    Vinv = V.copy()
    small = dtype is np.int64
    pivots: list[tuple[int, int, int]] = []

    def guard(*arrays: np.ndarray) -> None:
        if small and any(_maxabs(x) >= _SAFE >> 1 for x in arrays):
            raise _Overflow

    while True:
        nz = A != 0
        if not nz.any():
            break
        absA = np.abs(A)
        big = _maxabs(A) + 1
        masked = np.where(nz, absA, big)
        flat = int(np.argmin(masked))
        i, j = divmod(flat, n)
        p = A[i, j]
        while True:
            # clear column j with row operations
            col = A[:, j].copy()
            col[i] = 0
            rows = np.nonzero(col)[0]
            if rows.size:
                q = col[rows] // p
                if small:
                    if _maxabs(q) * max(_maxabs(A[i]), _maxabs(U[i]), _maxabs(Uinv) * rows.size) >= _SAFE:
                        raise _Overflow
                A[rows] -= np.outer(q, A[i])
                U[rows] -= np.outer(q, U[i])
                Uinv[:, i] += Uinv[:, rows] @ q
            # clear row i with column operations
            row = A[i, :].copy()
            row[j] = 0
            cols = np.nonzero(row)[0]
            if cols.size:
                q = row[cols] // p
                if small:
                    if _maxabs(q) * max(_maxabs(A[:, j]), _maxabs(V[:, j]), _maxabs(Vinv) * cols.size) >= _SAFE:
                        raise _Overflow
                A[:, cols] -= np.outer(A[:, j], q)
                V[:, cols] -= np.outer(V[:, j], q)
                Vinv[j, :] += q @ Vinv[cols, :]
            guard(A, U, V, Uinv, Vinv)
            rem_col = A[:, j].copy()
            rem_col[i] = 0
            rem_row = A[i, :].copy()
            rem_row[j] = 0
            if rem_col.any() or rem_row.any():
                break  # a remainder is smaller than the pivot: choose again
            if abs(p) == 1:
                bad = (np.zeros(0, dtype=np.int64),)
            else:
                rest = A.copy()
                rest[i, j] = 0
                bad = np.nonzero(rest % p)
            if bad[0].size == 0:
                pivots.append((i, j, int(p)))
                A[i, j] = 0
                break
            r = int(bad[0][0])
            A[i] += A[r]
            U[i] += U[r]
            Uinv[:, r] -= Uinv[:, i]
            guard(A, U, Uinv)
            break
    # sign normalization and permutation into diagonal position
    for i, _j, p in pivots:
        if p < 0:
            U[i] = -U[i]
            Uinv[:, i] = -Uinv[:, i]
    piv_rows = [i for i, _, _ in pivots]
    piv_cols = [j for _, j, _ in pivots]
    row_order = piv_rows + sorted(set(range(m)) - set(piv_rows))
    col_order = piv_cols + sorted(set(range(n)) - set(piv_cols))
    U = U[row_order]
    Uinv = Uinv[:, row_order]
    V = V[:, col_order]
    Vinv = Vinv[col_order]
    diagonal = tuple(abs(p) for _, _, p in pivots)
    return SnfResult(
        U=_shrink(np.asarray(U)),
        V=_shrink(np.asarray(V)),
        Uinv=_shrink(np.asarray(Uinv)),
        Vinv=_shrink(np.asarray(Vinv)),
        diagonal=diagonal,
        shape=(m, n),
    )


def matmul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Exact integer matrix product."""
    A = as_int_array(A)
    B = as_int_array(B)
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"cannot multiply {A.shape} by {B.shape}")
    if A.dtype == np.int64 and B.dtype == np.int64:
        if _maxabs(A) * _maxabs(B) * max(A.shape[1], 1) < _SAFE:
            return A @ B
    return _shrink(A.astype(object) @ B.astype(object))


def matvec(A: np.ndarray, x: Sequence[int] | np.ndarray) -> np.ndarray:
    x = np.asarray(x)
    return matmul(A, x.reshape(-1, 1)).reshape(-1)


@dataclass(frozen=True)
class ModSolution:
    """One solution ``x`` of ``A x = b`` modulo the row moduli, generators of the homogeneous
    solution lattice, and the order of the kernel in the domain ``prod Z/s_j``."""

    particular: tuple[int, ...]
    kernel_generators: tuple[tuple[int, ...], ...]
    kernel_order: int | None


class LinearSystemMod:
    """Precomputed solver for ``A x ≡ b`` (row i modulo ``moduli[i]``; 0 means an integer row).

    The unknown lives in ``prod_j Z/domain_moduli[j]`` (0 means ``Z``). By default every unknown
    is taken modulo the lcm of the row moduli. The map must be well defined on the domain.
    """

    def __init__(
        self,
        A: object,
        moduli: Sequence[int],
        domain_moduli: Sequence[int] | None = None,
    ) -> None:
        M = as_int_array(A)
        r, c = M.shape
        moduli = [int(x) for x in moduli]
        if len(moduli) != r:
            raise ValueError(f"{len(moduli)} moduli for {r} rows")
        if any(x < 0 for x in moduli):
            raise ValueError("moduli must be nonnegative")
        if domain_moduli is None:
            L = 0 if (not moduli or 0 in moduli) else math.lcm(*moduli)
            domain_moduli = [L] * c
        domain_moduli = [int(x) for x in domain_moduli]
        if len(domain_moduli) != c:
            raise ValueError(f"{len(domain_moduli)} domain moduli for {c} unknowns")
        for jcol, s in enumerate(domain_moduli):
            for i, mi in enumerate(moduli):
                v = int(M[i, jcol]) * s
                if (mi == 0 and v != 0) or (mi > 0 and v % mi):
                    raise ValueError(f"unknown {jcol} (mod {s}) is not well defined in row {i} (mod {mi})")
        self.rows, self.cols = r, c
        self.moduli = tuple(moduli)
        self.domain_moduli = tuple(domain_moduli)
        aug = np.concatenate([M.astype(object), np.diag(np.array(moduli, dtype=object)).reshape(r, r)], axis=1)
        self._snf = smith_normal_form(aug)
        S = self._snf
        gens = np.asarray(S.V)[:c, S.rank:]
        self.kernel_generators = tuple(tuple(int(x) for x in gens[:, k]) for k in range(gens.shape[1]))
        if all(x > 0 for x in moduli) and all(s > 0 for s in domain_moduli):
            coker = math.prod(S.diagonal) if S.rank == r else None
            if coker is None:
                raise AssertionError("finite moduli must give a full-rank augmented matrix")
            num = math.prod(domain_moduli) * coker
            den = math.prod(moduli)
            if num % den:
                raise AssertionError("kernel order is not an integer")
            self.kernel_order: int | None = num // den
            self.image_order: int | None = den // coker
        else:
            self.kernel_order = None
            self.image_order = None

    def solve(self, b: Sequence[int]) -> ModSolution | None:
        b = [int(x) for x in b]
        if len(b) != self.rows:
            raise ValueError(f"right-hand side has length {len(b)}, expected {self.rows}")
        S = self._snf
        Ub = matvec(S.U, np.array(b, dtype=object))
        w = []
        for k in range(len(Ub)):
            v = int(Ub[k])
            if k < S.rank:
                if v % S.diagonal[k]:
                    return None
                w.append(v // S.diagonal[k])
            elif v != 0:
                return None
        w += [0] * (S.shape[1] - len(w))
        z = matvec(S.V, np.array(w, dtype=object))
        x = [int(z[j]) for j in range(self.cols)]
        x = [xi % s if s else xi for xi, s in zip(x, self.domain_moduli)]
        return ModSolution(tuple(x), self.kernel_generators, self.kernel_order)

    def is_solvable(self, b: Sequence[int]) -> bool:
        return self.solve(b) is not None


def solve_mod(
    A: object,
    b: Sequence[int],
    moduli: Sequence[int],
    domain_moduli: Sequence[int] | None = None,
) -> ModSolution | None:
    """Solve ``A x ≡ b`` modulo per-row moduli; ``None`` when unsolvable."""
    M = as_int_array(A)
    if M.shape[0] != len(b):
        raise ValueError(f"matrix has {M.shape[0]} rows but right-hand side has {len(b)}")
    return LinearSystemMod(M, moduli, domain_moduli).solve(b)


@dataclass(frozen=True)
class PresentedGroup:
    """The finite group ``Z^n / rowspace(relations)`` in canonical form.

    ``projection`` (k x n) sends an integer vector ``x`` to coordinates ``projection @ x``
    reduced modulo the invariant factors. ``lift`` (k x n) holds, in row ``i``, an integer
    vector projecting to the ``i``-th standard generator.
    """

    group: FinAbGroup
    projection: np.ndarray
    lift: np.ndarray

    def project(self, x: Iterable[int]) -> tuple[int, ...]:
        v = matvec(self.projection, np.array([int(t) for t in x], dtype=object)) if self.group.rank else []
        return tuple(int(a) % n for a, n in zip(v, self.group.invariant_factors))

    def __iter__(self):
        yield self.group
        yield self.project


def group_from_presentation(relations: object, ngens: int | None = None) -> PresentedGroup:
    """Canonical form of the group presented by generators ``Z^ngens`` and relation rows."""
    R = as_int_array(relations, cols=ngens)
    if R.shape[0] == 0 and ngens is not None:
        R = np.zeros((0, ngens), dtype=np.int64)
    n = R.shape[1]
    S = smith_normal_form(R)
    if S.rank < n:
        raise ValueError(f"presented group is infinite: free rank {n - S.rank}")
    keep = [k for k, d in enumerate(S.diagonal) if d != 1]
    factors = tuple(S.diagonal[k] for k in keep)
    proj = np.asarray(S.V)[:, keep].T if keep else np.zeros((0, n), dtype=np.int64)
    lift = np.asarray(S.Vinv)[keep, :] if keep else np.zeros((0, n), dtype=np.int64)
    return PresentedGroup(FinAbGroup(factors), _shrink(np.asarray(proj)), _shrink(np.asarray(lift)))
