"""Dense exact matrices with entries in a cyclotomic field (lists of rows of CycloRat)."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .cyclo import CycloRat, Scalar, as_cyclo

Matrix = list  # list[list[CycloRat]]

ZERO = CycloRat.rational(0)
ONE = CycloRat.rational(1)


def zeros(rows: int, cols: int) -> Matrix:
    return [[ZERO] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def from_rows(rows: Sequence[Sequence[Scalar]]) -> Matrix:
    return [[as_cyclo(x) for x in r] for r in rows]


def shape(A: Matrix) -> tuple[int, int]:
    return (len(A), len(A[0]) if A else 0)


def mat_mul(A: Matrix, B: Matrix, inner: int | None = None) -> Matrix:
    """Product ``A @ B``; ``inner`` fixes the contraction length when a factor has no rows."""
    n = len(B) if inner is None else inner
    if A and len(A[0]) != n:
        raise ValueError(f"cannot multiply {shape(A)} by {shape(B)}")
    cols = len(B[0]) if B else 0
    out = []
    for row in A:
        nz = [(k, a) for k, a in enumerate(row) if not a.is_zero()]
        out_row = []
        for j in range(cols):
            acc = ZERO
            for k, a in nz:
                b = B[k][j]
                if not b.is_zero():
                    acc = acc + a * b
            out_row.append(acc)
        out.append(out_row)
    return out


def mat_scale(c: Scalar, A: Matrix) -> Matrix:
    c = as_cyclo(c)
    return [[c * x for x in row] for row in A]


def kron(A: Matrix, B: Matrix) -> Matrix:
    """Kronecker product: row index ``(i, k) -> i * rows(B) + k``."""
    return [[a * b for a in ra for b in rb] for ra in A for rb in B]


def mat_eq(A: Matrix, B: Matrix) -> bool:
    if shape(A) != shape(B):
        return False
    return all(x == y for ra, rb in zip(A, B) for x, y in zip(ra, rb))


def transpose(A: Matrix) -> Matrix:
    return [list(col) for col in zip(*A)]


def conjugate(A: Matrix) -> Matrix:
    return [[x.conjugate() for x in row] for row in A]


def mat_inverse(A: Matrix) -> Matrix:
    """Gauss-Jordan inverse over the field; raises ``ZeroDivisionError`` if singular."""
    n = len(A)
    if any(len(r) != n for r in A):
        raise ValueError("inverse of a non-square matrix")
    M = [list(r) + [ONE if i == j else ZERO for j in range(n)] for i, r in enumerate(A)]
    for c in range(n):
        piv = next((r for r in range(c, n) if not M[r][c].is_zero()), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        M[c], M[piv] = M[piv], M[c]
        inv = M[c][c].inverse()
        M[c] = [x * inv for x in M[c]]
        for r in range(n):
            if r != c and not M[r][c].is_zero():
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return [row[n:] for row in M]


def mat_to_json(A: Matrix) -> list:
    """Rational entries become ``"num/den"`` strings; others become coefficient objects."""
    return [[_entry_json(x) for x in row] for row in A]


def _entry_json(x: CycloRat) -> object:
    if x.is_rational():
        return str(Fraction(x.to_fraction()))
    return x.to_json()
