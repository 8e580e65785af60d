"""Exact arithmetic in cyclotomic fields Q(ζ_m).

An element of conductor ``m`` is a rational coefficient vector in the power basis
``1, ζ, ..., ζ^(φ(m)-1)`` reduced modulo the cyclotomic polynomial Φ_m. Elements of different
conductors are combined in the field of the lcm conductor.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

from .groups import QmodZ

Poly = list  # list of Fractions, lowest degree first


def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _divmod_poly(a: Sequence, b: Sequence) -> tuple[list, list]:
    a = [Fraction(x) for x in a]
    b = _trim([Fraction(x) for x in b])
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    for k in range(len(a) - len(b), -1, -1):
        c = a[k + len(b) - 1] / lead
        if c:
            q[k] = c
            for i, bi in enumerate(b):
                a[k + i] -= c * bi
    return _trim(q), _trim(a[: len(b) - 1])


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Integer coefficients of Φ_m, lowest degree first."""
    if m < 1:
        raise ValueError(f"conductor must be positive, got {m}")
    num: list = [Fraction(-1)] + [Fraction(0)] * (m - 1) + [Fraction(1)]
    for d in range(1, m):
        if m % d == 0:
            num, r = _divmod_poly(num, cyclotomic_polynomial(d))
            assert not r
    return tuple(int(c) for c in num)


def euler_phi(m: int) -> int:
    return len(cyclotomic_polynomial(m)) - 1


@lru_cache(maxsize=None)
def _power_table(m: int, top: int) -> tuple[tuple[Fraction, ...], ...]:
    """Reductions of ζ^k modulo Φ_m for ``k < top``."""
    phi = cyclotomic_polynomial(m)
    deg = len(phi) - 1
    rows = []
    cur = [Fraction(0)] * deg
    cur[0] = Fraction(1)
    for _ in range(top):
        rows.append(tuple(cur))
        # multiply by ζ
        carry = cur[-1]
        cur = [Fraction(0)] + cur[:-1]
        if carry:
            cur = [c - carry * phi[i] for i, c in enumerate(cur)]
    return tuple(rows)


def _reduce(poly: Sequence, m: int) -> tuple[Fraction, ...]:
    deg = euler_phi(m)
    if len(poly) <= deg:
        return tuple(Fraction(c) for c in poly) + (Fraction(0),) * (deg - len(poly))
    table = _power_table(m, len(poly))
    out = [Fraction(0)] * deg
    for k, c in enumerate(poly):
        if c:
            for i, t in enumerate(table[k]):
                if t:
                    out[i] += c * t
    return tuple(out)


Scalar = Union["CycloRat", Fraction, int]


class CycloRat:
    """An element of Q(ζ_m), immutable."""

    __slots__ = ("conductor", "coeffs")

    def __init__(self, coeffs: Iterable[Fraction | int] = (0,), conductor: int = 1) -> None:
        self.conductor = int(conductor)
        self.coeffs = _reduce([Fraction(c) for c in coeffs], self.conductor)

    @classmethod
    def rational(cls, q: Fraction | int | str) -> CycloRat:
        return cls((Fraction(q),), 1)

    @classmethod
    def zeta(cls, m: int, k: int = 1) -> CycloRat:
        """ζ_m^k."""
        k %= m
        if m == 1:
            return cls((1,), 1)
        table = _power_table(m, k + 1)
        return cls(table[k], m)

    # conversions ------------------------------------------------------------
    def lift(self, M: int) -> CycloRat:
        """The same number written at conductor ``M`` (``conductor`` must divide ``M``)."""
        if M == self.conductor:
            return self
        if M % self.conductor:
            raise ValueError(f"conductor {self.conductor} does not divide {M}")
        step = M // self.conductor
        poly = [Fraction(0)] * (step * (len(self.coeffs) - 1) + 1)
        for k, c in enumerate(self.coeffs):
            poly[k * step] = c
        return CycloRat(poly, M)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    # arithmetic -------------------------------------------------------------
    @staticmethod
    def _coerce(x: Scalar) -> CycloRat:
        if isinstance(x, CycloRat):
            return x
        if isinstance(x, (int, Fraction)):
            return CycloRat.rational(x)
        raise TypeError(f"cannot combine CycloRat with {type(x).__name__}")

    def _common(self, other: Scalar) -> tuple[CycloRat, CycloRat, int]:
        o = self._coerce(other)
        M = math.lcm(self.conductor, o.conductor)
        return self.lift(M), o.lift(M), M

    def __add__(self, other: Scalar) -> CycloRat:
        a, b, M = self._common(other)
        return CycloRat([x + y for x, y in zip(a.coeffs, b.coeffs)], M)

    __radd__ = __add__

    def __neg__(self) -> CycloRat:
        return CycloRat([-x for x in self.coeffs], self.conductor)

    def __sub__(self, other: Scalar) -> CycloRat:
        return self + (-self._coerce(other))

    def __rsub__(self, other: Scalar) -> CycloRat:
        return self._coerce(other) - self

    def __mul__(self, other: Scalar) -> CycloRat:
        if isinstance(other, (int, Fraction)):
            return CycloRat([x * other for x in self.coeffs], self.conductor)
        a, b, M = self._common(other)
        if M == 1:
            return CycloRat((a.coeffs[0] * b.coeffs[0],), 1)
        prod = [Fraction(0)] * (len(a.coeffs) + len(b.coeffs) - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        prod[i + j] += x * y
        return CycloRat(prod, M)

    __rmul__ = __mul__

    def inverse(self) -> CycloRat:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        m = self.conductor
        if m == 1:
            return CycloRat((1 / self.coeffs[0],), 1)
        # extended Euclid: s*self + t*Φ = 1
        r0, r1 = [Fraction(c) for c in cyclotomic_polynomial(m)], _trim(list(self.coeffs))
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            q, r = _divmod_poly(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
            if not r1:
                raise ZeroDivisionError("non-invertible element (should not happen in a field)")
        c = r1[0]
        return CycloRat([x / c for x in s1], m)

    def __truediv__(self, other: Scalar) -> CycloRat:
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return CycloRat([x / other for x in self.coeffs], self.conductor)
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other: Scalar) -> CycloRat:
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int) -> CycloRat:
        k = int(k)
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        out = CycloRat.rational(1).lift(self.conductor)
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self) -> CycloRat:
        """Complex conjugation ζ ↦ ζ^(-1)."""
        m = self.conductor
        if m <= 2:
            return self
        poly = [Fraction(0)] * ((m - 1) * (len(self.coeffs) - 1) + 1)
        for k, c in enumerate(self.coeffs):
            poly[(k * (m - 1))] += c
        return CycloRat(poly, m)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, (CycloRat, int, Fraction)):
            return NotImplemented
        a, b, _ = self._common(other)
        return a.coeffs == b.coeffs

    def __hash__(self) -> int:
        # equal numbers may have different conductors, so only rationals hash by value
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash(("cyclo", self.conductor))

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __repr__(self) -> str:
        return f"CycloRat({self})"

    def __str__(self) -> str:
        if self.is_rational():
            return str(self.coeffs[0])
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                mon = "" if k == 0 else (f"z{self.conductor}" if k == 1 else f"z{self.conductor}^{k}")
                if k == 0:
                    terms.append(str(c))
                elif c == 1:
                    terms.append(mon)
                elif c == -1:
                    terms.append("-" + mon)
                else:
                    terms.append(f"({c})*{mon}")
        return " + ".join(terms).replace("+ -", "- ")

    def to_json(self) -> dict:
        """Exact serialization: the conductor and power-basis coefficients as strings."""
        return {"conductor": self.conductor, "coeffs": [str(c) for c in self.coeffs]}


def _poly_mul(a: Sequence, b: Sequence) -> list:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _trim(out)


def _poly_sub(a: Sequence, b: Sequence) -> list:
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return _trim([x - y for x, y in zip(a, b)])


def character_value(q: QmodZ | Fraction | int) -> CycloRat:
    """exp(2πi q) for q ∈ Q/Z, as ζ_den^num."""
    if not isinstance(q, QmodZ):
        q = QmodZ(q)
    return CycloRat.zeta(q.den, q.num)


def as_cyclo(x: Scalar) -> CycloRat:
    return CycloRat._coerce(x)
