"""Finite abelian groups in invariant-factor form, Q/Z values and the character pairing."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence


class QmodZ:
    """A rational number modulo 1, stored as a reduced fraction ``num/den`` with ``0 <= num < den``."""

    __slots__ = ("num", "den")

    def __init__(self, value: Fraction | int | str = 0, den: int | None = None) -> None:
        if den is not None:
            value = Fraction(int(value), den)
        else:
            value = Fraction(value)
        value -= math.floor(value)
        self.num = value.numerator
        self.den = value.denominator

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.num, self.den)

    def __add__(self, other: QmodZ | Fraction | int) -> QmodZ:
        return QmodZ(self.fraction + _as_fraction(other))

    __radd__ = __add__

    def __sub__(self, other: QmodZ | Fraction | int) -> QmodZ:
        return QmodZ(self.fraction - _as_fraction(other))

    def __neg__(self) -> QmodZ:
        return QmodZ(-self.fraction)

    def __mul__(self, k: int) -> QmodZ:
        return QmodZ(self.fraction * int(k))

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if isinstance(other, QmodZ):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return self == QmodZ(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __repr__(self) -> str:
        return f"QmodZ({self.num}/{self.den})"

    def __str__(self) -> str:
        return f"{self.num}/{self.den}"

    def is_zero(self) -> bool:
        return self.num == 0


def _as_fraction(x: QmodZ | Fraction | int) -> Fraction:
    return x.fraction if isinstance(x, QmodZ) else Fraction(x)


def _normalize_factors(orders: Iterable[int]) -> tuple[int, ...]:
    """Invariant factors n1 | n2 | ... of a direct sum of cyclic groups of the given orders."""
    # split into prime powers, then recombine largest-with-largest
    by_prime: dict[int, list[int]] = {}
    for n in orders:
        n = int(n)
        if n <= 0:
            raise ValueError(f"cyclic order must be positive, got {n}")
        for p, e in _factorize(n).items():
            by_prime.setdefault(p, []).append(p**e)
    if not by_prime:
        return ()
    length = max(len(v) for v in by_prime.values())
    factors = [1] * length
    for p, powers in by_prime.items():
        powers.sort(reverse=True)
        for i, q in enumerate(powers):
            factors[length - 1 - i] *= q
    return tuple(f for f in factors if f > 1)


def _factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@dataclass(frozen=True)
class FinAbGroup:
    """Finite abelian group ``Z/n1 + ... + Z/nk`` with ``n1 | n2 | ...`` and every ``nj >= 2``.

    Elements are tuples of residues, one per invariant factor.
    """

    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        fs = tuple(int(n) for n in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", fs)
        for a, b in zip(fs, fs[1:]):
            if b % a:
                raise ValueError(f"invariant factors must form a divisibility chain: {fs}")
        if any(n < 2 for n in fs):
            raise ValueError(f"invariant factors must be >= 2: {fs}")

    @classmethod
    def from_orders(cls, orders: Iterable[int]) -> FinAbGroup:
        """Canonical group isomorphic to the direct sum of cyclic groups of the given orders."""
        return cls(_normalize_factors(orders))

    @classmethod
    def cyclic(cls, n: int) -> FinAbGroup:
        return cls.from_orders([n])

    @classmethod
    def parse(cls, text: str | Sequence[int]) -> FinAbGroup:
        """Parse ``"Z/2xZ/2"``, ``"2x2"``, ``"Z2+Z3"``, ``"F3"``, ``"0"`` (trivial) or a list of orders."""
        if not isinstance(text, str):
            return cls.from_orders(text)
        s = text.replace(" ", "").replace("⊕", "+").replace("*", "x")
        if s in ("", "0", "1", "trivial"):
            return cls()
        parts = [p for chunk in s.split("+") for p in chunk.split("x")]
        orders = []
        for p in parts:
            for prefix in ("Z/", "Z", "F", "z/", "z"):
                if p.startswith(prefix) and p[len(prefix):].isdigit():
                    p = p[len(prefix):]
                    break
            if not p.isdigit():
                raise ValueError(f"cannot parse group {text!r}")
            orders.append(int(p))
        return cls.from_orders(orders)

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def order(self) -> int:
        return math.prod(self.invariant_factors)

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.rank

    def reduce(self, a: Iterable[int]) -> tuple[int, ...]:
        a = tuple(a)
        if len(a) != self.rank:
            raise ValueError(f"element {a} does not match factors {self.invariant_factors}")
        return tuple(int(x) % n for x, n in zip(a, self.invariant_factors))

    def add(self, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
        return tuple((x + y) % n for x, y, n in zip(a, b, self.invariant_factors))

    def neg(self, a: Sequence[int]) -> tuple[int, ...]:
        return tuple(-x % n for x, n in zip(a, self.invariant_factors))

    def scale(self, k: int, a: Sequence[int]) -> tuple[int, ...]:
        return tuple(k * x % n for x, n in zip(a, self.invariant_factors))

    def elements(self) -> Iterator[tuple[int, ...]]:
        """All elements in lexicographic order of coordinates."""
        return itertools.product(*(range(n) for n in self.invariant_factors))

    def element_order(self, a: Sequence[int]) -> int:
        out = 1
        for x, n in zip(a, self.invariant_factors):
            out = math.lcm(out, n // math.gcd(x % n, n))
        return out

    def __str__(self) -> str:
        if not self.invariant_factors:
            return "0"
        return "+".join(f"Z/{n}" for n in self.invariant_factors)

    def direct_sum(self, other: FinAbGroup) -> FinAbGroup:
        return FinAbGroup.from_orders(self.invariant_factors + other.invariant_factors)


def dual_group(A: FinAbGroup) -> FinAbGroup:
    """Pontryagin dual, realized as Hom(A, Q/Z); it has the same invariant factors as ``A``."""
    return FinAbGroup(A.invariant_factors)


def mu(A: FinAbGroup, a: Sequence[int], alpha: Sequence[int]) -> QmodZ:
    """The canonical pairing ``A x Â -> Q/Z``: ``sum_j a_j alpha_j / n_j``."""
    if len(a) != A.rank or len(alpha) != A.rank:
        raise ValueError(f"pairing arguments must match invariant factors {A.invariant_factors}")
    return QmodZ(sum(Fraction(x * y, n) for x, y, n in zip(a, alpha, A.invariant_factors)))


def double_dual_map(A: FinAbGroup, a: Sequence[int]) -> tuple[QmodZ, ...]:
    """Image of ``a`` in Hom(Â, Q/Z), described by its values on the standard generators of Â."""
    Ahat = dual_group(A)
    return tuple(mu(A, a, tuple(int(i == j) for i in range(Ahat.rank))) for j in range(Ahat.rank))


@dataclass(frozen=True)
class GradedFinGroup:
    """A Z-graded finite abelian group with finite support."""

    degrees: Mapping[int, FinAbGroup] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "degrees", {int(i): g for i, g in sorted(self.degrees.items()) if g.order > 1}
        )

    def __getitem__(self, i: int) -> FinAbGroup:
        return self.degrees.get(i, FinAbGroup())

    def shift(self, k: int) -> GradedFinGroup:
        return GradedFinGroup({i + k: g for i, g in self.degrees.items()})

    def direct_sum(self, other: GradedFinGroup) -> GradedFinGroup:
        keys = set(self.degrees) | set(other.degrees)
        return GradedFinGroup({i: self[i].direct_sum(other[i]) for i in keys})


def graded_size(G: GradedFinGroup | Mapping[int, int]) -> Fraction:
    """``prod_i |G_i|^((-1)^i)``; accepts a graded group or a mapping degree -> order."""
    orders = (
        {i: g.order for i, g in G.degrees.items()} if isinstance(G, GradedFinGroup) else dict(G)
    )
    return alternating_size(orders)


def alternating_size(orders: Mapping[int, int]) -> Fraction:
    out = Fraction(1)
    for i, n in orders.items():
        if n <= 0:
            raise ValueError(f"group order must be positive, got {n} in degree {i}")
        out *= Fraction(n) if i % 2 == 0 else Fraction(1, n)
    return out
