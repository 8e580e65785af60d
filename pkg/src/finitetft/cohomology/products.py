"""Cup products into Q/Z, evaluation on fundamental classes and the Poincaré pairing.

A cochain ``a`` with values in ``A`` and a cochain ``α`` with values in ``Â`` cup to a cochain
with values in ``(1/m)Z/Z`` where ``m = exponent(A)``; it is stored as an integer cochain
modulo ``m`` (value ``v`` meaning ``v/m``).
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

from ..exactalg.cyclo import CycloRat, character_value
from ..exactalg.groups import FinAbGroup, QmodZ
from ..simplicial.complex import SimComplex
from ..simplicial.orientation import MOD2, Orientation
from .cochains import Cochain
from .groups import CohGroup, cohomology


def cup_cochain(K: SimComplex, A: FinAbGroup, a: Cochain, p: int, alpha: Cochain, q: int) -> np.ndarray:
    """Alexander-Whitney cup ``(a ⌣ α)(v0..v_{p+q}) = Σ_j a_j(v0..vp) α_j(vp..v_{p+q}) / n_j``,
    returned as integers modulo ``exponent(A)``."""
    m = A.exponent
    sims = K.simplices(p + q)
    out = np.zeros(len(sims), dtype=np.int64)
    if not sims or not A.rank:
        return out
    ip, iq = K.index[p], K.index[q]
    weights = [m // n for n in A.invariant_factors]
    for t, s in enumerate(sims):
        front, back = ip[s[: p + 1]], iq[s[p:]]
        v = 0
        for j, w in enumerate(weights):
            v += int(a[j][front]) * int(alpha[j][back]) * w
        out[t] = v % m
    return out


def cup_pair(Ha: CohGroup, a: Sequence[int], Halpha: CohGroup, alpha: Sequence[int]) -> tuple[CohGroup, tuple[int, ...], np.ndarray]:
    """Cup the classes ``a ∈ H^p(K;A)`` and ``α ∈ H^q(K;Â)``.

    Returns the target group ``H^{p+q}(K; Z/m)``, the class coordinates and the cocycle.
    """
    if Ha.K != Halpha.K:
        raise ValueError("cup_pair needs classes on the same complex")
    if Ha.coeff.invariant_factors != Halpha.coeff.invariant_factors:
        raise ValueError("the second class must have coefficients in the dual group")
    A = Ha.coeff
    c = cup_cochain(Ha.K, A, Ha.representative(a), Ha.degree, Halpha.representative(alpha), Halpha.degree)
    target = cohomology(Ha.K, FinAbGroup.cyclic(A.exponent) if A.exponent > 1 else FinAbGroup(), Ha.degree + Halpha.degree)
    coords = target.coords((c,)) if target.coeff.rank else ()
    return target, coords, c


def evaluate_fundamental(c: np.ndarray, m: int, omega: Orientation) -> QmodZ:
    """``Σ_σ ω(σ) c(σ) / m`` in Q/Z for a top-degree cochain ``c`` with values in ``(1/m)Z/Z``."""
    K = omega.complex
    if len(c) != len(K.top_simplices()):
        raise ValueError("evaluation needs a top-degree cochain on the oriented complex")
    if omega.coeff == MOD2 and m > 2:
        raise ValueError("a mod-2 fundamental class only evaluates cochains of order 2")
    total = sum(int(s) * int(v) for s, v in zip(omega.signs, c))
    return QmodZ(Fraction(total, m) if m > 1 else 0)


def pairing_matrix(omega: Orientation, A: FinAbGroup, p: int) -> list[list[QmodZ]]:
    """``P[i][k] = ∫ g_i ⌣ γ_k`` for the standard generators of ``H^p(N;A)`` and ``H^{n-p}(N;Â)``."""
    N = omega.complex
    n = N.dimension
    Ha = cohomology(N, A, p)
    Hb = cohomology(N, A, n - p)
    m = A.exponent
    out = []
    for g in Ha.generators:
        row = []
        for h in Hb.generators:
            row.append(evaluate_fundamental(cup_cochain(N, A, g, p, h, n - p), m, omega))
        out.append(row)
    return out


def pairing_value(P: list[list[QmodZ]], a: Sequence[int], alpha: Sequence[int]) -> QmodZ:
    total = QmodZ(0)
    for i, ai in enumerate(a):
        if ai:
            for k, bk in enumerate(alpha):
                if bk:
                    total = total + P[i][k] * (int(ai) * int(bk))
    return total


def poincare_pairing(omega: Orientation, A: FinAbGroup, p: int, a: Sequence[int], alpha: Sequence[int]) -> CycloRat:
    """``⟨a, α⟩ = exp(2πi ∫ a ⌣ α)`` for ``a ∈ H^p(N;A)`` and ``α ∈ H^{n-p}(N;Â)``."""
    return character_value(pairing_value(pairing_matrix(omega, A, p), a, alpha))


def cap_chain(K: SimComplex, a: Sequence[int], p: int, omega: Orientation, n_mod: int) -> dict:
    """``a ⌢ [K]`` as a chain with ``Z/n_mod`` coefficients: ``Σ ω(σ) a(σ[0..p]) σ[p..top]``."""
    out: dict = {}
    ip = K.index[p]
    for s, w in omega.items():
        v = (w * int(a[ip[s[: p + 1]]])) % n_mod
        if v:
            back = s[p:]
            out[back] = (out.get(back, 0) + v) % n_mod
    return {s: v for s, v in out.items() if v}


def chain_boundary(chain: dict, n_mod: int) -> dict:
    out: dict = {}
    for s, v in chain.items():
        for i in range(len(s)):
            f = s[:i] + s[i + 1:]
            if f:
                out[f] = (out.get(f, 0) + (-1) ** i * v) % n_mod
    return {s: v for s, v in out.items() if v}


def evaluate_on_chain(K: SimComplex, alpha: Sequence[int], q: int, chain: dict) -> int:
    iq = K.index[q]
    return sum(int(alpha[iq[s]]) * v for s, v in chain.items())
