from __future__ import annotations

import json
from fractions import Fraction

import pytest

from finitetft.cohomology import cohomology
from finitetft.simplicial import manifold_library
from finitetft.spectra import (
    TheorySpec,
    bc_dual_theory,
    dual_permutation,
    graded_orders,
    mapping_sizes,
    tau_ge1,
    theory_size,
    verify_size_formula,
)
from finitetft.suite import theories


def direct_total_size(K, X) -> Fraction:
    """Oracle: ∏_j ∏_k |H^k(K; A_j)|^{(-1)^{p_j - k}} straight from the cohomology orders."""
    out = Fraction(1)
    for s in X.summands:
        for k in range(K.dimension + 1):
            n = cohomology(K, s.A, k).order
            out *= Fraction(n) if (s.p - k) % 2 == 0 else Fraction(1, n)
    return out


def test_theory_sizes():
    assert theory_size(TheorySpec.single(2, 0, "Z/5")) == 5
    assert theory_size(TheorySpec.single(2, 1, "Z/3")) == Fraction(1, 3)
    assert theory_size(TheorySpec(3, [(1, "Z/2"), (2, "Z/2")])) == 1
    for p in range(3):
        assert theory_size(TheorySpec.single(3, p, "Z/4")) == Fraction(4) ** ((-1) ** p)


def test_bc_dual():
    assert bc_dual_theory(TheorySpec.single(3, 1, "Z/7")) == TheorySpec.single(3, 1, "Z/7")
    assert bc_dual_theory(TheorySpec.single(2, 1, "Z/3")) == TheorySpec.single(2, 0, "Z/3")
    for d in (1, 2, 3):
        for X in theories(d):
            assert bc_dual_theory(bc_dual_theory(X)) == X
            perm = dual_permutation(X)
            assert sorted(perm) == list(range(len(X.summands)))


def test_dual_size_is_inverse_up_to_sign_of_shift():
    # |Σ^{d-1} X̂| = |X|^{(-1)^{d-1}}
    for d in (1, 2, 3):
        for X in theories(d):
            assert theory_size(bc_dual_theory(X)) == theory_size(X) ** ((-1) ** (d - 1))


def test_summands_are_sorted_and_serialized():
    X = TheorySpec(3, [(2, "Z/3"), (1, "Z/2")])
    assert [s.p for s in X.summands] == [1, 2]
    assert TheorySpec.from_json(json.dumps(X.to_json_obj())) == X
    with pytest.raises(ValueError):
        TheorySpec.from_json("{}")
    with pytest.raises(ValueError):
        TheorySpec(2, [])


def test_tau_ge1_examples():
    S1 = manifold_library("S1")
    assert tau_ge1(S1, TheorySpec.single(2, 1, "Z/2")) == Fraction(1, 2)
    for name in ("S1", "T2", "K", "S3"):
        K = manifold_library(name)
        assert tau_ge1(K, TheorySpec.single(3, 0, "Z/4")) == 1


def test_klein_total_size():
    K = manifold_library("K")
    assert mapping_sizes(K, TheorySpec.single(2, 1, "F3")).total() == 1


def test_size_formula_examples():
    T2 = manifold_library("T2")
    r = verify_size_formula(T2, TheorySpec.single(2, 1, "Z/2"))
    assert r.ok and r.lhs == r.rhs == 1
    r = verify_size_formula(manifold_library("S2"), TheorySpec.single(3, 0, "Z/3"))
    assert r.ok and r.lhs == 9
    X = TheorySpec(2, [(0, "Z/2"), (1, "Z/3")])
    assert verify_size_formula(manifold_library("point"), X).lhs == theory_size(X)


@pytest.mark.parametrize("name", ["S1", "S2", "T2", "RP2", "K", "S3", "T3", "L(3,1)", "RP3"])
def test_size_formula_against_direct_orders(name):
    K = manifold_library(name)
    for X in theories(3):
        r = verify_size_formula(K, X)
        assert r.ok
        assert r.lhs == direct_total_size(K, X)


def test_size_formula_relative():
    for name in ("disk", "pants", "solid_torus", "mobius"):
        B = manifold_library(name)
        for X in theories(B.d):
            assert verify_size_formula(B.M, X, B.boundary).ok


def test_graded_orders_degrees():
    K = manifold_library("T2")
    X = TheorySpec.single(2, 1, "Z/2")
    assert graded_orders(K, X) == {1: 2, 0: 4, -1: 2}
    assert mapping_sizes(K, X).tau_ge(0) == Fraction(4, 2)
    assert mapping_sizes(K, X).tau_le(-1) == Fraction(1, 2)
