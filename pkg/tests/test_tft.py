from __future__ import annotations

from fractions import Fraction

import pytest

from finitetft.exactalg.matrices import identity, kron, mat_eq
from finitetft.simplicial import closed_bordism, disjoint_union_bordism, glue, manifold_library
from finitetft.simplicial.library import stellar_subdivide
from finitetft.spectra import TheorySpec
from finitetft.suite import GLUED_PAIRS, bordism, theories
from finitetft.tft import (
    StateSpace,
    bordism_map,
    brute_bordism_map,
    determinism_check,
    euler_exponent_odd_d,
    euler_tft,
    partition_function,
    verify_gluing,
)

X2 = TheorySpec.single(2, 1, "Z/2")
X3 = TheorySpec.single(3, 1, "Z/2")


def as_ints(Z) -> list[list[Fraction]]:
    return [[x.to_fraction() for x in row] for row in Z.matrix]


# ---------------------------------------------------------------------------
# state spaces


def test_state_space_dimensions():
    assert StateSpace.of(manifold_library("S1"), X2).dim == 2
    assert StateSpace.of(manifold_library("T2"), X3).dim == 4
    assert StateSpace.of([], X2).dim == 1


def test_state_space_of_disjoint_union_is_product():
    S1 = manifold_library("S1")
    X = TheorySpec(2, [(0, "Z/2"), (1, "Z/3")])
    one = StateSpace.of(S1, X)
    two = StateSpace.of([S1, S1], X)
    assert two.dim == one.dim**2
    states = list(two.basis())
    assert [two.index(s) for s in states] == list(range(two.dim))


# ---------------------------------------------------------------------------
# bordism maps


def test_cylinder_is_identity():
    for name, X in (("cylinder(S1)", X2), ("cylinder(T2)", X3), ("cylinder(T2grid)", X3)):
        Z = bordism_map(bordism(name), X)
        assert mat_eq(Z.matrix, identity(Z.shape[0]))


def test_disk_picks_out_zero():
    Z = bordism_map(bordism("disk"), X2)
    assert Z.shape == (2, 1)
    assert as_ints(Z) == [[1], [0]]


def test_pants_map_is_addition():
    B = bordism("pants")
    Z = bordism_map(B, X2)
    assert Z.shape == (2, 4)
    for (a1, a2), col in zip([(0, 0), (0, 1), (1, 0), (1, 1)], range(4)):
        for out in range(2):
            expected = 1 if out == (a1 + a2) % 2 else 0
            assert Z.entry(out, col).to_fraction() == expected
    assert Z.equals(brute_bordism_map(B, X2))


def test_partition_function_examples():
    K = manifold_library("K")
    assert partition_function(K, TheorySpec.single(2, 1, "F3")) == 1
    assert partition_function(K, TheorySpec.single(2, 0, "F3")) == 3
    assert partition_function(manifold_library("S3"), X3) == Fraction(1, 2)
    # closed bordism scalar agrees with the partition function
    S2 = bordism("S2")
    assert bordism_map(S2, X2).scalar().to_fraction() == partition_function(S2.M, X2) == Fraction(1, 2)


def test_lens_space_partition_function():
    # |Hom(π₁, Z/n)| / |Z/n| = gcd(p, n) / n
    for p in (3, 5):
        L = manifold_library(f"L({p},1)")
        for n in (2, 3, 5):
            Z = partition_function(L, TheorySpec.single(3, 1, f"Z/{n}"))
            assert Z == Fraction(p if p % n == 0 else 1, n)


def test_subdivision_invariance_of_partition_function():
    for name in ("S2", "T2", "K", "RP2"):
        K = manifold_library(name)
        K2 = stellar_subdivide(stellar_subdivide(K, 2), 5)
        for X in theories(2):
            assert partition_function(K, X) == partition_function(K2, X)


def test_euler_theory():
    assert euler_tft(bordism("S2"), 2) == 4
    assert euler_tft(bordism("cylinder(S1)"), 7) == 1
    K = closed_bordism(manifold_library("K"), "mod2")
    assert euler_tft(K, Fraction(1, 3)) == 1


@pytest.mark.parametrize("name", ["solid_torus", "cylinder(T2grid)", "interval"])
def test_euler_odd_dimension_half_boundary(name):
    B = bordism(name)
    exp, boundary = euler_exponent_odd_d(B)
    assert 2 * B.chi == B.chi_in + B.chi_out
    assert 2 * exp == boundary


@pytest.mark.parametrize("name", ["disk", "pants", "handle", "solid_torus", "interval", "cylinder(S0)", "S2", "T3"])
def test_bordism_map_against_fiber_count(name):
    B = bordism(name)
    for X in theories(B.d):
        try:
            brute = brute_bordism_map(B, X, cap=10**4)
        except ValueError:
            continue
        assert bordism_map(B, X).equals(brute)


def test_determinism():
    assert determinism_check(bordism("pants"), TheorySpec(2, [(0, "Z/2"), (1, "Z/3")]), runs=3)


# ---------------------------------------------------------------------------
# composition


def test_cylinder_composition():
    C = bordism("cylinder(S1)")
    CC = glue(C, C)
    assert bordism_map(CC, X2).equals(bordism_map(C, X2))


def test_disk_composed_with_disk_is_sphere():
    D, Din = bordism("disk"), bordism("disk_in")
    composite = bordism_map(Din, X2).compose(bordism_map(D, X2))
    assert composite.scalar().to_fraction() == Fraction(1, 2)
    assert bordism_map(glue(D, Din), X2).scalar().to_fraction() == Fraction(1, 2)


def test_pants_after_disk_and_cylinder():
    D, C, P = bordism("disk"), bordism("cylinder(S1)"), bordism("pants")
    first = disjoint_union_bordism(D, C)
    W = glue(first, P)
    for X in theories(2):
        direct = bordism_map(W, X)
        via = bordism_map(P, X).compose(bordism_map(first, X))
        assert direct.equals(via)
        # capping one leg of the pants gives a cylinder
        assert mat_eq(direct.matrix, identity(direct.shape[0]))


@pytest.mark.parametrize("pair", GLUED_PAIRS[:8])
def test_gluing_reports(pair):
    B1, B2 = bordism(pair[0]), bordism(pair[1])
    X = theories(B1.d)[0]
    r = verify_gluing(B1, B2, X)
    assert r.matrix_ok and r.size_identity_ok and r.ok


def test_disjoint_union_is_kronecker():
    D, C = bordism("disk"), bordism("cylinder(S1)")
    U = disjoint_union_bordism(C, D)
    for X in theories(2)[:3]:
        assert mat_eq(bordism_map(U, X).matrix, kron(bordism_map(C, X).matrix, bordism_map(D, X).matrix))


def test_dimension_mismatch_refused():
    with pytest.raises(ValueError):
        bordism_map(bordism("disk"), X3)
