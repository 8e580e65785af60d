from __future__ import annotations

import cmath
import itertools
import math
import random
from fractions import Fraction

import numpy as np
import pytest

from finitetft.exactalg import (
    CycloRat,
    FinAbGroup,
    LinearSystemMod,
    QmodZ,
    character_value,
    cyclotomic_polynomial,
    double_dual_map,
    dual_group,
    graded_size,
    group_from_presentation,
    mu,
    smith_normal_form,
    solve_mod,
)
from finitetft.exactalg.matrices import from_rows, identity, mat_eq, mat_inverse, mat_mul


# ---------------------------------------------------------------------------
# oracles


def _det(rows: list[list[int]]) -> int:
    """Integer determinant by Laplace expansion (tiny matrices only)."""
    n = len(rows)
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0]
    total = 0
    for j in range(n):
        if rows[0][j]:
            minor = [r[:j] + r[j + 1:] for r in rows[1:]]
            total += (-1) ** j * rows[0][j] * _det(minor)
    return total


def determinantal_invariants(A: list[list[int]]) -> tuple[int, ...]:
    """Invariant factors from the gcds of k x k minors: d_k = D_k / D_{k-1}."""
    r, c = len(A), len(A[0]) if A else 0
    out = []
    prev = 1
    for k in range(1, min(r, c) + 1):
        g = 0
        for rows in itertools.combinations(range(r), k):
            for cols in itertools.combinations(range(c), k):
                g = math.gcd(g, _det([[A[i][j] for j in cols] for i in rows]))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return tuple(out)


def coset_count(relations: list[list[int]], box: int) -> int:
    """Order of Z^n / rowspace: count points of the box [0, box)^n up to lattice translation,
    with the lattice sampled by small integer combinations of the relations."""
    n = len(relations[0])
    lattice = set()
    for coeffs in itertools.product(range(-box, box + 1), repeat=len(relations)):
        lattice.add(tuple(sum(c * r[j] for c, r in zip(coeffs, relations)) for j in range(n)))
    classes: list[tuple[int, ...]] = []
    for x in itertools.product(range(box), repeat=n):
        if not any(tuple(a - b for a, b in zip(x, y)) in lattice for y in classes):
            classes.append(x)
    return len(classes)


def as_complex(x: CycloRat) -> complex:
    z = cmath.exp(2j * cmath.pi / x.conductor)
    return sum(complex(float(c)) * z**k for k, c in enumerate(x.coeffs))


def all_groups(max_order: int) -> list[FinAbGroup]:
    """Every finite abelian group of order <= max_order, as invariant-factor chains."""
    out = []

    def chains(n: int, smallest: int):
        # chains n1 | n2 | ... with product n, built from the largest factor down
        if n == 1:
            yield ()
            return
        for last in range(2, n + 1):
            if n % last:
                continue
            for rest in chains(n // last, 2):
                if all(last % f == 0 for f in rest) and (not rest or rest[-1] <= last):
                    yield rest + (last,)

    for n in range(1, max_order + 1):
        seen = set()
        for ch in chains(n, 2):
            if ch not in seen:
                seen.add(ch)
                out.append(FinAbGroup(ch))
    return out


# ---------------------------------------------------------------------------
# Smith normal form


def test_snf_zero_matrix():
    S = smith_normal_form([[0]])
    assert S.diagonal == ()
    assert S.D.tolist() == [[0]]
    assert np.asarray(S.U).tolist() == [[1]] and np.asarray(S.V).tolist() == [[1]]


def test_snf_identity():
    S = smith_normal_form(np.eye(4, dtype=np.int64))
    assert S.diagonal == (1, 1, 1, 1)


def test_snf_small_example_against_minors():
    A = [[2, 4], [6, 8]]
    S = smith_normal_form(A)
    assert S.diagonal == (2, 4)
    assert S.diagonal == determinantal_invariants(A)
    D = np.asarray(S.U, dtype=object) @ np.asarray(A, dtype=object) @ np.asarray(S.V, dtype=object)
    assert D.tolist() == S.D.tolist()


def _check_snf(A: list[list[int]]) -> None:
    S = smith_normal_form(A)
    U = np.asarray(S.U, dtype=object)
    V = np.asarray(S.V, dtype=object)
    M = np.asarray(A, dtype=object).reshape(len(A), len(A[0]))
    assert (U @ M @ V).tolist() == S.D.tolist()
    assert abs(_det(U.tolist())) == 1 and abs(_det(V.tolist())) == 1
    assert (U @ np.asarray(S.Uinv, dtype=object)).tolist() == np.eye(U.shape[0], dtype=int).tolist()
    assert (V @ np.asarray(S.Vinv, dtype=object)).tolist() == np.eye(V.shape[0], dtype=int).tolist()
    for a, b in zip(S.diagonal, S.diagonal[1:]):
        assert b % a == 0
    assert S.diagonal == determinantal_invariants(A)


def test_snf_random_matrices_against_determinantal_divisors():
    rng = random.Random(20240601)
    for _ in range(500):
        r, c = rng.randint(1, 4), rng.randint(1, 4)
        A = [[rng.randint(-6, 6) for _ in range(c)] for _ in range(r)]
        _check_snf(A)


def test_snf_large_entries_promote_exactly():
    A = [[2**40, 3**25], [5**17, 7**14]]
    _check_snf(A)


def test_snf_deterministic():
    A = [[3, 6, 9], [2, 4, 8], [1, 0, 5]]
    a, b = smith_normal_form(A), smith_normal_form(A)
    assert np.asarray(a.U).tolist() == np.asarray(b.U).tolist()
    assert np.asarray(a.V).tolist() == np.asarray(b.V).tolist()


# ---------------------------------------------------------------------------
# solving modulo n


def _enumerate_solutions(A, b, n):
    cols = len(A[0])
    return [
        x
        for x in itertools.product(range(n), repeat=cols)
        if all(sum(a * xi for a, xi in zip(row, x)) % n == bi % n for row, bi in zip(A, b))
    ]


def test_solve_mod_unsolvable():
    assert solve_mod([[2]], [1], [4]) is None
    assert _enumerate_solutions([[2]], [1], 4) == []


def test_solve_mod_identity():
    sol = solve_mod([[1]], [0], [7])
    assert sol is not None and sol.particular == (0,) and sol.kernel_order == 1


def test_solve_mod_kernel_order():
    sol = solve_mod([[2]], [2], [4])
    assert sol is not None
    assert (2 * sol.particular[0]) % 4 == 2
    assert sol.kernel_order == len(_enumerate_solutions([[2]], [0], 4)) == 2


def test_solve_mod_random_against_enumeration():
    rng = random.Random(7)
    for _ in range(150):
        n = rng.choice([2, 3, 4, 6])
        r, c = rng.randint(1, 3), rng.randint(1, 3)
        A = [[rng.randint(0, n - 1) for _ in range(c)] for _ in range(r)]
        b = [rng.randint(0, n - 1) for _ in range(r)]
        brute = _enumerate_solutions(A, b, n)
        sys = LinearSystemMod(A, [n] * r, [n] * c)
        sol = sys.solve(b)
        assert (sol is not None) == bool(brute)
        assert sys.kernel_order == len(_enumerate_solutions(A, [0] * r, n))
        if sol is not None:
            assert tuple(sol.particular) in set(brute)


def test_linear_system_rejects_ill_defined_domain():
    with pytest.raises(ValueError):
        LinearSystemMod([[1]], [4], [2])


# ---------------------------------------------------------------------------
# finite abelian groups


def test_presentation_cyclic_six():
    P = group_from_presentation([[2, 0], [0, 3]])
    assert P.group.invariant_factors == (6,)
    assert coset_count([[2, 0], [0, 3]], 6) == 6


def test_presentation_klein_four_coset_oracle():
    assert coset_count([[2, 0], [0, 2]], 4) == 4


def test_presentation_trivial_and_klein_four():
    assert group_from_presentation(np.eye(3, dtype=np.int64)).group.order == 1
    assert group_from_presentation([[2, 0], [0, 2]]).group.invariant_factors == (2, 2)


def test_presentation_projection_kills_relations():
    R = [[4, 6], [2, 8]]
    P = group_from_presentation(R)
    for row in R:
        assert all(x == 0 for x in P.project(row))
    # the image of Z^2 is the whole group
    images = {P.project((i, j)) for i in range(20) for j in range(20)}
    assert len(images) == P.group.order


def test_presentation_of_infinite_group_refused():
    with pytest.raises(ValueError):
        group_from_presentation([[2, 0]])


def test_group_parse_and_normal_form():
    assert FinAbGroup.parse("Z/2xZ/3").invariant_factors == (6,)
    assert FinAbGroup.parse("Z/2xZ/2").invariant_factors == (2, 2)
    assert FinAbGroup.parse("F3").invariant_factors == (3,)
    assert FinAbGroup.parse("0").order == 1
    assert FinAbGroup.from_orders([4, 6]).invariant_factors == (2, 12)


def test_mu_examples():
    A2, A4 = FinAbGroup.cyclic(2), FinAbGroup.cyclic(4)
    assert mu(A2, (1,), (1,)) == QmodZ(Fraction(1, 2))
    assert mu(A4, (1,), (1,)) == QmodZ(Fraction(1, 4))
    assert all(mu(A4, (a,), (0,)).is_zero() for a in range(4))


def test_mu_character_of_order_four():
    A4 = FinAbGroup.cyclic(4)
    values = [mu(A4, (a,), (1,)) for a in range(4)]
    assert len(set(values)) == 4


def test_pairing_nondegenerate_for_all_groups_up_to_64():
    groups = all_groups(64)
    assert len(groups) > 100
    for A in groups:
        Ahat = dual_group(A)
        assert Ahat.order == A.order
        elems = list(A.elements())
        chars = list(Ahat.elements())
        for a in elems:
            if any(a):
                assert any(not mu(A, a, al).is_zero() for al in chars), (A, a)
        for al in chars:
            if any(al):
                assert any(not mu(A, a, al).is_zero() for a in elems), (A, al)


def test_double_dual_is_an_isomorphism():
    for A in [FinAbGroup.parse(s) for s in ("Z/2", "Z/4", "Z/2xZ/2", "Z/2xZ/6", "Z/3xZ/9")]:
        images = {double_dual_map(A, a) for a in A.elements()}
        assert len(images) == A.order
        assert double_dual_map(A, A.zero()) == tuple(QmodZ(0) for _ in range(A.rank))


def test_graded_size():
    assert graded_size({0: 3}) == 3
    assert graded_size({1: 3}) == Fraction(1, 3)
    assert graded_size({1: 2, 2: 2}) == 1


# ---------------------------------------------------------------------------
# cyclotomic arithmetic


def test_character_values():
    assert character_value(QmodZ(0)) == 1
    assert character_value(QmodZ(Fraction(1, 2))) == -1
    z3 = character_value(QmodZ(Fraction(1, 3)))
    assert z3 * z3 + z3 + 1 == 0


def test_cyclotomic_polynomials():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(4) == (1, 0, 1)
    assert cyclotomic_polynomial(6) == (1, -1, 1)


def _random_cyclo(rng: random.Random, m: int) -> CycloRat:
    return CycloRat([Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(m)], m)


def test_cyclo_field_axioms_and_complex_embedding():
    rng = random.Random(11)
    for m in (1, 2, 3, 4, 5, 6, 8, 12):
        for _ in range(25):
            a, b, c = (_random_cyclo(rng, m) for _ in range(3))
            assert a + b == b + a and a * b == b * a
            assert (a + b) + c == a + (b + c)
            assert (a * b) * c == a * (b * c)
            assert a * (b + c) == a * b + a * c
            assert abs(as_complex(a * b) - as_complex(a) * as_complex(b)) < 1e-9
            assert abs(as_complex(a.conjugate()) - as_complex(a).conjugate()) < 1e-9
            if not a.is_zero():
                assert a * a.inverse() == 1
                assert abs(as_complex(a.inverse()) * as_complex(a) - 1) < 1e-9


def test_cyclo_mixed_conductors():
    z4 = CycloRat.zeta(4)
    z6 = CycloRat.zeta(6)
    s = z4 * z6
    assert s.conductor == 12
    assert s == CycloRat.zeta(12, 5)
    assert (z4 * z4) == -1


def test_character_sums_vanish():
    for n in (2, 3, 4, 5, 6):
        total = sum((character_value(QmodZ(Fraction(k, n))) for k in range(n)), CycloRat.rational(0))
        assert total.is_zero()


def test_exact_matrix_inverse():
    A = from_rows([[2, 1], [1, 1]])
    assert mat_eq(mat_mul(A, mat_inverse(A)), identity(2))
