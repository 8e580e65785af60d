from __future__ import annotations

import json

import pytest

from finitetft.simplicial import (
    INTEGER,
    MOD2,
    Bordism,
    BoundaryPiece,
    ComplexError,
    NonOrientableError,
    SimComplex,
    closed_bordism,
    disjoint_union_bordism,
    fundamental_class,
    glue,
    is_orientable,
    list_manifolds,
    manifold_library,
    reverse,
    validate_closed_manifold,
)
from finitetft.simplicial.io import FormatError, bordism_from_json, bordism_to_json_obj, complex_from_json, complex_to_json_obj, load
from finitetft.simplicial.library import circle, cylinder, disk, lens_space, stellar_subdivide


# ---------------------------------------------------------------------------
# oracle: boundary signs of a piece computed directly from the facet signs


def _perm_sign(seq: list[int]) -> int:
    sign = 1
    seq = list(seq)
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def piece_signs(B: Bordism, piece: BoundaryPiece) -> set[int]:
    """Ratio of ∂[M] to the pushed-forward fundamental class of the piece, facet by facet."""
    assert B.orientation is not None
    bd: dict[tuple, int] = {}
    for f, s in B.orientation.items():
        for i in range(len(f)):
            r = f[:i] + f[i + 1:]
            bd[r] = bd.get(r, 0) + s * (-1) ** i
    omega_N = fundamental_class(piece.complex, INTEGER)
    ratios = set()
    for g, s in omega_N.items():
        image = [piece.vertex_map[v] for v in g]
        tau = tuple(sorted(image))
        ratios.add(bd[tau] * _perm_sign(image) * s)
    return ratios


# ---------------------------------------------------------------------------
# complexes


def test_boundary_of_tetrahedron_is_closed():
    S2 = manifold_library("S2")
    rep = validate_closed_manifold(S2)
    assert rep.closed and rep.ok and rep.boundary.is_empty()
    assert S2.f_vector == (4, 6, 4)


def test_single_triangle_boundary():
    rep = validate_closed_manifold(SimComplex([[0, 1, 2]]))
    assert not rep.closed
    assert set(rep.boundary.top_simplices()) == {(0, 1), (0, 2), (1, 2)}


def test_wedge_of_spheres_flagged_by_links():
    # two tetrahedron boundaries sharing one vertex: every ridge has two cofaces, the link is disconnected
    a = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]
    b = [[0, 4, 5], [0, 4, 6], [0, 5, 6], [4, 5, 6]]
    rep = validate_closed_manifold(SimComplex(a + b))
    assert rep.max_ridge_degree == 2
    assert rep.bad_links == [0] and not rep.ok


def test_ridge_in_three_facets_rejected():
    with pytest.raises(ComplexError):
        validate_closed_manifold(SimComplex([[0, 1, 2], [0, 1, 3], [0, 1, 4]]))


def test_non_pure_rejected():
    with pytest.raises(ComplexError):
        validate_closed_manifold(SimComplex([[0, 1, 2], [3, 4]]))


def test_euler_characteristics():
    assert manifold_library("S2").euler_characteristic() == 2
    assert manifold_library("T2").euler_characteristic() == 0
    assert manifold_library("point").euler_characteristic() == 1
    assert manifold_library("K").euler_characteristic() == 0
    assert manifold_library("RP2").euler_characteristic() == 1
    assert manifold_library("Sigma(2)").euler_characteristic() == -2


@pytest.mark.parametrize(
    "name,chi,orientable",
    [
        ("S1", 0, True),
        ("S2", 2, True),
        ("S3", 0, True),
        ("T2", 0, True),
        ("T2grid", 0, True),
        ("T3", 0, True),
        ("RP2", 1, False),
        ("K", 0, False),
        ("RP3", 0, True),
        ("L(3,1)", 0, True),
        ("L(5,1)", 0, True),
        ("S3split", 0, True),
        ("Sigma(3)", -4, True),
    ],
)
def test_library_closed_manifolds(name, chi, orientable):
    K = manifold_library(name)
    rep = validate_closed_manifold(K)
    assert rep.ok and rep.closed
    assert K.euler_characteristic() == chi
    assert is_orientable(K) == orientable


def test_library_counts():
    S2 = manifold_library("S2")
    assert len(S2.vertices) == 4 and len(S2.top_simplices()) == 4
    T2 = manifold_library("T2")
    assert len(T2.vertices) == 7 and len(T2.top_simplices()) == 14
    C = cylinder(circle(3))
    assert len(C.M.vertices) == 6 and len(C.M.top_simplices()) == 6
    assert [len(p.complex.top_simplices()) for p in C.incoming + C.outgoing] == [3, 3]


def test_library_lens_spaces_distinct_homology():
    from finitetft.cohomology import cohomology
    from finitetft.exactalg import FinAbGroup

    for p in (2, 3, 5):
        L = lens_space(p, 1)
        H1 = cohomology(L, FinAbGroup.cyclic(p), 1)
        assert H1.order == p


def test_unknown_name():
    with pytest.raises(KeyError):
        manifold_library("no-such-manifold")
    names = list_manifolds()
    assert "T2" in names["closed"] and "pants" in names["bordism"]


# ---------------------------------------------------------------------------
# orientations


def test_fundamental_class_of_sphere_is_a_cycle():
    S2 = manifold_library("S2")
    omega = fundamental_class(S2, INTEGER)
    assert omega.boundary_chain() == {}


def test_klein_bottle_not_integrally_orientable():
    K = manifold_library("K")
    with pytest.raises(NonOrientableError) as info:
        fundamental_class(K, INTEGER)
    assert info.value.cycle
    omega = fundamental_class(K, MOD2)
    assert set(omega.signs) == {1}
    assert omega.boundary_chain() == {}
    with pytest.raises(NonOrientableError):
        closed_bordism(K, INTEGER)


def test_cylinder_boundary_signs():
    C = cylinder(circle(3))
    assert piece_signs(C, C.incoming[0]) == {1}
    assert piece_signs(C, C.outgoing[0]) == {-1}


def test_disk_outgoing_sign():
    D = disk()
    assert not D.incoming
    assert piece_signs(D, D.outgoing[0]) == {-1}


@pytest.mark.parametrize("name", ["pants", "copants", "handle", "solid_torus", "solid_torus_in", "cylinder(T2grid)", "cylinder(S0)", "interval"])
def test_suite_bordism_signs(name):
    B = manifold_library(name)
    for p in B.incoming:
        assert piece_signs(B, p) == {1}
    for p in B.outgoing:
        assert piece_signs(B, p) == {-1}


def test_reversing_orientation_negates_boundary():
    C = cylinder(circle(3))
    R = reverse(C)
    assert R.orientation.signs == tuple(-s for s in C.orientation.signs)
    assert piece_signs(R, R.incoming[0]) == {1}
    assert len(R.incoming) == len(C.outgoing)


def test_mobius_band_has_only_mod2_orientation():
    B = manifold_library("mobius")
    assert B.coeff == MOD2
    with pytest.raises(NonOrientableError):
        fundamental_class(B.M, INTEGER)


def test_wrong_vertex_map_rejected():
    N = circle(3)
    M = SimComplex([[0, 1, 2]])
    with pytest.raises(ComplexError):
        Bordism(M, [], [BoundaryPiece("S1", N, {0: 0, 1: 1, 2: 5})])


# ---------------------------------------------------------------------------
# gluing


def test_cylinder_composition():
    C = cylinder(circle(3))
    CC = glue(C, C)
    assert CC.chi == 0 and len(CC.M.top_simplices()) == 12
    assert len(CC.incoming) == len(CC.outgoing) == 1


def test_disk_glued_to_disk_is_sphere():
    S = glue(manifold_library("disk"), manifold_library("disk_in"))
    assert S.is_closed() and S.chi == 2
    assert validate_closed_manifold(S.M).ok


def test_gluing_chi_is_additive():
    for a, b in [("pants", "disk_in"), ("copants", "pants"), ("handle", "handle"), ("solid_torus", "solid_torus_in")]:
        B1, B2 = manifold_library(a), manifold_library(b)
        W = glue(B1, B2)
        assert W.chi == B1.chi + B2.chi - B1.chi_out


def test_gluing_mismatched_boundaries_refused():
    with pytest.raises(ComplexError):
        glue(manifold_library("disk"), manifold_library("pants"))


def test_disjoint_union():
    D = manifold_library("disk")
    U = disjoint_union_bordism(D, D)
    assert U.chi == 2 and len(U.outgoing) == 2 and not U.incoming


# ---------------------------------------------------------------------------
# subdivision and serialization


def test_stellar_subdivision_keeps_manifold():
    for name in ("S2", "T2", "K"):
        K = manifold_library(name)
        K2 = stellar_subdivide(K)
        assert K2.euler_characteristic() == K.euler_characteristic()
        assert validate_closed_manifold(K2).ok
        assert is_orientable(K2) == is_orientable(K)


def test_json_round_trip_complex():
    K = manifold_library("T2")
    obj = complex_to_json_obj(K)
    K2 = complex_from_json(json.dumps(obj))
    assert K2.top_simplices() == K.top_simplices()


def test_json_round_trip_bordism(tmp_path):
    B = manifold_library("pants")
    obj = bordism_to_json_obj(B)
    B2 = bordism_from_json(obj)
    assert B2.orientation.signs == B.orientation.signs
    path = tmp_path / "pants.json"
    path.write_text(json.dumps(obj))
    B3 = load(path)
    assert isinstance(B3, Bordism) and B3.chi == B.chi


def test_json_piece_by_library_name():
    data = {
        "facets": [[0, 1, 2]],
        "outgoing": [{"name": "S1", "vertex_map": {"0": 0, "1": 1, "2": 2}}],
    }
    B = bordism_from_json(data)
    assert B.chi == 1 and len(B.outgoing) == 1


@pytest.mark.parametrize(
    "text",
    [
        "{not json",
        json.dumps({"dimension": 2}),
        json.dumps({"facets": [[0, 1, "x"]]}),
        json.dumps({"facets": [[0, 1, 2]], "orientation": "weird"}),
        json.dumps({"facets": [[0, 1, 2]], "outgoing": [{"name": "S1"}]}),
    ],
)
def test_malformed_json_reports_format_error(text):
    with pytest.raises(FormatError):
        bordism_from_json(text)
