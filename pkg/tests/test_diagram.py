import pytest
from hypothesis import given, strategies as st

from joneslab.diagram import (InvalidN, PDSyntaxError, ValidationError, cable, cable_with_map,
                              is_reduced, mirror, nugatory_by_faces, nugatory_crossings, parse_pd,
                              render_pd, writhe)
from joneslab.ingest import generate_knot_diagrams, load_fixtures

TREFOIL = "PD[X[1,5,2,4],X[3,1,4,6],X[5,3,6,2]]"
CORPUS = generate_knot_diagrams(4) + [e.pd for e in load_fixtures()]
diagrams = st.sampled_from(CORPUS)


def atlas_signs(D):
    """Signs read straight off the labels for consecutively numbered knots:
    the over-strand of X[i,j,k,l] runs j -> l when l = j + 1."""
    m = D.arc_count
    out = []
    for (i, j, k, l) in D.crossings:
        assert k == i % m + 1
        out.append(-1 if (l - j) % m == 1 else 1)
    return out


def test_parse_examples():
    U = parse_pd("U1 PD[]")
    assert U.c == 0 and U.num_components == 1 and writhe(U) == 0
    T = parse_pd(TREFOIL)
    assert T.c == 3 and abs(writhe(T)) == 3
    assert parse_pd(" PD[ X[1, 5,2,4], X[3,1,4,6],X[5,3,6,2] ] ") == T


@pytest.mark.parametrize("text,exc", [
    ("PD[X[1,1,1,2]]", ValidationError),
    ("PD[X[1,2,3,4]]", ValidationError),
    ("PD[X[0,1,1,0]]", ValidationError),
    ("PD[]", ValidationError),
    ("PD[X[1,2]]", PDSyntaxError),
    ("PD[X[1,5,2,4],X[3,1,4,6],X[5,3,6,2]", PDSyntaxError),
    ("X[1,2,2,1]", PDSyntaxError),
    ("PD[X[1,2,2,1],]", PDSyntaxError),
])
def test_parse_rejects(text, exc):
    with pytest.raises(exc):
        parse_pd(text)


def test_writhe_against_label_reading():
    for name in ("trefoil", "trefoil_left", "figure8", "12n706", "kink"):
        D = load_fixtures().get(name).pd
        assert list(D.signs) == atlas_signs(D), name
        assert writhe(D) == sum(atlas_signs(D))
    assert writhe(parse_pd(TREFOIL)) == 3


def test_mirror_examples():
    T = parse_pd(TREFOIL)
    assert writhe(mirror(T)) == -3
    U = parse_pd("U1 PD[]")
    assert mirror(U) == U


def test_reduced_examples():
    assert is_reduced(parse_pd(TREFOIL))
    assert is_reduced(parse_pd("U1 PD[]"))
    # trefoil with a Reidemeister-I twist spliced into arc 6
    kinked = parse_pd("PD[X[1,5,2,4],X[3,1,4,6],X[5,3,6,2]]".replace("X[3,1,4,6]", "X[3,1,4,8]")
                      .replace("]]", "],X[7,6,8,7]]"))
    assert not is_reduced(kinked)
    assert nugatory_crossings(kinked) == [3]


@given(diagrams)
def test_render_parse_roundtrip(D):
    assert parse_pd(render_pd(D)) == D


def _has_under_pass(D):
    unders = {D.crossings[ci][0] for ci in range(D.c)} | {D.crossings[ci][2] for ci in range(D.c)}
    return all(any(a in unders for a in comp) for comp in D.components)


@given(diagrams)
def test_mirror_involution(D):
    # a component that only passes over has no orientation in PD labels, so
    # the involution is exact only when every component passes under somewhere
    if _has_under_pass(D):
        assert mirror(mirror(D)) == D
        assert writhe(mirror(D)) == -writhe(D)
    assert mirror(mirror(D)).c == D.c


def test_nugatory_two_ways():
    # Gauss-word criterion against the face criterion on every generator knot up to 5 crossings
    for D in generate_knot_diagrams(5):
        assert nugatory_crossings(D) == nugatory_by_faces(D), render_pd(D)


@given(diagrams, st.integers(1, 4))
def test_cable_counts(D, n):
    Dn = cable(D, n)
    assert Dn.c == n * n * D.c
    assert writhe(Dn) == n * n * writhe(D)
    assert Dn.num_components == n * D.num_components


@given(diagrams, st.integers(1, 3))
def test_cable_of_cable_one(D, n):
    assert cable(cable(D, 1), n) == cable(D, n)


def test_cable_map():
    T = parse_pd(TREFOIL)
    assert cable(T, 1) == T
    cb = cable_with_map(T, 1)
    assert cb.crossing_map == [(0, 1, 1), (1, 1, 1), (2, 1, 1)]
    cb = cable_with_map(T, 3)
    assert sorted(cb.crossing_map) == sorted((ci, i, j) for ci in range(3)
                                             for i in range(1, 4) for j in range(1, 4))
    for k, (ci, _, _) in enumerate(cb.crossing_map):
        assert cb.diagram.signs[k] == T.signs[ci]
    assert len(cb.crossings_over(1)) == 9
    D2 = cable(T, 2)
    assert D2.c == 12 and writhe(D2) == 12


@pytest.mark.parametrize("n", [0, -1, 1.5])
def test_cable_invalid(n):
    with pytest.raises(InvalidN):
        cable(parse_pd(TREFOIL), n)


def test_json_roundtrip():
    from joneslab.diagram import Diagram
    for D in CORPUS[:50]:
        assert Diagram.from_json(D.to_json()) == D
