import numpy as np
import pytest
from hypothesis import given, strategies as st

from joneslab.diagram import cable, mirror, parse_pd
from joneslab.ingest import generate_knot_diagrams, load_fixtures
from joneslab.states import (KauffmanState, all_A, all_B, circle_counts_batch, count_circles, dual,
                             is_A_adequate, is_B_adequate, resolve, sA, sB, state_map_faces)

FIX = load_fixtures()
SMALL = [e.pd for e in FIX if 0 < e.pd.c <= 8] + generate_knot_diagrams(3)


def circles_by_arcs(D, bits):
    """Connected components of the arc graph: each smoothing joins two arcs."""
    parent = {a: a for x in D.crossings for a in x}

    def find(a):
        while parent[a] != a:
            a = parent[a]
        return a

    for ci, x in enumerate(D.crossings):
        pairs = ((1, 2), (3, 0)) if bits >> ci & 1 else ((0, 1), (2, 3))
        for p, q in pairs:
            parent[find(x[p])] = find(x[q])
    return len({find(a) for a in parent}) + D.unknots


def test_examples():
    U = FIX.get("unknot").pd
    g = resolve(U, all_A(U))
    assert g.num_circles == 1 and g.edges == []
    T = FIX.get("trefoil").pd
    g = resolve(T, all_A(T))
    assert g.num_circles == 2 and len(g.edges) == 3 and g.loop_edges() == []
    assert sA(T) + sB(T) == T.c + 2
    F = FIX.get("figure8").pd
    assert sA(F) == 3 and is_A_adequate(F) == (True, None)
    assert sA(U) == 1


def test_adequacy_examples():
    T = FIX.get("trefoil").pd
    assert is_A_adequate(T) == (True, None)
    assert is_B_adequate(mirror(T))[0]
    ok, w = is_A_adequate(FIX.get("fig7").pd)
    assert not ok and w == 3            # the kink crossing
    assert is_A_adequate(FIX.get("kink").pd) == (False, 0)


def test_dual():
    T = FIX.get("trefoil").pd
    assert dual(all_A(T)) == all_B(T)
    s = KauffmanState(0b101, 3)
    assert dual(dual(s)) == s
    assert resolve(T, all_B(T)).num_circles == sB(T)


@pytest.mark.parametrize("D", SMALL, ids=lambda D: str(D.c))
def test_exhaustive_counts(D):
    states = np.arange(1 << D.c, dtype=np.int64)
    batch = circle_counts_batch(D, states)
    for bits in range(1 << D.c):
        f = count_circles(D, bits)
        assert f == circles_by_arcs(D, bits) == batch[bits]
        assert f >= 1
        for i in range(D.c):
            assert abs(count_circles(D, bits ^ (1 << i)) - f) == 1


@given(st.sampled_from([e.pd for e in FIX if 0 < e.pd.c <= 6]), st.integers(1, 3))
def test_cable_circles_and_adequacy(D, n):
    Dn = cable(D, n)
    assert sA(Dn) == n * sA(D)
    assert is_A_adequate(Dn)[0] == is_A_adequate(D)[0]


@given(st.sampled_from(SMALL), st.data())
def test_state_graph_euler(D, data):
    bits = data.draw(st.integers(0, (1 << D.c) - 1))
    g = resolve(D, bits)
    assert len(g.edges) == D.c
    faces = state_map_faces(D, bits)
    # one connected plane map when the diagram is connected: V - E + F = 2,
    # with vertices = attachment points, edges = circle arcs + crossing edges
    V = 2 * D.c
    E = 2 * D.c + D.c
    if D.num_components == 1 or len(D.components) == 1:
        assert V - E + len(faces) == 2


def test_alternating_identity():
    for name in ("trefoil", "trefoil_left", "figure8"):
        D = FIX.get(name).pd
        assert sA(D) + sB(D) == D.c + 2


def test_state_graph_json():
    g = resolve(FIX.get("trefoil").pd, 0)
    js = g.to_json()
    assert len(js["circles"]) == 2 and len(js["edges"]) == 3
