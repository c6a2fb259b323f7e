import random

import pytest
from hypothesis import given, strategies as st

from joneslab.bracket import (ENGINES, FrontierTooWide, TooLarge, bracket, choose_order, fast_bracket,
                              peak_width, skein_bracket, unreduced_bracket)
from joneslab.diagram import cable, mirror, parse_pd
from joneslab.ingest import generate_knot_diagrams, load_fixtures, random_corpus
from joneslab.jones import M_of
from joneslab.poly import DELTA, LaurentPoly
from joneslab.ribbon import subgraph_bracket
from joneslab.states import is_A_adequate
from oracles import state_sum_bracket

FIX = load_fixtures()
CORPUS = generate_knot_diagrams(4) + [e.pd for e in FIX] + random_corpus(random.Random(7), 40)
diagrams = st.sampled_from(CORPUS)


def test_examples():
    U = FIX.get("unknot").pd
    for eng in ENGINES:
        assert bracket(U, eng) == LaurentPoly.const(1)
    for k in (1, 2, 3, 4):
        assert skein_bracket(parse_pd(f"U{k} PD[]")) == DELTA ** (k - 1)
    assert fast_bracket(cable(U, 2)) == DELTA
    T = FIX.get("trefoil").pd
    assert fast_bracket(T) == LaurentPoly({5: -1, -3: -1, -7: 1})


@given(diagrams)
def test_three_engines_and_oracle(D):
    ref = state_sum_bracket(D)
    assert skein_bracket(D) == ref
    assert subgraph_bracket(D) == ref
    assert fast_bracket(D) == ref
    assert unreduced_bracket(D) == ref * DELTA


@given(diagrams)
def test_mirror_symmetry(D):
    assert fast_bracket(mirror(D)) == fast_bracket(D).substitute_inverse()


@given(diagrams)
def test_degree_bound(D):
    top = fast_bracket(D).max_deg()
    assert top <= M_of(D)
    if is_A_adequate(D)[0]:
        assert top == M_of(D)


def test_trefoil_cube():
    T3 = cable(FIX.get("trefoil").pd, 3)
    assert T3.c == 27
    assert peak_width(T3) <= 14
    p = fast_bracket(T3)
    assert p.max_deg() == M_of(T3) == 37


def test_order_deterministic():
    D = cable(FIX.get("figure8").pd, 2)
    assert choose_order(D) == choose_order(D)
    assert sorted(choose_order(D)) == list(range(D.c))
    for E in generate_knot_diagrams(2):
        assert peak_width(E, order=list(range(E.c))) <= 8


def test_limits():
    D = FIX.get("12n706").pd
    with pytest.raises(TooLarge):
        skein_bracket(D, naive_limit=8)
    with pytest.raises(FrontierTooWide) as ei:
        fast_bracket(cable(D, 2), frontier_cap=6)
    assert ei.value.width > 6
    with pytest.raises(ValueError):
        bracket(D, "nope")
