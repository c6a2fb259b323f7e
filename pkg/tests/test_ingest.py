import random

import pytest

from joneslab.bracket import fast_bracket
from joneslab.diagram import gauss_words, is_reduced, render_pd
from joneslab.ingest import (DuplicateName, ResultStore, StoreMismatch, generate_knot_diagrams,
                             kinked_clasp, load_fixtures, load_table, random_corpus,
                             search_small_nonadequate, signed_gauss_key)
from joneslab.poly import LaurentPoly
from joneslab.states import is_A_adequate


def test_fixtures_load(fixtures):
    assert fixtures.errors == []
    assert {"unknot", "trefoil", "figure8", "fig7", "12n706"} <= set(fixtures.names())
    assert fixtures.get("12n706").pd.c == 12
    with pytest.raises(KeyError):
        fixtures.get("nope")


def test_malformed_row_isolated(tmp_path):
    p = tmp_path / "t.csv"
    p.write_text('name,pd_code\nok,"PD[X[1,5,2,4],X[3,1,4,6],X[5,3,6,2]]"\n'
                 'bad,"PD[X[1,1,1,2]]"\nbroken,"PD[X[1,2"\n# comment,x\nok2,U2 PD[]\n')
    t = load_table(p)
    assert t.names() == ["ok", "ok2"]
    assert [(e.line, e.name) for e in t.errors] == [(3, "bad"), (4, "broken")]


def test_duplicate_name(tmp_path):
    p = tmp_path / "t.csv"
    p.write_text("name,pd_code\na,U1 PD[]\na,U1 PD[]\n")
    with pytest.raises(DuplicateName):
        load_table(p)


def test_missing_columns(tmp_path):
    p = tmp_path / "t.csv"
    p.write_text("label,code\na,b\n")
    with pytest.raises(ValueError):
        load_table(p)


def test_store_roundtrip(tmp_path, fixtures):
    s = ResultStore(str(tmp_path / "r.ndjson"))
    p = fast_bracket(fixtures.get("trefoil").pd)
    rec = s.put("trefoil", 1, "fast", p)
    assert s.put("trefoil", 1, "fast", p) == rec
    assert len(s.records()) == 1
    assert s.get_poly("trefoil", 1, "fast") == p
    assert s.get_poly("trefoil", 2, "fast") is None
    with pytest.raises(StoreMismatch):
        s.put("trefoil", 1, "fast", p + LaurentPoly.monomial(0))


def test_store_env(tmp_path, monkeypatch):
    monkeypatch.delenv("JONESLAB_STORE", raising=False)
    with pytest.raises(ValueError):
        ResultStore()
    monkeypatch.setenv("JONESLAB_STORE", str(tmp_path / "x"))
    assert ResultStore().records() == []


def test_generator_counts_distinct():
    ds = generate_knot_diagrams(4)
    keys = [signed_gauss_key(D) for D in ds]
    assert len(set(keys)) == len(keys)
    for D in ds:
        assert D.is_knot() and 1 <= D.c <= 4
        assert len(gauss_words(D)[0]) == 2 * D.c


def test_search_postcondition():
    found = search_small_nonadequate(4)
    assert found
    for e in found:
        assert is_reduced(e.pd) and not is_A_adequate(e.pd)[0]
    K = kinked_clasp()
    assert is_reduced(K) and not is_A_adequate(K)[0]
    with pytest.raises(ValueError):
        search_small_nonadequate(7)


def test_searched_fixtures_match_search(fixtures):
    keys = {signed_gauss_key(e.pd) for e in search_small_nonadequate(4)}
    for e in fixtures:
        if e.name.startswith("search_"):
            assert signed_gauss_key(e.pd) in keys


def test_random_corpus_deterministic():
    a = random_corpus(random.Random(7), 20, 10)
    b = random_corpus(random.Random(7), 20, 10)
    assert [render_pd(D) for D in a] == [render_pd(D) for D in b]
    assert all(D.c <= 10 for D in a)
