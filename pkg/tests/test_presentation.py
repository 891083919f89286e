import pytest
from hypothesis import given, strategies as st

from tracering.errors import CutoffExceeded, ParseError
from tracering.matrix_eval import GenericMatrixSpec
from tracering.presentation import (BoundInput, RelationCandidate, certify_relation_table, derksen_bound,
                                    generic_bound, hilbert_function, hilbert_function_presented, hsop_bound,
                                    hsop_consistency, krull_dimension, load_c33_hsop, load_relation_table,
                                    minimal_generators, minimal_relation_counts, minimal_relations,
                                    parse_degrees, relation_space, verify_generating_set)
from tracering.presentation.relations import RelationIdeal
from tracering.words import parse_tuple


# ---- generators

@pytest.mark.parametrize("n,d,mult", [
    (2, 2, {1: 2, 2: 3}),
    (2, 3, {1: 3, 2: 6, 3: 1}),
    (1, 3, {1: 3}),
])
def test_small_generator_tables(n, d, mult):
    assert minimal_generators(n, d).multiplicities() == mult
    assert minimal_generators(n, d, GenericMatrixSpec.plain(n, d)).multiplicities() == mult


def test_pivot_order_does_not_change_counts():
    a = minimal_generators(3, 2)
    b = minimal_generators(3, 2, reverse=True)
    assert [g.multidegree for g in a] == [g.multidegree for g in b]


def test_shipped_c33_table_is_minimal(c33):
    assert len(c33) == 48
    assert verify_generating_set(c33) == {}


def test_generator_table_json_roundtrip(c33):
    from tracering.gentable import GeneratorTable

    again = GeneratorTable.from_json(c33.to_json())
    assert again.labels() == c33.labels()
    assert [g.definition for g in again.entries] == [g.definition for g in c33.entries]


# ---- relations

def test_relation_space_examples(c33):
    assert relation_space((3, 2, 2), c33).dim == 1
    assert relation_space((0, 0, 0), c33).dim == 0
    g22 = minimal_generators(2, 2)
    assert all(relation_space(md, g22).dim == 0 for md in [(3, 3), (4, 2), (6, 0)])


def test_degree7_counts(c33):
    counts = minimal_relation_counts(c33, 7, from_degree=7)
    assert counts == {(3, 2, 2): 1, (2, 3, 2): 1, (2, 2, 3): 1}


def test_no_small_relations_for_2x2():
    assert minimal_relation_counts(minimal_generators(2, 3), 4) == {}
    assert minimal_relation_counts(minimal_generators(2, 3), 6) == {(2, 2, 2): 1}


def test_minimal_relations_vanish():
    from tracering.matrix_eval import pi

    g = minimal_generators(2, 3)
    rels = minimal_relations(g, 6)
    assert list(rels) == [(2, 2, 2)] and len(rels[(2, 2, 2)]) == 1
    assert pi(g.substitute(rels[(2, 2, 2)][0]), g.spec).is_zero()


# ---- certification

def _cands(*items):
    return [RelationCandidate(parse_tuple(t), h, 0, i) for i, (t, h) in enumerate(items)]


def test_certify_degree7(rule3, c33, reducer3):
    cands = _cands(("(111,22,3,3)", (3, 2, 2)), ("(111,22,3,3)", (3, 2, 2)), ("(1111,22,3,3)", (3, 2, 2)))
    rep = certify_relation_table(cands, rule3, c33, reducer=reducer3, orbit_degree=7)
    st_ = [c["status"] for c in rep.candidates]
    assert st_[0] == "certified" and st_[1] == "duplicate"
    # negative control: a tuple whose letters do not match its header
    assert rep.candidates[2]["checks"]["a"] != "pass"
    assert rep.multidegrees[0]["complete"] == "yes"
    orbit = rep.orbits
    assert {tuple(m["multidegree"]) for m in orbit["multidegrees"]} >= {(2, 3, 2), (2, 2, 3)}
    assert all(c["status"] == "certified" for c in orbit["candidates"])


def test_relation_table_loads():
    cands = load_relation_table()
    assert len(cands) == 107
    assert cands[0].text == "(111,22,3,3)" and cands[0].declared == (3, 2, 2)


# ---- bounds

def test_bounds():
    assert generic_bound(3, 3) == 161
    assert derksen_bound(BoundInput(tuple(parse_degrees("6x10,5x9,4x9,3x11,2x6,1x3")), 19, -27)) == 82
    assert hsop_bound([6, 5, 1], load_c33_hsop().degrees, -27) == 27
    assert krull_dimension(3, 3) == 19


def test_bound_input_errors():
    with pytest.raises(ValueError):
        derksen_bound(BoundInput((3, 2), 5, -1))
    with pytest.raises(ParseError):
        parse_degrees("6y10")


def test_hsop_consistency(c33, reducer3):
    rep = hsop_consistency(load_c33_hsop(), c33, reducer3)
    assert rep["ok"], rep
    assert rep["count"]["elements"] == 19 and rep["degree_sum"] == 48
    assert rep["identities"][2]["got"] == "1/6*t_2*t_3 + 1/3*t_6^2 + 1/3*t_20"


# ---- Hilbert functions

def test_hilbert_small_values():
    assert hilbert_function(2, 2, k=2) == 6
    assert hilbert_function(3, 3, k=0) == 1
    g = minimal_generators(2, 2)
    assert hilbert_function_presented(g, [], 2) == 6


def test_hilbert_cutoff():
    with pytest.raises(CutoffExceeded):
        hilbert_function(3, 3, k=8)
    with pytest.raises(CutoffExceeded):
        hilbert_function(2, 2, k=5, cutoff=4)


def test_hilbert_forms_agree_2x3():
    g = minimal_generators(2, 3)
    rels = minimal_relations(g, 8)
    assert [hilbert_function(2, 3, k=k) for k in range(9)] == \
        [hilbert_function_presented(g, rels, k) for k in range(9)]


def test_missing_relation_is_detected():
    g = minimal_generators(2, 3)
    assert hilbert_function_presented(g, [], 6) > hilbert_function(2, 3, k=6)


# ---- determinism across thread counts

@given(st.sampled_from([(2, 2), (2, 3), (3, 2)]), st.integers(1, 4), st.integers(0, 3))
def test_generators_independent_of_threads(nd, threads, seed):
    n, d = nd
    top = 3 if n == 2 else 4
    a = minimal_generators(n, d, max_total_degree=top, seed=seed)
    b = minimal_generators(n, d, max_total_degree=top, seed=seed, threads=threads)
    assert a.to_json() == b.to_json()


@given(st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3)).filter(lambda m: 5 <= sum(m) <= 7),
       st.integers(2, 4))
def test_relation_counts_independent_of_threads(md, threads):
    g = _g23()
    a = minimal_relation_counts(g, 0, mds=[md])
    b = minimal_relation_counts(g, 0, mds=[md], ideal=RelationIdeal(g, threads=threads))
    assert a == b


_cache = {}


def _g23():
    if "g" not in _cache:
        _cache["g"] = minimal_generators(2, 3)
    return _cache["g"]
