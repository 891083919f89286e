from math import gcd

import pytest
from hypothesis import given, strategies as st

from tracering.errors import ParseError
from tracering.words import (canonicalize, format_tuple, necklaces, parse_bracket, parse_tuple, print_bracket,
                             rotate)

words = st.lists(st.integers(1, 4), min_size=1, max_size=12).map(tuple)


def _necklace_count(n, k):
    # number of k-ary necklaces of length n (Burnside)
    phi = lambda m: sum(1 for i in range(1, m + 1) if gcd(i, m) == 1)
    return sum(phi(n // t) * k ** t for t in range(1, n + 1) if n % t == 0) // n


def test_canonical_examples():
    assert canonicalize((2, 1)) == (1, 2)
    assert canonicalize((3, 1, 2)) == (1, 2, 3)
    assert canonicalize((1, 3, 2)) == (1, 3, 2)  # reversal is a different class
    assert canonicalize((2, 1, 2, 1)) == (1, 2, 1, 2)


def test_empty_word_rejected():
    with pytest.raises(ValueError):
        canonicalize(())


@given(words, st.integers(0, 20))
def test_rotation_invariance(w, k):
    assert canonicalize(rotate(w, k)) == canonicalize(w)
    c = canonicalize(w)
    assert all(c <= rotate(w, i) for i in range(len(w)))


@pytest.mark.parametrize("n,k", [(4, 2), (6, 2), (5, 3), (6, 3)])
def test_necklace_totals(n, k):
    from tracering.trace_algebra import multidegrees_of_total

    total = sum(len(necklaces(md)) for md in multidegrees_of_total(n, k))
    assert total == _necklace_count(n, k)


def test_tuple_roundtrip():
    t = parse_tuple("(1132,223,1,3)")
    assert t == ((1, 1, 3, 2), (2, 2, 3), (1,), (3,))
    assert format_tuple(t) == "(1132,223,1,3)"


@pytest.mark.parametrize("bad", ["1132,223", "(12,,3)", "(1a,2)", "(10,2)"])
def test_tuple_parse_errors(bad):
    with pytest.raises(ParseError):
        parse_tuple(bad)


def test_bracket_roundtrip():
    assert print_bracket([(3,), (1, 2)]) == "[12][3]"
    assert parse_bracket("[12][3]") == ((1, 2), (3,))
    with pytest.raises(ParseError):
        parse_bracket("[12]x")
