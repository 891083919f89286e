from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from tracering.errors import NoSolution
from tracering.linalg import RationalMatrix, kernel_basis, rank, rref, solve, span_rank

fractions = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))


@st.composite
def matrices(draw, max_rows=7, max_cols=7):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    # sparse-ish entries so that rank deficiency is common
    cell = st.one_of(st.just(Fraction(0)), st.just(Fraction(0)), fractions)
    rows = draw(st.lists(st.lists(cell, min_size=c, max_size=c), min_size=r, max_size=r))
    return RationalMatrix.from_dense(rows, c)


def test_rref_small_example():
    m = RationalMatrix.from_dense([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    r, piv = rref(m)
    assert piv == (0, 1)
    assert r.to_dense()[:2] == [[1, 0, 1], [0, 1, 1]]
    assert r.to_dense()[2] == [0, 0, 0]


def test_kernel_canonical_order():
    m = RationalMatrix.from_dense([[1, 1, 0, 2]])
    assert kernel_basis(m) == [[-1, 1, 0, 0], [0, 0, 1, 0], [-2, 0, 0, 1]]


def test_solve_with_free_values():
    m = RationalMatrix.from_dense([[1, 1]])
    assert solve(m, [3]) == [3, 0]
    assert solve(m, [3], free=lambda j: 5) == [-2, 5]


def test_solve_inconsistent():
    m = RationalMatrix.from_dense([[1, 1], [1, 1]])
    with pytest.raises(NoSolution):
        solve(m, [1, 2])


def test_span_rank_of_dicts():
    assert span_rank([{0: Fraction(1)}, {0: Fraction(2)}, {1: Fraction(1, 3)}], 2) == 2
    assert span_rank([], 4) == 0


@given(matrices())
def test_rref_idempotent(m):
    r, piv = rref(m)
    r2, piv2 = rref(r)
    assert r2 == r and piv2 == piv


@given(matrices())
def test_rank_nullity(m):
    k = kernel_basis(m)
    assert rank(m) + len(k) == m.shape[1]
    for v in k:
        assert all(x == 0 for x in m @ v)


@given(matrices())
def test_backends_agree(m):
    assert rref(m, "python") == rref(m, "flint")


@given(matrices(), st.lists(fractions, min_size=7, max_size=7))
def test_solve_consistent_rhs(m, x):
    b = m @ x[: m.shape[1]]
    y = solve(m, b)
    assert m @ y == b
