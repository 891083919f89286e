from fractions import Fraction

from hypothesis import given

from tracering.trace_algebra import (TracePolynomial, drop_vanishing_factors, exponent_vectors,
                                     format_polynomial, multidegrees_of_total, substitute)

from .strategies import trace_polynomials


def test_cyclic_identification():
    assert TracePolynomial.trace((1, 2)) - TracePolynomial.trace((2, 1)) == 0


def test_products_and_format():
    p = TracePolynomial.trace((1, 2)) * TracePolynomial.trace((3,)) - TracePolynomial.trace((1, 2, 3)) * Fraction(1, 2)
    assert format_polynomial(p) == "-(1/2)[123] + [12][3]"
    assert p.multidegrees(3) == {(1, 1, 1)}


def test_substitute_words():
    p = TracePolynomial.trace((1, 2))
    assert substitute(p, {1: (3,), 2: (1, 2)}) == TracePolynomial.trace((1, 2, 3))


def test_drop_traceless_singletons():
    p = TracePolynomial.trace((1,), (2, 3)) + TracePolynomial.trace((2, 3))
    assert drop_vanishing_factors(p, [1]) == TracePolynomial.trace((2, 3))


def test_exponent_vectors():
    assert exponent_vectors([(1, 0), (0, 1), (1, 1)], (1, 1)) == [(1, 1, 0), (0, 0, 1)]
    assert len(multidegrees_of_total(3, 3)) == 10


def test_json_roundtrip():
    p = TracePolynomial.trace((1, 1, 2), (3,)) * Fraction(-2, 3) + 1
    assert TracePolynomial.from_json(p.to_json()) == p


@given(trace_polynomials(3), trace_polynomials(3), trace_polynomials(3))
def test_ring_axioms(p, q, r):
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p - p == 0
