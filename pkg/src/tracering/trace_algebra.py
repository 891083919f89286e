"""The free algebra of formal traces.

A :class:`TraceMonomial` is a multiset of canonical cyclic words, stored as
a sorted tuple (longer factors first, then lexicographically).  A
:class:`TracePolynomial` is a finitely supported rational combination of
trace monomials.  Both are immutable.
"""

from __future__ import annotations

import json
from collections import defaultdict
from fractions import Fraction
from functools import reduce
from typing import Iterable, Mapping, Sequence

from .words import canonicalize, factor_key, format_word, multidegree, print_bracket

TraceMonomial = tuple  # tuple[Word, ...], sorted by factor_key

ONE: TraceMonomial = ()


def make_monomial(factors: Iterable[Sequence[int]]) -> TraceMonomial:
    return tuple(sorted((canonicalize(f) for f in factors), key=factor_key))


def monomial_degree(m: TraceMonomial) -> int:
    return sum(len(f) for f in m)


def monomial_multidegree(m: TraceMonomial, d: int) -> tuple[int, ...]:
    counts = [0] * d
    for f in m:
        for a in f:
            counts[a - 1] += 1
    return tuple(counts)


def monomial_key(m: TraceMonomial) -> tuple:
    """Degree-lexicographic serialisation order for monomials."""
    return (monomial_degree(m), len(m), m)


def _mul_monomials(a: TraceMonomial, b: TraceMonomial) -> TraceMonomial:
    if not a:
        return b
    if not b:
        return a
    return tuple(sorted(a + b, key=factor_key))


class TracePolynomial:
    """Rational linear combination of trace monomials."""

    __slots__ = ("_terms", "_split")

    def __init__(self, terms: Mapping | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict = defaultdict(Fraction)
        for m, c in items:
            acc[tuple(m)] += Fraction(c)
        self._terms = {m: c for m, c in acc.items() if c}
        self._split = None

    # constructors ------------------------------------------------------
    @classmethod
    def trace(cls, *words: Sequence[int]) -> "TracePolynomial":
        """Product of the traces of ``words``; ``trace()`` is the unit."""
        return cls({make_monomial(words): 1})

    @classmethod
    def one(cls) -> "TracePolynomial":
        return cls({ONE: 1})

    @classmethod
    def zero(cls) -> "TracePolynomial":
        return cls()

    @classmethod
    def _raw(cls, terms: dict) -> "TracePolynomial":
        p = cls.__new__(cls)
        p._terms = terms
        p._split = None
        return p

    # access -------------------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def monomials(self) -> list[TraceMonomial]:
        return sorted(self._terms, key=monomial_key)

    def coefficient(self, m: Iterable[Sequence[int]]) -> Fraction:
        return self._terms.get(make_monomial(m), Fraction(0))

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def letters(self) -> set[int]:
        return {a for m in self._terms for f in m for a in f}

    def max_letter(self) -> int:
        return max(self.letters(), default=0)

    def degree(self) -> int:
        return max((monomial_degree(m) for m in self._terms), default=0)

    def max_factor_degree(self) -> int:
        return max((len(f) for m in self._terms for f in m), default=0)

    def split_by_multidegree(self, d: int) -> dict:
        """Homogeneous components keyed by multidegree (cached)."""
        if self._split is None or self._split[0] != d:
            parts: dict = defaultdict(dict)
            for m, c in self._terms.items():
                parts[monomial_multidegree(m, d)][m] = c
            self._split = (d, {k: TracePolynomial._raw(v) for k, v in parts.items()})
        return dict(self._split[1])

    def multidegrees(self, d: int) -> set:
        return set(self.split_by_multidegree(d))

    def is_homogeneous(self, d: int) -> bool:
        return len(self.split_by_multidegree(d)) <= 1

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        acc = dict(self._terms)
        for m, c in other._terms.items():
            v = acc.get(m, 0) + c
            if v:
                acc[m] = v
            else:
                acc.pop(m, None)
        return TracePolynomial._raw(acc)

    __radd__ = __add__

    def __neg__(self):
        return TracePolynomial._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            if not other:
                return TracePolynomial()
            return TracePolynomial._raw({m: c * other for m, c in self._terms.items()})
        if not isinstance(other, TracePolynomial):
            return NotImplemented
        return multiply(self, other)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        return reduce(multiply, [self] * k, TracePolynomial.one())

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __repr__(self):
        return f"TracePolynomial({format_polynomial(self)!r})"

    def __str__(self):
        return format_polynomial(self)

    # serialisation ------------------------------------------------------
    def to_json(self) -> list:
        return [
            {"coeff": _fmt_fraction(self._terms[m]), "factors": [list(f) for f in m]}
            for m in self.monomials()
        ]

    @classmethod
    def from_json(cls, data: list) -> "TracePolynomial":
        return cls((make_monomial(t["factors"]), Fraction(t["coeff"])) for t in data)

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def _coerce(x):
    if isinstance(x, TracePolynomial):
        return x
    if isinstance(x, (int, Fraction)):
        return TracePolynomial({ONE: x}) if x else TracePolynomial()
    return NotImplemented


def _fmt_fraction(c: Fraction) -> str:
    return f"{c.numerator}/{c.denominator}"


def multiply(p: TracePolynomial, q: TracePolynomial) -> TracePolynomial:
    acc: dict = defaultdict(Fraction)
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            acc[_mul_monomials(m1, m2)] += c1 * c2
    return TracePolynomial._raw({m: c for m, c in acc.items() if c})


def substitute(p: TracePolynomial, assignment: Mapping[int, Sequence[int]]) -> TracePolynomial:
    """Replace every letter ``a`` inside every trace factor by the word ``assignment[a]``."""
    assignment = {a: tuple(w) for a, w in assignment.items()}
    acc: dict = defaultdict(Fraction)
    for m, c in p.items():
        factors = []
        for f in m:
            try:
                w = tuple(b for a in f for b in assignment[a])
            except KeyError as e:
                raise KeyError(f"letter {e.args[0]} has no assigned word") from None
            factors.append(w)
        acc[make_monomial(factors)] += c
    return TracePolynomial._raw({m: c for m, c in acc.items() if c})


def drop_vanishing_factors(p: TracePolynomial, traceless: Iterable[int]) -> TracePolynomial:
    """Set ``Tr(x_a) = 0`` for every letter ``a`` in ``traceless``."""
    zero = {(a,) for a in traceless}
    return TracePolynomial._raw(
        {m: c for m, c in p.items() if not any(f in zero for f in m)}
    )


def exponent_vectors(degrees: Sequence[Sequence[int]], md: Sequence[int]) -> list[tuple[int, ...]]:
    """Exponent vectors ``e`` with ``sum e_i * degrees[i] == md``.

    Ordered lexicographically descending (largest power of the first
    variable first).  Every degree must be nonzero.
    """
    md = tuple(md)
    k = len(degrees)
    degs = [tuple(g) for g in degrees]
    if any(not any(g) for g in degs):
        raise ValueError("generator of degree zero")
    # suffix feasibility: can the remaining variables still reach a target?
    out: list[tuple[int, ...]] = []
    cur = [0] * k

    def rec(i: int, rest: tuple):
        if not any(rest):
            out.append(tuple(cur[:i]) + (0,) * (k - i))
            return
        if i == k:
            return
        g = degs[i]
        # maximal power of variable i
        top = min((r // x for r, x in zip(rest, g) if x), default=0)
        for e in range(top, -1, -1):
            cur[i] = e
            rec(i + 1, tuple(r - e * x for r, x in zip(rest, g)))
        cur[i] = 0

    rec(0, md)
    return out


def graded_piece(variables: Sequence[TraceMonomial], md: Sequence[int]) -> list[TraceMonomial]:
    """All products of ``variables`` with multidegree exactly ``md``, without duplicates."""
    d = len(md)
    variables = [make_monomial(v) for v in variables]
    degs = [monomial_multidegree(v, d) for v in variables]
    seen = set()
    out = []
    for e in exponent_vectors(degs, md):
        factors: list = []
        for v, k in zip(variables, e):
            factors.extend(list(v) * k)
        m = make_monomial(factors)
        if m not in seen:
            seen.add(m)
            out.append(m)
    return out


def multidegrees_of_total(total: int, d: int) -> list[tuple[int, ...]]:
    """All length-``d`` compositions of ``total`` (parts may be zero), descending."""
    if d == 1:
        return [(total,)]
    out = []
    for first in range(total, -1, -1):
        for rest in multidegrees_of_total(total - first, d - 1):
            out.append((first,) + rest)
    return out


def format_polynomial(p: TracePolynomial) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for m in p.monomials():
        c = p._terms[m]
        body = print_bracket(m)
        mag = abs(c)
        sign = "-" if c < 0 else "+"
        if body == "1":
            txt = str(mag)
        elif mag == 1:
            txt = body
        else:
            txt = f"{mag}{body}" if mag.denominator == 1 else f"({mag}){body}"
        parts.append((sign, txt))
    s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, txt in parts[1:]:
        s += f" {sign} {txt}"
    return s


def monomial_str(m: TraceMonomial) -> str:
    return "*".join(f"Tr({format_word(f)})" for f in m) or "1"


def word_multidegree(word, d):
    return multidegree(word, d)
