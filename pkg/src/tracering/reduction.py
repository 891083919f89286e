"""Trace reductions and the evaluation map ``R`` onto a generator ring.

A trace reduction for ``n x n`` matrices rewrites ``Tr(X_1 ... X_{N+1})``
(``N = N(n)``) as a combination of products of shorter traces.  It is a
combination ``sum_c x_c F(tuple_c)`` of multilinear fundamental identities
whose full-length terms cancel except the first one, so ``x`` solves
``A x = e_1``.

``R`` applies the reduction to every trace of degree ``> N`` (substituting
single letters into the first ``N`` slots and the remaining tail into the
last one) and looks up the remaining short traces in a rewrite table that
expresses them in the chosen generators.
"""

from __future__ import annotations

import json
import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import flint

from .errors import TraceRingError, UnsupportedError, VerificationError
from .gentable import GeneratorTable
from .identities import fundamental_identity, multilinear_tuples, nagata_higman
from .images import ImageFamily, certified_kernel
from .linalg import RationalMatrix, solve
from .matrix_eval import GenericMatrixSpec, eval_at, pi, random_matrices
from .trace_algebra import TracePolynomial, drop_vanishing_factors, make_monomial, substitute
from .words import canonicalize, format_tuple, necklaces, parse_tuple

log = logging.getLogger(__name__)


# ---------------------------------------------------------------- the linear system

def full_length_words(n: int) -> list[tuple]:
    """Cyclic words using each of ``1..N(n)+1`` once; ``(1, 2, ..., N+1)`` first."""
    import itertools

    m = nagata_higman(n) + 1
    return [(1,) + p for p in itertools.permutations(range(2, m + 1))]


def build_reduction_system(n: int, columns: Sequence | None = None) -> tuple[RationalMatrix, list]:
    """Matrix ``A`` (rows: full-length words, columns: multilinear tuples)."""
    rows = full_length_words(n)
    index = {w: i for i, w in enumerate(rows)}
    tuples = list(multilinear_tuples(n)) if columns is None else [tuple(map(tuple, c)) for c in columns]
    cols: list[dict] = [dict() for _ in rows]
    m = len(rows[0])
    for j, t in enumerate(tuples):
        for mono, c in fundamental_identity(t).items():
            if len(mono) == 1 and len(mono[0]) == m:
                cols[index[mono[0]]][j] = c
    return RationalMatrix(len(rows), len(tuples), cols), tuples


# ---------------------------------------------------------------- rules

@dataclass(frozen=True)
class ReductionRule:
    """``Tr(X_1 ... X_{N+1}) = rhs`` with ``lhs - rhs = sum_c x_c F(tuple_c)``."""

    n: int
    columns: tuple
    coefficients: tuple
    rhs: TracePolynomial = field(compare=False)
    seed: int | None = None

    @property
    def size(self) -> int:
        return nagata_higman(self.n) + 1

    @property
    def lhs(self) -> TracePolynomial:
        return TracePolynomial.trace(tuple(range(1, self.size + 1)))

    def identity(self) -> TracePolynomial:
        return self.lhs - self.rhs

    def specialize(self, traceless: Sequence[int] | None = None) -> TracePolynomial:
        """The rhs with ``Tr(x_a) = 0`` for the given letters (default ``1..N``)."""
        if traceless is None:
            traceless = range(1, self.size)
        return drop_vanishing_factors(self.rhs, traceless)

    def support(self) -> list[tuple[tuple, Fraction]]:
        return [(t, c) for t, c in zip(self.columns, self.coefficients) if c]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "tuples": [format_tuple(t) for t, _ in self.support()],
            "coefficients": [f"{c.numerator}/{c.denominator}" for _, c in self.support()],
            "seed": self.seed,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)

    @classmethod
    def from_json(cls, data: dict, verify: bool = True) -> "ReductionRule":
        n = int(data["n"])
        tuples = [parse_tuple(t) for t in data["tuples"]]
        coeffs = [Fraction(c) for c in data["coefficients"]]
        if len(tuples) != len(coeffs):
            raise ValueError("one coefficient per tuple")
        rule = assemble_rule(n, tuples, coeffs, data.get("seed"))
        if verify:
            verify_rule(rule)
        return rule


def assemble_rule(n: int, columns: Sequence, x: Sequence, seed=None) -> ReductionRule:
    size = nagata_higman(n) + 1
    lhs = TracePolynomial.trace(tuple(range(1, size + 1)))
    total = TracePolynomial()
    for t, c in zip(columns, x):
        if len(t) != n + 1:
            raise ValueError(f"tuple {format_tuple(t)} does not have {n + 1} entries")
        if c:
            total = total + fundamental_identity(t) * Fraction(c)
    rhs = lhs - total
    for mono in rhs.monomials():
        if len(mono) == 1 and len(mono[0]) == size:
            raise VerificationError("coefficients do not cancel the full-length traces (A x != e_1)")
    return ReductionRule(n, tuple(tuple(map(tuple, t)) for t in columns), tuple(Fraction(c) for c in x), rhs, seed)


def verify_rule(rule: ReductionRule, points: int = 5, symbolic: bool | None = None) -> None:
    """Check that ``lhs - rhs`` is a trace identity; raise otherwise."""
    ident = rule.identity()
    size = rule.size
    if symbolic is None:
        symbolic = rule.n <= 2
    if symbolic:
        if not pi(ident, GenericMatrixSpec(rule.n, size)).is_zero():
            raise VerificationError("reduction rule is not a trace identity")
        return
    spec = GenericMatrixSpec(rule.n, size)
    for k in range(points):
        if eval_at(ident, random_matrices(spec, ("rule", rule.n, k))) != 0:
            raise VerificationError(f"reduction rule fails at random point {k}")


def solve_reduction(n: int, columns: Sequence | None = None, seed: int | None = None,
                    verify: bool = True) -> ReductionRule:
    """Solve ``A x = e_1``.

    Without ``seed`` the particular solution with all free variables zero is
    used.  With a seed the free variables are random small rationals, which
    gives a generic rule.
    """
    a, tuples = build_reduction_system(n, columns)
    e1 = [Fraction(1)] + [Fraction(0)] * (a.shape[0] - 1)
    if seed is None:
        x = solve(a, e1)
    else:
        rng = random.Random(repr(("rule", n, seed)))
        x = solve(a, e1, free=lambda j: Fraction(rng.randint(-5, 5), rng.randint(1, 3)))
    rule = assemble_rule(n, tuples, x, seed)
    if verify:
        verify_rule(rule)
    return rule


MAX_RULE_N = 3  # the n=4 system has 10! rows


def default_rule(n: int, seed: int | None = None, verify: bool = True) -> ReductionRule:
    """The rule used by the pipeline.

    For ``n = 3`` without a seed the solved rule ships with the package (it
    equals ``solve_reduction(3)``); it is checked at random points on load.
    """
    if n > MAX_RULE_N or n < 1:
        raise UnsupportedError(f"trace reductions are only built for n <= {MAX_RULE_N}")
    if n == 3 and seed is None:
        from importlib import resources

        data = json.loads(resources.files("tracering.data").joinpath("c3_reduction_rule.json").read_text())
        return ReductionRule.from_json(data, verify=verify)
    return solve_reduction(n, seed=seed, verify=verify)


def example_columns() -> list[tuple]:
    """The three tuples of the classical 2x2 example, in its order."""
    return [((1, 2), (3,), (4,)), ((4, 1), (2,), (3,)), ((2, 4), (1,), (3,))]


# ---------------------------------------------------------------- applying rules

class CompiledRule:
    """Rule terms as ``(coeff, factors)`` with factors as tuples of slot indices."""

    def __init__(self, rule: ReductionRule, traceless: Sequence[int] = ()):
        self.rule = rule
        self.size = rule.size
        self.traceless = frozenset(traceless)
        self.terms = [(c, [tuple(f) for f in m]) for m, c in rule.rhs.items()]
        self.terms.sort(key=lambda t: (len(t[1]), t[1]))

    def factor_words(self, word: Sequence[int]):
        """Yield ``(coeff, [factor words])`` for one reduction step on ``word``."""
        w = canonicalize(word)
        k = len(w)
        if k < self.size:
            raise ValueError(f"word of degree {k} is too short for a reduction (needs {self.size})")
        slots = [(a,) for a in w[: self.size - 1]] + [w[self.size - 1:]]
        for c, factors in self.terms:
            out = []
            for f in factors:
                fw = tuple(b for s in f for b in slots[s - 1])
                if len(fw) == 1 and fw[0] in self.traceless:
                    break
                out.append(fw)
            else:
                yield c, out


def reduce_once(word: Sequence[int], rule: ReductionRule, traceless: Sequence[int] = ()) -> TracePolynomial:
    """One rewriting step of a trace of degree ``> N(n)``."""
    compiled = CompiledRule(rule, traceless)
    acc: dict = {}
    for c, factors in compiled.factor_words(word):
        m = make_monomial(factors)
        acc[m] = acc.get(m, 0) + c
    return TracePolynomial(acc)


# ---------------------------------------------------------------- rewrite table

class RewriteTable:
    """Expressions of short traces (degree ``<= N(n)``) in the generators.

    Built lazily, one multidegree at a time.  A multidegree in which the
    generator monomials are dependent is recorded in ``relations_found``;
    the expression then uses the pivot monomials only.
    """

    def __init__(self, gens: GeneratorTable, seed=0):
        self.gens = gens
        self.spec = gens.spec.without_diagonal()
        self.n = gens.n
        self.N = nagata_higman(self.n)
        self.seed = seed
        self._words: dict = {}
        self._done: set = set()
        self.relations_found: dict = {}
        self.traceless = set(self.spec.traceless_letters)

    def build(self, md: tuple) -> None:
        md = tuple(md)
        if md in self._done:
            return
        gens = self.gens
        words = necklaces(md)
        words = [w for w in words if not (len(w) == 1 and w[0] in self.traceless)]
        exps = gens.monomial_exponents(md)
        atoms = [g.definition for g in gens.entries] + [TracePolynomial.trace(w) for w in words]
        k = len(gens.entries)
        items = [tuple((i, e) for i, e in enumerate(ex) if e) for ex in exps]
        items += [((k + i, 1),) for i in range(len(words))]
        fam = ImageFamily(atoms, items, self.spec)
        ker = certified_kernel(fam, symbolic=True, seed=(self.seed, md), rank_hint=len(exps))
        nmono = len(exps)
        pivots = set(ker.pivots)
        if any(j >= nmono for j in pivots):
            bad = [words[j - nmono] for j in ker.pivots if j >= nmono]
            raise TraceRingError(f"traces {bad} are not expressible in the generators (multidegree {md})")
        rels = [v for v in ker.basis if max(v) < nmono]
        if rels:
            self.relations_found[md] = rels
        ctx = gens.ring
        for v in ker.basis:
            f = max(v)
            if f < nmono:
                continue
            terms = {}
            for j, c in v.items():
                if j != f:
                    terms[exps[j]] = flint.fmpq(-c.numerator, c.denominator)
            self._words[words[f - nmono]] = ctx.from_dict(terms) if terms else ctx.from_dict({})
        self._done.add(md)
        log.debug("rewrite table: multidegree %s, %d traces", md, len(words))

    def lookup(self, word: Sequence[int]):
        w = canonicalize(word)
        if len(w) > self.N:
            raise ValueError(f"word of degree {len(w)} exceeds N({self.n}) = {self.N}")
        if len(w) == 1 and w[0] in self.traceless:
            return self.gens.ring.from_dict({})
        if w not in self._words:
            self.build(_word_md(w, self.gens.d))
        try:
            return self._words[w]
        except KeyError:
            raise TraceRingError(f"rewrite table has no entry for {w}") from None

    def __len__(self):
        return len(self._words)

    def items(self):
        return sorted(self._words.items(), key=lambda kv: (len(kv[0]), kv[0]))


def _word_md(w, d):
    md = [0] * d
    for a in w:
        md[a - 1] += 1
    return tuple(md)


def build_rewrite_table(gens: GeneratorTable, max_degree: int | None = None, seed=0) -> RewriteTable:
    """Eagerly fill the table for every multidegree of total degree ``<= max_degree``."""
    from .trace_algebra import multidegrees_of_total

    table = RewriteTable(gens, seed)
    top = table.N if max_degree is None else min(max_degree, table.N)
    for total in range(1, top + 1):
        for md in multidegrees_of_total(total, gens.d):
            table.build(md)
    return table


# ---------------------------------------------------------------- the map R

class Reducer:
    """The evaluation map ``R`` from formal traces to the generator ring.

    Every rule term has exactly one factor containing the last (composite)
    slot; the other factors only involve the first ``N`` single letters.
    Terms are therefore grouped by that factor's slot pattern, and each
    group's cofactor is cached per choice of head letters.
    """

    def __init__(self, rule: ReductionRule, gens: GeneratorTable, table: RewriteTable | None = None,
                 seed=0):
        if rule.n != gens.n:
            raise ValueError(f"rule is for n={rule.n}, generators for n={gens.n}")
        self.rule = rule
        self.gens = gens
        self.table = table or RewriteTable(gens, seed)
        self.traceless = tuple(gens.spec.traceless_letters)
        self.N = self.table.N
        self.ring = gens.ring
        self._zero = self.ring.from_dict({})
        self._one = self.ring.from_dict({(0,) * self.ring.nvars(): 1})
        self._memo: dict = {}
        self._raw: dict = {}
        self._cofactors: dict = {}
        last = rule.size
        # slots 1..N only ever receive single letters
        all_traceless = len(self.traceless) == gens.d
        rhs = rule.specialize(range(1, last)) if all_traceless else rule.rhs
        groups: dict = {}
        for m, c in rhs.items():
            tail = [f for f in m if last in f]
            rest = tuple(f for f in m if last not in f)
            groups.setdefault(tail[0], []).append((c, rest))
        self.groups = sorted(groups.items())

    def word(self, word: Sequence[int]):
        r = self._raw.get(word)
        if r is not None:
            return r
        w = canonicalize(word)
        r = self._memo.get(w)
        if r is None:
            r = self.table.lookup(w) if len(w) <= self.N else self._reduce(w)
            self._memo[w] = r
        self._raw[tuple(word)] = r
        return r

    def _cofactor(self, g: int, head: tuple):
        key = (g, head)
        r = self._cofactors.get(key)
        if r is None:
            r = self._zero
            for c, rest in self.groups[g][1]:
                term = self._one * flint.fmpq(c.numerator, c.denominator)
                for f in rest:
                    term = term * self.word(tuple(head[s - 1] for s in f))
                    if term.is_zero():
                        break
                r += term
            self._cofactors[key] = r
        return r

    def _reduce(self, w: tuple):
        n = self.N
        head, tail = w[:n], w[n:]
        total = self._zero
        for g, (pattern, _) in enumerate(self.groups):
            cof = self._cofactor(g, head)
            if cof.is_zero():
                continue
            fw = []
            for s in pattern:
                if s == n + 1:
                    fw.extend(tail)
                else:
                    fw.append(head[s - 1])
            total += self.word(tuple(fw)) * cof
        return total

    def monomial(self, m):
        r = self._one
        for f in m:
            r = r * self.word(tuple(f))
            if r.is_zero():
                break
        return r

    def __call__(self, p: TracePolynomial):
        if p.max_letter() > self.gens.d:
            raise ValueError(f"letter {p.max_letter()} outside 1..{self.gens.d}")
        total = self._zero
        for m, c in p.items():
            total += self.monomial(m) * flint.fmpq(c.numerator, c.denominator)
        return total

    def letter_automorphism(self, perm: Sequence[int]) -> list:
        """Images of the generators under the letter permutation ``a -> perm[a-1]``.

        Generators have degree ``<= N`` and the rewrite there is unique, so
        ``T_i -> R(perm(definition_i))`` is a ring automorphism of the
        generator ring that commutes with the evaluation map.
        """
        assignment = {a: (perm[a - 1],) for a in range(1, self.gens.d + 1)}
        return [self(substitute(g.definition, assignment)) for g in self.gens.entries]

    def permute(self, r, perm: Sequence[int]):
        """Apply :meth:`letter_automorphism` to a polynomial in the generators."""
        images = self.letter_automorphism(perm)
        return r.compose(*images, ctx=self.ring) if not r.is_zero() else r

    def project(self, p: TracePolynomial) -> TracePolynomial:
        """``R`` followed by substituting the generator definitions back."""
        return self.gens.substitute(self(p))


def evaluation_map_R(p: TracePolynomial, rule: ReductionRule, gens: GeneratorTable):
    return Reducer(rule, gens)(p)
