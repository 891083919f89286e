"""Relations among generators, one multidegree at a time.

``K(md)`` is the space of polynomials in the generator symbols of
multidegree ``md`` whose image under the evaluation map vanishes.  The part
coming from lower degrees is ``L(md) = sum_g T_g K(md - deg g)``; minimal
relations in multidegree ``md`` are a complement of ``L(md)`` in ``K(md)``.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import flint

from ..gentable import GeneratorTable
from ..images import ImageFamily, certified_kernel
from ..trace_algebra import multidegrees_of_total

log = logging.getLogger(__name__)

SYMBOLIC_CUTOFF = 9  # symbolic certification up to this total degree


@dataclass
class RelationSpace:
    md: tuple
    exponents: list  # T-monomial exponent vectors, the coordinate order
    basis: list  # kernel vectors as {index: Fraction}
    certified: str = "symbolic"  # or "points"

    @property
    def dim(self) -> int:
        return len(self.basis)

    def polynomials(self, gens: GeneratorTable) -> list:
        return [vector_to_tpoly(v, self.exponents, gens) for v in self.basis]


def vector_to_tpoly(v: dict, exps: Sequence, gens: GeneratorTable):
    return gens.ring.from_dict(
        {exps[j]: flint.fmpq(c.numerator, c.denominator) for j, c in v.items()}
    )


def tpoly_to_vector(p, index: dict) -> dict:
    out = {}
    for e, c in p.to_dict().items():
        out[index[tuple(int(a) for a in e)]] = Fraction(int(c.p), int(c.q))
    return out


def _items(exps: Sequence) -> list:
    return [tuple((i, e) for i, e in enumerate(ex) if e) for ex in exps]


def relation_space(md: Sequence[int], gens: GeneratorTable, *, symbolic: bool | None = None,
                   seed=0) -> RelationSpace:
    """Basis of the relations of multidegree ``md`` among ``gens``."""
    md = tuple(md)
    exps = gens.monomial_exponents(md) if any(md) else []
    if symbolic is None:
        symbolic = sum(md) <= SYMBOLIC_CUTOFF
    if len(exps) <= 1:
        # a single monomial in nonzero generators never vanishes
        return RelationSpace(md, exps, [], "trivial")
    fam = ImageFamily([g.definition for g in gens.entries], _items(exps), gens.spec)
    ker = certified_kernel(fam, symbolic=symbolic, seed=("relations", seed, md))
    return RelationSpace(md, exps, ker.basis, "symbolic" if symbolic else "points")


class RelationIdeal:
    """Relation spaces of every multidegree up to a total degree, with ``L(md)``."""

    def __init__(self, gens: GeneratorTable, seed=0, threads: int = 1, progress=None):
        self.gens = gens
        self.seed = seed
        self.threads = max(1, int(threads))
        self.spaces: dict = {}
        self.progress = progress

    def compute(self, mds: Sequence[tuple], symbolic: bool | None = None) -> None:
        todo = [md for md in mds if md not in self.spaces]

        def one(md):
            return relation_space(md, self.gens, symbolic=symbolic, seed=self.seed)

        if self.threads > 1 and len(todo) > 1:
            with ThreadPoolExecutor(self.threads) as pool:
                results = list(pool.map(one, todo))
        else:
            results = [one(md) for md in todo]
        for md, sp in zip(todo, results):
            self.spaces[md] = sp
            if self.progress:
                self.progress(f"relations {md}: dim {sp.dim} over {len(sp.exponents)} monomials")

    def up_to(self, total: int, symbolic: bool | None = None) -> None:
        for k in range(1, total + 1):
            self.compute(multidegrees_of_total(k, self.gens.d), symbolic)

    def space(self, md: tuple) -> RelationSpace:
        md = tuple(md)
        if md not in self.spaces:
            self.compute([md])
        return self.spaces[md]

    def lower_products(self, md: tuple) -> list:
        """Spanning set of ``L(md)``: ``T_g * r`` for ``r`` in ``K(md - deg g)``."""
        gens = self.gens
        out = []
        for i, g in enumerate(gens.entries):
            rest = tuple(a - b for a, b in zip(md, g.multidegree))
            if min(rest) < 0 or not any(rest):
                continue
            sp = self.space(rest)
            if not sp.dim:
                continue
            t = gens.ring.gens()[i]
            out.extend(t * r for r in sp.polynomials(gens))
        return out

    def lower_rank(self, md: tuple, extra: Sequence = ()) -> tuple[int, int]:
        """``(dim L(md), dim (L(md) + span(extra)))``."""
        md = tuple(md)
        exps = self.gens.monomial_exponents(md)
        index = {e: j for j, e in enumerate(exps)}
        low = [tpoly_to_vector(p, index) for p in self.lower_products(md)]
        ext = [tpoly_to_vector(p, index) for p in extra]
        r0 = sparse_rank(low, len(exps))
        r1 = sparse_rank(low + ext, len(exps)) if ext else r0
        return r0, r1

    def new_count(self, md: tuple) -> int:
        sp = self.space(md)
        if not sp.dim:
            return 0
        r0, _ = self.lower_rank(md)
        return sp.dim - r0


def sparse_rank(vectors: Sequence[dict], ncols: int) -> int:
    """Exact rank of rational sparse vectors (integer-scaled, computed by FLINT)."""
    vectors = [v for v in vectors if v]
    if not vectors:
        return 0
    cols = sorted({j for v in vectors for j in v})
    pos = {j: k for k, j in enumerate(cols)}
    m = flint.fmpz_mat(len(vectors), len(cols))
    for i, v in enumerate(vectors):
        den = 1
        for c in v.values():
            den = den * c.denominator // math.gcd(den, c.denominator)
        for j, c in v.items():
            m[i, pos[j]] = int(c * den)
    return m.rank()


def minimal_relation_counts(gens: GeneratorTable, up_to_degree: int, *, from_degree: int = 1,
                            mds: Sequence[tuple] | None = None, seed=0, threads: int = 1,
                            ideal: RelationIdeal | None = None, progress=None) -> dict:
    """Number of new minimal relations per multidegree (zeros omitted).

    With ``mds`` only those multidegrees are reported; the relation spaces
    they depend on are computed as needed.
    """
    ideal = ideal or RelationIdeal(gens, seed, threads, progress)
    if mds is None:
        mds = [md for k in range(from_degree, up_to_degree + 1) for md in multidegrees_of_total(k, gens.d)]
    mds = [tuple(m) for m in mds]
    # relation spaces needed for the lower parts
    needed = set()
    for md in mds:
        needed.add(md)
        for g in gens.entries:
            rest = tuple(a - b for a, b in zip(md, g.multidegree))
            if min(rest) >= 0 and any(rest):
                needed.add(rest)
    ideal.compute(sorted(needed, key=lambda m: (sum(m), tuple(-a for a in m))))
    out = {}
    for md in mds:
        c = ideal.new_count(md)
        if c:
            out[md] = c
    return out


def minimal_relations(gens: GeneratorTable, up_to_degree: int, *, seed=0, threads: int = 1,
                      ideal: RelationIdeal | None = None) -> dict:
    """A minimal set of relations: per multidegree, kernel vectors outside ``L(md)``."""
    ideal = ideal or RelationIdeal(gens, seed, threads)
    ideal.up_to(up_to_degree)
    out = {}
    for k in range(1, up_to_degree + 1):
        for md in multidegrees_of_total(k, gens.d):
            sp = ideal.space(md)
            if not sp.dim:
                continue
            index = {e: j for j, e in enumerate(sp.exponents)}
            low = [tpoly_to_vector(p, index) for p in ideal.lower_products(md)]
            rank = sparse_rank(low, len(sp.exponents))
            chosen = []
            for p in sp.polynomials(gens):
                v = tpoly_to_vector(p, index)
                r = sparse_rank(low + [v], len(sp.exponents))
                if r > rank:
                    low.append(v)
                    rank = r
                    chosen.append(p)
            if chosen:
                out[md] = chosen
    return out
