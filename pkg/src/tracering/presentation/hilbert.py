"""Hilbert functions of trace algebras, computed two independent ways.

``hilbert_function`` ranks the images of trace monomials.  The spanning set
is the products of traces of words of length ``<= N(n)``, taken at random
integer points.  A rank at points never exceeds the true rank, so this is a
certified lower bound.

``hilbert_function_presented`` counts monomials in the generators minus the
dimension of the relation ideal, whose graded pieces are spanned by
monomial-times-relation products.  Since every supplied relation is a true
relation, this is an upper bound.  Agreement of the two certifies both.

Traceless letters split off a polynomial ring on their traces; both forms
compute the traceless part per multidegree and then convolve with it.
"""

from __future__ import annotations

import logging
import random
from concurrent.futures import ThreadPoolExecutor
from math import comb
from typing import Mapping, Sequence

import flint

from ..errors import CutoffExceeded
from ..gentable import GeneratorTable
from ..identities import nagata_higman
from ..images import ImageFamily
from ..matrix_eval import GenericMatrixSpec
from ..trace_algebra import TracePolynomial, exponent_vectors, multidegrees_of_total
from ..words import necklaces
from .relations import sparse_rank, tpoly_to_vector

log = logging.getLogger(__name__)

DEFAULT_CUTOFFS = {1: None, 2: None, 3: 7}


def hilbert_cutoff(n: int) -> int | None:
    return DEFAULT_CUTOFFS.get(n, 4)


def _check_cutoff(n: int, k: int, cutoff) -> None:
    if cutoff == "default":
        cutoff = hilbert_cutoff(n)
    if cutoff is not None and k > cutoff:
        raise CutoffExceeded(f"degree {k} exceeds the configured cutoff {cutoff} for n={n}")


def _split(total: int, dims_by_degree: Mapping[int, int], s: int) -> int:
    """Degree-``total`` dimension of (traceless part) tensor (polynomials in ``s`` variables)."""
    if s == 0:
        return dims_by_degree.get(total, 0)
    return sum(q * comb(total - j + s - 1, s - 1) for j, q in dims_by_degree.items() if j <= total)


def _representatives(mds: Sequence[tuple], symmetric: bool) -> dict:
    """Map each multidegree to the one actually computed (sorted when letters are interchangeable)."""
    if not symmetric:
        return {md: md for md in mds}
    return {md: tuple(sorted(md, reverse=True)) for md in mds}


def point_rank(family: ImageFamily, seed, margin: int = 6) -> int:
    """Rank of ``family`` at random integer points (a lower bound for the true rank)."""
    m = len(family)
    if m == 0:
        return 0
    rng = random.Random(repr(("hilbert", seed)))
    rows: list = []
    npoints = min(m, 16) + margin
    while True:
        rows.extend(family.value_matrix(npoints - len(rows), rng))
        mat = flint.fmpz_mat(rows)
        r = mat.rank()
        if r < len(rows) - margin // 2 or r == m:
            return r
        npoints = min(2 * len(rows), m + margin)


def traceless_dimension(md: Sequence[int], spec: GenericMatrixSpec, seed=0) -> int:
    """Point rank of products of short traces of multidegree ``md``, without single traceless letters."""
    md = tuple(md)
    if not any(md):
        return 1
    top = nagata_higman(spec.n)
    tl = set(spec.traceless_letters)
    words = []
    for sub in _sub_multidegrees(md):
        if 0 < sum(sub) <= top:
            words.extend(w for w in necklaces(sub) if not (len(w) == 1 and w[0] in tl))
    degs = [_word_md(w, len(md)) for w in words]
    exps = exponent_vectors(degs, md)
    items = [tuple((i, e) for i, e in enumerate(ex) if e) for ex in exps]
    fam = ImageFamily([TracePolynomial.trace(w) for w in words], items, spec)
    return point_rank(fam, (seed, md))


def hilbert_function(n: int, d: int, spec: GenericMatrixSpec | None = None, k: int = 0, *,
                     cutoff="default", seed=0, threads: int = 1, progress=None) -> int:
    """Dimension of the degree-``k`` piece of the trace algebra, from trace images."""
    _check_cutoff(n, k, cutoff)
    spec = (spec or GenericMatrixSpec.all_traceless(n, d)).without_diagonal()
    if (spec.n, spec.d) != (n, d):
        raise ValueError("spec does not match (n, d)")
    s = len(spec.traceless_letters)
    symmetric = len(set(spec.traceless)) == 1
    by_md = {}
    mds = [md for j in range(k + 1) for md in multidegrees_of_total(j, d)]
    reps = _representatives(mds, symmetric)
    todo = sorted(set(reps.values()), key=lambda m: (sum(m), tuple(-a for a in m)))

    def one(md):
        return traceless_dimension(md, spec, seed)

    if threads > 1 and len(todo) > 1:
        with ThreadPoolExecutor(threads) as pool:
            dims = list(pool.map(one, todo))
    else:
        dims = [one(md) for md in todo]
    for md, q in zip(todo, dims):
        by_md[md] = q
        if progress:
            progress(f"hilbert {md}: {q}")
    by_degree: dict = {}
    for md in mds:
        by_degree[sum(md)] = by_degree.get(sum(md), 0) + by_md[reps[md]]
    return _split(k, by_degree, s)


def _relation_list(relations, gens: GeneratorTable) -> list:
    if isinstance(relations, Mapping):
        return [r for md in sorted(relations) for r in relations[md]]
    return list(relations)


def hilbert_function_presented(gens: GeneratorTable, relations, k: int, *, cutoff="default",
                               threads: int = 1) -> int:
    """Dimension of the degree-``k`` piece of (polynomials in ``gens``) / (``relations``).

    ``relations`` is a list of multihomogeneous polynomials in the generator
    ring, or a mapping from multidegree to such lists.
    """
    _check_cutoff(gens.n, k, cutoff)
    rels = []
    for r in _relation_list(relations, gens):
        if r.is_zero():
            continue
        first = next(iter(r.to_dict()))
        rels.append((gens.t_multidegree([int(a) for a in first]), r))
    mds = [md for j in range(1, k + 1) for md in multidegrees_of_total(j, gens.d)]

    def one(md):
        exps = gens.monomial_exponents(md)
        if not exps:
            return 0
        index = {e: j for j, e in enumerate(exps)}
        ring_gens = gens.ring.gens()
        vectors = []
        for rmd, r in rels:
            rest = tuple(a - b for a, b in zip(md, rmd))
            if min(rest) < 0:
                continue
            for ex in (gens.monomial_exponents(rest) if any(rest) else [()]):
                m = r
                for i, e in enumerate(ex):
                    if e:
                        m = m * ring_gens[i] ** e
                vectors.append(tpoly_to_vector(m, index))
        return len(exps) - sparse_rank(vectors, len(exps))

    if threads > 1 and len(mds) > 1:
        with ThreadPoolExecutor(threads) as pool:
            dims = list(pool.map(one, mds))
    else:
        dims = [one(md) for md in mds]
    by_degree = {0: 1}
    for md, q in zip(mds, dims):
        by_degree[sum(md)] = by_degree.get(sum(md), 0) + q
    return _split(k, by_degree, len(gens.split))


def hilbert_series_prefix(n: int, d: int, up_to: int, **kw) -> list[int]:
    return [hilbert_function(n, d, k=k, **kw) for k in range(up_to + 1)]


def _sub_multidegrees(md: tuple):
    if not md:
        yield ()
        return
    for a in range(md[0] + 1):
        for rest in _sub_multidegrees(md[1:]):
            yield (a,) + rest


def _word_md(w, d):
    out = [0] * d
    for a in w:
        out[a - 1] += 1
    return tuple(out)
