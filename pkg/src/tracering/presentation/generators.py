"""Minimal generating sets of trace algebras, computed degree by degree."""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from importlib import resources

from ..gentable import Generator, GeneratorTable
from ..identities import nagata_higman
from ..images import ImageFamily, certified_kernel
from ..matrix_eval import GenericMatrixSpec
from ..trace_algebra import TracePolynomial, exponent_vectors, multidegrees_of_total
from ..words import format_word, necklaces


def _split_generators(spec: GenericMatrixSpec) -> list[Generator]:
    d = spec.d
    return [
        Generator(f"t_tr{k}", TracePolynomial.trace((k,)), tuple(int(i == k - 1) for i in range(d)), "split")
        for k in spec.traceless_letters
    ]


def _new_in_multidegree(md, earlier, spec, seed, reverse):
    words = [w for w in necklaces(md) if not (len(w) == 1 and spec.traceless[w[0] - 1])]
    if reverse:
        words = words[::-1]
    if not words:
        return []
    degs = [g.multidegree for g in earlier]
    exps = exponent_vectors(degs, md) if earlier else []
    k = len(earlier)
    atoms = [g.definition for g in earlier] + [TracePolynomial.trace(w) for w in words]
    items = [tuple((i, e) for i, e in enumerate(ex) if e) for ex in exps]
    items += [((k + i, 1),) for i in range(len(words))]
    fam = ImageFamily(atoms, items, spec)
    ker = certified_kernel(fam, symbolic=True, seed=("generators", seed, md), rank_hint=len(exps) + len(words))
    return [words[j - len(exps)] for j in ker.pivots if j >= len(exps)]


def minimal_generators(n: int, d: int, spec: GenericMatrixSpec | None = None,
                       max_total_degree: int | None = None, *, seed=0, threads: int = 1,
                       reverse: bool = False, progress=None) -> GeneratorTable:
    """Traces of words that are not polynomials in traces of lower degree.

    Multidegrees are processed by ascending total degree; inside one, the
    new generators are the trace columns that are pivots after all products
    of earlier generators (deterministic leftmost pivots).  ``reverse``
    flips the order of the trace columns, which changes the chosen traces
    but not their number.
    """
    spec = spec or GenericMatrixSpec(n, d, (True,) * d)
    if (spec.n, spec.d) != (n, d):
        raise ValueError("spec does not match (n, d)")
    top = nagata_higman(n)
    if max_total_degree is None:
        max_total_degree = top
    if max_total_degree > top:
        raise ValueError(f"generators live in degree <= N({n}) = {top}")
    entries: list[Generator] = []
    for total in range(1, max_total_degree + 1):
        mds = multidegrees_of_total(total, d)
        earlier = list(entries)

        def one(md):
            return _new_in_multidegree(md, earlier, spec, seed, reverse)

        if threads > 1:
            with ThreadPoolExecutor(threads) as pool:
                found = list(pool.map(one, mds))
        else:
            found = [one(md) for md in mds]
        for md, words in zip(mds, found):
            for w in words:
                entries.append(Generator(f"t_{len(entries) + 1}", TracePolynomial.trace(w), md, format_word(w)))
            if progress:
                progress(f"generators {md}: {len(words)} new")
    return GeneratorTable(spec, tuple(entries), tuple(_split_generators(spec)), "computed")


def load_c33_generators(diagonal_first: bool = False) -> GeneratorTable:
    """The 48 named generators of the 3x3, three-letter case (45 traceless + 3 split)."""
    data = json.loads(resources.files("tracering.data").joinpath("c33_generators.json").read_text())
    return GeneratorTable.from_json(data, diagonal_first=diagonal_first, source="c33_generators.json")


def verify_generating_set(gens: GeneratorTable, seed=0) -> dict:
    """Check that ``gens`` is a minimal generating set up to degree ``N(n)``.

    Per multidegree: the definitions of that multidegree must be independent
    modulo products of lower generators, and together with those products
    must span every trace of the multidegree.  Returns ``{md: (ok, detail)}``
    for the failures only.
    """
    spec = gens.spec.without_diagonal()
    top = nagata_higman(gens.n)
    bad = {}
    for total in range(1, top + 1):
        for md in multidegrees_of_total(total, gens.d):
            here = [g for g in gens.entries if g.multidegree == md]
            lower = [g for g in gens.entries if sum(g.multidegree) < total]
            words = [w for w in necklaces(md) if not (len(w) == 1 and spec.traceless[w[0] - 1])]
            exps = exponent_vectors([g.multidegree for g in lower], md) if lower else []
            k = len(lower)
            atoms = [g.definition for g in lower] + [g.definition for g in here] + [TracePolynomial.trace(w) for w in words]
            items = [tuple((i, e) for i, e in enumerate(ex) if e) for ex in exps]
            items += [((k + i, 1),) for i in range(len(here))]
            items += [((k + len(here) + i, 1),) for i in range(len(words))]
            ker = certified_kernel(ImageFamily(atoms, items, spec), symbolic=True, seed=("verify", seed, md))
            piv = set(ker.pivots)
            n_low = len(exps)
            independent = all(j in piv for j in range(n_low, n_low + len(here)))
            spanning = not any(j >= n_low + len(here) for j in piv)
            if not (independent and spanning):
                bad[md] = {"independent": independent, "spanning": spanning}
    return bad
