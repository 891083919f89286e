"""Certification of a table of relation tuples.

Each candidate tuple ``M`` gives the relation ``r = R(F(M))``.  The checks:

(a) the letter count of ``M`` equals the declared multidegree, and ``r`` is
    homogeneous of that multidegree;
(b) ``pi(r) = 0``, symbolically up to a cutoff degree, at exact random
    points above it;
(c) ``r`` is not in ``L(md)``, the part of the relation space generated by
    lower-degree relations;
(d) per multidegree, the candidates together with ``L(md)`` fill the whole
    relation space ``K(md)``.
"""

from __future__ import annotations

import itertools
import json
import logging
from dataclasses import dataclass, field
from importlib import resources
from typing import Sequence

from ..gentable import GeneratorTable, format_tpoly
from ..identities import fundamental_identity
from ..images import ImageFamily
from ..matrix_eval import random_matrices
from ..reduction import Reducer, ReductionRule
from ..words import format_tuple, parse_tuple
from .relations import SYMBOLIC_CUTOFF, RelationIdeal, sparse_rank, tpoly_to_vector

log = logging.getLogger(__name__)

COMPLETENESS_LIMIT = 3000  # widest T-monomial basis for which (d) is attempted


@dataclass
class RelationCandidate:
    tuple: tuple
    declared: tuple
    block: int = 0
    position: int = 0
    reduced: object = None

    @property
    def multidegree(self) -> tuple:
        d = len(self.declared)
        return tuple(sum(w.count(k) for w in self.tuple) for k in range(1, d + 1))

    @property
    def text(self) -> str:
        return format_tuple(self.tuple)


def load_relation_table(path=None) -> list[RelationCandidate]:
    if path is None:
        text = resources.files("tracering.data").joinpath("c33_relations.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    data = json.loads(text)
    out = []
    for b, block in enumerate(data["blocks"]):
        for i, t in enumerate(block["tuples"]):
            out.append(RelationCandidate(parse_tuple(t), tuple(block["header"]), b, i))
    return out


def permute_letters(words: Sequence[Sequence[int]], perm: Sequence[int]) -> tuple:
    """Apply ``a -> perm[a-1]`` to every letter."""
    return tuple(tuple(perm[a - 1] for a in w) for w in words)


def _vanishes(r, gens: GeneratorTable, symbolic: bool, points: int, seed) -> bool:
    if r.is_zero():
        return True
    spec = gens.spec.without_diagonal()
    d = {tuple(int(e) for e in ex): c for ex, c in r.to_dict().items()}
    exps = list(d)
    items = [tuple((i, e) for i, e in enumerate(ex) if e) for ex in exps]
    fam = ImageFamily([g.definition for g in gens.entries], items, spec)
    from fractions import Fraction

    coeffs = {j: Fraction(int(d[e].p), int(d[e].q)) for j, e in enumerate(exps)}
    if symbolic:
        return fam.vanishes_symbolically(coeffs)
    for k in range(points):
        row = fam.values_at(random_matrices(spec, ("certify", seed, k)))
        if sum(c * row[j] for j, c in coeffs.items()) != 0:
            return False
    return True


@dataclass
class CertificationReport:
    rule: dict
    generators: str
    candidates: list = field(default_factory=list)
    multidegrees: list = field(default_factory=list)
    orbits: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        """No candidate failed a check; duplicates, corrections and redundancies are only flagged."""
        return not any(c["status"].startswith("failed") for c in self.all_candidates())

    def all_candidates(self) -> list:
        return self.candidates + (self.orbits["candidates"] if self.orbits else [])

    def summary(self) -> dict:
        from collections import Counter

        return {
            "candidates": len(self.candidates),
            "status": dict(sorted(Counter(c["status"] for c in self.candidates).items())),
            "complete": sum(1 for m in self.multidegrees if m["complete"] == "yes"),
            "incomplete": [m["multidegree"] for m in self.multidegrees if m["complete"] == "no"],
            "unverified": [m["multidegree"] for m in self.multidegrees if m["complete"] == "unverified"],
        }

    def to_json(self) -> dict:
        return {
            "summary": self.summary(),
            "candidates": self.candidates,
            "multidegrees": self.multidegrees,
            "orbits": self.orbits,
            "generators": self.generators,
            "rule": self.rule,
        }


def certify_relation_table(candidates: Sequence[RelationCandidate], rule: ReductionRule,
                           gens: GeneratorTable, *, reducer: Reducer | None = None,
                           ideal: RelationIdeal | None = None, seed=0, threads: int = 1,
                           symbolic_cutoff: int = SYMBOLIC_CUTOFF, points: int = 5,
                           completeness_limit: int = COMPLETENESS_LIMIT, orbit_degree: int = 0,
                           progress=None) -> CertificationReport:
    """Run checks (a)-(d) on every candidate; see the module docstring.

    ``orbit_degree`` extends the checks to all letter permutations of the
    candidates of at most that total degree.
    """
    reducer = reducer or Reducer(rule, gens, seed=seed)
    ideal = ideal or RelationIdeal(gens, seed, threads, progress)
    report = CertificationReport(rule.to_json(), gens.source or "computed")
    by_md: dict = {}
    seen: dict = {}
    for idx, cand in enumerate(candidates):
        entry = _check_candidate(cand, idx, seen, reducer, gens, symbolic_cutoff, points, seed)
        report.candidates.append(entry)
        if entry["status"] != "duplicate":
            by_md.setdefault(cand.multidegree, []).append((idx, cand.reduced))
        if progress:
            progress(f"candidate {entry['tuple']}: {entry['status']}")
    _fill_multidegrees(report.multidegrees, report.candidates, by_md, ideal, gens, completeness_limit, symbolic_cutoff)

    if orbit_degree:
        _orbits(report, candidates, reducer, ideal, gens, orbit_degree, symbolic_cutoff, points, seed,
                completeness_limit)
    return report


def _check_candidate(cand, idx, seen, reducer, gens, symbolic_cutoff, points, seed) -> dict:
    md = cand.multidegree
    entry = {
        "index": idx,
        "tuple": cand.text,
        "declared": list(cand.declared),
        "multidegree": list(md),
        "flags": [],
    }
    key = tuple(sorted(cand.tuple))
    if key in seen:
        entry["flags"].append(f"duplicate of #{seen[key]}")
        entry["status"] = "duplicate"
        entry["checks"] = {}
        return entry
    seen[key] = idx
    if md != tuple(cand.declared):
        entry["flags"].append("header contradicts letter count; filed under the computed multidegree")
    r = reducer(fundamental_identity(cand.tuple))
    cand.reduced = r
    homogeneous = all(gens.t_multidegree([int(a) for a in e]) == md for e in r.to_dict())
    checks = {"a": "pass" if homogeneous and md == tuple(cand.declared) else
              ("corrected" if homogeneous else "fail")}
    symbolic = sum(md) <= symbolic_cutoff
    checks["b"] = ("pass" if _vanishes(r, gens, symbolic, points, (seed, idx)) else "fail")
    checks["b_method"] = "symbolic" if symbolic else f"{points} random points"
    entry["checks"] = checks
    entry["terms"] = len(r)
    entry["reduced"] = format_tpoly(r, gens.labels())
    if checks["a"] == "fail":
        entry["status"] = "failed-a"
    elif checks["b"] == "fail":
        entry["status"] = "failed-b"
    else:
        entry["status"] = "pending"
    return entry


def _fill_multidegrees(out, entries, by_md, ideal, gens, completeness_limit, symbolic_cutoff):
    for md in sorted(by_md, key=lambda m: (sum(m), tuple(-a for a in m))):
        # candidates filed under their declared header go first
        cands = sorted(by_md[md], key=lambda c: (entries[c[0]]["checks"].get("a") != "pass", c[0]))
        exps = gens.monomial_exponents(md)
        index = {e: j for j, e in enumerate(exps)}
        low = [tpoly_to_vector(p, index) for p in ideal.lower_products(md)]
        base = sparse_rank(low, len(exps))
        rank = base
        span = list(low)
        for idx, r in cands:
            e = entries[idx]
            if e["status"] != "pending":
                continue
            v = tpoly_to_vector(r, index)
            alone = sparse_rank(low + [v], len(exps))
            e["checks"]["c"] = "pass" if alone > base else "fail"
            if alone == base:
                e["status"] = "failed-c"
                continue
            new = sparse_rank(span + [v], len(exps))
            if new > rank:
                span.append(v)
                rank = new
                e["status"] = "certified" if e["checks"]["a"] == "pass" else "certified-corrected"
            else:
                e["status"] = "redundant"
                e["flags"].append("dependent on earlier candidates of this multidegree")
        rec = {"multidegree": list(md), "monomials": len(exps), "lower": base,
               "candidates": len(cands), "new_from_candidates": rank - base}
        if len(exps) <= completeness_limit:
            sp = ideal.space(md)
            rec["relation_space"] = sp.dim
            rec["relation_space_certified"] = sp.certified
            rec["new_relations"] = sp.dim - base
            rec["complete"] = "yes" if rank == sp.dim else "no"
        else:
            rec["complete"] = "unverified"
        out.append(rec)


def _orbits(report, candidates, reducer, ideal, gens, orbit_degree, symbolic_cutoff, points, seed,
            completeness_limit):
    """Carry certified relations to the other multidegrees of their letter orbit.

    The relation ``r`` is moved by the automorphism of the generator ring
    induced by the letter permutation (permute the formal traces of the
    generators, then rewrite).  That automorphism maps relations to
    relations and lower-degree parts to lower-degree parts, so certified
    minimal relations stay minimal.
    """
    d = gens.d
    by_md: dict = {}
    entries = []
    for idx, cand in enumerate(candidates):
        base = report.candidates[idx]
        if base["status"] not in ("certified", "certified-corrected") or sum(cand.multidegree) > orbit_degree:
            continue
        # the first permutation reaching each multidegree
        done = {cand.multidegree}
        for perm in itertools.permutations(range(1, d + 1)):
            md = tuple(cand.multidegree[perm.index(k)] for k in range(1, d + 1))
            if md in done:
                continue
            done.add(md)
            r = reducer.permute(cand.reduced, perm)
            homogeneous = all(gens.t_multidegree([int(a) for a in e]) == md for e in r.to_dict())
            symbolic = sum(md) <= symbolic_cutoff
            ok = _vanishes(r, gens, symbolic, points, ("orbit", seed, len(entries)))
            entry = {
                "index": len(entries),
                "tuple": format_tuple(permute_letters(cand.tuple, perm)),
                "source": idx,
                "permutation": list(perm),
                "multidegree": list(md),
                "flags": [],
                "checks": {"a": "pass" if homogeneous else "fail", "b": "pass" if ok else "fail",
                           "b_method": "symbolic" if symbolic else f"{points} random points"},
                "terms": len(r),
            }
            entry["status"] = "failed-a" if not homogeneous else ("failed-b" if not ok else "pending")
            entries.append(entry)
            by_md.setdefault(md, []).append((entry["index"], r))
    mds: list = []
    _fill_multidegrees(mds, entries, by_md, ideal, gens, completeness_limit, symbolic_cutoff)
    report.orbits = {"candidates": entries, "multidegrees": mds} if entries else []
