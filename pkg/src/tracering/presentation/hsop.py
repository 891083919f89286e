"""The homogeneous system of parameters of the 3x3, three-letter trace algebra.

Only consistency is checked here: the element count equals the Krull
dimension, the variable elimination is well defined and degree preserving,
every element (rewritten in the generators) and every stated parameter dies
under it, and the three degree-4 rewriting identities hold.  Being a
regular sequence is not checked.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from importlib import resources

import flint

from ..errors import ParseError
from ..gentable import GeneratorTable, format_tpoly, parse_tpoly
from ..reduction import Reducer, RewriteTable
from ..trace_algebra import TracePolynomial
from .bounds import krull_dimension

LETTERS = {"x": 1, "y": 2, "z": 3}


def parse_power_word(text: str) -> tuple:
    """``"x^2y^2"`` -> ``(1, 1, 2, 2)``; also accepts ``tr(...)`` around it."""
    body = text.strip()
    m = re.fullmatch(r"tr\((.*)\)", body)
    if m:
        body = m.group(1)
    out: list[int] = []
    pos = 0
    for m in re.finditer(r"([a-z])(?:\^(\d+))?", body):
        if m.start() != pos or m.group(1) not in LETTERS:
            raise ParseError(f"bad word {text!r}")
        out += [LETTERS[m.group(1)]] * int(m.group(2) or 1)
        pos = m.end()
    if pos != len(body) or not out:
        raise ParseError(f"bad word {text!r}")
    return tuple(out)


@dataclass
class HsopElement:
    degree: int
    definition: TracePolynomial | None = None  # None for a split trace
    letter: int | None = None


@dataclass
class HsopTable:
    n: int
    d: int
    elements: list
    parameters: list = field(default_factory=list)  # the elements written in generators
    substitutions: dict = field(default_factory=dict)
    identities: list = field(default_factory=list)  # (trace text, expression)

    @property
    def degrees(self) -> list[int]:
        return [e.degree for e in self.elements]

    @classmethod
    def from_json(cls, data: dict) -> "HsopTable":
        elems = []
        for e in data["elements"]:
            if e["kind"] == "split":
                elems.append(HsopElement(e["degree"], None, e["letter"]))
            else:
                elems.append(HsopElement(e["degree"], TracePolynomial.from_json(e["definition"])))
        return cls(data["n"], data["d"], elems, list(data.get("parameters_in_generators", [])),
                   dict(data.get("substitutions", {})), [tuple(p) for p in data.get("degree4_identities", [])])


def load_c33_hsop() -> HsopTable:
    return HsopTable.from_json(json.loads(resources.files("tracering.data").joinpath("c33_hsop.json").read_text()))


def _full_ring(gens: GeneratorTable):
    names = [g.label for g in gens.split] + gens.labels()
    return flint.fmpq_mpoly_ctx.get(names, "degrevlex")


def _embed(p, ctx, offset: int):
    """Move a polynomial on the non-split generators into the ring with the split ones in front."""
    pad = (0,) * offset
    return ctx.from_dict({pad + tuple(int(a) for a in e): c for e, c in p.to_dict().items()})


def hsop_consistency(h: HsopTable, gens: GeneratorTable, reducer: Reducer | None = None,
                     table: RewriteTable | None = None) -> dict:
    """Run the consistency checks; ``report["ok"]`` is their conjunction."""
    table = table or (reducer.table if reducer else RewriteTable(gens))
    ctx = _full_ring(gens)
    names = ctx.names()
    nsplit = len(gens.split)
    split_label = {g.multidegree.index(1) + 1: g.label for g in gens.split}
    degree = {g.label: g.degree for g in gens.split + gens.entries}
    report: dict = {}

    dim = krull_dimension(h.n, h.d)
    report["count"] = {"elements": len(h.elements), "krull_dimension": dim, "ok": len(h.elements) == dim}
    report["degree_sum"] = sum(h.degrees)

    # the elimination: targets avoid eliminated symbols and keep the degree
    subs = {k: parse_tpoly(v, ctx) for k, v in h.substitutions.items()}
    eliminated = set(subs)
    bad = []
    for k, v in subs.items():
        used = {names[i] for ex in v.to_dict() for i, a in enumerate(ex) if a}
        if used & eliminated:
            bad.append(f"{k}: target uses eliminated {sorted(used & eliminated)}")
        if any(_deg(ex, names, degree) != degree[k] for ex in v.to_dict()):
            bad.append(f"{k}: target changes the degree")
    images = [subs.get(nm, ctx.gens()[i]) for i, nm in enumerate(names)]

    def killed(p) -> bool:
        return p.compose(*images, ctx=ctx).is_zero()

    # every element, written in generators, dies under the elimination
    rows = []
    for i, e in enumerate(h.elements):
        if e.definition is None:
            got = ctx.gens()[names.index(split_label[e.letter])]
        else:
            got = _embed(_rewrite(e.definition, table, gens), ctx, nsplit)
        homogeneous = all(_deg(ex, names, degree) == e.degree for ex in got.to_dict())
        rows.append({"index": i, "degree": e.degree, "rewrites_to": format_tpoly(got, names),
                     "homogeneous": homogeneous, "killed": killed(got)})
    report["elements"] = rows
    stated = [parse_tpoly(t, ctx) for t in h.parameters]
    stated_degrees = sorted(_deg(next(iter(p.to_dict())), names, degree) for p in stated if not p.is_zero())
    report["parameters"] = {
        "count": len(stated),
        "degrees_match": stated_degrees == sorted(h.degrees),
        "killed": all(killed(p) for p in stated),
    }
    report["substitution"] = {"problems": bad, "kills_elements": all(r["killed"] for r in rows),
                              "ok": not bad and all(r["killed"] and r["homogeneous"] for r in rows)}

    # degree-4 rewriting identities
    ids = []
    for lhs, rhs in h.identities:
        got = _embed(table.lookup(parse_power_word(lhs)), ctx, nsplit)
        ids.append({"trace": lhs, "expected": rhs, "got": format_tpoly(got, names),
                    "ok": got == parse_tpoly(rhs, ctx)})
    report["identities"] = ids
    par = report["parameters"]
    report["ok"] = (report["count"]["ok"] and report["substitution"]["ok"]
                    and par["degrees_match"] and par["killed"] and par["count"] == len(h.elements)
                    and all(r["ok"] for r in ids))
    return report


def _rewrite(p: TracePolynomial, table: RewriteTable, gens: GeneratorTable):
    ring = gens.ring
    total = ring.from_dict({})
    one = ring.from_dict({(0,) * ring.nvars(): 1})
    for m, c in p.items():
        term = one * flint.fmpq(c.numerator, c.denominator)
        for f in m:
            term = term * table.lookup(f)
        total += term
    return total


def _deg(ex, names, degree) -> int:
    return sum(int(a) * degree[names[i]] for i, a in enumerate(ex))
