"""Named generating sets of trace algebras and the polynomial rings on them."""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import flint

from .matrix_eval import GenericMatrixSpec
from .trace_algebra import TracePolynomial, exponent_vectors


@dataclass(frozen=True)
class Generator:
    label: str
    definition: TracePolynomial
    multidegree: tuple
    group: str = ""  # weight-group tag, kept as an opaque label

    @property
    def degree(self) -> int:
        return sum(self.multidegree)


@dataclass
class GeneratorTable:
    """Ordered generators ``T_1..T_k`` of a trace algebra.

    ``entries`` are the variables of the polynomial ring ``C_E``.  When the
    spec makes letters traceless, the traces ``tr(X_k)`` of the original
    matrices split off as a free polynomial factor; they are kept in
    ``split`` and never take part in relations or rewriting.
    """

    spec: GenericMatrixSpec
    entries: tuple
    split: tuple = ()
    source: str = ""
    _index: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.entries = tuple(self.entries)
        self.split = tuple(self.split)
        self._index = {g.label: i for i, g in enumerate(self.entries)}

    @property
    def n(self) -> int:
        return self.spec.n

    @property
    def d(self) -> int:
        return self.spec.d

    def __len__(self) -> int:
        return len(self.entries) + len(self.split)

    def __iter__(self):
        return iter(self.split + self.entries)

    def labels(self) -> list[str]:
        return [g.label for g in self.entries]

    def index(self, label: str) -> int:
        return self._index[label]

    def degrees(self) -> list[int]:
        return [g.degree for g in self.split + self.entries]

    def multiplicities(self) -> dict[int, int]:
        return dict(sorted(Counter(self.degrees()).items()))

    def multidegrees(self) -> list[tuple]:
        return [g.multidegree for g in self.entries]

    # polynomial ring on the generators ----------------------------------
    @cached_property
    def ring(self) -> flint.fmpq_mpoly_ctx:
        names = [g.label for g in self.entries] or ["_unused"]
        return flint.fmpq_mpoly_ctx.get(names, "degrevlex")

    def variable(self, label: str):
        return self.ring.gens()[self.index(label)]

    def monomial_exponents(self, md: Sequence[int]) -> list[tuple[int, ...]]:
        """T-monomials of multidegree ``md`` (descending lexicographic exponents)."""
        return exponent_vectors(self.multidegrees(), md)

    def t_multidegree(self, exps: Sequence[int]) -> tuple:
        total = [0] * self.d
        for e, g in zip(exps, self.entries):
            for i, c in enumerate(g.multidegree):
                total[i] += e * c
        return tuple(total)

    def definition_of(self, exps: Sequence[int]) -> TracePolynomial:
        """The trace polynomial represented by a T-monomial."""
        p = TracePolynomial.one()
        for e, g in zip(exps, self.entries):
            if e:
                p = p * g.definition ** e
        return p

    def substitute(self, tpoly) -> TracePolynomial:
        """Replace every ``T_i`` by its defining trace polynomial."""
        out = TracePolynomial()
        for exps, c in tpoly.to_dict().items():
            out = out + self.definition_of([int(e) for e in exps]) * _fraction(c)
        return out

    def format_tpoly(self, tpoly) -> str:
        return format_tpoly(tpoly, self.labels())

    # serialisation ------------------------------------------------------
    def to_json(self) -> dict:
        def one(g, kind):
            return {
                "label": g.label,
                "kind": kind,
                "group": g.group,
                "multidegree": list(g.multidegree),
                "definition": g.definition.to_json(),
            }

        return {
            "n": self.n,
            "d": self.d,
            "traceless": list(self.spec.traceless),
            "generators": [one(g, "split") for g in self.split] + [one(g, "trace") for g in self.entries],
        }

    @classmethod
    def from_json(cls, data: dict, diagonal_first: bool = False, source: str = "") -> "GeneratorTable":
        spec = GenericMatrixSpec(data["n"], data["d"], tuple(data.get("traceless", ())), diagonal_first)
        split, entries = [], []
        for g in data["generators"]:
            gen = Generator(
                g["label"],
                TracePolynomial.from_json(g["definition"]),
                tuple(g["multidegree"]),
                g.get("group", ""),
            )
            (split if g.get("kind") == "split" else entries).append(gen)
        return cls(spec, tuple(entries), tuple(split), source)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)

    def with_spec(self, spec: GenericMatrixSpec) -> "GeneratorTable":
        return GeneratorTable(spec, self.entries, self.split, self.source)


def _fraction(c):
    from fractions import Fraction

    return Fraction(int(c.p), int(c.q))


def parse_tpoly(text: str, ctx):
    """Inverse of :func:`format_tpoly` in the ring ``ctx`` (labels as variable names)."""
    from fractions import Fraction

    from .errors import ParseError

    names = ctx.names()
    index = {nm: i for i, nm in enumerate(names)}
    terms: dict = {}
    body = text.replace(" ", "")
    if not body:
        raise ParseError("empty polynomial")
    if body[0] not in "+-":
        body = "+" + body
    for m in re.finditer(r"([+-])([^+-]+)", body):
        sign = -1 if m.group(1) == "-" else 1
        coeff = Fraction(1)
        exps = [0] * len(names)
        for factor in m.group(2).split("*"):
            if not factor:
                raise ParseError(f"bad term {m.group(0)!r}")
            name, _, power = factor.partition("^")
            if name in index:
                exps[index[name]] += int(power or 1)
            else:
                try:
                    coeff *= Fraction(name) ** int(power or 1)
                except (ValueError, ZeroDivisionError):
                    raise ParseError(f"unknown symbol {name!r}") from None
        key = tuple(exps)
        terms[key] = terms.get(key, 0) + sign * coeff
    return ctx.from_dict({k: flint.fmpq(c.numerator, c.denominator) for k, c in terms.items() if c})


def format_tpoly(tpoly, labels: Sequence[str]) -> str:
    """Human-readable form such as ``1/6*t_1*t_2 + 1/3*t_4^2``."""
    items = sorted(tpoly.to_dict().items(), key=lambda kv: tuple(-e for e in kv[0]))
    if not items:
        return "0"
    parts = []
    for exps, c in items:
        mono = "*".join(
            (labels[i] if e == 1 else f"{labels[i]}^{e}") for i, e in enumerate(exps) if e
        )
        q = _fraction(c)
        mag = abs(q)
        body = mono if mag == 1 and mono else (f"{mag}*{mono}" if mono else str(mag))
        parts.append(("-" if q < 0 else "+", body))
    s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        s += f" {sign} {body}"
    return s
