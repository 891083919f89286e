"""Degree bounds for the defining relations of a trace algebra.

For a graded Cohen-Macaulay algebra with generator degrees
``d_1 >= d_2 >= ...``, Krull dimension ``dim`` and a-invariant ``a``, the
relations live in degree at most ``d_1 + ... + d_{dim+1} + a``.  Modulo a
homogeneous system of parameters the same argument gives
``max(d_i) + a + sum(hsop degrees)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

from ..errors import ParseError


@dataclass(frozen=True)
class BoundInput:
    degrees: tuple  # generator degrees, descending
    dim: int
    a: int

    def __post_init__(self):
        object.__setattr__(self, "degrees", tuple(sorted((int(x) for x in self.degrees), reverse=True)))


def krull_dimension(n: int, d: int) -> int:
    """Dimension of the trace algebra of ``d`` generic ``n x n`` matrices (``d >= 2``)."""
    if d == 1:
        return n
    return (d - 1) * n * n + 1


def derksen_bound(b: BoundInput) -> int:
    if len(b.degrees) < b.dim + 1:
        raise ValueError(f"need at least dim+1 = {b.dim + 1} degrees, got {len(b.degrees)}")
    return sum(b.degrees[: b.dim + 1]) + b.a


def generic_bound(n: int, d: int) -> int:
    """The bound with every generator degree at most ``n**2`` and ``a = -dim``."""
    dim = krull_dimension(n, d)
    return derksen_bound(BoundInput((n * n,) * (dim + 1), dim, -dim))


def hsop_bound(generator_degrees: Sequence[int], hsop_degrees: Sequence[int], a: int) -> int:
    """Bound modulo an hsop: ``max(d_i) + a + sum(hsop degrees)``."""
    return max(generator_degrees) + a + sum(hsop_degrees)


_TERM = re.compile(r"^\s*(\d+)\s*(?:[x^]\s*(\d+))?\s*$")


def parse_degrees(text: str) -> list[int]:
    """``"6x10,5x9,1"`` -> ten 6s, nine 5s and one 1."""
    out: list[int] = []
    for part in text.split(","):
        if not part.strip():
            continue
        m = _TERM.match(part)
        if not m:
            raise ParseError(f"bad degree term {part!r}; expected DEGREExCOUNT")
        deg, count = int(m.group(1)), int(m.group(2) or 1)
        out.extend([deg] * count)
    if not out:
        raise ParseError("no degrees given")
    return sorted(out, reverse=True)
