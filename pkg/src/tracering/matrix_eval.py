"""Evaluation of formal traces on generic and on concrete matrices.

``pi`` sends a trace polynomial to the coordinate ring of ``d``-tuples of
``n x n`` matrices.  Coordinate-ring elements are FLINT ``fmpq_mpoly``
objects whose variables are the matrix entries, letter-major and row-major.
Two optional restrictions shrink the variable set:

* a *traceless* letter has its last diagonal entry replaced by minus the sum
  of the other diagonal entries;
* with ``diagonal_first`` the first letter is a diagonal matrix.

The second restriction is only sound for invariants (it loses nothing on a
dense set of conjugacy classes), so identity checks always use the full
variable set.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import flint

from .trace_algebra import TracePolynomial

ScalarPolynomial = flint.fmpq_mpoly


@dataclass(frozen=True)
class GenericMatrixSpec:
    n: int
    d: int
    traceless: tuple = ()
    diagonal_first: bool = False

    def __post_init__(self):
        if self.n < 1 or self.d < 1:
            raise ValueError("need n >= 1 and d >= 1")
        tl = self.traceless
        if isinstance(tl, bool):
            tl = (tl,) * self.d
        tl = tuple(bool(t) for t in tl) or (False,) * self.d
        if len(tl) != self.d:
            raise ValueError("one traceless flag per letter")
        object.__setattr__(self, "traceless", tl)

    @classmethod
    def plain(cls, n: int, d: int) -> "GenericMatrixSpec":
        return cls(n, d)

    @classmethod
    def all_traceless(cls, n: int, d: int, diagonal_first: bool = False) -> "GenericMatrixSpec":
        return cls(n, d, (True,) * d, diagonal_first)

    @property
    def traceless_letters(self) -> tuple[int, ...]:
        return tuple(k + 1 for k, t in enumerate(self.traceless) if t)

    def without_diagonal(self) -> "GenericMatrixSpec":
        return GenericMatrixSpec(self.n, self.d, self.traceless, False)

    def entry_variables(self, k: int) -> list[tuple[int, int]]:
        """Free entries ``(i, j)`` (0-based) of letter ``k``."""
        n = self.n
        cells = [(i, j) for i in range(n) for j in range(n)]
        if self.diagonal_first and k == 1:
            cells = [(i, i) for i in range(n)]
        if self.traceless[k - 1]:
            cells = [c for c in cells if c != (n - 1, n - 1)]
        return cells

    def variable_names(self) -> list[str]:
        return [f"x{k}_{i + 1}{j + 1}" for k in range(1, self.d + 1) for i, j in self.entry_variables(k)]

    def nvars(self) -> int:
        return sum(len(self.entry_variables(k)) for k in range(1, self.d + 1))


class CoordinateRing:
    """Generic matrices of a spec with a cache of symbolic traces."""

    def __init__(self, spec: GenericMatrixSpec):
        self.spec = spec
        names = spec.variable_names() or ["_unused"]
        self.ctx = flint.fmpq_mpoly_ctx.get(names, "degrevlex")
        gens = iter(self.ctx.gens())
        zero = self.ctx.from_dict({})
        n = spec.n
        self.matrices = {}
        for k in range(1, spec.d + 1):
            m = [[zero for _ in range(n)] for _ in range(n)]
            for i, j in spec.entry_variables(k):
                m[i][j] = next(gens)
            if spec.traceless[k - 1]:
                m[n - 1][n - 1] = -sum((m[i][i] for i in range(n - 1)), zero)
            self.matrices[k] = m
        self.zero = zero
        self.one = self.ctx.from_dict({(0,) * self.ctx.nvars(): 1})
        self._products: dict = {}
        self._traces: dict = {}

    def product(self, word: tuple) -> list:
        m = self._products.get(word)
        if m is None:
            if len(word) == 1:
                m = self.matrices[word[0]]
            else:
                left = self.product(word[:-1])
                right = self.matrices[word[-1]]
                n = self.spec.n
                m = [[sum((left[i][l] * right[l][j] for l in range(n)), self.zero) for j in range(n)]
                     for i in range(n)]
            # only short prefixes are worth keeping
            if len(word) <= 8:
                self._products[word] = m
        return m

    def trace(self, word: Sequence[int]) -> ScalarPolynomial:
        word = tuple(word)
        t = self._traces.get(word)
        if t is None:
            m = self.product(word)
            t = sum((m[i][i] for i in range(self.spec.n)), self.zero)
            self._traces[word] = t
        return t

    def pi(self, p: TracePolynomial) -> ScalarPolynomial:
        if p.max_letter() > self.spec.d:
            raise ValueError(f"letter {p.max_letter()} outside 1..{self.spec.d}")
        total = self.zero
        for m, c in p.items():
            term = self.ctx.from_dict({(0,) * self.ctx.nvars(): flint.fmpq(c.numerator, c.denominator)})
            for f in m:
                term = term * self.trace(f)
                if term.is_zero():
                    break
            total += term
        return total


@lru_cache(maxsize=None)
def coordinate_ring(spec: GenericMatrixSpec) -> CoordinateRing:
    return CoordinateRing(spec)


def generic_matrix(k: int, spec: GenericMatrixSpec) -> list[list[ScalarPolynomial]]:
    if not 1 <= k <= spec.d:
        raise ValueError(f"letter {k} outside 1..{spec.d}")
    return [list(r) for r in coordinate_ring(spec).matrices[k]]


def pi(p: TracePolynomial, spec: GenericMatrixSpec) -> ScalarPolynomial:
    """Image of a formal trace polynomial in the coordinate ring."""
    return coordinate_ring(spec).pi(p)


# ---------------------------------------------------------------- concrete points

def _matmul(a, b):
    n = len(a)
    return [[sum(a[i][l] * b[l][j] for l in range(n)) for j in range(n)] for i in range(n)]


class PointEvaluator:
    """Traces of words at one fixed tuple of matrices (any exact number type)."""

    def __init__(self, matrices: Sequence):
        self.matrices = [[list(r) for r in m] for m in matrices]
        if not self.matrices:
            raise ValueError("need at least one matrix")
        n = len(self.matrices[0])
        for m in self.matrices:
            if len(m) != n or any(len(r) != n for r in m):
                raise ValueError("all matrices must be square of the same size")
        self.n = n
        self._products: dict = {}
        self._traces: dict = {}

    def product(self, word: tuple):
        m = self._products.get(word)
        if m is None:
            if len(word) == 1:
                m = self.matrices[word[0] - 1]
            else:
                m = _matmul(self.product(word[:-1]), self.matrices[word[-1] - 1])
            self._products[word] = m
        return m

    def trace(self, word: Sequence[int]):
        word = tuple(word)
        t = self._traces.get(word)
        if t is None:
            if max(word) > len(self.matrices):
                raise ValueError(f"letter {max(word)} has no matrix")
            m = self.product(word)
            t = sum(m[i][i] for i in range(self.n))
            self._traces[word] = t
        return t

    def __call__(self, p: TracePolynomial):
        total = 0
        for mono, c in p.items():
            v = c
            for f in mono:
                v *= self.trace(f)
                if not v:
                    break
            total += v
        return total


def eval_at(p: TracePolynomial, matrices: Sequence) -> Fraction:
    """Exact value of ``pi(p)`` at a concrete tuple of rational matrices."""
    if p.max_letter() > len(matrices):
        raise ValueError(f"polynomial uses letter {p.max_letter()} but only {len(matrices)} matrices given")
    return Fraction(PointEvaluator(matrices)(p))


def _fill(spec: GenericMatrixSpec, draw) -> list:
    n = spec.n
    out = []
    for k in range(1, spec.d + 1):
        m = [[0] * n for _ in range(n)]
        for i, j in spec.entry_variables(k):
            m[i][j] = draw()
        if spec.traceless[k - 1]:
            m[n - 1][n - 1] = -sum(m[i][i] for i in range(n - 1))
        out.append(m)
    return out


def random_matrices(spec: GenericMatrixSpec, seed) -> list[list[list[Fraction]]]:
    """Seeded rational matrices: numerators in [-9, 9], denominators in [1, 4]."""
    rng = random.Random(seed if isinstance(seed, (int, str)) else repr(seed))
    return _fill(spec, lambda: Fraction(rng.randint(-9, 9), rng.randint(1, 4)))


def random_integer_matrices(spec: GenericMatrixSpec, rng: random.Random, bound: int = 9) -> list:
    """Integer point for rank computations; homogeneity makes rational points redundant."""
    return _fill(spec, lambda: rng.randint(-bound, bound))
