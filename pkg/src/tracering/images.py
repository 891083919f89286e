"""Linear dependencies among images of trace polynomials, computed exactly.

The coefficient matrix of a family of images (rows indexed by monomials in
the matrix entries) is tall and large.  Its kernel is computed instead from
the values of the family at random integer points:

* the kernel of the point-value matrix always *contains* the true kernel,
  and its pivot columns are truly independent;
* every basis vector of that kernel is then checked on the images
  themselves, symbolically or at fresh points, so the output equals the
  canonical (rref-derived) kernel of the coefficient matrix.

A failed check means the points were unlucky; more points are drawn.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import flint

from .errors import VerificationError
from .matrix_eval import GenericMatrixSpec, PointEvaluator, coordinate_ring, random_integer_matrices
from .trace_algebra import TracePolynomial

log = logging.getLogger(__name__)

Item = tuple  # ((atom index, exponent), ...)


@dataclass
class KernelResult:
    ncols: int
    pivots: tuple
    basis: list  # list of {col: Fraction}, one per free column, ascending
    points: int

    @property
    def rank(self) -> int:
        return len(self.pivots)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def dense(self) -> list[list[Fraction]]:
        out = []
        for v in self.basis:
            row = [Fraction(0)] * self.ncols
            for j, c in v.items():
                row[j] = c
            out.append(row)
        return out


def _rref_values(values: list[list], ncols: int):
    """rref of the point-value matrix -> (pivots, {free col: {pivot col: coeff}})."""
    if all(isinstance(v, int) for row in values for v in row):
        m = flint.fmpz_mat(values)
        r, rk, den = _fmpz_rref(m)
        den = int(den)
        scale = lambda q: Fraction(int(q), den)
    else:
        m = flint.fmpq_mat(len(values), ncols)
        for i, row in enumerate(values):
            for j, v in enumerate(row):
                if v:
                    v = Fraction(v)
                    m[i, j] = flint.fmpq(v.numerator, v.denominator)
        r, rk = m.rref()
        scale = lambda q: Fraction(int(q.p), int(q.q))
    pivots = []
    rows = []
    for i in range(rk):
        j = 0
        while r[i, j] == 0:
            j += 1
        pivots.append(j)
        rows.append(i)
    pivset = set(pivots)
    deps = {}
    for f in range(ncols):
        if f in pivset:
            continue
        v = {f: Fraction(1)}
        for i, p in zip(rows, pivots):
            q = r[i, f]
            if q != 0:
                v[p] = -scale(q)
        deps[f] = v
    return tuple(pivots), deps


def _fmpz_rref(m):
    # python-flint returns (rref, denominator, rank); every pivot equals the denominator
    r, den, rk = m.rref()
    return r, rk, den


class ImageFamily:
    """Columns ``item_j = prod atom_i ** e_i`` over a fixed list of atoms."""

    def __init__(self, atoms: Sequence[TracePolynomial], items: Sequence[Item], spec: GenericMatrixSpec):
        self.atoms = list(atoms)
        self.items = [tuple(it) for it in items]
        self.spec = spec
        self._sym_atoms: dict = {}

    @classmethod
    def of_polynomials(cls, polys: Sequence[TracePolynomial], spec: GenericMatrixSpec) -> "ImageFamily":
        return cls(polys, [((i, 1),) for i in range(len(polys))], spec)

    def __len__(self):
        return len(self.items)

    # numeric -------------------------------------------------------------
    def values_at(self, matrices) -> list:
        ev = PointEvaluator(matrices)
        atom_vals: dict = {}
        row = []
        for it in self.items:
            v = 1
            for a, e in it:
                x = atom_vals.get(a)
                if x is None:
                    x = ev(self.atoms[a])
                    if isinstance(x, Fraction) and x.denominator == 1:
                        x = int(x)
                    atom_vals[a] = x
                v *= x ** e
            row.append(v)
        return row

    def value_matrix(self, npoints: int, rng: random.Random, spec: GenericMatrixSpec | None = None) -> list:
        spec = spec or self.spec
        return [self.values_at(random_integer_matrices(spec, rng)) for _ in range(npoints)]

    # symbolic ------------------------------------------------------------
    def atom_image(self, a: int):
        img = self._sym_atoms.get(a)
        if img is None:
            img = coordinate_ring(self.spec).pi(self.atoms[a])
            self._sym_atoms[a] = img
        return img

    def item_image(self, j: int):
        ring = coordinate_ring(self.spec)
        img = ring.one
        for a, e in self.items[j]:
            img = img * self.atom_image(a) ** e
        return img

    def combination_image(self, coeffs: dict):
        ring = coordinate_ring(self.spec)
        total = ring.zero
        for j, c in coeffs.items():
            total += self.item_image(j) * flint.fmpq(c.numerator, c.denominator)
        return total

    def vanishes_symbolically(self, coeffs: dict) -> bool:
        return self.combination_image(coeffs).is_zero()

    def vanishes_at_points(self, coeffs: dict, npoints: int, rng: random.Random) -> bool:
        spec = self.spec
        for _ in range(npoints):
            row = self.values_at(random_integer_matrices(spec, rng, bound=30))
            if sum(c * row[j] for j, c in coeffs.items()) != 0:
                return False
        return True


def certified_kernel(
    family: ImageFamily,
    *,
    symbolic: bool = True,
    seed=0,
    margin: int = 8,
    rank_hint: int | None = None,
    verify_points: int = 5,
    max_rounds: int = 6,
) -> KernelResult:
    """Canonical kernel basis of the coefficient matrix of ``family``'s images.

    ``symbolic`` selects exact expansion for the final check of every kernel
    vector; otherwise each vector must vanish at ``verify_points`` fresh
    random points.
    """
    m = len(family)
    if m == 0:
        return KernelResult(0, (), [], 0)
    rng = random.Random(repr(("kernel", seed)))
    npoints = min(m, rank_hint if rank_hint is not None else m) + margin
    values: list = []
    for round_ in range(max_rounds):
        values.extend(family.value_matrix(npoints - len(values), rng))
        pivots, deps = _rref_values(values, m)
        if len(pivots) >= len(values):
            # every point gave a new direction; the rank may be larger still
            npoints = 2 * npoints
            continue
        bad = None
        for f, coeffs in deps.items():
            ok = (family.vanishes_symbolically(coeffs) if symbolic
                  else family.vanishes_at_points(coeffs, verify_points, rng))
            if not ok:
                bad = f
                break
        if bad is None:
            basis = [deps[f] for f in sorted(deps)]
            return KernelResult(m, pivots, basis, len(values))
        log.info("kernel vector for column %d did not vanish; drawing more points", bad)
        npoints = len(values) + 2 * margin + len(pivots) // 4
    raise VerificationError(f"could not certify a kernel of {m} columns after {max_rounds} rounds")
