"""Exact linear algebra over the rationals.

Matrices are stored sparsely (one ``dict`` per row, no stored zeros).  The
reduced row echelon form is unique, so every derived object here (pivot
columns, kernel bases, particular solutions) is determined by the matrix
alone; the backend only changes the running time.  Small systems are
eliminated in pure Python; large ones go through FLINT's ``fmpq_mat``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

import flint

from .errors import NoSolution

Rational = Fraction

# matrices with more stored cells than this are handed to FLINT
FLINT_THRESHOLD = 20_000


class RationalMatrix:
    """Immutable sparse matrix with :class:`fractions.Fraction` entries."""

    __slots__ = ("nrows", "ncols", "_rows")

    def __init__(self, nrows: int, ncols: int, rows: Iterable[dict] = ()):
        self.nrows = nrows
        self.ncols = ncols
        data = [dict() for _ in range(nrows)]
        for i, row in enumerate(rows):
            if i >= nrows:
                raise ValueError("too many rows")
            clean = {}
            for j, v in row.items():
                if not 0 <= j < ncols:
                    raise IndexError(f"column {j} out of range")
                v = Fraction(v)
                if v:
                    clean[j] = v
            data[i] = clean
        self._rows = tuple(data)

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence], ncols: int | None = None) -> "RationalMatrix":
        rows = [list(r) for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix")
        return cls(len(rows), ncols, ({j: v for j, v in enumerate(r) if v} for r in rows))

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "RationalMatrix":
        return cls(nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(n, n, ({i: 1} for i in range(n)))

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def row(self, i: int) -> dict:
        return dict(self._rows[i])

    def rows(self) -> list[dict]:
        return [dict(r) for r in self._rows]

    @property
    def entries(self) -> dict:
        return {(i, j): v for i, r in enumerate(self._rows) for j, v in r.items()}

    def nnz(self) -> int:
        return sum(len(r) for r in self._rows)

    def to_dense(self) -> list[list[Fraction]]:
        out = []
        for r in self._rows:
            dense = [Fraction(0)] * self.ncols
            for j, v in r.items():
                dense[j] = v
            out.append(dense)
        return out

    def transpose(self) -> "RationalMatrix":
        cols = [dict() for _ in range(self.ncols)]
        for i, r in enumerate(self._rows):
            for j, v in r.items():
                cols[j][i] = v
        return RationalMatrix(self.ncols, self.nrows, cols)

    def columns(self, idx: Sequence[int]) -> "RationalMatrix":
        pos = {c: k for k, c in enumerate(idx)}
        rows = ({pos[j]: v for j, v in r.items() if j in pos} for r in self._rows)
        return RationalMatrix(self.nrows, len(idx), rows)

    def __matmul__(self, vec: Sequence) -> list[Fraction]:
        if len(vec) != self.ncols:
            raise ValueError("dimension mismatch")
        return [sum((v * vec[j] for j, v in r.items()), Fraction(0)) for r in self._rows]

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self):
        return hash((self.shape, tuple(tuple(sorted(r.items())) for r in self._rows)))

    def __repr__(self) -> str:
        return f"RationalMatrix({self.nrows}x{self.ncols}, nnz={self.nnz()})"


# ---------------------------------------------------------------- backends

def _rref_python(rows: list[dict], ncols: int) -> tuple[list[dict], list[int]]:
    """Incremental Gauss-Jordan; rows are consumed top-down."""
    basis: dict[int, dict] = {}  # pivot column -> normalised row
    for row in rows:
        r = dict(row)
        # reduce against existing pivots, in increasing pivot order
        for p in sorted(c for c in r if c in basis):
            f = r.get(p)
            if not f:
                continue
            for j, v in basis[p].items():
                w = r.get(j, 0) - f * v
                if w:
                    r[j] = w
                else:
                    r.pop(j, None)
        if not r:
            continue
        lead = min(r)
        inv = 1 / r[lead]
        r = {j: v * inv for j, v in r.items()}
        for p, prow in basis.items():
            f = prow.get(lead)
            if f:
                for j, v in r.items():
                    w = prow.get(j, 0) - f * v
                    if w:
                        prow[j] = w
                    else:
                        prow.pop(j, None)
        basis[lead] = r
    pivots = sorted(basis)
    return [basis[p] for p in pivots], pivots


def _to_fmpq_mat(rows: list[dict], ncols: int) -> flint.fmpq_mat:
    m = flint.fmpq_mat(len(rows), ncols)
    for i, r in enumerate(rows):
        for j, v in r.items():
            m[i, j] = flint.fmpq(v.numerator, v.denominator)
    return m


def _fmpq_to_fraction(q) -> Fraction:
    return Fraction(int(q.p), int(q.q))


def _rref_flint(rows: list[dict], ncols: int) -> tuple[list[dict], list[int]]:
    if not rows or ncols == 0:
        return [], []
    m, rk = _to_fmpq_mat(rows, ncols).rref()
    out, pivots = [], []
    for i in range(rk):
        r = {}
        for j in range(ncols):
            q = m[i, j]
            if q != 0:
                r[j] = _fmpq_to_fraction(q)
        pivots.append(min(r))
        out.append(r)
    return out, pivots


def _rref_rows(m: RationalMatrix, backend: str) -> tuple[list[dict], list[int]]:
    if backend == "auto":
        backend = "flint" if m.nrows * m.ncols > FLINT_THRESHOLD else "python"
    if backend == "python":
        return _rref_python(m.rows(), m.ncols)
    if backend == "flint":
        return _rref_flint(m.rows(), m.ncols)
    raise ValueError(f"unknown backend {backend!r}")


# ---------------------------------------------------------------- public API

def rref(m: RationalMatrix, backend: str = "auto") -> tuple[RationalMatrix, tuple[int, ...]]:
    """Reduced row echelon form and the tuple of pivot columns.

    Zero rows are kept at the bottom so the result has the shape of ``m``.
    """
    rows, pivots = _rref_rows(m, backend)
    return RationalMatrix(m.nrows, m.ncols, rows), tuple(pivots)


def rank(m: RationalMatrix, backend: str = "auto") -> int:
    if backend == "auto" and m.nrows * m.ncols > FLINT_THRESHOLD:
        if m.nnz() == 0:
            return 0
        return _to_fmpq_mat(m.rows(), m.ncols).rank()
    return len(_rref_rows(m, backend)[1])


def kernel_from_rref(rows: list[dict], pivots: Sequence[int], ncols: int) -> list[list[Fraction]]:
    """Canonical nullspace basis: one vector per free column, ascending."""
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, p in zip(rows, pivots):
            c = r.get(f)
            if c:
                v[p] = -c
        basis.append(v)
    return basis


def kernel_basis(m: RationalMatrix, backend: str = "auto") -> list[list[Fraction]]:
    """Basis of the right nullspace ``{v : m v = 0}``.

    Free variables are set to 1 one at a time in ascending column order, so
    the basis depends only on the nullspace itself and the column order.
    """
    rows, pivots = _rref_rows(m, backend)
    return kernel_from_rref(rows, pivots, m.ncols)


def solve(m: RationalMatrix, b: Sequence, backend: str = "auto", free=None) -> list[Fraction]:
    """One solution of ``m x = b``.

    Free variables are zero, or ``free(j)`` for free column ``j`` when a
    callable is given (called in ascending column order).  Raises
    :class:`NoSolution` when ``b`` is not in the column span.
    """
    if len(b) != m.nrows:
        raise ValueError(f"right-hand side has length {len(b)}, expected {m.nrows}")
    aug = [dict(r) for r in m.rows()]
    for i, v in enumerate(b):
        v = Fraction(v)
        if v:
            aug[i][m.ncols] = v
    rows, pivots = _rref_rows(RationalMatrix(m.nrows, m.ncols + 1, aug), backend)
    if pivots and pivots[-1] == m.ncols:
        raise NoSolution("right-hand side is not in the column span")
    x = [Fraction(0)] * m.ncols
    if free is not None:
        pivset = set(pivots)
        for j in range(m.ncols):
            if j not in pivset:
                x[j] = Fraction(free(j))
    for r, p in zip(rows, pivots):
        v = r.get(m.ncols, Fraction(0))
        if free is not None:
            v -= sum((c * x[j] for j, c in r.items() if j != p and j < m.ncols), Fraction(0))
        x[p] = v
    return x


def span_rank(vectors: Iterable[dict], ncols: int) -> int:
    """Rank of a family of sparse row vectors given as ``{col: value}`` dicts."""
    rows = [r for r in vectors if r]
    if not rows:
        return 0
    return rank(RationalMatrix(len(rows), ncols, rows))
