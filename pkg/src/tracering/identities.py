"""The fundamental trace identity and its multilinear arguments."""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Sequence

from .errors import UnsupportedError
from .trace_algebra import TracePolynomial, make_monomial
from .words import Word

# Nagata-Higman numbers: generators of the trace algebra live in degree <= N(n)
NAGATA_HIGMAN = {1: 1, 2: 3, 3: 6, 4: 10}

Permutation = tuple  # images of 0..k-1


def nagata_higman(n: int) -> int:
    try:
        return NAGATA_HIGMAN[n]
    except KeyError:
        raise UnsupportedError(f"N({n}) is not known; supported sizes are 1..4") from None


def cycles(perm: Sequence[int]) -> list[tuple[int, ...]]:
    """Cycle decomposition; each cycle starts at its least element."""
    seen = set()
    out = []
    for start in range(len(perm)):
        if start in seen:
            continue
        cyc = []
        i = start
        while i not in seen:
            seen.add(i)
            cyc.append(i)
            i = perm[i]
        out.append(tuple(cyc))
    return out


def sign(perm: Sequence[int]) -> int:
    return -1 if sum(len(c) - 1 for c in cycles(perm)) % 2 else 1


def from_cycles(text: str, size: int) -> Permutation:
    """Parse 1-based cycle notation such as ``"(12)(3)"``."""
    images = list(range(size))
    for body in text.replace(" ", "").strip("()").split(")("):
        if not body:
            continue
        pts = [int(c) - 1 for c in body]
        for a, b in zip(pts, pts[1:] + pts[:1]):
            images[a] = b
    if sorted(images) != list(range(size)):
        raise ValueError(f"not a permutation: {text!r}")
    return tuple(images)


def tr_sigma(perm: Sequence[int], args: Sequence[Word]):
    """Product over the cycles ``(i, perm(i), ...)`` of ``Tr(M_i M_perm(i) ...)``."""
    if len(perm) != len(args):
        raise ValueError(f"permutation of {len(perm)} points applied to {len(args)} arguments")
    factors = [tuple(a for i in cyc for a in args[i]) for cyc in cycles(perm)]
    return make_monomial(factors)


@lru_cache(maxsize=None)
def _signed_permutations(k: int) -> tuple:
    # normalised so that the full cycles carry coefficient +1
    full = (-1) ** (k - 1)
    return tuple((p, sign(p) * full) for p in itertools.permutations(range(k)))


def fundamental_identity(args: Sequence[Sequence[int]], n: int | None = None) -> TracePolynomial:
    """Signed sum over the symmetric group of the cycle products of ``args``.

    ``args`` must have ``n + 1`` nonempty words.  The overall sign is fixed
    so that every term consisting of one full-length trace has coefficient 1.
    """
    args = tuple(tuple(a) for a in args)
    if n is not None and len(args) != n + 1:
        raise ValueError(f"the identity for {n}x{n} matrices takes {n + 1} arguments, got {len(args)}")
    if any(not a for a in args):
        raise ValueError("arguments must be nonempty words")
    terms: dict = {}
    for perm, s in _signed_permutations(len(args)):
        m = tr_sigma(perm, args)
        terms[m] = terms.get(m, 0) + s
    return TracePolynomial(terms)


def _ordered_set_partitions(letters: tuple, parts: int):
    """Ways to split ``letters`` into ``parts`` nonempty sequences, unordered."""
    # the block containing the smallest remaining letter is emitted first
    if parts == 0:
        if not letters:
            yield ()
        return
    if len(letters) < parts:
        return
    first, rest = letters[0], letters[1:]
    for size in range(0, len(rest) - parts + 2):
        for others in itertools.combinations(rest, size):
            remaining = tuple(a for a in rest if a not in others)
            for arrangement in itertools.permutations((first,) + others):
                for tail in _ordered_set_partitions(remaining, parts - 1):
                    yield (arrangement,) + tail


def canonical_tuple(args: Sequence[Sequence[int]]) -> tuple:
    return tuple(sorted(tuple(a) for a in args))


@lru_cache(maxsize=None)
def multilinear_tuples(n: int) -> tuple:
    """Argument tuples that use each of the letters ``1..N(n)+1`` exactly once.

    Tuples differing only by the order of their entries give the same
    identity and are listed once, in sorted canonical form.
    """
    m = nagata_higman(n) + 1
    found = {canonical_tuple(t) for t in _ordered_set_partitions(tuple(range(1, m + 1)), n + 1)}
    return tuple(sorted(found))
