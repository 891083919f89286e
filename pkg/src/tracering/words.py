"""Words, cyclic words and the two text notations for traces.

A word is a tuple of 1-based letter indices.  Traces only see a word up to
rotation; the canonical representative of a rotation class is its
lexicographically least rotation.  Reversal is *not* identified.

Text notations (letters are single digits, so at most nine letters):

* bracket notation, one bracket per trace factor: ``[12][34]``
* tuple notation for the arguments of the fundamental identity:
  ``(1132,223,1,3)``
"""

from __future__ import annotations

import re
from typing import Iterable, Sequence

from .errors import ParseError

Word = tuple  # tuple[int, ...]


def least_rotation(word: Sequence[int]) -> int:
    """Start index of the lexicographically least rotation (Booth, linear time)."""
    s = list(word) * 2
    n = len(word)
    fail = [-1] * len(s)
    k = 0
    for j in range(1, len(s)):
        c = s[j]
        i = fail[j - k - 1]
        while i != -1 and c != s[k + i + 1]:
            if c < s[k + i + 1]:
                k = j - i - 1
            i = fail[i]
        if c != s[k + i + 1]:
            if c < s[k]:
                k = j
            fail[j - k] = -1
        else:
            fail[j - k] = i + 1
    return k % n if n else 0


def canonicalize(word: Sequence[int]) -> Word:
    """Lexicographically minimal rotation of a nonempty word."""
    w = tuple(word)
    if not w:
        raise ValueError("the empty word has no trace variable")
    k = least_rotation(w)
    return w[k:] + w[:k]


def rotate(word: Sequence[int], k: int) -> Word:
    w = tuple(word)
    if not w:
        return w
    k %= len(w)
    return w[k:] + w[:k]


def is_canonical(word: Sequence[int]) -> bool:
    return tuple(word) == canonicalize(word)


def multidegree(word: Sequence[int], d: int) -> tuple[int, ...]:
    counts = [0] * d
    for a in word:
        if not 1 <= a <= d:
            raise ValueError(f"letter {a} outside 1..{d}")
        counts[a - 1] += 1
    return tuple(counts)


def multidegree_of_words(words: Iterable[Sequence[int]], d: int) -> tuple[int, ...]:
    total = [0] * d
    for w in words:
        for i, c in enumerate(multidegree(w, d)):
            total[i] += c
    return tuple(total)


def necklaces(md: Sequence[int]) -> list[Word]:
    """All canonical cyclic words with letter counts ``md``, in lexicographic order."""
    md = tuple(md)
    n = sum(md)
    if n == 0:
        return []
    out = []
    counts = list(md)
    cur: list[int] = []

    def rec():
        if len(cur) == n:
            w = tuple(cur)
            if canonicalize(w) == w:
                out.append(w)
            return
        for a in range(len(counts)):
            if counts[a]:
                # a canonical word starts with its smallest letter
                if cur and a + 1 < cur[0]:
                    continue
                counts[a] -= 1
                cur.append(a + 1)
                rec()
                cur.pop()
                counts[a] += 1

    first = min(i for i, c in enumerate(md) if c) + 1
    counts[first - 1] -= 1
    cur.append(first)
    rec()
    return out


# ---------------------------------------------------------------- text formats

_TUPLE_RE = re.compile(r"^\s*\((.*)\)\s*$")


def parse_word(text: str, d: int = 9) -> Word:
    text = text.strip()
    if not text:
        raise ParseError("empty monomial")
    if not text.isdigit():
        raise ParseError(f"not a word of digit letters: {text!r}")
    w = tuple(int(c) for c in text)
    for a in w:
        if not 1 <= a <= d:
            raise ParseError(f"letter {a} outside 1..{d}")
    return w


def parse_tuple(text: str, d: int = 9) -> tuple[Word, ...]:
    """Parse tuple notation such as ``(1132,223,1,3)``."""
    m = _TUPLE_RE.match(text)
    if not m:
        raise ParseError(f"tuple must be parenthesised: {text!r}")
    parts = m.group(1).split(",")
    return tuple(parse_word(p, d) for p in parts)


def format_word(word: Sequence[int]) -> str:
    if any(a > 9 for a in word):
        return " ".join(f"X{a}" for a in word)
    return "".join(str(a) for a in word)


def format_tuple(words: Sequence[Sequence[int]]) -> str:
    return "(" + ",".join(format_word(w) for w in words) + ")"


def factor_key(word: Sequence[int]) -> tuple:
    """Longer factors first, ties broken lexicographically: ``[123][4]``."""
    return (-len(word), tuple(word))


def print_bracket(factors: Iterable[Sequence[int]]) -> str:
    """Bracket notation for a product of traces; ``"1"`` for the empty product.

    With more than nine letters the digits would be ambiguous, so the
    explicit ``Tr(X1 X10)`` form is used instead.
    """
    fs = sorted((tuple(f) for f in factors), key=factor_key)
    if not fs:
        return "1"
    if any(a > 9 for f in fs for a in f):
        return "".join("Tr(" + " ".join(f"X{a}" for a in f) + ")" for f in fs)
    return "".join("[" + "".join(map(str, f)) + "]" for f in fs)


_BRACKET_RE = re.compile(r"\[(\d+)\]")


def parse_bracket(text: str) -> tuple[Word, ...]:
    """Inverse of :func:`print_bracket` for single-digit letters."""
    text = text.strip()
    if text == "1":
        return ()
    found = _BRACKET_RE.findall(text)
    if "".join(f"[{f}]" for f in found) != text.replace(" ", ""):
        raise ParseError(f"malformed bracket monomial: {text!r}")
    return tuple(parse_word(f) for f in found)
