"""Reduced words in the free group F_r.

A letter is a nonzero signed integer: ``i`` stands for the generator a_i and
``-i`` for its inverse.  Words serialize as ``a1a2A1`` (capital letter =
inverse) and the empty word as ``e``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, Sequence

from .budget import check_budget
from .errors import (
    InvalidLetter,
    PatternInvalid,
    PatternNotCyclicallyReduced,
    RankMismatch,
    TooShort,
)

_TOKEN = re.compile(r"([aA])(\d+)")


class Letter(NamedTuple):
    generator_index: int
    sign: int

    @property
    def value(self) -> int:
        return self.sign * self.generator_index

    @classmethod
    def from_int(cls, x: int) -> Letter:
        return cls(abs(x), 1 if x > 0 else -1)

    def __str__(self):
        return ("a" if self.sign > 0 else "A") + str(self.generator_index)


def letter_key(x: int) -> int:
    """Position of a letter in the fixed order a1 < A1 < a2 < A2 < ..."""
    return 2 * x - 1 if x > 0 else -2 * x


def alphabet(rank: int) -> list[int]:
    """All 2r letters in canonical order."""
    out = []
    for i in range(1, rank + 1):
        out.append(i)
        out.append(-i)
    return out


def _letter_str(x: int) -> str:
    return ("a" if x > 0 else "A") + str(abs(x))


def _as_int(x) -> int:
    if isinstance(x, Letter):
        if x.sign not in (1, -1):
            raise InvalidLetter(f"bad sign {x.sign}")
        return x.value
    if isinstance(x, bool) or not isinstance(x, int):
        raise InvalidLetter(f"not a letter: {x!r}")
    return x


def _reduce_letters(raw: Iterable[int]) -> tuple[int, ...]:
    stack: list[int] = []
    for x in raw:
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    return tuple(stack)


def _is_reduced(letters: Sequence[int]) -> bool:
    return all(letters[i] != -letters[i + 1] for i in range(len(letters) - 1))


class Word:
    """An immutable freely reduced word over ``rank`` generators."""

    __slots__ = ("letters", "rank", "_hash")

    def __init__(self, letters: Iterable = (), rank: int = 2):
        if rank < 1:
            raise InvalidLetter(f"rank must be positive, got {rank}")
        letters = tuple(_as_int(x) for x in letters)
        for x in letters:
            if x == 0 or abs(x) > rank:
                raise InvalidLetter(f"letter {x} out of range for rank {rank}")
        if not _is_reduced(letters):
            raise InvalidLetter(f"{_fmt(letters)} is not freely reduced; use reduce()")
        self.letters = letters
        self.rank = rank
        self._hash = None

    @classmethod
    def _make(cls, letters: tuple[int, ...], rank: int) -> Word:
        w = object.__new__(cls)
        w.letters = letters
        w.rank = rank
        w._hash = None
        return w

    @classmethod
    def identity(cls, rank: int = 2) -> Word:
        return cls._make((), rank)

    @classmethod
    def parse(cls, text: str, rank: int | None = None) -> Word:
        return parse_word(text, rank)

    def __len__(self):
        return len(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return Word._make(self.letters[item], self.rank)
        return self.letters[item]

    def __bool__(self):
        return bool(self.letters)

    def __eq__(self, other):
        if not isinstance(other, Word):
            return NotImplemented
        return self.letters == other.letters and self.rank == other.rank

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.letters, self.rank))
        return self._hash

    def __lt__(self, other: Word):
        return self.sort_key() < other.sort_key()

    def sort_key(self):
        return (len(self.letters), tuple(letter_key(x) for x in self.letters))

    def __mul__(self, other: Word) -> Word:
        return multiply(self, other)

    def __pow__(self, n: int) -> Word:
        return power(self, n)

    def inverse(self) -> Word:
        return invert(self)

    def __invert__(self):
        return invert(self)

    def __str__(self):
        return _fmt(self.letters)

    def __repr__(self):
        return f"Word({str(self)!r}, rank={self.rank})"


ReducedWord = Word


def _fmt(letters: Sequence[int]) -> str:
    if not letters:
        return "e"
    return "".join(_letter_str(x) for x in letters)


def format_word(w: Word) -> str:
    return _fmt(w.letters)


def parse_word(text: str, rank: int | None = None) -> Word:
    """Parse ``a1a2A1`` style text; the result is freely reduced.

    ``rank`` defaults to the largest generator index used (at least 2).
    """
    text = text.strip()
    if text in ("e", ""):
        return Word.identity(rank or 2)
    pos = 0
    raw = []
    for m in _TOKEN.finditer(text):
        if m.start() != pos:
            break
        idx = int(m.group(2))
        if idx == 0:
            raise InvalidLetter(f"generator index 0 in {text!r}")
        raw.append(idx if m.group(1) == "a" else -idx)
        pos = m.end()
    if pos != len(text):
        raise InvalidLetter(f"cannot parse word {text!r}")
    if rank is None:
        rank = max(2, max(abs(x) for x in raw))
    return reduce(raw, rank)


def reduce(raw: Iterable, rank: int) -> Word:
    """Freely reduce a sequence of letters (ints or ``Letter``)."""
    letters = [_as_int(x) for x in raw]
    for x in letters:
        if x == 0 or abs(x) > rank:
            raise InvalidLetter(f"letter {x} out of range for rank {rank}")
    return Word._make(_reduce_letters(letters), rank)


def multiply(u: Word, v: Word) -> Word:
    if u.rank != v.rank:
        raise RankMismatch(f"rank {u.rank} vs {v.rank}")
    a, b = u.letters, v.letters
    i = 0
    n = min(len(a), len(b))
    while i < n and a[-1 - i] == -b[i]:
        i += 1
    return Word._make(a[: len(a) - i] + b[i:], u.rank)


def invert(u: Word) -> Word:
    return Word._make(tuple(-x for x in reversed(u.letters)), u.rank)


def power(u: Word, n: int) -> Word:
    if n < 0:
        return power(invert(u), -n)
    t, core = cyclic_reduce(u)
    if n == 0 or not core:
        return Word.identity(u.rank)
    mid = core.letters * n
    return Word._make(t.letters + mid + invert(t).letters, u.rank)


def is_reduced_product(*parts: Word) -> bool:
    """True iff concatenating ``parts`` involves no cancellation."""
    letters: list[int] = []
    for p in parts:
        if letters and p.letters and letters[-1] == -p.letters[0]:
            return False
        letters.extend(p.letters)
    return True


def concat(*parts: Word) -> Word:
    """Reduced product; raises if the concatenation cancels."""
    if not is_reduced_product(*parts):
        raise PatternInvalid("concatenation is not a reduced product")
    rank = parts[0].rank if parts else 2
    return Word._make(tuple(x for p in parts for x in p.letters), rank)


def is_cyclically_reduced(w: Word) -> bool:
    return len(w) <= 1 or w.letters[0] != -w.letters[-1]


def cyclic_reduce(w: Word) -> tuple[Word, Word]:
    """Split ``w = t w_o t^-1`` with ``w_o`` cyclically reduced."""
    a = w.letters
    i, j = 0, len(a) - 1
    while i < j and a[i] == -a[j]:
        i += 1
        j -= 1
    return Word._make(a[:i], w.rank), Word._make(a[i : j + 1], w.rank)


@dataclass(frozen=True)
class CyclicWord:
    """Conjugacy class of a word; equality via the minimal rotation."""

    representative: Word
    canonical_rotation: Word

    @classmethod
    def of(cls, w: Word) -> CyclicWord:
        core = cyclic_reduce(w)[1]
        return cls(core, Word._make(min_rotation(core.letters), w.rank))

    def __len__(self):
        return len(self.representative)

    def __eq__(self, other):
        if not isinstance(other, CyclicWord):
            return NotImplemented
        return self.canonical_rotation == other.canonical_rotation

    def __hash__(self):
        return hash(self.canonical_rotation)

    def __str__(self):
        return f"[{self.canonical_rotation}]"


def min_rotation(letters: tuple[int, ...]) -> tuple[int, ...]:
    if not letters:
        return letters
    keyed = [letter_key(x) for x in letters]
    n = len(letters)
    best = min(range(n), key=lambda s: keyed[s:] + keyed[:s])
    return letters[best:] + letters[:best]


def rotations(w: Word) -> list[Word]:
    a = w.letters
    return [Word._make(a[s:] + a[:s], w.rank) for s in range(len(a))] or [w]


def _count(pattern: tuple[int, ...], text: tuple[int, ...]) -> int:
    l, n = len(pattern), len(text)
    if l > n:
        return 0
    first = pattern[0]
    c = 0
    for k in range(n - l + 1):
        if text[k] == first and text[k : k + l] == pattern:
            c += 1
    return c


def count_occurrences(u: Word, v: Word) -> int:
    """Number of (possibly overlapping) positions where ``u`` occurs in ``v``.

    Conventions: #_u(e) = 0 and #_e(v) = |v|.
    """
    if not u:
        return len(v)
    return _count(u.letters, v.letters)


def occurrence_positions(u: Word, v: Word) -> list[int]:
    l = len(u)
    a, b = u.letters, v.letters
    return [k for k in range(len(b) - l + 1) if b[k : k + l] == a]


def _count_cyclic(pattern: tuple[int, ...], core: tuple[int, ...]) -> int:
    k = len(core)
    if k == 0:
        return 0
    l = len(pattern)
    if l <= k:
        text = core + core[: l - 1]
    else:
        text = core * (l // k + 2)
        text = text[: k + l - 1]
    first = pattern[0]
    c = 0
    for s in range(k):
        if text[s] == first and text[s : s + l] == pattern:
            c += 1
    return c


def count_cyclic_occurrences(u: Word, w) -> int:
    """Cyclic occurrences of ``u`` in the cyclic word ``[w]``.

    ``w`` may be a ``CyclicWord`` or any ``Word`` (its cyclic reduction is
    used).  The window wraps around as often as needed when |u| > |w|.
    """
    if not u:
        raise PatternInvalid("empty pattern")
    if not is_cyclically_reduced(u):
        raise PatternNotCyclicallyReduced(str(u))
    core = w.representative if isinstance(w, CyclicWord) else cyclic_reduce(w)[1]
    return _count_cyclic(u.letters, core.letters)


def proper_prefixes(u: Word) -> set[tuple[int, ...]]:
    return {u.letters[:k] for k in range(1, len(u))}


def proper_suffixes(u: Word) -> set[tuple[int, ...]]:
    return {u.letters[k:] for k in range(1, len(u))}


def is_non_self_overlapping(u: Word) -> bool:
    """P(u) and S(u) disjoint: no proper prefix of ``u`` is also a suffix."""
    if len(u) < 2:
        raise TooShort(f"{u} has length < 2")
    return not (proper_prefixes(u) & proper_suffixes(u))


def is_special(u: Word) -> bool:
    """Membership in W_r: cyclically reduced, non-self-overlapping, |u| >= 2."""
    return len(u) >= 2 and is_cyclically_reduced(u) and is_non_self_overlapping(u)


def u_decomposition(u: Word, w: Word) -> list[Word]:
    """The coarsest u-maximal decomposition of ``w``.

    Copies of ``u`` and ``u^-1`` become their own segments; the maximal runs
    of letters between them are merged into single segments.  Because
    ``(u, u^-1)`` is an independent pair the copies never overlap, so a
    left-to-right scan finds all of them.
    """
    if not is_special(u):
        raise PatternInvalid(f"{u} must be cyclically reduced, non-self-overlapping, length >= 2")
    if u.rank != w.rank:
        raise RankMismatch(f"rank {u.rank} vs {w.rank}")
    if not w:
        raise PatternInvalid("cannot decompose the empty word")
    a, b = u.letters, invert(u).letters
    l = len(a)
    text = w.letters
    segments: list[Word] = []
    gap_start = 0
    k = 0
    while k <= len(text) - l:
        window = text[k : k + l]
        if window == a or window == b:
            if gap_start < k:
                segments.append(Word._make(text[gap_start:k], w.rank))
            segments.append(Word._make(window, w.rank))
            k += l
            gap_start = k
        else:
            k += 1
    if gap_start < len(text):
        segments.append(Word._make(text[gap_start:], w.rank))
    return segments


def ball_size(rank: int, radius: int) -> int:
    if radius < 0:
        return 0
    return 1 + sum(2 * rank * (2 * rank - 1) ** (k - 1) for k in range(1, radius + 1))


def iter_sphere(rank: int, length: int) -> Iterator[tuple[int, ...]]:
    """Reduced letter tuples of exactly ``length``, in canonical order."""
    letters = alphabet(rank)

    def extend(prefix):
        if len(prefix) == length:
            yield prefix
            return
        last = prefix[-1] if prefix else 0
        for x in letters:
            if x != -last:
                yield from extend(prefix + (x,))

    yield from extend(())


def enumerate_ball(rank: int, radius: int, budget: int | None = None) -> list[Word]:
    """All reduced words of length <= radius, ordered by length then letter order."""
    if radius < 0:
        return []
    check_budget(ball_size(rank, radius), budget, f"ball B_{radius}(F_{rank})", "words")
    out = []
    for k in range(radius + 1):
        out.extend(Word._make(t, rank) for t in iter_sphere(rank, k))
    return out


def enumerate_cyclically_reduced(rank: int, max_len: int, min_len: int = 1) -> Iterator[Word]:
    """Cyclically reduced nonempty words by length then letter order."""
    for k in range(min_len, max_len + 1):
        for t in iter_sphere(rank, k):
            if k == 1 or t[0] != -t[-1]:
                yield Word._make(t, rank)
