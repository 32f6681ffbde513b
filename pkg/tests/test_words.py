import itertools
import re

import pytest
from hypothesis import given, strategies as st

from agt.errors import InvalidLetter, PatternInvalid, PatternNotCyclicallyReduced, TooShort
from agt.words import (
    CyclicWord,
    Word,
    ball_size,
    concat,
    count_cyclic_occurrences,
    count_occurrences,
    cyclic_reduce,
    enumerate_ball,
    enumerate_cyclically_reduced,
    format_word,
    invert,
    is_non_self_overlapping,
    is_special,
    iter_sphere,
    parse_word,
    power,
    reduce,
    u_decomposition,
)

from conftest import cyclic_words, raw_letters, words

P = parse_word


def naive_reduce(raw):
    # fixpoint of deleting the leftmost cancelling pair
    xs = list(raw)
    changed = True
    while changed:
        changed = False
        for i in range(len(xs) - 1):
            if xs[i] == -xs[i + 1]:
                del xs[i : i + 2]
                changed = True
                break
    return tuple(xs)


def window_count(u, v):
    return sum(1 for k in range(len(v) - len(u) + 1) if v[k : k + len(u)] == u)


def wrap_count(u, w):
    # count start positions s in [0, |w|) with u read cyclically from s
    n = len(w)
    if n == 0:
        return 0
    return sum(1 for s in range(n) if all(w[(s + i) % n] == u[i] for i in range(len(u))))


@pytest.mark.parametrize(
    "raw, expected",
    [([1, -1], "e"), ([1, 2, -2, 1], "a1a1"), ([1, 2, -1, 1, -2, 1], "a1a1")],
)
def test_reduce_examples(raw, expected):
    assert format_word(reduce(raw, 2)) == expected


def test_multiply_invert_examples():
    assert P("a1") * P("A1") == Word.identity(2)
    assert str(P("a1a2") * P("A2a1")) == "a1a1"
    assert P("a1a2") * Word.identity(2) == P("a1a2")
    assert str(invert(P("e", 2))) == "e"
    assert str(invert(P("a1a2"))) == "A2A1"
    assert str(invert(P("a1a2A1"))) == "a1A2A1"


@pytest.mark.parametrize(
    "word, t, core",
    [("a1a2", "e", "a1a2"), ("a1a2A1", "a1", "a2"), ("a1a2a2A1", "a1", "a2a2")],
)
def test_cyclic_reduce_examples(word, t, core):
    ct, cc = cyclic_reduce(P(word))
    assert (str(ct), str(cc)) == (t, core)


def test_count_examples():
    assert count_occurrences(P("a1a1"), P("a1a1a1a1a1")) == 4
    assert count_occurrences(P("a1a2"), Word.identity(2)) == 0
    assert count_occurrences(P("a1a2"), P("a1a2a1a2")) == 2
    assert count_occurrences(Word.identity(2), P("a1a2A1")) == 3
    assert count_cyclic_occurrences(P("a1a2"), P("a2a1")) == 1
    assert count_cyclic_occurrences(P("a1a2"), P("a1a2") ** 2) == 2
    assert count_cyclic_occurrences(P("a1a2"), P("A1", 2)) == 0


def test_cyclic_count_rejects_bad_patterns():
    with pytest.raises(PatternInvalid):
        count_cyclic_occurrences(Word.identity(2), P("a1"))
    with pytest.raises(PatternNotCyclicallyReduced):
        count_cyclic_occurrences(P("a1a2A1"), P("a1"))


def test_self_overlap_examples():
    assert is_non_self_overlapping(P("a1a2"))
    assert not is_non_self_overlapping(P("a1a2a1"))
    assert not is_non_self_overlapping(P("a1a1"))
    with pytest.raises(TooShort):
        is_non_self_overlapping(P("a1"))


def test_u_decomposition_examples():
    u = P("a1a2")
    parts = u_decomposition(u, P("a1a2A1A2A1a2A1"))
    assert [str(p) for p in parts] == ["a1a2", "A1", "A2A1", "a2A1"]
    assert [str(p) for p in u_decomposition(u, u)] == ["a1a2"]
    assert [str(p) for p in u_decomposition(u, P("a2a1"))] == ["a2a1"]
    with pytest.raises(PatternInvalid):
        u_decomposition(P("a1a1"), P("a1"))


@pytest.mark.parametrize("rank, radius, size", [(2, 0, 1), (2, 1, 5), (3, 2, 37), (2, 2, 17)])
def test_ball_sizes(rank, radius, size):
    ball = enumerate_ball(rank, radius)
    assert len(ball) == size == ball_size(rank, radius)
    assert len(set(ball)) == size


def test_sphere_order_is_canonical():
    assert [format_word(Word(t, 2)) for t in iter_sphere(2, 1)] == ["a1", "A1", "a2", "A2"]


def test_parse_errors():
    for bad in ("a1x", "a0", "b1"):
        with pytest.raises(InvalidLetter):
            parse_word(bad)
    with pytest.raises(InvalidLetter):
        parse_word("a3", 2)
    with pytest.raises(InvalidLetter):
        Word([1, -1], 2)


def test_cyclic_word_equality():
    assert CyclicWord.of(P("a1a2")) == CyclicWord.of(P("a2a1"))
    assert CyclicWord.of(P("a2a1a2A2")) == CyclicWord.of(P("a1a2"))


# --- exhaustive oracle for u-decompositions ------------------------------


def maximal_coarsest(u, w):
    """Brute force: among decompositions with the most u^{+-1} pieces, those
    whose cut set is minimal under inclusion."""
    n = len(w)
    a, b = u.letters, invert(u).letters
    best, cands = -1, []
    for k in range(n):
        for cuts in itertools.combinations(range(1, n), k):
            bounds = (0,) + cuts + (n,)
            pieces = [w.letters[bounds[i] : bounds[i + 1]] for i in range(len(bounds) - 1)]
            score = sum(1 for p in pieces if p == a or p == b)
            if score > best:
                best, cands = score, [frozenset(cuts)]
            elif score == best:
                cands.append(frozenset(cuts))
    minimal = [c for c in cands if not any(d < c for d in cands)]
    return minimal


@pytest.mark.parametrize("pattern", ["a1a2", "a1a2A1A2", "a1a1a2"])
def test_u_decomposition_matches_exhaustive_oracle(pattern):
    u = P(pattern)
    for w in enumerate_ball(2, 6)[1:]:
        minimal = maximal_coarsest(u, w)
        assert len(minimal) == 1, (str(w), minimal)
        parts = u_decomposition(u, w)
        cuts, pos = set(), 0
        for p in parts[:-1]:
            pos += len(p)
            cuts.add(pos)
        assert frozenset(cuts) == minimal[0], str(w)


@given(words(2, 8).filter(bool))
def test_u_decomposition_oracle_sampled_to_length_8(w):
    u = P("a1a2")
    minimal = maximal_coarsest(u, w)
    assert len(minimal) == 1
    parts = u_decomposition(u, w)
    assert concat(*parts) == w
    cuts = set(itertools.accumulate(len(p) for p in parts[:-1]))
    assert frozenset(cuts) == minimal[0]


# --- properties ----------------------------------------------------------


@given(raw_letters(3, 14))
def test_reduce_matches_naive_fixpoint(raw):
    assert reduce(raw, 3).letters == naive_reduce(raw)


@given(words(3), words(3), words(3))
def test_group_axioms(x, y, z):
    assert (x * y) * z == x * (y * z)
    assert x * invert(x) == Word.identity(3)
    assert invert(x * y) == invert(y) * invert(x)


@given(words(3, 12))
def test_round_trip(w):
    text = format_word(w)
    assert re.fullmatch(r"e|([aA]\d+)+", text)
    assert parse_word(text, 3) == w


@given(words(2, 8), words(2, 10))
def test_count_matches_window_oracle(u, v):
    if u:
        assert count_occurrences(u, v) == window_count(u.letters, v.letters)


@given(words(2, 10))
def test_cyclic_reduce_conjugates_back(w):
    t, core = cyclic_reduce(w)
    assert t * core * invert(t) == w
    assert len(core) <= 1 or core[0] != -core[-1]


@given(cyclic_words(2, 4, 1), cyclic_words(2, 7), st.integers(1, 4))
def test_cyclic_count_homogeneity_and_rotation(u, w, n):
    base = count_cyclic_occurrences(u, w)
    assert base == wrap_count(u.letters, w.letters) or len(u) > len(w)
    assert count_cyclic_occurrences(u, power(w, n)) == n * base
    rotated = Word(w.letters[1:] + w.letters[:1], 2)
    assert count_cyclic_occurrences(u, rotated) == base


@given(cyclic_words(2, 3, 1), cyclic_words(2, 3))
def test_cyclic_count_long_pattern_uses_power(u, w):
    # a pattern longer than w counts the wrap-around of w's powers
    n = len(u)
    big = power(w, n)
    assert count_cyclic_occurrences(u, big) == n * count_cyclic_occurrences(u, w)


def test_cyclic_enumeration_only_cyclic():
    words_ = list(enumerate_cyclically_reduced(2, 4))
    assert all(len(w) == 1 or w[0] != -w[-1] for w in words_)
    assert len(words_) == len(set(words_))
    assert sum(1 for w in words_ if is_special(w) and len(w) == 2) == 8
