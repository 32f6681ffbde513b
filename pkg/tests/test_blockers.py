import pytest
from hypothesis import assume, given, strategies as st

from agt.blockers import (
    acceptance_lower_bound,
    acceptance_states,
    build_dbm,
    find_blocker,
    strong_connectivity_check,
    verify_blocker,
    vertex_count_formula,
)
from agt.errors import TooShort
from agt.words import Word, invert, iter_sphere, parse_word

P = parse_word


def naive_is_blocker(u, x, y, w):
    whole = x.letters + w.letters + y.letters
    if any(whole[i] == -whole[i + 1] for i in range(len(whole) - 1)):
        return False
    l = len(u)
    pats = (u.letters, invert(u).letters)
    lo, hi = len(x), len(x) + len(w)
    # no window meeting w may equal u or u^-1
    for s in range(len(whole) - l + 1):
        if s + l > lo and s < hi and whole[s : s + l] in pats:
            return False
    return True


def brute_blocker(u, x, y, max_len):
    for n in range(len(u), max_len + 1):
        for t in iter_sphere(u.rank, n):
            w = Word(t, u.rank)
            if naive_is_blocker(u, x, y, w):
                return w
    return None


@pytest.mark.parametrize("r, l, n", [(2, 2, 4), (3, 2, 6), (3, 3, 30), (2, 4, 36), (3, 4, 150)])
def test_vertex_counts(r, l, n):
    g = build_dbm(r, l)
    assert g.num_vertices == n == vertex_count_formula(r, l)
    assert g.out_degrees() == {2 * r - 1}
    for e in g.edges():
        assert e[:-1] in set(g.vertices) and e[1:] in set(g.vertices)
    assert g.num_edges == n * (2 * r - 1)


def test_without_removes_the_inverse_pair():
    g = build_dbm(3, 2).without(P("a1a2", 3))
    assert g.num_edges == 6 * 5 - 2
    edges = set(g.edges())
    assert (1, 2) not in edges and (-2, -1) not in edges
    with pytest.raises(ValueError):
        g.without(P("a1a2a3"))


def test_acceptance_states_example():
    g = build_dbm(3, 2)
    u, y = P("a1a2", 3), P("a1", 3)
    acc = acceptance_states(g, u, y)
    assert (-1,) not in acc
    assert acc and all(naive_is_blocker(u, Word(v, 3), y, Word.identity(3)) for v in acc)
    for l in (2, 3):
        g = build_dbm(3, l)
        for ut in list(iter_sphere(3, l))[:20]:
            if ut[0] == -ut[-1]:
                continue
            u = Word(ut, 3)
            for yt in iter_sphere(3, l - 1):
                assert len(acceptance_states(g, u, Word(yt, 3))) >= acceptance_lower_bound(3, l)


def test_strong_connectivity_examples():
    assert strong_connectivity_check(build_dbm(3, 2).without(P("a1a2", 3)))
    assert strong_connectivity_check(build_dbm(3, 3).without(P("a1a2a3", 3)))
    assert not strong_connectivity_check(build_dbm(2, 2).without(P("a1a2", 2)))


def test_find_blocker_example():
    u = P("a1a2", 3)
    res = find_blocker(u, P("a1", 3), P("a2", 3))
    assert res.found and 2 <= len(res.blocker) <= 3
    assert res.blocker == brute_blocker(u, P("a1", 3), P("a2", 3), 4)
    assert res.as_dict()["status"] == "found"


def test_unblockable_pair():
    res = find_blocker(P("a1a2", 2), P("a1", 2), P("A1", 2), max_len=12)
    assert not res.found and res.exhausted
    assert brute_blocker(P("a1a2", 2), P("a1", 2), P("A1", 2), 7) is None
    assert res.as_dict()["blocker"] is None


def test_bad_inputs():
    with pytest.raises(TooShort):
        find_blocker(P("a1", 3), P("a1", 3), P("a2", 3))
    with pytest.raises(ValueError):
        find_blocker(P("a1a2", 3), Word.identity(3), P("a2", 3))


def test_verify_blocker_negative_cases():
    u, x, y = P("a1a2", 3), P("a1", 3), P("a2", 3)
    ok, tr = verify_blocker(u, x, y, P("A1a3", 3))
    assert not ok and not tr["reduced"]
    ok, tr = verify_blocker(u, P("a3", 3), y, u)
    assert not ok and tr["counts"]["u"]["xwy"] == 1
    ok, _ = verify_blocker(u, x, y, P("a3a3", 3))
    assert ok


def test_matches_brute_force_on_small_cases():
    for ut in [(1, 2), (1, -2), (1, 1), (1, 2, 3), (1, 1, 2)]:
        u = Word(ut, 3)
        for xt in iter_sphere(3, 1):
            for yt in iter_sphere(3, 1):
                x, y = Word(xt, 3), Word(yt, 3)
                res = find_blocker(u, x, y, max_len=5)
                assert res.blocker == brute_blocker(u, x, y, 5), (ut, xt, yt)


reduced3 = st.lists(st.sampled_from([1, -1, 2, -2, 3, -3]), min_size=1, max_size=6).filter(
    lambda t: all(t[i] != -t[i + 1] for i in range(len(t) - 1))
)


@given(reduced3, reduced3, reduced3, reduced3)
def test_only_the_junction_letters_matter(xt, yt, left, right):
    u = P("a1a2a3", 3)
    x, y = Word(xt, 3), Word(yt, 3)
    assume(left[-1] != -xt[0] and yt[-1] != -right[0])
    res = find_blocker(u, x, y, max_len=8)
    # longer left/right context with the same junction suffix/prefix
    x2 = Word(tuple(left) + tuple(xt), 3) if len(xt) >= 2 else x
    y2 = Word(tuple(yt) + tuple(right), 3) if len(yt) >= 2 else y
    res2 = find_blocker(u, x2, y2, max_len=8)
    assert res.blocker == res2.blocker
    if res.found:
        assert verify_blocker(u, x, y, res.blocker)[0]
        assert naive_is_blocker(u, x, y, res.blocker)
