from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from agt.errors import BudgetExceeded, DyadicOverflow
from agt.groups import BS12, BS12Element, FreeAbelian, FreeGroup, bfs_ball, bidirectional_distance, make_model
from agt.words import parse_word

from conftest import words


def mat(x: BS12Element):
    # (t, k) acts on the line as s -> 2^k s + t
    return (Fraction(2) ** x.k, x.t)


def mat_mul(m, n):
    return (m[0] * n[0], m[0] * n[1] + m[1])


A = BS12().generator(1)
B = BS12().generator(2)


def oracle_ball_sizes(radius):
    gens = [(Fraction(1), Fraction(1)), (Fraction(1), Fraction(-1)), (Fraction(2), Fraction(0)), (Fraction(1, 2), Fraction(0))]
    seen = {(Fraction(1), Fraction(0))}
    frontier = list(seen)
    sizes = [1]
    for _ in range(radius):
        nxt = []
        for g in frontier:
            for s in gens:
                h = mat_mul(g, s)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
        sizes.append(len(seen))
    return sizes


def test_bs12_relation_and_examples():
    m = BS12()
    assert m.mul(m.mul(B, A), m.inv(B)) == m.a_power(2) == m.mul(A, A)
    assert m.mul(m.mul(m.inv(B), A), B) == BS12Element.make(1, 1, 0)
    assert m.eval_word(parse_word("a2a1A2")) == m.a_power(2)
    assert m.eval_word(parse_word("e")) == m.identity()
    assert FreeAbelian(2).eval_word(parse_word("a1a2a1")) == (2, 1)


def test_ball_sizes_match_matrix_oracle():
    m = BS12()
    ball = bfs_ball(m, 8)
    sizes = [sum(1 for g in ball.elements if ball.distance[g] <= r) for r in range(9)]
    assert sizes == oracle_ball_sizes(8)
    # frozen from the oracle
    assert sizes[:6] == [1, 5, 17, 43, 93, 191]


def test_small_balls():
    assert len(bfs_ball(FreeAbelian(2), 1)) == 5
    assert len(bfs_ball(FreeGroup(2), 2)) == 17


@pytest.mark.parametrize("n", range(1, 9))
def test_power_of_a_is_short(n):
    m = BS12()
    assert m.word_norm(m.a_power(2**n)) <= 2 * n + 1


def test_bidirectional_matches_ball():
    m = BS12()
    ball = bfs_ball(m, 6)
    for g in ball.elements[::7]:
        assert bidirectional_distance(m, m.identity(), g) == ball.distance[g]


def test_tsv_and_parse_round_trip():
    m = BS12()
    text = bfs_ball(m, 1).to_tsv()
    lines = text.splitlines()
    assert lines[0] == "normal_form\tdistance"
    assert len(lines) == 6
    for line in lines[1:]:
        nf, _ = line.split("\t")
        assert m.format(m.parse(nf)) == nf


def test_budget_and_overflow():
    with pytest.raises(BudgetExceeded):
        bfs_ball(FreeGroup(3), 10, budget=1000)
    tiny = BS12(max_bits=4)
    with pytest.raises(DyadicOverflow):
        tiny.mul(tiny.a_power(1000), tiny.a_power(1))


def test_make_model():
    assert isinstance(make_model("f3"), FreeGroup)
    assert isinstance(make_model("BS(1,2)"), BS12)
    with pytest.raises(ValueError):
        make_model("SL2")


@given(st.lists(st.sampled_from([1, -1, 2, -2]), max_size=16), st.lists(st.sampled_from([1, -1, 2, -2]), max_size=16))
def test_bs12_is_a_faithful_normal_form(xs, ys):
    m = BS12()

    def ev(letters):
        g = m.identity()
        mg = (Fraction(1), Fraction(0))
        for s in letters:
            x = m.letter(s)
            g = m.mul(g, x)
            mg = mat_mul(mg, mat(x))
        return g, mg

    g, mg = ev(xs)
    h, mh = ev(ys)
    assert mat(g) == mg
    assert (g == h) == (mg == mh)
    assert m.mul(g, m.inv(g)) == m.identity()


@given(words(2, 8))
def test_free_group_norm_is_length(w):
    assert FreeGroup(2).word_norm(w) == len(w)
