import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from agt.approx import (
    CoveringWitness,
    FiniteSample,
    find_covering,
    power_cover_check,
    power_set,
    product_set,
    ruzsa_cover,
    symmetrize,
    tripling_ratio,
    verify_covering,
    verify_ruzsa,
)
from agt.errors import HorizonTooSmall
from agt.groups import BS12, FreeAbelian, FreeGroup
from agt.words import enumerate_ball, parse_word

Z = FreeAbelian(1)


def ball_z(r):
    return [(k,) for k in range(-r, r + 1)]


def exact_min_cover(sample, inner_radius, candidates):
    """Smallest subset of ``candidates`` (at most 20) that covers, by brute force."""
    assert len(candidates) <= 20
    m = sample.model
    inner = sample.inner(inner_radius)
    targets = {m.mul(x, y) for x in inner for y in inner}
    covers = {f: {t for t in targets if m.mul(t, m.inv(f)) in sample.elements} for f in candidates}
    for k in range(1, len(candidates) + 1):
        for F in itertools.combinations(candidates, k):
            if set().union(*(covers[f] for f in F)) == targets:
                return list(F)
    return None


def test_subgroup_needs_only_identity():
    sample = FiniteSample.from_predicate(Z, lambda g: g[0] % 3 == 0, 30)
    wit = find_covering(sample, 6)
    assert wit.F == [(0,)] and wit.verified


def test_interval_cover_against_exact_minimum():
    sample = FiniteSample.from_predicate(Z, lambda g: abs(g[0]) <= 4, 12)
    cands = [(k,) for k in range(-6, 7)]
    best = exact_min_cover(sample, 4, cands)
    assert len(best) == 2
    wit = find_covering(sample, 4, candidates=cands)
    assert wit.verified and len(wit.F) >= len(best)
    free = find_covering(sample, 4)
    assert free.verified


def test_bs12_witness_inside_allowed_set():
    m = BS12()
    a, b = m.generator(1), m.generator(2)
    allowed = [m.identity(), b, m.inv(b), m.mul(m.inv(b), a)]
    sample = FiniteSample.from_predicate(m, m.in_distorted_lambda, 10)
    wit = find_covering(sample, 3, candidates=allowed)
    assert wit.verified and set(wit.F) <= set(allowed)
    best = exact_min_cover(sample, 3, allowed)
    assert best is not None and len(best) <= len(wit.F)


def test_verify_rejects_short_witness():
    sample = FiniteSample.from_predicate(Z, lambda g: abs(g[0]) <= 4, 12)
    bad = CoveringWitness([(0,)], 4, 12)
    assert not verify_covering(sample, bad)


def test_horizon_too_small():
    sample = FiniteSample.from_predicate(Z, lambda g: True, 8)
    with pytest.raises(HorizonTooSmall):
        find_covering(sample, 3)


def test_ruzsa_examples():
    F = ruzsa_cover(Z, [(0,)], [(0,)])
    assert len(F) == 1
    X, Y = ball_z(2), ball_z(1)
    F = ruzsa_cover(Z, X, Y)
    assert len(F) <= 2 and all(verify_ruzsa(Z, X, Y, F))
    A = ball_z(5)
    X = power_set(Z, A, 3)
    F = ruzsa_cover(Z, X, A)
    assert len(F) <= 3 and all(verify_ruzsa(Z, X, A, F))


@pytest.mark.parametrize("r", range(1, 8))
def test_tripling_of_integer_balls(r):
    assert tripling_ratio(Z, ball_z(r)) == Fraction(6 * r + 1, 2 * r + 1)


def test_tripling_small_cases():
    assert tripling_ratio(Z, [(0,)]) == 1
    F2 = FreeGroup(2)
    assert tripling_ratio(F2, enumerate_ball(2, 2)) == Fraction(1457, 17)


def test_symmetrize():
    F2 = FreeGroup(2)
    a1 = parse_word("a1")
    assert symmetrize(F2, [a1]) == {F2.identity(), a1, parse_word("A1")}
    ball = set(enumerate_ball(2, 2))
    assert symmetrize(F2, ball) == ball


def test_power_cover_check():
    sample = FiniteSample.from_predicate(Z, lambda g: g[0] % 2 == 0, 12)
    res = power_cover_check(sample, 2, 1, [(0,)], 3)
    assert res.holds
    m = BS12()
    a, b = m.generator(1), m.generator(2)
    F = [m.identity(), b, m.inv(b), m.mul(m.inv(b), a)]
    bs = FiniteSample.from_predicate(m, m.in_distorted_lambda, 8)
    assert power_cover_check(bs, 3, 2, F, 2).holds


@given(st.sets(st.integers(1, 6), max_size=4), st.integers(1, 3))
def test_greedy_cover_always_verifies(offsets, r):
    # symmetric unital set {0, +-d : d in offsets} plus a sparse subgroup
    pts = {0} | {d for d in offsets} | {-d for d in offsets}
    sample = FiniteSample.from_predicate(Z, lambda g: g[0] in pts or g[0] % 7 == 0, 3 * r + 6)
    wit = find_covering(sample, r)
    assert wit.verified
    assert verify_covering(sample, wit)


@given(st.sets(st.integers(-6, 6), min_size=1, max_size=6))
def test_ruzsa_property(ys):
    Y = [(y,) for y in ys]
    X = ball_z(6)
    F = ruzsa_cover(Z, X, Y)
    disjoint, covered = verify_ruzsa(Z, X, Y, F)
    assert disjoint and covered
    assert len(F) <= len(product_set(Z, X, Y)) // len(Y)
