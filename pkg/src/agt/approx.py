"""Finite-scale witnesses for approximate-group structure.

Everything here works on finite truncations: a ``FiniteSample`` is
Lambda intersected with a ball B(e, R) of the ambient group, and each claim
is made only for products whose factors lie in a smaller inner ball.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from .budget import check_budget, default_budget
from .errors import HorizonTooSmall
from .groups import BallTable, GroupModel, bfs_ball


@dataclass
class FiniteSample:
    """Lambda cut down to the ambient ball of ``radius``.

    ``norms`` maps every element to its ambient word length, so inner balls
    can be read off without recomputing distances.
    """

    model: GroupModel
    elements: frozenset
    radius: int
    norms: dict = field(repr=False)
    name: str = "Lambda"
    symmetric: bool = True
    unital: bool = True

    @classmethod
    def from_predicate(cls, model, contains: Callable, radius: int, name="Lambda", ball: BallTable | None = None, budget=None):
        if ball is None or ball.radius < radius:
            ball = bfs_ball(model, radius, budget)
        norms = {g: d for g, d in ball.distance.items() if d <= radius and contains(g)}
        return cls(model, frozenset(norms), radius, norms, name)

    @classmethod
    def from_elements(cls, model, elements: Iterable, radius: int, norms=None, name="Lambda"):
        elements = frozenset(elements)
        if norms is None:
            norms = {g: model.word_norm(g) for g in elements}
        return cls(model, elements, radius, dict(norms), name)

    def __contains__(self, g):
        return g in self.elements

    def __len__(self):
        return len(self.elements)

    def inner(self, r) -> list:
        """Elements of ambient norm <= r, in model sort order."""
        return sorted((g for g, d in self.norms.items() if d <= r), key=self.model.sort_key)

    def sorted(self) -> list:
        return sorted(self.elements, key=self.model.sort_key)


@dataclass
class CoveringWitness:
    """F with (sample cut to the inner ball)^j contained in Lambda^k * F."""

    F: list
    inner_radius: int
    sample_radius: int
    exponents: tuple = (2, 1)
    direction: str = "right"
    verified: bool = False
    products_checked: int = 0

    @property
    def size(self):
        return len(self.F)

    def as_dict(self, model):
        return {
            "F": [model.format(f) for f in self.F],
            "size": self.size,
            "verified": self.verified,
            "inner_radius": self.inner_radius,
            "sample_radius": self.sample_radius,
            "exponents": list(self.exponents),
            "direction": self.direction,
        }


def product_set(model, A: Iterable, B: Iterable, budget=None) -> set:
    A, B = list(A), list(B)
    check_budget(len(A) * len(B), budget, "product set enumeration", "approx")
    mul = model.mul
    return {mul(x, y) for x in A for y in B}


def power_set(model, A: Iterable, k: int, budget=None) -> set:
    """A^k = {a_1 ... a_k}."""
    A = list(A)
    cur = {model.identity()} if k == 0 else set(A)
    for _ in range(k - 1):
        cur = product_set(model, cur, A, budget)
    return cur


def symmetrize(model, A: Iterable) -> set:
    A = set(A)
    return A | {model.identity()} | {model.inv(a) for a in A}


def tripling_ratio(model, A: Iterable, budget=None) -> Fraction:
    """|A^3| / |A|, by exact enumeration."""
    A = set(A)
    if not A:
        raise ValueError("tripling ratio of the empty set")
    A3 = power_set(model, A, 3, budget)
    return Fraction(len(A3), len(A))


def _greedy_cover(universe: list, cover_sets: dict, order: list) -> list:
    """Largest-residual-first greedy set cover; ties go to the earlier candidate."""
    uncovered = set(universe)
    chosen = []
    while uncovered:
        best, best_gain = None, 0
        for c in order:
            gain = len(cover_sets[c] & uncovered)
            if gain > best_gain:
                best, best_gain = c, gain
        if best is None:
            break
        chosen.append(best)
        uncovered -= cover_sets[best]
    return chosen


def find_covering(sample: FiniteSample, inner_radius: int, candidates: Iterable | None = None, budget=None) -> CoveringWitness:
    """Greedy F with (Lambda cap B_r)^2 contained in (Lambda cap B_R) F.

    Candidates default to all quotients z^-1 x y with z in the sample, which
    already lie in Lambda^3.  Passing ``candidates`` restricts F to them; if
    they cannot cover, ``verified`` is False.
    """
    if sample.radius < 3 * inner_radius:
        raise HorizonTooSmall(f"sample radius {sample.radius} < 3 * {inner_radius}")
    model = sample.model
    inner = sample.inner(inner_radius)
    products = sorted(product_set(model, inner, inner, budget), key=model.sort_key)
    lam = sample.elements
    inv = model.inv
    mul = model.mul
    if candidates is None:
        zs = sample.sorted()
        check_budget(len(zs) * len(products), budget if budget else default_budget(), "covering candidates", "approx")
        cover_sets: dict = {}
        for p in products:
            for z in zs:
                f = mul(inv(z), p)
                cover_sets.setdefault(f, set()).add(p)
        order = sorted(cover_sets, key=model.sort_key)
    else:
        order = list(dict.fromkeys(candidates))
        cover_sets = {f: {p for p in products if mul(p, inv(f)) in lam} for f in order}
    F = _greedy_cover(products, cover_sets, order)
    F = sorted(F, key=model.sort_key)
    witness = CoveringWitness(F, inner_radius, sample.radius, products_checked=len(products))
    witness.verified = verify_covering(sample, witness)
    return witness


def verify_covering(sample: FiniteSample, witness: CoveringWitness) -> bool:
    """Brute-force recheck: every xy (x, y inner) equals z f with z in the sample."""
    model = sample.model
    inner = sample.inner(witness.inner_radius)
    lam = list(sample.elements)
    targets = {model.mul(x, y) for x in inner for y in inner}
    found = set()
    for z in lam:
        for f in witness.F:
            zf = model.mul(z, f)
            if zf in targets:
                found.add(zf)
    return found == targets


def ruzsa_cover(model, X: Iterable, Y: Iterable) -> list:
    """Maximal F in X with the translates fY pairwise disjoint.

    X is scanned in model sort order; by maximality X is contained in F Y Y^-1.
    """
    X = sorted(set(X), key=model.sort_key)
    Y = list(set(Y))
    taken: set = set()
    F = []
    for x in X:
        translate = {model.mul(x, y) for y in Y}
        if translate.isdisjoint(taken):
            F.append(x)
            taken |= translate
    return F


def verify_ruzsa(model, X, Y, F) -> tuple[bool, bool]:
    """(translates pairwise disjoint, X contained in F Y Y^-1), checked directly."""
    Y = list(set(Y))
    translates = [{model.mul(f, y) for y in Y} for f in F]
    disjoint = all(
        translates[i].isdisjoint(translates[j]) for i in range(len(F)) for j in range(i + 1, len(F))
    )
    YYinv = {model.mul(y, model.inv(y2)) for y in Y for y2 in Y}
    cover = {model.mul(f, q) for f in F for q in YYinv}
    return disjoint, set(X) <= cover


@dataclass
class PowerCoverResult:
    holds: bool
    k: int
    l: int
    inner_radius: int
    checked: int
    failures: list


def power_cover_check(sample: FiniteSample, k: int, l: int, F: Iterable, inner_radius: int, budget=None) -> PowerCoverResult:
    """Check (Lambda cap B_r)^k contained in Lambda^(k-l) F^l on the sample.

    Lambda^(k-l) is taken as the (k-l)-fold product of the full sample.
    """
    if not 0 < l < k:
        raise ValueError("need 0 < l < k")
    if sample.radius < (k + 1) * inner_radius:
        raise HorizonTooSmall(f"sample radius {sample.radius} < {k + 1} * {inner_radius}")
    model = sample.model
    F = list(F)
    inner = sample.inner(inner_radius)
    lhs = power_set(model, inner, k, budget)
    if k - l == 1:
        base = sample.elements
    else:
        base = power_set(model, sample.elements, k - l, budget)
    Fl = power_set(model, F, l, budget)
    Fl_inv = [model.inv(f) for f in Fl]
    failures = []
    for p in sorted(lhs, key=model.sort_key):
        if not any(model.mul(p, fi) in base for fi in Fl_inv):
            failures.append(p)
    return PowerCoverResult(not failures, k, l, inner_radius, len(lhs), failures)
