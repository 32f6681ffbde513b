"""Exact normal-form models of F_r, Z^n and BS(1,2), plus BFS word metrics."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable

from .budget import check_budget, default_budget
from .errors import BudgetExceeded, DyadicOverflow, InvalidLetter
from .words import Word, alphabet, parse_word, reduce

DEFAULT_MAX_BITS = 1 << 16


@dataclass(frozen=True, order=True)
class BS12Element:
    """The element (t, k) of Z[1/2] x| Z with t = p / 2**e.

    Normalized: p odd, or p = e = 0.  Multiplication follows
    (t, k)(t', k') = (t + 2**k t', k + k'); a = (1, 0) and b = (0, 1).
    """

    k: int
    e: int
    p: int

    @classmethod
    def make(cls, p: int, e: int, k: int) -> BS12Element:
        return cls(k, *_normalize(p, e)[::-1])

    @property
    def t(self) -> Fraction:
        return Fraction(self.p, 1 << self.e)

    def __str__(self):
        return f"{self.p}/2^{self.e} | {self.k}"


def _normalize(p: int, e: int) -> tuple[int, int]:
    if p == 0:
        return 0, 0
    if e < 0:
        return p << -e, 0
    if e:
        tz = (p & -p).bit_length() - 1
        shift = min(tz, e)
        p >>= shift
        e -= shift
    return p, e


def bs12_multiply(x: BS12Element, y: BS12Element, max_bits: int | None = DEFAULT_MAX_BITS) -> BS12Element:
    # t + 2^k t' with t = p/2^e, t' = p'/2^e'  ->  common exponent E
    e2 = y.e - x.k
    E = max(x.e, e2)
    num = (x.p << (E - x.e)) + (y.p << (E - e2))
    p, e = _normalize(num, E)
    if max_bits is not None and (p.bit_length() > max_bits or e > max_bits):
        raise DyadicOverflow(f"dyadic numerator exceeds {max_bits} bits")
    return BS12Element(x.k + y.k, e, p)


def bs12_inverse(x: BS12Element) -> BS12Element:
    # (t, k)^-1 = (-2^-k t, -k)
    p, e = _normalize(-x.p, x.e + x.k)
    return BS12Element(-x.k, e, p)


class GroupModel:
    """A marked group with exact normal forms.

    Words over the model use letters ``i`` / ``-i`` for the i-th basic
    generator and its inverse; the symmetric generating set is
    ``{g_i^{+-1}}``.
    """

    name = "group"
    num_generators = 0

    def identity(self) -> Hashable:
        raise NotImplementedError

    def mul(self, x, y):
        raise NotImplementedError

    def inv(self, x):
        raise NotImplementedError

    def generator(self, i: int):
        raise NotImplementedError

    def format(self, x) -> str:
        return str(x)

    def parse(self, text: str):
        raise NotImplementedError

    def sort_key(self, x):
        return x

    def letter(self, x: int):
        g = self.generator(abs(x))
        return g if x > 0 else self.inv(g)

    def generators(self) -> list:
        """Symmetric generating set S, ordered a1, A1, a2, A2, ..."""
        return [self.letter(x) for x in alphabet(self.num_generators)]

    def eval_word(self, w) -> Hashable:
        letters = w.letters if isinstance(w, Word) else tuple(w)
        g = self.identity()
        for x in letters:
            if x == 0 or abs(x) > self.num_generators:
                raise InvalidLetter(f"letter {x} out of range for {self.name}")
            g = self.mul(g, self.letter(x))
        return g

    def word_norm(self, g, budget: int | None = None) -> int:
        """Word length |g|_S, by bidirectional BFS unless overridden."""
        return bidirectional_distance(self, self.identity(), g, budget=budget)


class FreeGroup(GroupModel):
    def __init__(self, rank: int = 2):
        self.rank = rank
        self.num_generators = rank
        self.name = f"F{rank}"

    def identity(self):
        return Word.identity(self.rank)

    def mul(self, x, y):
        return x * y

    def inv(self, x):
        return x.inverse()

    def generator(self, i):
        return Word._make((i,), self.rank)

    def letter(self, x):
        return Word._make((x,), self.rank)

    def parse(self, text):
        return parse_word(text, self.rank)

    def sort_key(self, x):
        return x.sort_key()

    def eval_word(self, w):
        letters = w.letters if isinstance(w, Word) else tuple(w)
        return reduce(letters, self.rank)

    def word_norm(self, g, budget=None):
        return len(g)


class FreeAbelian(GroupModel):
    def __init__(self, n: int = 2):
        self.n = n
        self.num_generators = n
        self.name = f"Z{n}"

    def identity(self):
        return (0,) * self.n

    def mul(self, x, y):
        return tuple(a + b for a, b in zip(x, y))

    def inv(self, x):
        return tuple(-a for a in x)

    def generator(self, i):
        return tuple(1 if j == i - 1 else 0 for j in range(self.n))

    def format(self, x):
        return ",".join(str(a) for a in x)

    def parse(self, text):
        vals = tuple(int(s) for s in text.replace("(", "").replace(")", "").split(","))
        if len(vals) != self.n:
            raise ValueError(f"expected {self.n} coordinates in {text!r}")
        return vals

    def sort_key(self, x):
        return (sum(abs(a) for a in x), x)

    def word_norm(self, g, budget=None):
        return sum(abs(a) for a in g)


class BS12(GroupModel):
    """BS(1,2) = <a, b | b a b^-1 = a^2>; generator 1 is a, generator 2 is b."""

    name = "BS12"
    num_generators = 2

    def __init__(self, max_bits: int | None = DEFAULT_MAX_BITS):
        self.max_bits = max_bits

    def identity(self):
        return BS12Element(0, 0, 0)

    def mul(self, x, y):
        return bs12_multiply(x, y, self.max_bits)

    def inv(self, x):
        return bs12_inverse(x)

    def generator(self, i):
        if i == 1:
            return BS12Element(0, 0, 1)
        if i == 2:
            return BS12Element(1, 0, 0)
        raise InvalidLetter(f"BS12 has generators 1 (a) and 2 (b), got {i}")

    def a_power(self, n: int) -> BS12Element:
        return BS12Element.make(n, 0, 0)

    def format(self, x):
        return str(x)

    def parse(self, text):
        left, k = text.split("|")
        p, e = left.split("/2^")
        return BS12Element.make(int(p), int(e), int(k))

    def sort_key(self, x):
        return (x.k, x.e, x.p)

    def in_distorted_lambda(self, x) -> bool:
        """Membership in <a> u {b, b^-1}: a symmetric unital set generating BS(1,2)."""
        return (x.k == 0 and x.e == 0) or (abs(x.k) == 1 and x.p == 0)


def make_model(spec: str) -> GroupModel:
    """``F2``, ``F3``, ``Z1``, ``Z2``, ``BS12``."""
    s = spec.strip().upper()
    if s.startswith("F") and s[1:].isdigit():
        return FreeGroup(int(s[1:]))
    if s.startswith("Z") and s[1:].isdigit():
        return FreeAbelian(int(s[1:]))
    if s in ("BS12", "BS(1,2)"):
        return BS12()
    raise ValueError(f"unknown group {spec!r}")


@dataclass
class BallTable:
    """Elements of B(e, R) with exact word-metric distances from e."""

    model: GroupModel
    radius: int
    elements: list
    distance: dict = field(repr=False)

    def __contains__(self, g):
        return g in self.distance

    def __len__(self):
        return len(self.elements)

    def norm(self, g) -> int:
        return self.distance[g]

    def sphere(self, r: int) -> list:
        return [g for g in self.elements if self.distance[g] == r]

    def to_tsv(self) -> str:
        lines = ["normal_form\tdistance"]
        for g in self.elements:
            lines.append(f"{self.model.format(g)}\t{self.distance[g]}")
        return "\n".join(lines) + "\n"


def bfs_ball(model: GroupModel, radius: int, budget: int | None = None, generators: Iterable | None = None) -> BallTable:
    """Breadth-first search of the Cayley graph out to ``radius``."""
    if budget is None:
        budget = default_budget()
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    gens = list(generators) if generators is not None else model.generators()
    e = model.identity()
    dist = {e: 0}
    order = [e]
    frontier = [e]
    for r in range(1, radius + 1):
        nxt = []
        for g in frontier:
            for s in gens:
                h = model.mul(g, s)
                if h not in dist:
                    dist[h] = r
                    order.append(h)
                    nxt.append(h)
        check_budget(len(order), budget, f"ball of radius {radius} in {model.name}", "groups")
        frontier = nxt
    return BallTable(model, radius, order, dist)


def bidirectional_distance(model: GroupModel, g, h, budget: int | None = None) -> int:
    """Exact d_S(g, h) by meeting two BFS frontiers in the middle."""
    if budget is None:
        budget = default_budget()
    target = model.mul(model.inv(g), h)
    e = model.identity()
    if target == e:
        return 0
    gens = model.generators()
    seen = [{e: 0}, {target: 0}]
    frontiers = [[e], [target]]
    depth = [0, 0]
    while frontiers[0] and frontiers[1]:
        side = 0 if len(frontiers[0]) <= len(frontiers[1]) else 1
        mine, other = seen[side], seen[1 - side]
        nxt = []
        depth[side] += 1
        best = None
        for x in frontiers[side]:
            for s in gens:
                y = model.mul(x, s)
                if y in mine:
                    continue
                mine[y] = depth[side]
                if y in other:
                    total = depth[side] + other[y]
                    best = total if best is None else min(best, total)
                nxt.append(y)
        if best is not None:
            return best
        frontiers[side] = nxt
        if len(seen[0]) + len(seen[1]) > budget:
            raise BudgetExceeded("bidirectional BFS", budget, "groups")
    raise BudgetExceeded("bidirectional BFS found no path", budget, "groups")
