"""Internal (chain) versus external (ambient word) metrics on subsets.

Two kinds of subset are handled.  A ``FiniteSample`` is Lambda cut to an
ambient ball; distances computed inside it come with an explicit horizon.
A ``Subset`` is Lambda given by a membership predicate; chain-metric BFS on
it explores the true (infinite, locally finite) graph and is exact up to the
element budget.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from .approx import FiniteSample
from .budget import default_budget
from .errors import BudgetExceeded, OutsideHorizon, TooFewPoints
from .groups import GroupModel, bfs_ball


class _Disconnected:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Disconnected"

    __str__ = __repr__

    def __reduce__(self):
        return (_Disconnected, ())


DISCONNECTED = _Disconnected()


@dataclass
class Subset:
    """Lambda inside ``model`` described by a membership predicate."""

    model: GroupModel
    contains: Callable
    name: str = "Lambda"

    def __contains__(self, g):
        return self.contains(g)


def _ambient_ball(model, radius, cache={}):
    key = (id(model), radius)
    if key not in cache:
        cache[key] = (model, bfs_ball(model, radius))
    return cache[key][1]


class ExternalMetric:
    """d_S restricted to a finite sample: d(x, y) = |x^-1 y|_S."""

    provenance = "external"

    def __init__(self, sample: FiniteSample):
        self.sample = sample
        self.model = sample.model
        self.elements = sample.elements
        self.valid_radius = sample.radius

    def distance(self, x, y) -> int:
        m = self.model
        return m.word_norm(m.mul(m.inv(x), y))

    def norm(self, x) -> int:
        return self.sample.norms[x]

    def neighbors(self, x, c: int):
        """(y, d(x, y)) for sample points y with d(x, y) <= c."""
        ball = _ambient_ball(self.model, int(c))
        mul = self.model.mul
        out = []
        for g in ball.elements:
            y = mul(x, g)
            if y in self.elements:
                out.append((y, ball.distance[g]))
        return out

    def ball_count(self, r: int) -> int:
        if r > self.valid_radius:
            raise OutsideHorizon(f"radius {r} beyond sample radius {self.valid_radius}")
        return sum(1 for d in self.sample.norms.values() if d <= r)


def external_metric(sample: FiniteSample) -> ExternalMetric:
    return ExternalMetric(sample)


class ChainMetric:
    """d_C(x, y): fewest steps of ambient length <= C through the set.

    Over a ``FiniteSample`` of ambient radius R, a computed value n for
    (x, y) is certified exact when (|x| + |y| + (n - 1) C) / 2 <= R: every
    shorter chain stays inside the sample.  ``DISCONNECTED`` means no chain
    inside the sample.
    """

    provenance = "internal"

    def __init__(self, base, C: int, budget: int | None = None):
        if C <= 0:
            raise ValueError("chain constant must be positive")
        self.base = base
        self.C = int(C)
        self.model = base.model
        self.budget = budget or default_budget()
        self.step_ball = _ambient_ball(self.model, self.C)
        self.finite = isinstance(base, FiniteSample)
        self.elements = base.elements if self.finite else None
        self.valid_radius = base.radius if self.finite else math.inf
        self._adj_cache: dict = {}
        self._bfs_cache: dict = {}

    def _member(self, g) -> bool:
        return g in self.elements if self.finite else self.base.contains(g)

    def step_neighbors(self, x) -> list:
        nb = self._adj_cache.get(x)
        if nb is None:
            mul = self.model.mul
            nb = []
            for g in self.step_ball.elements:
                if g == self.step_ball.elements[0]:
                    continue
                y = mul(x, g)
                if self._member(y):
                    nb.append(y)
            self._adj_cache[x] = nb
        return nb

    def _bfs(self, source, max_depth=None, target=None):
        dist = {source: 0}
        queue = deque([source])
        while queue:
            x = queue.popleft()
            d = dist[x]
            if target is not None and x == target:
                break
            if max_depth is not None and d >= max_depth:
                continue
            for y in self.step_neighbors(x):
                if y not in dist:
                    dist[y] = d + 1
                    queue.append(y)
                    if len(dist) > self.budget:
                        raise BudgetExceeded("chain-metric BFS", self.budget, "geometry")
            if target is not None and target in dist:
                break
        return dist

    def distance(self, x, y):
        if x == y:
            return 0
        if self.finite:
            if x not in self._bfs_cache:
                self._bfs_cache[x] = self._bfs(x)
            return self._bfs_cache[x].get(y, DISCONNECTED)
        return self._bfs(x, target=y).get(y, DISCONNECTED)

    def is_certified(self, x, y, value) -> bool:
        """True if ``value`` = distance(x, y) is exact for the untruncated set."""
        if not self.finite:
            return True
        norms = self.base.norms
        if value is DISCONNECTED:
            return False
        return (norms[x] + norms[y] + (value - 1) * self.C) <= 2 * self.valid_radius

    def neighbors(self, x, c: int):
        out = []
        for y, d in self._bfs(x, max_depth=int(c)).items():
            if y != x:
                out.append((y, d))
        return out

    def ball(self, r: int) -> dict:
        """Internal ball around e: element -> d_C(e, element)."""
        if self.finite and r * self.C > self.valid_radius:
            raise OutsideHorizon(f"internal radius {r} * C exceeds sample radius {self.valid_radius}")
        return self._bfs(self.model.identity(), max_depth=r)


def internal_metric(base, C: int, budget: int | None = None) -> ChainMetric:
    return ChainMetric(base, C, budget)


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def coarse_components(metric, c) -> list[frozenset]:
    """Components of the graph joining sample points at distance <= c.

    Sorted by size (largest first), then by smallest member.
    """
    elements = metric.elements
    if elements is None:
        raise ValueError("coarse components need a finite sample")
    uf = _UnionFind(elements)
    for x in elements:
        for y, _ in metric.neighbors(x, c):
            uf.union(x, y)
    groups: dict = {}
    for x in elements:
        groups.setdefault(uf.find(x), []).append(x)
    key = metric.model.sort_key
    comps = [frozenset(v) for v in groups.values()]
    comps.sort(key=lambda s: (-len(s), key(min(s, key=key))))
    return comps


@dataclass
class GrowthSeries:
    points: list  # (r, gamma(r))
    provenance: str = "external"

    def __post_init__(self):
        vals = [g for _, g in self.points]
        if any(b < a for a, b in zip(vals, vals[1:])):
            raise ValueError("growth series must be nondecreasing")

    @property
    def radii(self):
        return [r for r, _ in self.points]

    @property
    def values(self):
        return [g for _, g in self.points]

    def as_dict(self):
        return {"provenance": self.provenance, "series": [[r, g] for r, g in self.points]}


def growth_series(metric, max_radius: int | None = None) -> GrowthSeries:
    """gamma(r) = |Lambda cap closed ball(e, r)| for r = 0 .. max_radius."""
    if isinstance(metric, ExternalMetric):
        top = metric.valid_radius if max_radius is None else max_radius
        if top > metric.valid_radius:
            raise OutsideHorizon(f"radius {top} beyond sample radius {metric.valid_radius}")
        counts = [0] * (top + 1)
        for d in metric.sample.norms.values():
            if d <= top:
                counts[d] += 1
        acc, pts = 0, []
        for r in range(top + 1):
            acc += counts[r]
            pts.append((r, acc))
        return GrowthSeries(pts, "external")
    if max_radius is None:
        if not metric.finite:
            raise ValueError("max_radius required for an unbounded set")
        max_radius = int(metric.valid_radius // metric.C)
    dist = metric.ball(max_radius)
    counts = [0] * (max_radius + 1)
    for d in dist.values():
        counts[d] += 1
    acc, pts = 0, []
    for r in range(max_radius + 1):
        acc += counts[r]
        pts.append((r, acc))
    return GrowthSeries(pts, f"internal(C={metric.C})")


@dataclass
class GrowthClass:
    kind: str  # polynomial | exponential | inconclusive
    degree: float
    rate: float
    rss_polynomial: float
    rss_exponential: float
    window: tuple

    def as_dict(self):
        return {
            "kind": self.kind,
            "degree": self.degree,
            "rate": self.rate,
            "rss_polynomial": self.rss_polynomial,
            "rss_exponential": self.rss_exponential,
            "window": list(self.window),
        }


MARGIN = 0.8


def _lsq(x, y):
    A = np.vstack([x, np.ones_like(x)]).T
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - A @ coef
    return float(coef[0]), float(resid @ resid)


def growth_classify(series: GrowthSeries, margin: float = MARGIN) -> GrowthClass:
    """Fit log(gamma(r) - gamma(0)) against r and against log r.

    Only the upper half of the radii (the asymptotic window) enters the
    fits.  A model wins if its residual is at most ``margin`` times the
    other's; otherwise the result is inconclusive.
    """
    pts = [(r, g) for r, g in series.points if r >= 1]
    if len(pts) < 5:
        raise TooFewPoints(f"need >= 5 points with r >= 1, got {len(pts)}")
    base = series.points[0][1] if series.points[0][0] == 0 else 0
    rmax = pts[-1][0]
    window = [(r, g - base) for r, g in pts if 2 * r >= rmax and g > base]
    if len(window) < 3:
        raise TooFewPoints("asymptotic window has fewer than 3 usable points")
    r = np.array([p[0] for p in window], float)
    y = np.log(np.array([p[1] for p in window], float))
    rate, rss_exp = _lsq(r, y)
    degree, rss_poly = _lsq(np.log(r), y)
    if rss_exp <= margin * rss_poly and rss_exp < rss_poly:
        kind = "exponential"
    elif rss_poly <= margin * rss_exp and rss_poly < rss_exp:
        kind = "polynomial"
    elif rss_poly == rss_exp == 0.0:
        kind = "inconclusive"
    else:
        kind = "inconclusive"
    return GrowthClass(kind, degree, rate, rss_poly, rss_exp, (int(r[0]), int(r[-1])))


@dataclass
class ColoredCover:
    """Color classes U^(0..n); each member set has diameter <= D and
    same-colored members are at distance >= R."""

    classes: list  # list of lists of frozensets
    R: int
    D: int
    diameters: list = field(default_factory=list)  # aligned with members()

    @property
    def num_colors(self):
        return len(self.classes)

    def members(self):
        for color, sets in enumerate(self.classes):
            for U in sets:
                yield color, U


def brick_clusters(points: Iterable, width: int, height: int) -> list[frozenset]:
    """Running-bond bricks of ``width`` x ``height`` on Z^2 points.

    Each row of bricks is shifted by half a brick against its neighbours, so
    every brick touches only six others and three colors suffice.
    """
    if width < 2 or height < 1:
        raise ValueError("bricks need width >= 2 and height >= 1")
    shift = width // 2
    bricks: dict = {}
    for x, y in points:
        row = y // height
        col = (x + (row % 2) * shift) // width
        bricks.setdefault((row, col), []).append((x, y))
    return [frozenset(bricks[k]) for k in sorted(bricks)]


def _diameter(metric, U) -> int:
    U = list(U)
    best = 0
    for i, x in enumerate(U):
        for y in U[i + 1 :]:
            d = metric.distance(x, y)
            if d is DISCONNECTED:
                return math.inf
            best = max(best, d)
    return best


def greedy_colored_cover(metric, R: int, D: int, clusters: Iterable | None = None) -> ColoredCover:
    """Greedy (n+1)-colored cover, giving an upper bound for asdim at scale (R, D).

    Clusters (if not supplied) are carved greedily: the first uncovered point
    in sort order takes every uncovered point within distance D/2.  Colors are
    then assigned DSatur-style so that same-colored clusters are R-disjoint.
    """
    if D < R:
        raise ValueError("need D >= R")
    key = metric.model.sort_key
    points = sorted(metric.elements, key=key)
    if clusters is None:
        owner: dict = {}
        clusters = []
        half = D // 2
        for p in points:
            if p in owner:
                continue
            idx = len(clusters)
            members = [p]
            owner[p] = idx
            for y, _ in metric.neighbors(p, half):
                if y not in owner:
                    owner[y] = idx
                    members.append(y)
            clusters.append(frozenset(members))
    else:
        clusters = [frozenset(U) for U in clusters]
        owner = {x: i for i, U in enumerate(clusters) for x in U}
    # conflict graph: clusters closer than R
    conflicts = [set() for _ in clusters]
    if R > 0:
        for x in points:
            i = owner[x]
            for y, d in metric.neighbors(x, R - 1):
                j = owner[y]
                if j != i:
                    conflicts[i].add(j)
                    conflicts[j].add(i)
    color = [-1] * len(clusters)
    uncolored = set(range(len(clusters)))
    while uncolored:
        def saturation(i):
            return len({color[j] for j in conflicts[i] if color[j] >= 0})

        i = min(uncolored, key=lambda i: (-saturation(i), -len(conflicts[i]), i))
        used = {color[j] for j in conflicts[i] if color[j] >= 0}
        c = 0
        while c in used:
            c += 1
        color[i] = c
        uncolored.remove(i)
    ncolors = max(color) + 1 if color else 0
    classes = [[] for _ in range(ncolors)]
    for i, U in enumerate(clusters):
        classes[color[i]].append(U)
    cover = ColoredCover(classes, R, D)
    cover.diameters = [_diameter(metric, U) for _, U in cover.members()]
    return cover


def verify_colored_cover(metric, cover: ColoredCover) -> dict:
    """Re-check (ASD1) cover, (ASD2) diameters <= D, (ASD3) R-disjointness exactly."""
    covered = set()
    for _, U in cover.members():
        covered |= U
    asd1 = covered == set(metric.elements)
    asd2 = all(_diameter(metric, U) <= cover.D for _, U in cover.members())
    asd3 = True
    for sets in cover.classes:
        owner = {x: i for i, U in enumerate(sets) for x in U}
        for i, U in enumerate(sets):
            for x in U:
                for y, d in metric.neighbors(x, cover.R - 1) if cover.R > 0 else []:
                    j = owner.get(y)
                    if j is not None and j != i:
                        asd3 = False
    return {"ASD1": asd1, "ASD2": asd2, "ASD3": asd3, "valid": asd1 and asd2 and asd3}
