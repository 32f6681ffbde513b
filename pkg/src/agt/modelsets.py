"""Cut-and-project model sets in R from Z[sqrt2] and Z[phi], with exact arithmetic.

Elements a + b*omega carry rational coefficients; every order comparison is
settled by squaring with integers, never by floating point.  Floats appear
only when bounding the (a, b) search box, with a safety margin.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import total_ordering
from numbers import Rational

from .approx import CoveringWitness, FiniteSample, find_covering
from .budget import check_budget
from .errors import TooFewPoints
from .groups import GroupModel


@dataclass(frozen=True)
class QuadRing:
    """Z[omega] with omega^2 = trace*omega - norm (minimal polynomial)."""

    name: str
    trace: int
    norm: int

    @property
    def disc(self) -> int:
        return self.trace * self.trace - 4 * self.norm

    @property
    def omega_float(self) -> float:
        return (self.trace + math.sqrt(self.disc)) / 2

    @property
    def conj_float(self) -> float:
        return (self.trace - math.sqrt(self.disc)) / 2

    def __call__(self, a, b=0) -> QuadElement:
        return QuadElement(Fraction(a), Fraction(b), self)

    @property
    def omega(self) -> QuadElement:
        return self(0, 1)


SQRT2 = QuadRing("sqrt2", 0, -2)  # omega^2 = 2
GOLDEN = QuadRing("golden", 1, -1)  # omega^2 = omega + 1
RINGS = {"sqrt2": SQRT2, "golden": GOLDEN}


def _sign_sqrt(p: Fraction, q: Fraction, d: int) -> int:
    """sign(p + q sqrt(d)) for rational p, q and squarefree-or-not d > 0."""
    sp = (p > 0) - (p < 0)
    sq = (q > 0) - (q < 0)
    if sq == 0:
        return sp
    if sp == 0 or sp == sq:
        return sq
    # opposite signs: compare p^2 with q^2 d
    lhs, rhs = p * p, q * q * d
    if lhs == rhs:
        return 0
    return sp if lhs > rhs else sq


@total_ordering
class QuadElement:
    """a + b*omega in Q(omega), compared and ordered exactly as a real number."""

    __slots__ = ("a", "b", "ring")

    def __init__(self, a, b, ring: QuadRing):
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.ring = ring

    def _coerce(self, other) -> QuadElement:
        if isinstance(other, QuadElement):
            if other.ring != self.ring:
                raise ValueError("elements of different rings")
            return other
        if isinstance(other, (int, Fraction, Rational)):
            return QuadElement(other, 0, self.ring)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadElement(self.a + o.a, self.b + o.b, self.ring)

    __radd__ = __add__

    def __neg__(self):
        return QuadElement(-self.a, -self.b, self.ring)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadElement(self.a - o.a, self.b - o.b, self.ring)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        t, n = self.ring.trace, self.ring.norm
        bb = self.b * o.b
        # omega^2 = t omega - n
        return QuadElement(self.a * o.a - n * bb, self.a * o.b + self.b * o.a + t * bb, self.ring)

    __rmul__ = __mul__

    def conjugate(self) -> QuadElement:
        # omega' = t - omega
        return QuadElement(self.a + self.b * self.ring.trace, -self.b, self.ring)

    def field_norm(self) -> Fraction:
        c = self * self.conjugate()
        return c.a

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        n = o.field_norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in quadratic field")
        num = self * o.conjugate()
        return QuadElement(num.a / n, num.b / n, self.ring)

    def sign(self) -> int:
        # a + b omega = (2a + b t)/2 + (b/2) sqrt(disc)
        return _sign_sqrt(self.a + self.b * Fraction(self.ring.trace, 2), self.b / 2, self.ring.disc)

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __eq__(self, other):
        o = self._coerce(other) if not isinstance(other, float) else NotImplemented
        if o is NotImplemented:
            return False
        return self.a == o.a and self.b == o.b

    def __lt__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return (self - o).sign() < 0

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.ring.name))

    def __float__(self):
        return float(self.a) + float(self.b) * self.ring.omega_float

    def __repr__(self):
        return f"QuadElement({self.a}, {self.b}, {self.ring.name})"

    def __str__(self):
        return f"{self.a}+{self.b}w" if self.b >= 0 else f"{self.a}-{-self.b}w"

    def pair(self) -> tuple:
        return (self.a, self.b)


_TERM = re.compile(r"([+-]?)(\d+(?:/\d+)?)?(w)?(?:/(\d+))?")


def as_quad(value, ring: QuadRing) -> QuadElement:
    """Coerce numbers or text such as ``3``, ``1/2w``, ``1-2w``, ``phi/2``."""
    if isinstance(value, QuadElement):
        return value
    if not isinstance(value, str):
        return ring(Fraction(value))
    text = value.replace(" ", "").replace("phi", "w").replace("omega", "w")
    terms = re.findall(r"[+-]?[^+-]+", text)
    if not terms or "".join(terms) != text:
        raise ValueError(f"cannot parse ring element {value!r}")
    a = b = Fraction(0)
    for term in terms:
        m = _TERM.fullmatch(term)
        if m is None or (m[2] is None and m[3] is None):
            raise ValueError(f"cannot parse ring element {value!r}")
        coef = Fraction(m[2]) if m[2] else Fraction(1)
        if m[1] == "-":
            coef = -coef
        if m[4]:
            coef /= int(m[4])
        if m[3]:
            b += coef
        else:
            a += coef
    return ring(a, b)


@dataclass
class CPScheme:
    """Lattice {(x, sigma x)} in R x R with the closed window [-s, s]."""

    ring: QuadRing
    s: object  # rational or QuadElement half-width
    closed: bool = True

    def __post_init__(self):
        self.s = as_quad(self.s, self.ring)
        if self.s.sign() < 0:
            raise ValueError("window half-width must be nonnegative")

    def in_window(self, internal: QuadElement, scale: Fraction = Fraction(1)) -> bool:
        s = self.s * scale
        if self.closed:
            return abs(internal) <= s
        return abs(internal) < s

    def contains(self, x: QuadElement, scale: Fraction = Fraction(1)) -> bool:
        """x in Lambda(Gamma, scale * W); x must be a lattice point."""
        return self.in_window(x.conjugate(), scale)

    def scaled(self, scale) -> CPScheme:
        return CPScheme(self.ring, self.s * Fraction(scale), self.closed)


@dataclass
class ModelSetSample:
    points: list  # sorted QuadElements
    radius: object
    scheme: CPScheme = field(repr=False)

    def __len__(self):
        return len(self.points)

    def __contains__(self, x):
        return x in set(self.points)

    def to_tsv(self) -> str:
        lines = ["a\tb\tvalue"]
        for x in self.points:
            lines.append(f"{x.a}\t{x.b}\t{float(x):.12g}")
        return "\n".join(lines) + "\n"


def _search_box(ring: QuadRing, R: float, s: float) -> tuple[int, int]:
    w, wc = ring.omega_float, ring.conj_float
    gap = abs(w - wc)
    bmax = (R + s) / gap
    amax = (abs(w) * s + abs(wc) * R) / gap
    return int(math.ceil(amax)) + 2, int(math.ceil(bmax)) + 2


def generate(scheme: CPScheme, R, budget: int | None = None) -> ModelSetSample:
    """All lattice points x with |x| <= R and sigma(x) in the window."""
    ring = scheme.ring
    Rq = as_quad(R, ring)
    if Rq.sign() <= 0:
        raise ValueError("radius must be positive")
    amax, bmax = _search_box(ring, float(Rq), float(scheme.s))
    check_budget((2 * amax + 1) * (2 * bmax + 1), budget, "model-set search box", "modelsets")
    pts = []
    for b in range(-bmax, bmax + 1):
        for a in range(-amax, amax + 1):
            x = ring(a, b)
            if abs(x) <= Rq and scheme.contains(x):
                pts.append(x)
    pts.sort()
    return ModelSetSample(pts, Rq, scheme)


@dataclass
class DeloneReport:
    min_gap: QuadElement
    max_gap: QuadElement
    gaps: list  # distinct interior gaps, ascending

    def as_dict(self):
        return {
            "min_gap": [str(self.min_gap.a), str(self.min_gap.b)],
            "max_gap": [str(self.max_gap.a), str(self.max_gap.b)],
            "gaps": [[str(g.a), str(g.b), float(g)] for g in self.gaps],
        }


def delone_params(sample: ModelSetSample) -> DeloneReport:
    """Min and max consecutive gaps, ignoring the gap at each end of the sample."""
    pts = sample.points
    if len(pts) < 3:
        raise TooFewPoints("need at least 3 points")
    gaps = [q - p for p, q in zip(pts, pts[1:])]
    inner = gaps[1:-1] or gaps
    distinct = sorted(set(inner))
    return DeloneReport(distinct[0], distinct[-1], distinct)


class AdditiveModel(GroupModel):
    """(Z[omega], +) with exact normal forms, for the generic covering search."""

    num_generators = 0

    def __init__(self, ring: QuadRing):
        self.ring = ring
        self.name = f"Z[{ring.name}]"

    def identity(self):
        return self.ring(0)

    def mul(self, x, y):
        return x + y

    def inv(self, x):
        return -x

    def format(self, x):
        return str(x)

    def sort_key(self, x):
        return (abs(x), x)

    def word_norm(self, g, budget=None):
        return abs(g)


def approx_cover_check(sample: ModelSetSample, inner_radius, budget: int | None = None) -> CoveringWitness:
    """Finite F with (Lambda cap [-r, r]) + (Lambda cap [-r, r]) in Lambda + F, checked exactly."""
    model = AdditiveModel(sample.scheme.ring)
    norms = {x: abs(x) for x in sample.points}
    fs = FiniteSample(model, frozenset(sample.points), sample.radius, norms, "model set")
    return find_covering(fs, inner_radius, budget=budget)


@dataclass
class NestedReport:
    levels: int
    radius: object
    inclusions: list  # per k: Lambda_{k+1} + Lambda_{k+1} in Lambda_k
    sizes: list
    max_gaps: list

    @property
    def holds(self) -> bool:
        return all(self.inclusions)

    def as_dict(self):
        return {
            "levels": self.levels,
            "holds": self.holds,
            "inclusions": self.inclusions,
            "sizes": self.sizes,
            "max_gaps": [float(g) for g in self.max_gaps],
        }


def nested_windows_check(scheme: CPScheme, n_levels: int, R=50, budget: int | None = None) -> NestedReport:
    """Check Lambda(W_{k+1}) + Lambda(W_{k+1}) in Lambda(W_k) with W_k = [-s/2^k, s/2^k].

    Sums are tested against the exact membership predicate, so sample
    truncation cannot cause false failures.
    """
    samples = [generate(scheme.scaled(Fraction(1, 2**k)), R, budget) for k in range(n_levels + 1)]
    inclusions, max_gaps = [], []
    for k in range(n_levels):
        finer = samples[k + 1].points
        scale = Fraction(1, 2**k)
        ok = all(scheme.contains(x + y, scale) for x in finer for y in finer)
        inclusions.append(ok)
    for smp in samples:
        pts = smp.points
        max_gaps.append(max((q - p for p, q in zip(pts, pts[1:])), default=scheme.ring(0)))
    return NestedReport(n_levels, R, inclusions, [len(s) for s in samples], max_gaps)
