"""Counting quasimorphisms on free groups, their defects and quasi-kernels."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import EmptyPattern, PatternNotCyclicallyReduced
from .words import (
    Word,
    _count,
    _count_cyclic,
    cyclic_reduce,
    enumerate_ball,
    invert,
    is_cyclically_reduced,
    power,
)


def phi(u: Word, v: Word) -> int:
    """Big counting quasimorphism: #_u(v) - #_{u^-1}(v)."""
    if not u:
        raise EmptyPattern("counting quasimorphism needs u != e")
    return _count(u.letters, v.letters) - _count(invert(u).letters, v.letters)


def phi_cyc(u: Word, v: Word) -> int:
    """Cyclic counting quasimorphism, evaluated on the cyclic word [v]."""
    if not u:
        raise EmptyPattern("counting quasimorphism needs u != e")
    if not is_cyclically_reduced(u):
        raise PatternNotCyclicallyReduced(str(u))
    core = cyclic_reduce(v)[1].letters
    return _count_cyclic(u.letters, core) - _count_cyclic(invert(u).letters, core)


@dataclass(frozen=True)
class CountingQM:
    """phi_u (or its cyclic variant) as a callable on words."""

    pattern: Word
    cyclic: bool = False

    def __post_init__(self):
        if not self.pattern:
            raise EmptyPattern("counting quasimorphism needs u != e")
        if self.cyclic and not is_cyclically_reduced(self.pattern):
            raise PatternNotCyclicallyReduced(str(self.pattern))

    @property
    def rank(self):
        return self.pattern.rank

    def __call__(self, g: Word) -> int:
        return phi_cyc(self.pattern, g) if self.cyclic else phi(self.pattern, g)


def homogenize_estimate(u: Word, w: Word, N: int) -> Fraction:
    """phi_u(w^N) / N as an exact rational."""
    if N < 1:
        raise ValueError("N must be >= 1")
    return Fraction(phi(u, power(w, N)), N)


def homogenize_increment(u: Word, w: Word, N: int) -> int:
    """phi_u(w^(N+1)) - phi_u(w^N).

    For cyclically reduced ``w`` this equals phi_u^cyc(w) as soon as
    N*|w| >= |u| - 1: every extra period adds exactly the cyclic count.
    """
    return phi(u, power(w, N + 1)) - phi(u, power(w, N))


@dataclass(frozen=True)
class DefectReport:
    radius: int
    defect_set: frozenset
    pattern: Word
    cyclic: bool = False

    @property
    def max_abs(self) -> int:
        return max(abs(d) for d in self.defect_set)

    def as_dict(self):
        return {
            "pattern": str(self.pattern),
            "cyclic": self.cyclic,
            "radius": self.radius,
            "defect_set": sorted(self.defect_set),
            "max_abs": self.max_abs,
        }


def defect_on_ball(u: Word, radius: int, cyclic: bool = False, budget: int | None = None) -> DefectReport:
    """D_R = {f(xy) - f(x) - f(y) : x, y in B_R} for f = phi_u (or phi_u^cyc).

    This is an under-approximation of the true defect set, monotone in R.
    """
    f = CountingQM(u, cyclic)
    ball = enumerate_ball(u.rank, radius, budget)
    values = {g: f(g) for g in ball}
    defects = set()
    for x in ball:
        fx = values[x]
        for y in ball:
            xy = x * y
            fxy = values.get(xy)
            if fxy is None:
                fxy = f(xy)
            defects.add(fxy - fx - values[y])
    return DefectReport(radius, frozenset(defects), u, cyclic)


def qker_member(u: Word, bound: int, g: Word, cyclic: bool = False) -> bool:
    """|f(g)| <= bound, the scalar form of the quasi-kernel f^-1(D_sym)."""
    value = phi_cyc(u, g) if cyclic else phi(u, g)
    return abs(value) <= bound


def positivity_member(u: Word, g: Word) -> bool:
    """g in Pos(phi_u^cyc)."""
    return phi_cyc(u, g) >= 0


def quasi_kernel(u: Word, bound: int = 1, cyclic: bool = False):
    """Membership predicate for qker, usable as a ``Subset`` predicate."""

    def contains(g: Word) -> bool:
        return qker_member(u, bound, g, cyclic)

    contains.__name__ = f"qker_{u}"
    return contains
