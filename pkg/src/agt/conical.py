"""Conicality of periodic rays in the Cayley tree of F_r for quasi-kernels.

Also the separation search that tells patterns apart by their zero sets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .blockers import find_blocker
from .errors import BlockerNotFound, InvalidPattern
from .quasimorphisms import phi, phi_cyc
from .words import (
    Word,
    _count_cyclic,
    concat,
    enumerate_cyclically_reduced,
    invert,
    is_cyclically_reduced,
    is_reduced_product,
    is_special,
    power,
    u_decomposition,
)


@dataclass(frozen=True)
class PeriodicRay:
    """The geodesic ray p, p w, p w^2, ... with p w w a reduced product."""

    prefix: Word
    period: Word

    def __post_init__(self):
        w = self.period
        if not w:
            raise ValueError("period must be nontrivial")
        if not is_cyclically_reduced(w):
            raise ValueError(f"period {w} is not cyclically reduced")
        if not is_reduced_product(self.prefix, w, w):
            raise ValueError(f"{self.prefix} . {w} . {w} is not a reduced product")

    def point(self, n: int) -> Word:
        return concat(self.prefix, power(self.period, n))


def _check_pattern(u: Word):
    if not is_special(u):
        raise InvalidPattern(f"{u} is not cyclically reduced, non-self-overlapping of length >= 2")


@dataclass
class ConicalReport:
    conical: bool
    slope: int
    drift: int  # max |phi_u(p w^n) - n slope| over the checked n
    checked: int

    def as_dict(self):
        return {"conical": self.conical, "slope": self.slope, "drift": self.drift, "checked": self.checked}


def ray_drift(u: Word, ray: PeriodicRay, n_max: int = 50) -> int:
    """max over n <= n_max of |phi_u(p w^n) - n phi_u^cyc(w)|."""
    slope = phi_cyc(u, ray.period)
    return max(abs(phi(u, ray.point(n)) - n * slope) for n in range(n_max + 1))


def is_conical(u: Word, ray: PeriodicRay, n_max: int = 50) -> ConicalReport:
    """The ray stays near qker(phi_u) exactly when phi_u^cyc(period) = 0."""
    _check_pattern(u)
    slope = phi_cyc(u, ray.period)
    return ConicalReport(slope == 0, slope, ray_drift(u, ray, n_max), n_max)


@dataclass
class SeparationResult:
    u: Word
    v: Word
    max_len: int
    witness: Word | None = None
    phi_u: int | None = None
    phi_v: int | None = None
    sign_pair: tuple | None = None
    words_checked: int = 0

    @property
    def status(self) -> str:
        return "witness" if self.witness is not None or self.sign_pair is not None else "all_agree"

    def as_dict(self):
        pair = None
        if self.sign_pair is not None:
            pair = [str(self.sign_pair[0]), str(self.sign_pair[1])]
        return {
            "status": self.status,
            "u": str(self.u),
            "v": str(self.v),
            "witness": str(self.witness) if self.witness is not None else None,
            "phi_u": self.phi_u,
            "phi_v": self.phi_v,
            "sign_pair": pair,
            "max_len": self.max_len,
            "words_checked": self.words_checked,
        }


@lru_cache(maxsize=1 << 22)
def _cyc_value(u: tuple, w: tuple) -> int:
    ui = tuple(-x for x in reversed(u))
    return _count_cyclic(u, w) - _count_cyclic(ui, w)


def _cache(u: Word, w: Word) -> int:
    return _cyc_value(u.letters, w.letters)


def _sign(x: int) -> int:
    return (x > 0) - (x < 0)


def separate(u: Word, v: Word, max_len: int = 6, pair_len: int = 3) -> SeparationResult:
    """Search for a cyclically reduced w on which exactly one of phi_u^cyc, phi_v^cyc vanishes.

    Words are scanned by length, then letter order.  When the zero sets agree
    up to ``max_len``, pairs (x, y) of length <= ``pair_len`` are scanned for a
    disagreement of sign(f(x) f(y)), which is also blind to v = u^-1.
    """
    _check_pattern(u)
    _check_pattern(v)
    if u.rank != v.rank:
        raise InvalidPattern("patterns from different ranks")
    res = SeparationResult(u, v, max_len)
    for w in enumerate_cyclically_reduced(u.rank, max_len):
        res.words_checked += 1
        fu, fv = _cache(u, w), _cache(v, w)
        if (fu == 0) != (fv == 0):
            res.witness, res.phi_u, res.phi_v = w, fu, fv
            return res
    short = [w for w in enumerate_cyclically_reduced(u.rank, min(pair_len, max_len))]
    su = [_sign(_cache(u, w)) for w in short]
    sv = [_sign(_cache(v, w)) for w in short]
    for i, x in enumerate(short):
        if su[i] == 0:
            continue
        for j in range(i, len(short)):
            if su[i] * su[j] != sv[i] * sv[j]:
                res.sign_pair = (x, short[j])
                return res
    return res


def align_rotation(u: Word, x: Word) -> Word:
    """A rotation x' of x whose cyclic and linear u^{+-1}-counts agree.

    x' starts with a copy of u from the u-decomposition of x.
    """
    _check_pattern(u)
    if not is_cyclically_reduced(x) or len(x) < len(u):
        raise ValueError("x must be cyclically reduced with |x| >= |u|")
    if _count_cyclic(u.letters, x.letters) == 0:
        raise ValueError(f"{u} does not occur cyclically in {x}")
    # rotate first so a cyclic occurrence becomes linear, then split at it
    n, l = len(x), len(u)
    text = x.letters + x.letters[: l - 1]
    start = next(s for s in range(n) if text[s : s + l] == u.letters)
    rotated = Word._make(x.letters[start:] + x.letters[:start], x.rank)
    parts = u_decomposition(u, rotated)
    j = next(i for i, g in enumerate(parts) if g == u)
    return concat(*(parts[j:] + parts[:j]))


@dataclass
class ComposeResult:
    x: Word
    y: Word
    w: Word
    z: Word
    composite: Word
    phi_cyc: int
    verified: bool
    checks: dict = field(default_factory=dict)

    def as_dict(self):
        return {
            "x": str(self.x),
            "y": str(self.y),
            "w": str(self.w),
            "z": str(self.z),
            "composite": str(self.composite),
            "phi_cyc": self.phi_cyc,
            "verified": self.verified,
            "checks": self.checks,
        }


def _copies_inside(u: Word, composite: Word, segments: list[tuple[int, int]], n: int) -> bool:
    """Every cyclic u^{+-1}-copy in [composite^n] lies inside one listed segment."""
    k, l = len(composite), len(u)
    text = composite.letters * n
    m = len(text)
    wrapped = text + text[: l - 1]
    allowed = set()
    for rep in range(n):
        for a, b in segments:
            for s in range(a, b - l + 1):
                allowed.add(rep * k + s)
    for pat in (u.letters, invert(u).letters):
        for s in range(m):
            if wrapped[s : s + l] == pat and s not in allowed:
                return False
    return True


def blocker_compose(u: Word, x: Word, y: Word, max_len: int = 12, n_check: int = 3) -> ComposeResult:
    """x' w y' z with w a u-blocker for (x', y') and z one for (y', x').

    The composite is reduced and cyclically reduced, and all copies of
    u^{+-1} in its powers sit inside copies of x' or y'.
    """
    if min(len(x), len(y)) < len(u):
        raise ValueError("need |x|, |y| >= |u|")
    bw = find_blocker(u, x, y, max_len)
    if not bw.found:
        raise BlockerNotFound(f"no {u}-blocker for ({x}, {y}) up to length {max_len}")
    bz = find_blocker(u, y, x, max_len)
    if not bz.found:
        raise BlockerNotFound(f"no {u}-blocker for ({y}, {x}) up to length {max_len}")
    w, z = bw.blocker, bz.blocker
    composite = concat(x, w, y, z)
    a = len(x) + len(w)
    segments = [(0, len(x)), (a, a + len(y))]
    checks = {
        "reduced": is_reduced_product(x, w, y, z),
        "cyclically_reduced": is_cyclically_reduced(composite),
        "lengths": all(len(u) <= len(t) for t in (w, z)),
    }
    for n in range(1, n_check + 1):
        checks[f"copies_inside_n{n}"] = _copies_inside(u, composite, segments, n)
    value = phi_cyc(u, composite)
    return ComposeResult(x, y, w, z, composite, value, all(checks.values()), checks)
