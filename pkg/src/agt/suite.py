"""The acceptance battery: fourteen exact finite-scale checks.

Each check returns a ``CriterionResult``; nothing here is tuned to pass.
Checks whose stated target is out of reach report failure with the measured
numbers in ``detail``.
"""

from __future__ import annotations

import math
import re
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .approx import FiniteSample, find_covering, power_set, ruzsa_cover, tripling_ratio, verify_ruzsa
from .blockers import build_dbm, find_blocker, vertex_count_formula
from .conical import separate
from .geometry import (
    Subset,
    brick_clusters,
    coarse_components,
    external_metric,
    greedy_colored_cover,
    growth_classify,
    growth_series,
    internal_metric,
    verify_colored_cover,
)
from .groups import BS12, FreeAbelian, FreeGroup
from .modelsets import GOLDEN, CPScheme, delone_params, generate, nested_windows_check
from .quasimorphisms import defect_on_ball, phi, phi_cyc, quasi_kernel
from .words import (
    Word,
    count_occurrences,
    enumerate_ball,
    enumerate_cyclically_reduced,
    format_word,
    is_special,
    iter_sphere,
    parse_word,
    power,
)


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    seconds: float = 0.0
    limit: float | None = None
    detail: dict = field(default_factory=dict)

    @property
    def in_time(self) -> bool:
        return self.limit is None or self.seconds <= self.limit

    @property
    def ok(self) -> bool:
        return self.passed and self.in_time

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        budget = f" (limit {self.limit:g} s)" if self.limit else ""
        return f"[{status}] {self.number:2d}. {self.title}: {self.seconds:.2f} s{budget}"

    def as_dict(self):
        return {
            "criterion": self.number,
            "title": self.title,
            "passed": self.ok,
            "seconds": round(self.seconds, 3),
            "limit": self.limit,
            "detail": self.detail,
        }


def _string_count(u: Word, v: Word) -> int:
    # independent oracle: overlapping regex search on the serialized words
    if not u:
        return len(v)
    if not v:
        return 0
    return sum(1 for _ in re.finditer(f"(?={re.escape(format_word(u))})", format_word(v)))


def check_occurrences():
    a1 = parse_word("a1")
    stated = count_occurrences(a1**2, a1**5)
    us = enumerate_ball(2, 3)
    vs = enumerate_ball(2, 7)
    mismatches = 0
    for u in us:
        for v in vs:
            if count_occurrences(u, v) != _string_count(u, v):
                mismatches += 1
    return stated == 4 and mismatches == 0, {"a1^2 in a1^5": stated, "pairs": len(us) * len(vs), "mismatches": mismatches}


def check_defect():
    rep = defect_on_ball(parse_word("a1a2"), 4)
    return rep.defect_set <= {-1, 0, 1}, rep.as_dict()


def check_qker_disconnection():
    u = parse_word("a1a2")
    sample = FiniteSample.from_predicate(FreeGroup(2), quasi_kernel(u, 1), 8, name="qker(a1a2)")
    metric = external_metric(sample)
    counts = {c: len(coarse_components(metric, c)) for c in (1, 2, 3)}
    return all(n >= 2 for n in counts.values()), {"sample_size": len(sample), "components": counts}


def check_bs12_covering():
    m = BS12()
    a, b = m.generator(1), m.generator(2)
    allowed = [m.identity(), b, m.inv(b), m.mul(m.inv(b), a)]
    sample = FiniteSample.from_predicate(m, m.in_distorted_lambda, 10)
    wit = find_covering(sample, 3, candidates=allowed)
    inside = set(wit.F) <= set(allowed)
    return wit.verified and inside, wit.as_dict(m)


def check_distortion():
    m = BS12()
    internal = internal_metric(Subset(m, m.in_distorted_lambda), 1)
    rows = []
    ok = True
    for n in range(1, 9):
        g = m.a_power(2**n)
        ext = m.word_norm(g)
        inner = internal.distance(g, m.identity())
        rows.append({"n": n, "external": ext, "internal": inner, "ratio": inner / ext})
        ok &= ext <= 2 * n + 1 and inner == 2**n
    # unbounded growth, finite form: nondecreasing and above 2^n / (2n + 1)
    ratios = [r["ratio"] for r in rows]
    ok &= all(x <= y for x, y in zip(ratios, ratios[1:]))
    ok &= all(r["ratio"] >= 2 ** r["n"] / (2 * r["n"] + 1) for r in rows)
    return ok, {"rows": rows}


def check_growth():
    m = BS12()
    sample = FiniteSample.from_predicate(m, m.in_distorted_lambda, 12)
    ext = growth_classify(growth_series(external_metric(sample)))
    intl_series = growth_series(internal_metric(Subset(m, m.in_distorted_lambda), 1), 12)
    intl = growth_classify(intl_series)
    strip = FiniteSample.from_predicate(FreeAbelian(2), lambda g: abs(g[1]) <= 1, 12)
    st = growth_classify(growth_series(external_metric(strip)))
    lo, hi = 0.5 * math.log(2), 1.5 * math.log(2)
    parts = {
        "external_exponential": ext.kind == "exponential",
        "external_rate_in_window": lo <= ext.rate <= hi,
        "internal_polynomial_deg1": intl.kind == "polynomial" and abs(intl.degree - 1) <= 0.2,
        "strip_polynomial_deg1": st.kind == "polynomial" and abs(st.degree - 1) <= 0.1,
    }
    detail = {
        "checks": parts,
        "external": ext.as_dict(),
        "rate_window": [lo, hi],
        "internal": intl.as_dict(),
        "strip": st.as_dict(),
    }
    return all(parts.values()), detail


def check_homogenization():
    u = parse_word("a1a2")
    N = len(u) * 4
    failures = []
    total = 0
    for w in enumerate_cyclically_reduced(2, 4):
        total += 1
        lhs = Fraction(phi(u, power(w, N)), N)
        rhs = phi_cyc(u, w)
        if lhs != rhs:
            failures.append({"w": str(w), "phi(w^N)/N": str(lhs), "phi_cyc": rhs})
    return not failures, {"N": N, "words": total, "failures": len(failures), "examples": failures[:5]}


def check_dbm_counts():
    rows = []
    ok = True
    for r in (2, 3):
        for l in (2, 3, 4):
            g = build_dbm(r, l)
            expected = vertex_count_formula(r, l)
            good = g.num_vertices == expected and g.out_degrees() == {2 * r - 1}
            rows.append({"r": r, "l": l, "vertices": g.num_vertices, "formula": expected})
            ok &= good
    return ok, {"graphs": rows}


def check_blockers_exist():
    worst = 0
    cases = 0
    failures = []
    for l in (2, 3):
        for ut in iter_sphere(3, l):
            if ut[0] == -ut[-1]:
                continue
            u = Word._make(ut, 3)
            for xt in iter_sphere(3, l - 1):
                for yt in iter_sphere(3, l - 1):
                    cases += 1
                    res = find_blocker(u, Word._make(xt, 3), Word._make(yt, 3), max_len=10)
                    if not res.found or not (l <= len(res.blocker) <= 10):
                        failures.append((str(u), xt, yt))
                    else:
                        worst = max(worst, len(res.blocker))
    return not failures, {"cases": cases, "longest_minimal_blocker": worst, "failures": failures[:5]}


def check_unblockable():
    res = find_blocker(parse_word("a1a2", 2), parse_word("a1", 2), parse_word("A1", 2), max_len=12)
    return not res.found, res.as_dict()


def check_model_set():
    phi_ = GOLDEN.omega
    scheme = CPScheme(GOLDEN, phi_ / 2)
    params = []
    for R in (20, 50, 100):
        d = delone_params(generate(scheme, R))
        params.append((d.min_gap, d.max_gap, tuple(d.gaps)))
    gaps = params[0][2]
    two_gaps = len(gaps) == 2 and gaps[1] / gaps[0] == phi_
    stable = len({p for p in params}) == 1
    nested = nested_windows_check(scheme, 3, 50)
    detail = {
        "window": "[-phi/2, phi/2]",
        "gaps": [str(g) for g in gaps],
        "ratio_is_phi": two_gaps,
        "stable_R": [20, 50, 100],
        "stable": stable,
        "nested": nested.as_dict(),
    }
    return two_gaps and stable and nested.holds, detail


def check_conical_separation():
    patterns = [w for w in enumerate_cyclically_reduced(3, 3, 2) if is_special(w)]
    bad = []
    longest = 0
    for u in patterns:
        for v in patterns:
            res = separate(u, v, max_len=6)
            same = u == v or u == v.inverse()
            if same:
                if res.status != "all_agree":
                    bad.append((str(u), str(v)))
            else:
                if res.witness is None or len(res.witness) > 6:
                    bad.append((str(u), str(v)))
                else:
                    longest = max(longest, len(res.witness))
    n = len(patterns)
    return not bad, {"patterns": n, "ordered_pairs": n * n, "longest_witness": longest, "failures": bad[:5]}


def check_tripling():
    Z = FreeAbelian(1)
    rows = []
    ok = True
    for r in range(3, 11):
        A = [(k,) for k in range(-r, r + 1)]
        ratio = tripling_ratio(Z, A)
        X = power_set(Z, A, 3)
        F = ruzsa_cover(Z, X, A)
        disjoint, covered = verify_ruzsa(Z, X, A, F)
        good = ratio <= 3 and len(F) <= 3 and disjoint and covered
        ok &= good
        rows.append({"r": r, "ratio": str(ratio), "F": [f[0] for f in F]})
    return ok, {"rows": rows}


def check_colored_covers():
    Z = FreeAbelian(1)
    line = external_metric(FiniteSample.from_predicate(Z, lambda g: True, 60))
    c1 = greedy_colored_cover(line, 5, 20)
    v1 = verify_colored_cover(line, c1)
    Z2 = FreeAbelian(2)
    plane = external_metric(FiniteSample.from_predicate(Z2, lambda g: True, 30))
    c2 = greedy_colored_cover(plane, 5, 30, clusters=brick_clusters(plane.elements, 16, 15))
    v2 = verify_colored_cover(plane, c2)
    ok = c1.num_colors <= 2 and v1["valid"] and c2.num_colors <= 3 and v2["valid"]
    return ok, {
        "Z": {"colors": c1.num_colors, **v1},
        "Z2": {"colors": c2.num_colors, "max_diameter": max(c2.diameters), **v2},
    }


CRITERIA: list[tuple[int, str, Callable, float | None]] = [
    (1, "occurrence arithmetic", check_occurrences, 10),
    (2, "defect of phi_ab on B_4", check_defect, 60),
    (3, "quasi-kernel disconnection", check_qker_disconnection, 30),
    (4, "BS(1,2) covering witness", check_bs12_covering, 10),
    (5, "BS(1,2) distortion", check_distortion, 300),
    (6, "growth dichotomy", check_growth, None),
    (7, "homogenization identity", check_homogenization, 30),
    (8, "De Bruijn-Martin counts", check_dbm_counts, None),
    (9, "blockers exist (r=3)", check_blockers_exist, 300),
    (10, "unblockable pair (r=2)", check_unblockable, 120),
    (11, "golden model set", check_model_set, 60),
    (12, "conical separation", check_conical_separation, 300),
    (13, "tripling and Ruzsa cover", check_tripling, 10),
    (14, "colored covers", check_colored_covers, 30),
]


def run_criterion(number: int) -> CriterionResult:
    for num, title, fn, limit in CRITERIA:
        if num == number:
            t0 = time.perf_counter()
            passed, detail = fn()
            return CriterionResult(num, title, bool(passed), time.perf_counter() - t0, limit, detail)
    raise KeyError(f"no criterion {number}")


def run_suite(numbers=None) -> list[CriterionResult]:
    numbers = numbers or [c[0] for c in CRITERIA]
    return [run_criterion(n) for n in numbers]
