"""De Bruijn-Martin graphs and a constructive search for u-blockers.

A u-blocker for (x, y) is a word w such that xwy is a reduced product and
no copy of u or u^-1 in xwy meets w (all copies sit inside x or inside y).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .budget import check_budget
from .errors import TooShort
from .words import Word, _count, alphabet, invert, is_reduced_product, iter_sphere


@dataclass
class DBMGraph:
    """Gamma_{l,r}: vertices are reduced words of length l-1, edges of length l.

    The edge e = e_1 ... e_l runs from e_1 ... e_{l-1} to e_2 ... e_l and is
    labelled e_l.  ``forbidden`` holds letter tuples of removed edges.
    """

    rank: int
    length: int
    vertices: list
    forbidden: frozenset = frozenset()
    _succ: dict = field(default_factory=dict, repr=False)

    def successors(self, v: tuple) -> list[tuple[int, tuple]]:
        """(label, target) pairs in label order, skipping forbidden edges."""
        out = self._succ.get(v)
        if out is None:
            last = v[-1]
            out = []
            for a in alphabet(self.rank):
                if a == -last:
                    continue
                edge = v + (a,)
                if edge in self.forbidden:
                    continue
                out.append((a, edge[1:]))
            self._succ[v] = out
        return out

    def edges(self) -> list[tuple]:
        return [v + (a,) for v in self.vertices for a, _ in self.successors(v)]

    @property
    def num_vertices(self):
        return len(self.vertices)

    @property
    def num_edges(self):
        return sum(len(self.successors(v)) for v in self.vertices)

    def out_degrees(self) -> set[int]:
        return {len(self.successors(v)) for v in self.vertices}

    def without(self, u: Word) -> DBMGraph:
        """The same graph with the inverse edge pair (u, u^-1) removed."""
        if len(u) != self.length:
            raise ValueError(f"edge words have length {self.length}, got {len(u)}")
        return DBMGraph(self.rank, self.length, self.vertices, frozenset({u.letters, invert(u).letters}))


def vertex_count_formula(rank: int, length: int) -> int:
    return 2 * rank * (2 * rank - 1) ** (length - 2)


def build_dbm(rank: int, length: int, budget: int | None = None) -> DBMGraph:
    if rank < 2 or length < 2:
        raise ValueError("need r >= 2 and l >= 2")
    check_budget(vertex_count_formula(rank, length) * (2 * rank - 1), budget, f"DBM graph ({rank},{length})", "blockers")
    return DBMGraph(rank, length, list(iter_sphere(rank, length - 1)))


def _is_acceptance(v: tuple, y: tuple, u: tuple, ui: tuple) -> bool:
    if v and y and v[-1] == -y[0]:
        return False
    word = v + y
    return _count(u, word) == 0 and _count(ui, word) == 0


def acceptance_states(graph: DBMGraph, u: Word, y: Word) -> list[tuple]:
    """Vertices v with vy reduced and free of u and u^-1."""
    a, b = u.letters, invert(u).letters
    return [v for v in graph.vertices if _is_acceptance(v, y.letters, a, b)]


def acceptance_lower_bound(rank: int, length: int) -> float:
    """(2r-1)^(l-2) (2r - 3 - 1/(r-1)): a floor on the number of acceptance states."""
    return (2 * rank - 1) ** (length - 2) * (2 * rank - 3 - 1 / (rank - 1))


def strong_connectivity_check(graph: DBMGraph) -> bool:
    """Forward and backward reachability from one vertex cover every vertex."""
    verts = graph.vertices
    if not verts:
        return True
    pred: dict = {v: [] for v in verts}
    for v in verts:
        for _, t in graph.successors(v):
            pred[t].append(v)

    def reach(start, nbrs):
        seen = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for t in nbrs(v):
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
        return seen

    n = len(verts)
    fwd = reach(verts[0], lambda v: [t for _, t in graph.successors(v)])
    if len(fwd) != n:
        return False
    return len(reach(verts[0], lambda v: pred[v])) == n


@dataclass
class BlockerResult:
    u: Word
    x: Word
    y: Word
    blocker: Word | None
    search_bound: int
    exhausted: bool = False
    states_explored: int = 0
    transcript: dict = field(default_factory=dict)

    @property
    def found(self) -> bool:
        return self.blocker is not None

    @property
    def status(self) -> str:
        return "found" if self.found else "not_found"

    def as_dict(self):
        return {
            "status": self.status,
            "pattern": str(self.u),
            "left": str(self.x),
            "right": str(self.y),
            "blocker": str(self.blocker) if self.found else None,
            "length": len(self.blocker) if self.found else None,
            "search_bound": self.search_bound,
            "exhausted": self.exhausted,
            "states_explored": self.states_explored,
            "transcript": self.transcript,
        }


def find_blocker(u: Word, x: Word, y: Word, max_len: int = 12, min_len: int | None = None) -> BlockerResult:
    """Shortest u-blocker w for (x, y) with |w| >= |u|, lexicographically first.

    Breadth-first search over states (last l-1 letters of xw, min(|w|, l)):
    a step appends a letter without cancelling and without completing a
    length-l window equal to u or u^-1.  Only the last l-1 letters of x and
    the first l-1 letters of y matter, so both are truncated.  ``NotFound`` is
    exhaustive up to ``max_len``; ``exhausted`` means no blocker of any length.
    """
    l = len(u)
    if l < 2:
        raise TooShort("blocker pattern needs |u| >= 2")
    if not x or not y:
        raise ValueError("x and y must be nontrivial")
    min_len = l if min_len is None else min_len
    a, b = u.letters, invert(u).letters
    letters = alphabet(u.rank)
    xs = x.letters[-(l - 1) :]
    ys = y.letters[: l - 1]
    cap = max(min_len, l)
    start = (xs, 0)
    parent: dict = {start: None}
    depth_of = {start: 0}
    queue = deque([start])
    found_state = None
    while queue:
        state = queue.popleft()
        suffix, steps = state
        depth = depth_of[state]
        if steps >= min_len and steps >= l - 1 and _is_acceptance(suffix, ys, a, b):
            found_state = state
            break
        if depth >= max_len:
            continue
        for c in letters:
            if suffix and c == -suffix[-1]:
                continue
            window = suffix + (c,)
            if len(window) == l:
                if window == a or window == b:
                    continue
                nxt = window[1:]
            else:
                nxt = window
            ns = (nxt, min(steps + 1, cap))
            if ns not in parent:
                parent[ns] = (state, c)
                depth_of[ns] = depth + 1
                queue.append(ns)
    if found_state is None:
        # the search only stopped early if some state hit the depth bound
        exhausted = all(d < max_len for d in depth_of.values())
        return BlockerResult(u, x, y, None, max_len, exhausted, len(parent))
    labels = []
    s = found_state
    while parent[s] is not None:
        s, c = parent[s]
        labels.append(c)
    w = Word._make(tuple(reversed(labels)), u.rank)
    ok, transcript = verify_blocker(u, x, y, w)
    result = BlockerResult(u, x, y, w, max_len, False, len(parent), transcript)
    if not ok:
        raise AssertionError(f"search produced an invalid blocker {w}: {transcript}")
    return result


def verify_blocker(u: Word, x: Word, y: Word, w: Word) -> tuple[bool, dict]:
    """Check xwy reduced and #_{u^{+-1}}(xwy) = #(x) + #(y) by direct counting."""
    ui = invert(u)
    reduced = is_reduced_product(x, w, y)
    whole = x.letters + w.letters + y.letters
    counts = {}
    for name, p in (("u", u.letters), ("u_inv", ui.letters)):
        counts[name] = {
            "x": _count(p, x.letters),
            "y": _count(p, y.letters),
            "xwy": _count(p, whole),
        }
    balanced = all(c["xwy"] == c["x"] + c["y"] for c in counts.values())
    transcript = {
        "word": str(Word._make(whole, u.rank)) if reduced else None,
        "reduced": reduced,
        "counts": counts,
        "length_ok": len(w) >= len(u),
    }
    return reduced and balanced, transcript
