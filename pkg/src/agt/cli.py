"""``agt``: one command-line front end for every module.

Exit status: 0 success, 1 a verification failed, 2 usage or configuration
error, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .approx import FiniteSample, find_covering, power_set, ruzsa_cover, tripling_ratio, verify_ruzsa
from .blockers import acceptance_states, build_dbm, find_blocker, strong_connectivity_check, vertex_count_formula
from .budget import default_budget
from .conical import PeriodicRay, is_conical, separate
from .errors import AGTError, BudgetExceeded, ConfigError
from .geometry import (
    DISCONNECTED,
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
from .groups import BS12, FreeAbelian, FreeGroup, make_model
from .modelsets import RINGS, CPScheme, as_quad, delone_params, generate, nested_windows_check
from .quasimorphisms import defect_on_ball, phi, phi_cyc, quasi_kernel
from .words import (
    Word,
    count_cyclic_occurrences,
    count_occurrences,
    cyclic_reduce,
    is_cyclically_reduced,
    is_special,
    parse_word,
    u_decomposition,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


def _emit(payload, fmt: str, tsv_rows=None, out=None):
    out = out or sys.stdout
    if fmt == "tsv" and tsv_rows is not None:
        header, rows = tsv_rows
        out.write("\t".join(header) + "\n")
        for row in rows:
            out.write("\t".join(str(c) for c in row) + "\n")
    else:
        out.write(json.dumps(payload, indent=2, sort_keys=True, default=str) + "\n")


def _word(text, rank):
    return parse_word(text, rank)


def _lambda_for(model, name: str):
    """Named subsets: ball, lambda (BS12), strip (Z2), qker:<pattern>[:bound]."""
    if name == "ball":
        return lambda g: True
    if name == "lambda" and isinstance(model, BS12):
        return model.in_distorted_lambda
    if name == "strip" and isinstance(model, FreeAbelian) and model.n == 2:
        return lambda g: abs(g[1]) <= 1
    if name.startswith("qker:") and isinstance(model, FreeGroup):
        parts = name.split(":")
        bound = int(parts[2]) if len(parts) > 2 else 1
        return quasi_kernel(parse_word(parts[1], model.rank), bound)
    raise ConfigError(f"unknown set {name!r} for group {model.name}")


# --- word -------------------------------------------------------------------

def cmd_word(args):
    r = args.rank
    op = args.op
    if op == "reduce":
        w = _word(args.words[0], r)
        return {"word": str(w), "length": len(w)}, None
    if op == "multiply":
        u, v = (_word(t, r) for t in args.words[:2])
        return {"product": str(u * v)}, None
    if op == "invert":
        return {"inverse": str(_word(args.words[0], r).inverse())}, None
    if op == "cyclic":
        t, core = cyclic_reduce(_word(args.words[0], r))
        return {"conjugator": str(t), "core": str(core)}, None
    if op == "count":
        u, v = (_word(t, r) for t in args.words[:2])
        out = {"pattern": str(u), "word": str(v), "count": count_occurrences(u, v)}
        if u and is_cyclically_reduced(u):
            out["cyclic_count"] = count_cyclic_occurrences(u, v)
        return out, None
    if op == "decompose":
        u, w = (_word(t, r) for t in args.words[:2])
        return {"pattern": str(u), "special": is_special(u), "segments": [str(g) for g in u_decomposition(u, w)]}, None
    raise ConfigError(f"unknown word operation {op!r}")


# --- qm ---------------------------------------------------------------------

def cmd_qm_eval(args):
    u, w = _word(args.pattern, args.rank), _word(args.word, args.rank)
    value = phi_cyc(u, w) if args.cyclic else phi(u, w)
    return {"pattern": str(u), "word": str(w), "cyclic": args.cyclic, "value": value}, None


def cmd_qm_defect(args):
    u = _word(args.pattern, args.rank)
    rep = defect_on_ball(u, args.radius, args.cyclic, args.budget)
    return rep.as_dict(), None


# --- approx -----------------------------------------------------------------

def cmd_approx_cover(args):
    model = make_model(args.group)
    sample = FiniteSample.from_predicate(model, _lambda_for(model, args.set), args.radius, budget=args.budget)
    cands = [model.parse(c) for c in args.candidates.split(";")] if args.candidates else None
    wit = find_covering(sample, args.inner, cands, args.budget)
    return wit.as_dict(model), None, wit.verified


def cmd_approx_tripling(args):
    model = make_model(args.group)
    sample = FiniteSample.from_predicate(model, _lambda_for(model, args.set), args.radius, budget=args.budget)
    A = sample.sorted()
    ratio = tripling_ratio(model, A, args.budget)
    X = power_set(model, A, 3, args.budget)
    F = ruzsa_cover(model, X, A)
    disjoint, covered = verify_ruzsa(model, X, A, F)
    out = {
        "size": len(A),
        "tripling_ratio": str(ratio),
        "tripling_float": float(ratio),
        "ruzsa_F": [model.format(f) for f in F],
        "ruzsa_disjoint": disjoint,
        "ruzsa_covers": covered,
    }
    return out, None, disjoint and covered


# --- geom -------------------------------------------------------------------

def _geom_metric(args):
    model = make_model(args.group)
    contains = _lambda_for(model, args.set)
    if args.internal:
        if args.unbounded:
            return model, internal_metric(Subset(model, contains, args.set), args.internal, args.budget)
        sample = FiniteSample.from_predicate(model, contains, args.radius, budget=args.budget)
        return model, internal_metric(sample, args.internal, args.budget)
    sample = FiniteSample.from_predicate(model, contains, args.radius, budget=args.budget)
    return model, external_metric(sample)


def cmd_geom_growth(args):
    _, metric = _geom_metric(args)
    top = args.max_radius
    if top is None and args.unbounded:
        top = args.radius
    series = growth_series(metric, top)
    out = series.as_dict()
    try:
        out["classification"] = growth_classify(series).as_dict()
    except AGTError as exc:
        out["classification"] = {"kind": "unavailable", "reason": str(exc)}
    return out, (["r", "gamma"], series.points)


def cmd_geom_components(args):
    model, metric = _geom_metric(args)
    comps = coarse_components(metric, args.c)
    out = {
        "c": args.c,
        "sample_size": len(metric.elements),
        "components": len(comps),
        "sizes": [len(c) for c in comps],
        "representatives": [model.format(min(c, key=model.sort_key)) for c in comps],
    }
    return out, (["component", "size", "representative"], [(i, n, r) for i, (n, r) in enumerate(zip(out["sizes"], out["representatives"]))])


def cmd_geom_distortion(args):
    model = BS12()
    internal = internal_metric(Subset(model, model.in_distorted_lambda), args.chain, args.budget)
    rows = []
    for n in range(1, args.max_n + 1):
        g = model.a_power(2**n)
        ext = model.word_norm(g, args.budget)
        d = internal.distance(g, model.identity())
        rows.append({"n": n, "external": ext, "internal": d if d is not DISCONNECTED else "Disconnected", "bound": 2 * n + 1})
    ok = all(r["external"] <= r["bound"] for r in rows)
    return {"chain_constant": args.chain, "rows": rows}, (["n", "external", "internal"], [(r["n"], r["external"], r["internal"]) for r in rows]), ok


def cmd_geom_cover(args):
    model = make_model(args.group)
    sample = FiniteSample.from_predicate(model, _lambda_for(model, args.set), args.radius, budget=args.budget)
    metric = external_metric(sample)
    clusters = None
    if args.bricks:
        w, h = (int(t) for t in args.bricks.split("x"))
        clusters = brick_clusters(sample.elements, w, h)
    cover = greedy_colored_cover(metric, args.R, args.D, clusters)
    check = verify_colored_cover(metric, cover)
    rows = []
    members = []
    for (color, U), diam in zip(cover.members(), cover.diameters):
        pts = [model.format(p) for p in sorted(U, key=model.sort_key)]
        members.append({"color": color, "size": len(U), "diameter": diam, "members": pts})
        rows.append((color, " ".join(pts), diam))
    out = {"colors": cover.num_colors, "R": args.R, "D": args.D, **check, "sets": members}
    return out, (["color", "members", "diameter"], rows), check["valid"]


# --- blocker ----------------------------------------------------------------

def cmd_blocker_find(args):
    r = args.rank
    res = find_blocker(_word(args.pattern, r), _word(args.left, r), _word(args.right, r), args.max_len)
    return res.as_dict(), None


def cmd_blocker_stats(args):
    g = build_dbm(args.rank, args.length, args.budget)
    out = {
        "rank": args.rank,
        "length": args.length,
        "vertices": g.num_vertices,
        "formula": vertex_count_formula(args.rank, args.length),
        "edges": g.num_edges,
        "out_degrees": sorted(g.out_degrees()),
        "strongly_connected": strong_connectivity_check(g),
    }
    ok = out["vertices"] == out["formula"]
    if args.pattern:
        u = _word(args.pattern, args.rank)
        out["forbidden_pattern"] = str(u)
        out["strongly_connected_without_pair"] = strong_connectivity_check(g.without(u))
    if args.pattern and args.right:
        states = acceptance_states(g, _word(args.pattern, args.rank), _word(args.right, args.rank))
        out["acceptance_states"] = [str(Word._make(v, args.rank)) for v in states]
    return out, None, ok


# --- modelset ---------------------------------------------------------------

def _scheme(args):
    if args.ring not in RINGS:
        raise ConfigError(f"ring must be one of {sorted(RINGS)}")
    ring = RINGS[args.ring]
    return CPScheme(ring, as_quad(args.window, ring))


def cmd_modelset_generate(args):
    scheme = _scheme(args)
    sample = generate(scheme, Fraction(args.radius), args.budget)
    rows = [(x.a, x.b, f"{float(x):.12g}") for x in sample.points]
    out = {"ring": args.ring, "window": args.window, "radius": args.radius, "count": len(sample), "points": [[str(a), str(b), v] for a, b, v in rows]}
    if len(sample) >= 3:
        out["delone"] = delone_params(sample).as_dict()
    return out, (["a", "b", "value"], rows)


def cmd_modelset_nested(args):
    rep = nested_windows_check(_scheme(args), args.levels, Fraction(args.radius), args.budget)
    return rep.as_dict(), None, rep.holds


# --- conical ----------------------------------------------------------------

def cmd_conical_classify(args):
    r = args.rank
    u = _word(args.pattern, r)
    ray = PeriodicRay(_word(args.prefix, r), _word(args.period, r))
    rep = is_conical(u, ray, args.steps)
    return {"pattern": str(u), "prefix": str(ray.prefix), "period": str(ray.period), **rep.as_dict()}, None


def cmd_conical_separate(args):
    r = args.rank
    res = separate(_word(args.u, r), _word(args.v, r), args.max_len)
    return res.as_dict(), None


# --- suite ------------------------------------------------------------------

def cmd_suite(args):
    from .suite import run_suite

    numbers = [int(t) for t in args.only.split(",")] if args.only else None
    results = run_suite(numbers)
    for res in results:
        print(res.line(), file=sys.stderr)
    return {"results": [r.as_dict() for r in results]}, None, all(r.ok for r in results)


# --- parser -----------------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=["json", "tsv"], default="json")
    p.add_argument("--config", help="key=value file; flags given explicitly win")
    p.add_argument("--budget", type=int, default=None, help="element cap (default AGT_BUDGET or 5e6)")
    p.add_argument("--seed", type=int, default=0, help="recorded for reproducibility; all searches are deterministic")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="agt", description="Finite-scale approximate group computations.")
    sub = parser.add_subparsers(dest="command")

    def leaf(subparsers, name, func, help_text):
        p = subparsers.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    def group(name, help_text):
        p = sub.add_parser(name, help=help_text)
        s = p.add_subparsers(dest="action")
        p.set_defaults(parser=p)
        return s

    w = leaf(sub, "word", cmd_word, "free-group word operations")
    w.add_argument("op", choices=["reduce", "multiply", "invert", "cyclic", "count", "decompose"])
    w.add_argument("words", nargs="+")
    w.add_argument("--rank", type=int, default=None)

    qm = group("qm", "counting quasimorphisms")
    p = leaf(qm, "eval", cmd_qm_eval, "evaluate phi_u on a word")
    p.add_argument("--pattern", required=True)
    p.add_argument("--word", required=True)
    p.add_argument("--cyclic", action="store_true")
    p.add_argument("--rank", type=int, default=None)
    p = leaf(qm, "defect", cmd_qm_defect, "defect set on a ball")
    p.add_argument("--pattern", required=True)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--cyclic", action="store_true")
    p.add_argument("--rank", type=int, default=None)

    ap = group("approx", "approximate-group witnesses")
    p = leaf(ap, "cover", cmd_approx_cover, "covering witness F with Lambda^2 in Lambda F")
    p.add_argument("--group", default="BS12")
    p.add_argument("--set", default="lambda")
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--inner", type=int, required=True)
    p.add_argument("--candidates", default=None, help="';'-separated normal forms restricting F")
    p = leaf(ap, "tripling", cmd_approx_tripling, "tripling ratio and Ruzsa cover of a ball")
    p.add_argument("--group", default="Z1")
    p.add_argument("--set", default="ball")
    p.add_argument("--radius", type=int, required=True)

    ge = group("geom", "internal and external geometry")
    for name, func, text in (
        ("growth", cmd_geom_growth, "growth series and classification"),
        ("components", cmd_geom_components, "coarse components"),
    ):
        p = leaf(ge, name, func, text)
        p.add_argument("--group", default="BS12")
        p.add_argument("--set", default="lambda")
        p.add_argument("--radius", type=int, required=True)
        p.add_argument("--internal", type=int, default=None, metavar="C", help="use the chain metric with step bound C")
        p.add_argument("--unbounded", action="store_true", help="chain BFS on the full set, not the ball sample")
        if name == "growth":
            p.add_argument("--max-radius", type=int, default=None)
        else:
            p.add_argument("--c", type=int, default=1)
    p = leaf(ge, "distortion", cmd_geom_distortion, "BS(1,2) external vs internal norms of a^(2^n)")
    p.add_argument("--max-n", type=int, default=8)
    p.add_argument("--chain", type=int, default=1)
    p = leaf(ge, "cover", cmd_geom_cover, "greedy colored cover at scale (R, D)")
    p.add_argument("--group", default="Z1")
    p.add_argument("--set", default="ball")
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--R", type=int, required=True)
    p.add_argument("--D", type=int, required=True)
    p.add_argument("--bricks", default=None, metavar="WxH", help="Z^2 running-bond bricks as clusters")

    bl = group("blocker", "De Bruijn-Martin graphs and blockers")
    p = leaf(bl, "find", cmd_blocker_find, "search for a u-blocker")
    p.add_argument("--rank", type=int, default=3)
    p.add_argument("--pattern", required=True)
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--max-len", type=int, default=12)
    p = leaf(bl, "dbm-stats", cmd_blocker_stats, "graph statistics")
    p.add_argument("--rank", type=int, default=3)
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--pattern", default=None)
    p.add_argument("--right", default=None, help="vertex y for acceptance states")

    ms = group("modelset", "cut-and-project model sets")
    p = leaf(ms, "generate", cmd_modelset_generate, "points of Lambda(Gamma, [-s, s]) in [-R, R]")
    p.add_argument("--ring", default="golden")
    p.add_argument("--window", default="1/2w")
    p.add_argument("--radius", default="20")
    p = leaf(ms, "check-nested", cmd_modelset_nested, "Lambda(W_{k+1}) + Lambda(W_{k+1}) in Lambda(W_k)")
    p.add_argument("--ring", default="golden")
    p.add_argument("--window", default="1/2w")
    p.add_argument("--radius", default="50")
    p.add_argument("--levels", type=int, default=3)

    co = group("conical", "conical limit points of quasi-kernels")
    p = leaf(co, "classify", cmd_conical_classify, "is a periodic ray conical")
    p.add_argument("--pattern", required=True)
    p.add_argument("--prefix", default="e")
    p.add_argument("--period", required=True)
    p.add_argument("--rank", type=int, default=3)
    p.add_argument("--steps", type=int, default=50)
    p = leaf(co, "separate", cmd_conical_separate, "separate two patterns by zero sets")
    p.add_argument("--u", required=True)
    p.add_argument("--v", required=True)
    p.add_argument("--max-len", type=int, default=6)
    p.add_argument("--rank", type=int, default=3)

    p = leaf(sub, "suite", cmd_suite, "run the acceptance battery")
    p.add_argument("--only", default=None, help="comma-separated criterion numbers")
    return parser


def load_config(path: str) -> dict:
    """Read ``key = value`` lines; ``#`` starts a comment, ``[section]`` lines are ignored."""
    cfg = {}
    try:
        with open(path, encoding="utf8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    for n, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line or line.startswith("["):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{n}: expected key = value")
        key, value = (t.strip() for t in line.split("=", 1))
        cfg[key.replace("-", "_")] = value.strip('"').strip("'")
    return cfg


def _leaf_parser(parser, argv):
    """The subparser selected by the leading words of argv, and how many words that took."""
    current, used = parser, 0
    while used < len(argv):
        subs = [a for a in current._actions if isinstance(a, argparse._SubParsersAction)]
        if not subs or argv[used] not in subs[0].choices:
            break
        current = subs[0].choices[argv[used]]
        used += 1
    return current, used


def _expand_config(parser, argv: list) -> list:
    """Splice config entries into argv in front of the user's own options.

    argparse keeps the last occurrence of an option, so flags typed on the
    command line override the file.
    """
    if "--config" not in argv and not any(a.startswith("--config=") for a in argv):
        return argv
    for k, a in enumerate(argv):
        if a == "--config" and k + 1 < len(argv):
            path = argv[k + 1]
        elif a.startswith("--config="):
            path = a.split("=", 1)[1]
    cfg = load_config(path)
    leaf, used = _leaf_parser(parser, argv)
    options = {a.dest: a for a in leaf._actions if a.option_strings}
    injected = []
    for key, value in cfg.items():
        action = options.get(key)
        if action is None or key in ("config", "help"):
            raise ConfigError(f"unknown config key {key!r}")
        flag = action.option_strings[-1]
        if action.nargs == 0:
            if value.lower() in ("1", "true", "yes", "on"):
                injected.append(flag)
            elif value.lower() not in ("0", "false", "no", "off"):
                raise ConfigError(f"bad boolean for {key}: {value!r}")
        else:
            injected += [flag, value]
    return argv[:used] + injected + argv[used:]


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        argv = _expand_config(parser, argv)
    except ConfigError as exc:
        print(f"agt: config: {exc}", file=sys.stderr)
        return EXIT_USAGE
    args = parser.parse_args(argv)
    if not getattr(args, "func", None):
        target = getattr(args, "parser", parser)
        target.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        if args.budget is None:
            args.budget = default_budget()
        elif args.budget <= 0:
            raise ConfigError("budget must be positive")
        result = args.func(args)
    except BudgetExceeded as exc:
        print(f"agt: budget exceeded in {exc.module}: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except AGTError as exc:
        print(f"agt: {exc.module}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"agt: {exc}", file=sys.stderr)
        return EXIT_USAGE
    payload, rows, *rest = result
    ok = rest[0] if rest else True
    _emit(payload, args.format, rows)
    return EXIT_OK if ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
