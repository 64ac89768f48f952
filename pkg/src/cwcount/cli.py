"""``cwcount`` command line: count, check, gen and bench."""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from . import matchings as mc
from . import oracle
from . import paths as pm
from .core import pair_index
from .expression import (
    Expression,
    ExpressionSyntaxError,
    PartialRedundancy,
    drop_null_edge_ops,
    evaluate,
    format_document,
    gen_family,
    leaf_count,
    max_label,
    parse_document,
    validate_irredundant,
)
from .report import BenchRow, format_tsv, plot_bench

log = logging.getLogger("cwcount")

OBJECTS = (
    "matchings",
    "maximal-matchings",
    "perfect-matchings",
    "min-maximal-matchings",
    "matching-covers",
    "path-matchings",
    "paths",
)

# which dynamic program an object is computed from
ENGINE = {
    "matchings": "matchings",
    "maximal-matchings": "mc",
    "perfect-matchings": "mc",
    "min-maximal-matchings": "mc",
    "matching-covers": "mc",
    "path-matchings": "pm",
    "paths": "pm",
}


# full tables first, so a mismatch is reported at the finest class key
CHECK_ORDER = ("matching-covers", "path-matchings", "matchings", "maximal-matchings",
               "perfect-matchings", "min-maximal-matchings", "paths")


class CLIError(Exception):
    pass


def _strmap(d: dict) -> dict[str, str]:
    return {str(k): str(v) for k, v in sorted(d.items())}


def _pm_edges(root, K) -> int:
    # edges of a linear forest = covered vertices - number of paths
    idx = pair_index(root.width)
    return root.vertex_count - sum(K[s] for s in idx.uncovered) - sum(K[s] for s in idx.path_slots)


def compute(obj: str, expr: Expression, width: int, by_size: bool = False, *, coverage_filter: bool = True):
    """Counts for one object kind, as JSON-ready decimal strings."""
    engine = ENGINE[obj]
    if engine == "matchings":
        sizes = mc.count_matchings(expr, width)
        return _strmap(sizes) if by_size else str(sum(sizes.values()))
    if engine == "mc":
        root = mc.run_mc(expr, width, coverage_filter=coverage_filter)
        if obj == "perfect-matchings":
            return str(mc.perfect_from_root(root))
        if obj == "matching-covers":
            if not by_size:
                return str(root.mass)
            sizes: dict[int, int] = {}
            for (m, _), w in root.table.items():
                sizes[sum(m) // 2] = sizes.get(sum(m) // 2, 0) + w
            return _strmap(sizes)
        sizes = mc.maximal_by_size(root)
        if obj == "min-maximal-matchings":
            size = min(sizes)
            return {"size": str(size), "count": str(sizes[size])}
        return _strmap(sizes) if by_size else str(sum(sizes.values()))
    root = pm.run_pm(expr, width)
    slots = pair_index(width).path_slots
    if obj == "paths":
        if not by_size:
            return str(pm.paths_from_root(root))
        sizes = {}
        for K, w in root.table.items():
            if sum(K[s] for s in slots) == 1:
                e = _pm_edges(root, K)
                sizes[e] = sizes.get(e, 0) + w
        return _strmap(sizes)
    if by_size:
        sizes = {}
        for K, w in root.table.items():
            e = _pm_edges(root, K)
            sizes[e] = sizes.get(e, 0) + w
        return _strmap(sizes)
    total = pm.path_matchings_from_root(root)
    return {"total": str(total.total), "nonempty": str(total.nonempty)}


def load_expression(path: str, allow_null_eta: bool = False) -> tuple[Expression, int]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CLIError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        expr, width = parse_document(text)
    except ExpressionSyntaxError as exc:
        raise CLIError(f"{path}:{exc}") from exc
    violations = validate_irredundant(expr)
    if violations:
        if not allow_null_eta:
            v = violations[0]
            raise CLIError(
                f"{path}: expression is not irredundant: (e {v.node.a} {v.node.b} ...) at node path "
                f"{list(v.path)} meets {v.existing} existing cross edge(s); "
                f"{len(violations)} violation(s) total (see --allow-null-eta)"
            )
        try:
            expr = drop_null_edge_ops(expr)
        except PartialRedundancy as exc:
            raise CLIError(f"{path}: {exc}") from exc
        log.info("dropped %d null edge creation(s)", len(violations))
    return expr, width


# --------------------------------------------------------------------------
# count


def cmd_count(args) -> int:
    expr, width = load_expression(args.input, args.allow_null_eta)
    start = time.perf_counter()
    counts = compute(args.object, expr, width, args.by_size)
    elapsed = (time.perf_counter() - start) * 1000
    report = {
        "object": args.object,
        "n": leaf_count(expr),
        "width": width,
        "counts": counts,
        "elapsed_ms": round(elapsed, 3),
        "flags": {"by_size": args.by_size, "allow_null_eta": args.allow_null_eta},
    }
    print(json.dumps(report, indent=2 if args.pretty else None))
    return 0


# --------------------------------------------------------------------------
# check


@dataclass
class Mismatch:
    case: str
    obj: str
    key: str
    dp: str
    oracle: str


def _first_difference(a: dict, b: dict):
    for key in sorted(set(a) | set(b), key=repr):
        if a.get(key, 0) != b.get(key, 0):
            return key, a.get(key, 0), b.get(key, 0)
    return None


def check_expression(expr: Expression, width: int, objects, name: str = "",
                     coverage_filter: bool = True) -> list[Mismatch]:
    """Run DP and oracle side by side; one mismatch record per disagreeing object."""
    g = evaluate(expr, width)
    found = []
    for obj in objects:
        engine = ENGINE[obj]
        if engine == "matchings":
            dp, ref = mc.count_matchings(expr, width), oracle.matchings_by_size(g)
        elif engine == "mc":
            root = mc.run_mc(expr, width, coverage_filter=coverage_filter)
            if obj == "matching-covers":
                dp, ref = root.table, oracle.enumerate_mc(g)
            elif obj == "perfect-matchings":
                dp, ref = {"perfect": mc.perfect_from_root(root)}, {"perfect": oracle.perfect_matching_count(g)}
            else:
                dp, ref = mc.maximal_by_size(root), oracle.enumerate_maximal_matchings(g)
                if obj == "min-maximal-matchings":
                    dp = {"min": (min(dp), dp[min(dp)])} if dp else {}
                    ref = {"min": (min(ref), ref[min(ref)])} if ref else {}
        else:
            root = pm.run_pm(expr, width)
            if obj == "paths":
                dp, ref = {"paths": pm.paths_from_root(root)}, {"paths": oracle.enumerate_paths(g)}
            else:
                dp, ref = root.table, oracle.enumerate_pm(g)
        diff = _first_difference(dp, ref)
        if diff:
            key, a, b = diff
            found.append(Mismatch(name, obj, repr(key), str(a), str(b)))
    return found


def _random_case(job):
    n, l, seed, objects, coverage_filter = job
    expr = gen_family("random", n, l, seed=seed)
    return check_expression(expr, l, objects, f"random(n={n}, l={l}, seed={seed})", coverage_filter)


def cmd_check(args) -> int:
    objects = CHECK_ORDER if args.object in (None, "all") else (args.object,)
    coverage_filter = not args.no_coverage_filter
    mismatches: list[Mismatch] = []
    cases = 0
    try:
        if args.input:
            expr, width = load_expression(args.input, args.allow_null_eta)
            mismatches = check_expression(expr, width, objects, args.input, coverage_filter)
            cases = 1
        else:
            n, l, count = args.random
            if n < 1 or l < 1 or count < 1:
                raise CLIError("--random needs n >= 1, l >= 1, count >= 1")
            # case k draws n_k = 1 + k mod n vertices, seed = base + k
            jobs = [(1 + k % n, l, args.seed + k, objects, coverage_filter) for k in range(count)]
            cases = len(jobs)
            if args.jobs > 1:
                with ProcessPoolExecutor(args.jobs) as pool:
                    results = list(pool.map(_random_case, jobs, chunksize=8))
            else:
                results = map(_random_case, jobs)
            for r in results:
                mismatches.extend(r)
                if mismatches and not args.keep_going:
                    break
    except oracle.OracleSizeError as exc:
        raise CLIError(str(exc)) from exc
    if mismatches:
        m = mismatches[0]
        print(f"FAIL {m.case} object={m.obj} key={m.key} dp={m.dp} oracle={m.oracle}")
        if len(mismatches) > 1:
            print(f"... {len(mismatches) - 1} more mismatch(es)")
        return 1
    print(f"PASS {cases} case(s), objects: {', '.join(objects)}")
    return 0


# --------------------------------------------------------------------------
# gen / bench


def cmd_gen(args) -> int:
    try:
        expr = gen_family(args.family, *args.params, seed=args.seed)
    except ValueError as exc:
        raise CLIError(str(exc)) from exc
    text = format_document(expr)
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text, encoding="utf-8")
    if args.dot:
        Path(args.dot).write_text(evaluate(expr).to_dot(), encoding="utf-8")
    return 0


def _parse_range(text: str) -> range:
    lo, sep, hi = text.partition("..")
    try:
        a, b = int(lo), int(hi) if sep else int(lo)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected <a>..<b>, got {text!r}") from None
    if a < 1 or b < a:
        raise argparse.ArgumentTypeError(f"bad range {text!r}")
    return range(a, b + 1)


_BENCH_ENGINES = {"mc": "maximal-matchings", "pm": "path-matchings", "matchings": "matchings"}


def cmd_bench(args) -> int:
    obj = _BENCH_ENGINES.get(args.object, args.object)
    if obj not in OBJECTS:
        raise CLIError(f"unknown object {args.object!r}")
    engine = ENGINE[obj]
    rows = []
    for n in args.n:
        params = (n, args.width) if args.family == "random" else (n,) if args.family != "complete-bipartite" else (n, n)
        expr = gen_family(args.family, *params, seed=args.seed)
        width = max(max_label(expr), 1)
        g = evaluate(expr, width)
        start = time.perf_counter()
        if engine == "mc":
            root = mc.run_mc(expr, width)
            count = sum(mc.maximal_by_size(root).values())
        elif engine == "pm":
            root = pm.run_pm(expr, width)
            count = root.mass
        else:
            root = mc.run_matchings(expr, width)
            count = root.mass
        elapsed = (time.perf_counter() - start) * 1000
        rows.append(BenchRow(n, g.n, len(g.edges), width, len(root.table), elapsed, str(count)))
    sys.stdout.write(format_tsv(rows))
    if args.figure:
        plot_bench(rows, args.figure, f"{obj} on {args.family}")
    return 0


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cwcount", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="count objects of the graph built by an expression file")
    p.add_argument("--object", required=True, choices=OBJECTS)
    p.add_argument("--input", required=True, help=".cwe expression file")
    p.add_argument("--by-size", action="store_true", help="break counts down by number of edges")
    p.add_argument("--allow-null-eta", action="store_true",
                   help="drop edge creations that add no new edge instead of failing")
    p.add_argument("--json", action="store_true", help="JSON output (the default and only format)")
    p.add_argument("--pretty", action="store_true", help="indent the JSON report")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("check", help="cross-check the dynamic programs against brute force")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--input")
    src.add_argument("--random", nargs=3, type=int, metavar=("N", "L", "COUNT"),
                     help="COUNT random expressions of width L with 1..N vertices")
    p.add_argument("--object", choices=OBJECTS + ("all",), default="all")
    p.add_argument("--seed", type=int, default=0, help="base seed for --random")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--keep-going", action="store_true", help="report every mismatching case")
    p.add_argument("--allow-null-eta", action="store_true")
    p.add_argument("--no-coverage-filter", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("gen", help="write an expression for a graph family")
    p.add_argument("family", choices=sorted(set(_family_names())))
    p.add_argument("params", nargs="+", type=int)
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dot", help="also write the evaluated graph in DOT format")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="time an engine over a family of growing graphs")
    p.add_argument("--object", required=True, help="mc, pm, matchings or a count object")
    p.add_argument("--family", required=True, choices=sorted(set(_family_names())))
    p.add_argument("--n", required=True, type=_parse_range, metavar="A..B")
    p.add_argument("--width", type=int, default=3, help="label count for the random family")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--figure", help="also render the timings to this image file")
    p.set_defaults(func=cmd_bench)
    return parser


def _family_names():
    return ["path", "clique", "complete-bipartite", "cograph", "random"]


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except CLIError as exc:
        print(f"cwcount: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
