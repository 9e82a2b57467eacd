"""Command-line entry point.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 resource limit.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

from . import __version__
from .app import MAX_DEGREE, ResourceLimit, analyze, render_report
from .combinatorics import degrees_from_partition, enumerate_partitions, minimalize
from .sieve import FILTERS, evaluate, sieve, stage_counts
from .toric import (
    InterpolationMismatch,
    NoLowDegreeGenerators,
    build_polytope,
    classify,
    dilate_count,
    pure_cone_summary,
)
from .witness import DegenerateInstance, RankMismatch

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _half(degree: int, allow_large: bool) -> int:
    if degree % 2 or degree < 2:
        raise UsageError(f"--degree must be a positive even integer, got {degree}")
    d = degree // 2
    if d > MAX_DEGREE and not allow_large:
        raise ResourceLimit(f"degree {degree} exceeds the guard 2d <= {2 * MAX_DEGREE}; pass --allow-large")
    return d


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_enumerate(args) -> int:
    d = _half(args.degree, args.allow_large)
    ks = [args.k] if args.k is not None else range(1, d + 2)
    if args.k is not None and not 1 <= args.k <= d + 1:
        raise UsageError(f"--k must lie in [1, {d + 1}]")
    items = []
    for k in ks:
        for part in enumerate_partitions(d, k):
            full = degrees_from_partition(part)
            dmin = minimalize(full)
            items.append({
                "k": k,
                "partition": list(part.rows),
                "R": list(full.R),
                "Qfull": list(full.Q),
                "Pfull": list(full.P),
                "Q": list(dmin.Q),
                "P": list(dmin.P),
                "hilbert": list(dmin.hilbert().values),
            })
    if args.json:
        _emit(json.dumps({"version": __version__, "degree": args.degree, "partitions": items}, indent=2) + "\n", None)
    else:
        for it in items:
            print(f"k={it['k']} a={tuple(it['partition'])} Q={tuple(it['Q'])} P={tuple(it['P'])} T={tuple(it['hilbert'])}")
        print(f"{len(items)} partitions")
    return EXIT_OK


def cmd_sieve(args) -> int:
    d = _half(args.degree, args.allow_large)
    ev = evaluate(d, ci_sum_equality=args.ci_sum_equality)
    cases = sieve(d, ci_sum_equality=args.ci_sum_equality)
    stages = stage_counts(ev)
    if args.json:
        doc = {
            "version": __version__,
            "degree": args.degree,
            "stages": stages,
            "cases": [{"label": c.label, "Q": list(c.Q), "P": list(c.P), "filters": c.verdict.to_dict()} for c in cases],
        }
        if args.trace:
            doc["trace"] = [{"Q": list(c.degrees.Q), "P": list(c.degrees.P), "filters": v.to_dict()} for c, v in ev]
        _emit(json.dumps(doc, indent=2) + "\n", None)
        return EXIT_OK
    if args.trace:
        head = "| Q | P | " + " | ".join(FILTERS) + " |"
        print(head)
        print("|---|---|" + "---|" * len(FILTERS))
        for c, v in ev:
            marks = " | ".join("y" if v.results[f] else "n" for f in FILTERS)
            print(f"| {c.degrees.Q} | {c.degrees.P} | {marks} |")
        print()
    if args.markdown:
        print("| stage | in | out |")
        print("|---|---|---|")
        for s in stages:
            print(f"| {s['name']} | {s['in']} | {s['out']} |")
        print()
        print("| case | Q | P |")
        print("|---|---|---|")
        for c in cases:
            print(f"| {c.label} | {c.Q} | {c.P} |")
    else:
        for s in stages:
            print(f"{s['name']}: {s['in']} -> {s['out']}")
        for c in cases:
            print(f"{c.label} Q={c.Q} P={c.P}")
    return EXIT_OK


def cmd_toric(args) -> int:
    try:
        Q = tuple(sorted(int(x) for x in args.gens.split(",") if x.strip()))
    except ValueError:
        raise UsageError(f"--gens must be comma-separated integers, got {args.gens!r}")
    if not Q or args.d < 1:
        raise UsageError("need d >= 1 and at least one generator degree")
    try:
        p = build_polytope(args.d, Q)
    except NoLowDegreeGenerators:
        s = pure_cone_summary(args.d, Q)
        p = None
    else:
        s = classify(p)
    if args.json:
        doc = {"version": __version__, "d": args.d, "Q": list(Q), **s.to_dict()}
        if p is not None:
            doc["sizes"] = list(p.sizes)
            doc["vertices"] = [list(v) for v in p.vertices]
            doc["dilates"] = [dilate_count(p, t) for t in range(p.dim + 3)]
        _emit(json.dumps(doc, indent=2) + "\n", None)
    else:
        print(f"Q={Q} d={args.d}")
        if p is not None:
            print(f"triangles {p.sizes}, cones {p.cone_count}, lattice points {len(p.omega)}")
            print("ehrhart " + " + ".join(f"({c})t^{e}" for e, c in enumerate(s.ehrhart)))
        print(f"dim {s.dim} codim {s.codim} degree {s.degree} idp {s.idp}")
        print(f"class {s.classification} py bound {s.py_bound}")
        for n in s.notes:
            print(f"note: {n}")
    return EXIT_OK


def _run_analysis(args):
    d = _half(args.degree, args.allow_large)
    if d < 3:
        raise UsageError("analysis needs --degree >= 6")
    if args.trials < 0:
        raise UsageError("--trials must be nonnegative")
    return analyze(d, args.seed, args.trials, workers=args.workers, allow_large=args.allow_large,
                   ci_sum_equality=args.ci_sum_equality)


def cmd_analyze(args) -> int:
    r = _run_analysis(args)
    _emit(render_report(r, args.format), args.out)
    return EXIT_OK if r.verified else EXIT_FAIL


def cmd_report(args) -> int:
    r = _run_analysis(args)
    _emit(render_report(r, "markdown"), args.out)
    return EXIT_OK if r.verified else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ternary-pythagoras", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("-v", "--verbose", action="store_true", help="log retries and warnings")
    sub = ap.add_subparsers(dest="command", required=True)

    def guard(p):
        p.add_argument("--allow-large", action="store_true", help=f"permit 2d > {2 * MAX_DEGREE}")

    p = sub.add_parser("enumerate", help="partitions, degree data and Hilbert functions")
    p.add_argument("--degree", type=int, required=True, help="socle degree 2d")
    p.add_argument("--k", type=int)
    p.add_argument("--json", action="store_true")
    guard(p)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("sieve", help="filter pipeline with per-predicate verdicts")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--trace", action="store_true", help="show every candidate")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--markdown", action="store_true")
    p.add_argument("--ci-sum-equality", action="store_true", help="F2 requires the three degrees to sum to exactly 2d+3")
    guard(p)
    p.set_defaults(func=cmd_sieve)

    p = sub.add_parser("toric", help="stacked-triangle polytope report")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--gens", required=True, help="generator degrees, e.g. 3,5,5")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_toric)

    for name, func, helptext in (
        ("analyze", cmd_analyze, "full per-case analysis"),
        ("report", cmd_report, "markdown case document"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--degree", type=int, required=True)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--trials", type=int, default=20)
        p.add_argument("--out", required=(name == "report"))
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--ci-sum-equality", action="store_true")
        if name == "analyze":
            p.add_argument("--format", choices=("json", "markdown"), default="json")
        else:
            p.set_defaults(format="markdown")
        guard(p)
        p.set_defaults(func=func)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimit as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_LIMIT
    except (DegenerateInstance, RankMismatch, InterpolationMismatch, AssertionError) as e:
        print(f"verification failed: {e}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
