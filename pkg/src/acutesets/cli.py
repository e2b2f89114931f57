"""Command-line interface: construct, verify, compare, plot."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from fractions import Fraction
from typing import Optional

from . import __version__
from .baselines import EfRunConfig, ef_run, expected_bound
from .doubling import ConstructionError, power_construct
from .exact import QVector
from .fibonacci import RetryBudgetExhausted, fib, fibonacci_construct
from .plot import render_svg
from .serialize import DocumentError, MarkedHyperplane, PointSetDocument, load, save
from .verifier import (
    UpperBoundViolation,
    VerificationReport,
    assert_upper_bound,
    format_ratio,
    robustness_radius,
    verify_acute,
)

EXIT_OK = 0
EXIT_NOT_ACUTE = 1
EXIT_USAGE = 2
EXIT_RETRY = 3

METHODS = ("fibonacci", "doubling", "ef-random")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, "%s: error: %s\n" % (self.prog, message))


def _build(method: str, d: int, seed: Optional[int], threads: int, retry_budget: int) -> PointSetDocument:
    if method == "fibonacci":
        cfg = fibonacci_construct(d, retry_budget=retry_budget, seed=seed or 0, workers=threads)
        prov = {
            "method": method,
            "parameters": {"dim": d, "retry_budget": retry_budget},
            "seed": seed or 0,
            "retry_counts": [h.retry_count for h in cfg.history],
        }
        mk = MarkedHyperplane(cfg.marked, tuple(sorted(cfg.on_hyperplane)), cfg.off_side)
        return PointSetDocument(dim=d, points=cfg.points, marked=mk, provenance=prov)
    if method == "doubling":
        pts = power_construct(d, workers=threads)
        prov = {"method": method, "parameters": {"dim": d}, "seed": None, "retry_counts": []}
        return PointSetDocument(dim=d, points=tuple(pts), provenance=prov)
    if seed is None:
        raise ValueError("ef-random needs --seed")
    res = ef_run(EfRunConfig(dim=d, seed=seed))
    prov = {
        "method": method,
        "parameters": {"dim": d, "sample_size": res.sampled, "deletions": res.deletions},
        "seed": seed,
        "retry_counts": [],
    }
    return PointSetDocument(dim=d, points=res.points, provenance=prov)


def cmd_construct(args) -> int:
    if args.method == "ef-random" and args.seed is None:
        print("error: --method ef-random requires --seed", file=sys.stderr)
        return EXIT_USAGE
    if args.retry_budget < 1:
        print("error: --retry-budget must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    if args.dim < 1 or (args.method == "ef-random" and args.dim < 2):
        print("error: dimension out of range", file=sys.stderr)
        return EXIT_USAGE
    t0 = time.perf_counter()
    try:
        doc = _build(args.method, args.dim, args.seed, args.threads, args.retry_budget)
    except RetryBudgetExhausted as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_RETRY
    except (ConstructionError, UpperBoundViolation) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_NOT_ACUTE
    rep = verify_acute(list(doc.points), workers=args.threads)
    if args.out:
        save(doc, args.out)
    eps = robustness_radius(list(doc.points), rep) if rep.is_acute else None
    print(
        "method=%s dim=%d size=%d acute=%s min_vertex_dot=%s s_value=%s radius=%s elapsed=%.2fs"
        % (
            args.method,
            args.dim,
            len(doc.points),
            rep.is_acute,
            format_ratio(rep.min_vertex_dot),
            format_ratio(rep.s_value),
            format_ratio(eps),
            time.perf_counter() - t0,
        )
    )
    return EXIT_OK if rep.is_acute else EXIT_NOT_ACUTE


def report_dict(rep: VerificationReport) -> dict:
    def q(v):
        return None if v is None else str(v)

    return {
        "is_acute": rep.is_acute,
        "n_points": rep.n_points,
        "dim": rep.dim,
        "min_vertex_dot": q(rep.min_vertex_dot),
        "s_value": q(rep.s_value),
        "max_dist_sq": q(rep.max_dist_sq),
        "triples_checked": rep.triples_checked,
        "violations": [{"apex": v.apex, "y": v.y, "z": v.z, "dot": str(v.dot)} for v in rep.violations],
        "elapsed": rep.elapsed,
    }


def cmd_verify(args) -> int:
    try:
        doc = load(args.path)
        rep = verify_acute(list(doc.points), workers=args.threads)
    except (DocumentError, ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    if args.json:
        print(json.dumps(report_dict(rep), indent=1))
    else:
        print("points:          %d" % rep.n_points)
        print("dimension:       %d" % rep.dim)
        print("acute:           %s" % rep.is_acute)
        print("triples checked: %d" % rep.triples_checked)
        print("min vertex dot:  %s" % format_ratio(rep.min_vertex_dot))
        print("s value:         %s" % format_ratio(rep.s_value))
        print("violations:      %d" % len(rep.violations))
        for v in rep.violations[: args.max_violations]:
            print("  apex %d, legs to %d and %d: dot %s" % (v.apex, v.y, v.z, format_ratio(v.dot)))
        if len(rep.violations) > args.max_violations:
            print("  ... %d more" % (len(rep.violations) - args.max_violations))
        print("elapsed:         %.3fs" % rep.elapsed)
    return EXIT_OK if rep.is_acute else EXIT_NOT_ACUTE


def _parse_range(text: str) -> list[int]:
    if "-" in text:
        a, b = text.split("-", 1)
        return list(range(int(a), int(b) + 1))
    return [int(x) for x in text.split(",")]


COMPARE_COLUMNS = [
    "dim",
    "method",
    "status",
    "size",
    "size_min",
    "size_max",
    "verified",
    "ref_float_fib_d_plus_1",
    "ref_float_two_pow_half_d",
    "ref_float_ef_bound",
    "ref_float_upper_bound",
    "ref_float_size_over_golden_pow_d",
]


def compare_rows(dims, seeds: int, max_fib_dim: int, max_doubling_dim: int, threads: int = 1):
    golden = (1 + math.sqrt(5)) / 2
    rows = []
    for d in dims:
        refs = {
            "ref_float_fib_d_plus_1": float(fib(d + 1)),
            "ref_float_two_pow_half_d": 2.0 ** (d / 2),
            "ref_float_ef_bound": expected_bound(d),
            "ref_float_upper_bound": float(2 if d == 1 else 2 ** d - 1),
        }
        for method in METHODS:
            row = {"dim": d, "method": method, **refs}
            sizes = []
            if method == "fibonacci" and d > max_fib_dim or method == "doubling" and d > max_doubling_dim:
                row["status"] = "skipped"
            elif method == "ef-random" and d < 2:
                row["status"] = "skipped"
            else:
                runs = range(seeds) if method == "ef-random" else [0]
                ok = True
                for s in runs:
                    doc = _build(method, d, s, threads, 64)
                    pts = list(doc.points)
                    ok &= verify_acute(pts, workers=threads).is_acute
                    assert_upper_bound(pts)
                    sizes.append(len(pts))
                row["status"] = "ok" if ok else "failed"
                row["verified"] = ok
                row["size"] = sum(sizes) / len(sizes) if method == "ef-random" else sizes[0]
                row["size_min"] = min(sizes)
                row["size_max"] = max(sizes)
                row["ref_float_size_over_golden_pow_d"] = row["size"] / golden ** d
            rows.append(row)
    return rows


def cmd_compare(args) -> int:
    try:
        dims = _parse_range(args.dims)
    except ValueError:
        print("error: bad --dims %r" % args.dims, file=sys.stderr)
        return EXIT_USAGE
    rows = compare_rows(dims, args.seeds, args.max_fib_dim, args.max_doubling_dim, args.threads)
    buf = io.StringIO()
    buf.write("# ref_float_* columns are floating-point reporting values, not exact\n")
    w = csv.DictWriter(buf, fieldnames=COMPARE_COLUMNS, restval="", lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return EXIT_OK if all(r["status"] != "failed" for r in rows) else EXIT_NOT_ACUTE


def cmd_plot(args) -> int:
    try:
        doc = load(args.path)
    except DocumentError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    if doc.dim > 3:
        print("error: refusing to plot dimension %d (supported: 1 to 3)" % doc.dim, file=sys.stderr)
        return EXIT_USAGE
    hl = set(doc.marked.on_hyperplane) if doc.marked is not None else set()
    svg = render_svg(list(doc.points), highlight=hl, title="%d points in R^%d" % (len(doc.points), doc.dim))
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(svg)
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="acutesets", description="Construct and verify acute point sets exactly.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("construct", help="build an acute set and write it as JSON")
    c.add_argument("--method", choices=METHODS, required=True)
    c.add_argument("--dim", type=int, required=True)
    c.add_argument("--seed", type=int, default=None)
    c.add_argument("--out", default=None)
    c.add_argument("--threads", type=int, default=1)
    c.add_argument("--retry-budget", type=int, default=64)
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", help="check a point-set document")
    v.add_argument("path")
    v.add_argument("--json", action="store_true")
    v.add_argument("--threads", type=int, default=1)
    v.add_argument("--max-violations", type=int, default=20)
    v.set_defaults(func=cmd_verify)

    m = sub.add_parser("compare", help="CSV table of sizes per method")
    m.add_argument("--dims", default="2-8")
    m.add_argument("--seeds", type=int, default=10)
    m.add_argument("--max-fib-dim", type=int, default=10)
    m.add_argument("--max-doubling-dim", type=int, default=15)
    m.add_argument("--threads", type=int, default=1)
    m.add_argument("--out", default=None)
    m.set_defaults(func=cmd_compare)

    g = sub.add_parser("plot", help="SVG figure for d <= 3")
    g.add_argument("path")
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_plot)
    return p


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    if getattr(args, "threads", 1) < 1:
        print("error: --threads must be positive", file=sys.stderr)
        return EXIT_USAGE
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
