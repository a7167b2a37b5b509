"""Command line front end: ``nhcurv list|prolong|cohomology|verify``.

Exit codes: 0 success, 1 verification failures, 2 usage or input errors
(unknown algebra, catalog stub, malformed fixture), 3 internal invariant
violations.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
import time
from typing import List, Optional, Sequence

from .catalog import CatalogStub, UnknownAlgebra, get_spec, list_algebras, prolonged
from .cohomology import CEComplex, WindowError
from .exactalg import format_rational
from .prolong import ProlongError, TruncationError
from .repmod import ModuleReport, algebra_report, window_top
from .verify import FixtureError, TIERS, load_fixtures, verify

CACHE_ENV = "NHCURV_CACHE_DIR"

log = logging.getLogger("nhcurv")


class UsageError(Exception):
    pass


def _cache_dir(args) -> Optional[str]:
    return args.cache_dir or os.environ.get(CACHE_ENV) or None


def _spec(algebra: str):
    try:
        spec = get_spec(algebra)
    except UnknownAlgebra:
        raise UsageError(f"unknown algebra {algebra!r}; try `nhcurv list`") from None
    if spec.stub:
        raise UsageError(f"{spec.id}: catalog stub (no vector-field realization available)")
    return spec


def parse_degrees(text: str) -> List[int]:
    """``"a..b"`` or a single integer."""
    try:
        if ".." in text:
            a, b = text.split("..")
            lo, hi = int(a), int(b)
        else:
            lo = hi = int(text)
    except ValueError:
        raise UsageError(f"bad degree range {text!r}; expected a..b") from None
    if lo > hi:
        raise UsageError(f"empty degree range {text!r}")
    return list(range(lo, hi + 1))


def parse_orders(text: str) -> List[int]:
    try:
        out = sorted({int(x) for x in text.split(",")})
    except ValueError:
        raise UsageError(f"bad cohomology order list {text!r}") from None
    if any(i not in (0, 1, 2) for i in out):
        raise UsageError("cohomology orders must be among 0, 1, 2")
    return out


# ---------------------------------------------------------------------------
# rendering


def _w(weight) -> str:
    return "(" + ", ".join(format_rational(x) for x in weight) + ")"


def report_json(rep: ModuleReport) -> dict:
    return {
        "algebra": rep.algebra,
        "i": rep.i,
        "degree": rep.t,
        "dim_even": rep.dim_even,
        "dim_odd": rep.dim_odd,
        "blocks": [
            {
                "weight": [format_rational(x) for x in b.weight],
                "dim_even": b.dim_even,
                "dim_odd": b.dim_odd,
                "mult_closed": b.mult_closed,
                "mult_exact": b.mult_exact,
                "highest": b.highest,
                "representative": b.representative_text,
            }
            for b in rep.blocks
        ],
    }


def dump_json(reports: Sequence[ModuleReport]) -> str:
    return json.dumps([report_json(r) for r in reports], indent=2, ensure_ascii=False) + "\n"


def dump_csv(reports: Sequence[ModuleReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["algebra", "i", "degree", "weight", "dim_even", "dim_odd", "mult_closed", "mult_exact",
                "highest", "representative"])
    for r in reports:
        for b in r.blocks:
            w.writerow([r.algebra, r.i, r.t, " ".join(format_rational(x) for x in b.weight), b.dim_even,
                        b.dim_odd, b.mult_closed, b.mult_exact, int(b.highest), b.representative_text])
    return buf.getvalue()


def dump_text(reports: Sequence[ModuleReport]) -> str:
    out = []
    for r in reports:
        out.append(f"{r.algebra}  H^{r.i}  degree {r.t}  dim ({r.dim_even}|{r.dim_odd})")
        for note in r.notes:
            out.append(f"  note: {note}")
        for n, row in enumerate(r.rows, 1):
            k = f"{row.highest_count}x" if row.highest_count > 1 else ""
            out.append(f"  [{n}] {_w(row.weight)}  {k}({row.dim_even}|{row.dim_odd})  "
                       f"mult {row.mult_closed}/{row.mult_exact}")
            out.append(f"      {row.representative_text}")
    if len(reports) > 1:
        ev = sum(r.dim_even for r in reports)
        od = sum(r.dim_odd for r in reports)
        out.append(f"total over listed degrees: ({ev}|{od})")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# commands


def cmd_list(args) -> int:
    for row in list_algebras():
        gm = row.get("dim_gminus")
        dims = f"g_- ({gm[0]}|{gm[1]})" if gm else ""
        flag = "  catalog stub" if row["stub"] else ""
        print(f"{row['id']:<16} depth {row['depth']}  tier {row['tier']:<6} {dims}{flag}")
    return 0


def cmd_prolong(args) -> int:
    spec = _spec(args.algebra)
    if args.max_degree < 0:
        raise UsageError("--max-degree must be non-negative")
    g = prolonged(spec.id, args.max_degree, cache_dir=_cache_dir(args))
    for k in g.degrees():
        e, o = g.dim(k)
        print(f"{k:>3}  ({e}|{o})")
    return 0


def cmd_cohomology(args) -> int:
    spec = _spec(args.algebra)
    orders = parse_orders(args.i)
    t_min, t_max = 2 - spec.depth, {1: 3, 2: 2}.get(spec.depth, 1)
    degrees = parse_degrees(args.degrees) if args.degrees else list(range(t_min, t_max + 1))
    top = max(window_top(i, t) for i in orders for t in degrees)
    if args.dmax is not None:
        if args.dmax < top:
            raise UsageError(f"--dmax {args.dmax} is below degree {top} needed for the requested window")
        top = args.dmax
    t0 = time.time()
    g = prolonged(spec.id, top, cache_dir=_cache_dir(args))
    log.info("%s prolonged to degree %d in %.1fs", spec.id, top, time.time() - t0)
    cx = CEComplex(g)
    reports = []
    for i in orders:
        for t in degrees:
            t1 = time.time()
            rep = algebra_report(spec.id, i, t, g=g, cx=cx, threads=args.threads)
            log.info("H^%d degree %d: (%d|%d) in %.1fs", i, t, rep.dim_even, rep.dim_odd, time.time() - t1)
            reports.append(rep)
    if args.format == "json":
        sys.stdout.write(dump_json(reports))
    elif args.format == "csv":
        sys.stdout.write(dump_csv(reports))
    else:
        sys.stdout.write(dump_text(reports))
    return 0


def cmd_verify(args) -> int:
    entries = load_fixtures(args.fixtures)
    for e in entries:
        try:
            get_spec(e["algebra"])
        except UnknownAlgebra:
            raise FixtureError(f"fixture names unknown algebra {e['algebra']!r}") from None
    lines = verify(entries, scope=args.scope, threads=args.threads, cache_dir=_cache_dir(args),
                   emit=lambda line: print(line.render(), flush=True))
    counts = {s: sum(1 for x in lines if x.status == s) for s in ("PASS", "FAIL", "DISPUTED", "STUB")}
    print(f"summary: {counts['PASS']} pass, {counts['FAIL']} fail, {counts['DISPUTED']} disputed, "
          f"{counts['STUB']} stub")
    return 1 if counts["FAIL"] else 0


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nhcurv", description="Nonholonomic curvature: H^i(g_-; g) of graded algebras.")
    verbose = argparse.ArgumentParser(add_help=False)
    verbose.add_argument("-v", "--verbose", action="count", default=0, help="progress on stderr (-vv for debug)")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("list", help="list catalog algebras", parents=[verbose])
    s.set_defaults(func=cmd_list)

    def common(sp):
        sp.add_argument("--cache-dir", help=f"prolong cache directory (default ${CACHE_ENV})")
        sp.add_argument("--threads", type=int, default=1, help="worker processes for block linear algebra")

    s = sub.add_parser("prolong", help="dimensions of the prolong g_k up to a degree", parents=[verbose])
    s.add_argument("--algebra", required=True)
    s.add_argument("--max-degree", type=int, required=True)
    s.add_argument("--cache-dir", help=f"prolong cache directory (default ${CACHE_ENV})")
    s.set_defaults(func=cmd_prolong)

    s = sub.add_parser("cohomology", help="H^i(g_-; g) with g_0-module reports", parents=[verbose])
    s.add_argument("--algebra", required=True)
    s.add_argument("--i", default="2", help="comma separated orders among 0,1,2 (default 2)")
    s.add_argument("--degrees", help="internal degree range a..b (default 2-d..t_max)")
    s.add_argument("--dmax", type=int, help="prolong at least to this degree")
    s.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common(s)
    s.set_defaults(func=cmd_cohomology)

    s = sub.add_parser("verify", help="compare against the bundled tables", parents=[verbose])
    s.add_argument("--fixtures", default="builtin", help="'builtin' or a fixture file path")
    s.add_argument("--scope", choices=TIERS, default="small")
    common(s)
    s.set_defaults(func=cmd_verify)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and 2
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(name)s: %(message)s", stream=sys.stderr)
    if getattr(args, "threads", 1) < 1:
        print("nhcurv: --threads must be at least 1", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (UsageError, FixtureError, WindowError, CatalogStub) as exc:
        print(f"nhcurv: {exc}", file=sys.stderr)
        return 2
    except UnknownAlgebra as exc:
        print(f"nhcurv: unknown algebra {exc}", file=sys.stderr)
        return 2
    except (ProlongError, TruncationError, ArithmeticError, AssertionError) as exc:
        print(f"nhcurv: internal invariant violated: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
