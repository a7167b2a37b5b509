"""Comparison of computed H^2 reports with the bundled tables.

Weights are compared as multisets keyed by (weight, parity).  Rows of one
key are summed on both sides before the counts, dims and mults are compared,
so grouped rows ``k x (a|b)`` and rows split over a finer torus line up.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from importlib import resources
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import yaml

from .catalog import AlgebraSpec, get_spec, prolonged
from .cohomology import CEComplex, cohomology
from .exactalg import format_rational, parse_rational
from .repmod import algebra_report, window_top

log = logging.getLogger(__name__)

FIXTURE_VERSION = 1
TIERS = ("small", "medium", "all")


class FixtureError(ValueError):
    pass


@dataclass
class Line:
    status: str          # PASS, FAIL, DISPUTED or STUB
    algebra: str
    what: str
    detail: str = ""
    location: str = ""

    def render(self) -> str:
        out = f"{self.status:<8} {self.algebra:<14} {self.what}"
        if self.detail:
            out += f": {self.detail}"
        if self.location:
            out += f"  [{self.location}]"
        return out


# ---------------------------------------------------------------------------
# loading


def _rat(x):
    try:
        return parse_rational(str(x))
    except (ValueError, ZeroDivisionError):
        raise FixtureError(f"not a rational number: {x!r}") from None


def _pair(x, what):
    if not (isinstance(x, (list, tuple)) and len(x) == 2 and all(isinstance(v, int) for v in x)):
        raise FixtureError(f"{what} must be a pair of integers, got {x!r}")
    return tuple(x)


def _check_row(row, where):
    if not isinstance(row, dict) or "weight" not in row:
        raise FixtureError(f"{where}: row without weight")
    if not isinstance(row["weight"], list):
        raise FixtureError(f"{where}: weight must be a list")
    for x in row["weight"]:
        _rat(x)
    if "dims" in row:
        _pair(row["dims"], f"{where} dims")
    elif row.get("parity") not in ("even", "odd"):
        raise FixtureError(f"{where}: a row needs dims or a parity")
    if "mult" in row:
        _pair(row["mult"], f"{where} mult")
    if not isinstance(row.get("count", 1), int):
        raise FixtureError(f"{where}: count must be an integer")


def validate(data) -> List[dict]:
    if not isinstance(data, dict) or data.get("version") != FIXTURE_VERSION:
        raise FixtureError(f"fixture file must be a mapping with version: {FIXTURE_VERSION}")
    entries = data.get("entries")
    if not isinstance(entries, list):
        raise FixtureError("fixture file needs a list of entries")
    for e in entries:
        if not isinstance(e, dict) or "algebra" not in e:
            raise FixtureError("every entry needs an algebra id")
        where = e["algebra"]
        if not isinstance(e.get("location"), str) or not e["location"]:
            raise FixtureError(f"{where}: entry needs a table location")
        if not any(k in e for k in ("zero_degrees", "degrees", "total", "stub")):
            raise FixtureError(f"{where}: entry checks nothing")
        if e.get("i", 2) not in (0, 1, 2):
            raise FixtureError(f"{where}: i must be 0, 1 or 2")
        for t in e.get("zero_degrees", []):
            if not isinstance(t, int):
                raise FixtureError(f"{where}: zero degrees must be integers")
        for d in e.get("degrees", []):
            if not isinstance(d, dict) or not isinstance(d.get("degree"), int):
                raise FixtureError(f"{where}: degree block without an integer degree")
            if "dims" not in d and not d.get("rows"):
                raise FixtureError(f"{where}: degree {d['degree']} has neither dims nor rows")
            if "dims" in d:
                _pair(d["dims"], f"{where} degree {d['degree']} dims")
            for row in d.get("rows", []):
                _check_row(row, f"{where} degree {d['degree']}")
        if "total" in e and not isinstance(e["total"], int):
            raise FixtureError(f"{where}: total must be an integer")
    return entries


def load_fixtures(source: str = "builtin") -> List[dict]:
    if source == "builtin":
        text = resources.files("nhcurv").joinpath("data/fixtures.yaml").read_text(encoding="utf-8")
    else:
        try:
            with open(source, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise FixtureError(f"cannot read {source}: {exc}") from None
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise FixtureError(f"malformed fixture file: {exc}") from None
    return validate(data)


# ---------------------------------------------------------------------------
# comparison


def _fmt_w(w) -> str:
    return "(" + ", ".join(format_rational(x) for x in w) + ")"


def _fmt_d(d) -> str:
    return f"({d[0]}|{d[1]})"


@dataclass
class _Group:
    labels: List[str]
    weight: tuple
    parity: int
    count: int = 0
    dims: Optional[Tuple[int, int]] = None
    mult: Optional[Tuple[int, int]] = None
    disputed: Dict[str, str] = None

    def describe(self) -> str:
        out = _fmt_w(self.weight)
        if self.dims is not None:
            k = self.count
            if k > 1 and not (self.dims[0] % k or self.dims[1] % k):
                out += f" {k}x" + _fmt_d((self.dims[0] // k, self.dims[1] // k))
            else:
                out += " " + _fmt_d(self.dims) + (f" from {k} vectors" if k > 1 else "")
        if self.mult is not None:
            out += f" {self.mult[0]}/{self.mult[1]}"
        return out


def _add(a, b):
    return b if a is None else (a[0] + b[0], a[1] + b[1])


def expected_groups(spec: AlgebraSpec, rows: Sequence[dict]) -> Dict[tuple, _Group]:
    groups: Dict[tuple, _Group] = {}
    for row in rows:
        w = tuple(_rat(x) for x in row["weight"])
        count = int(row.get("count", 1))
        if "dims" in row:
            d = (count * row["dims"][0], count * row["dims"][1])
            parity = 1 if d[1] else 0
        else:
            d = None
            parity = 1 if row["parity"] == "odd" else 0
        key = (spec.weight_key(w), parity)
        if "weight" in (row.get("disputed") or {}):
            key = (("disputed", str(row.get("n", len(groups)))), parity)
        g = groups.setdefault(key, _Group([], w, parity, disputed={}))
        g.labels.append(str(row.get("n", "?")))
        g.count += count
        if d is not None:
            g.dims = _add(g.dims, d)
        if "mult" in row:
            g.mult = _add(g.mult, tuple(row["mult"]))
        g.disputed.update(row.get("disputed") or {})
    return groups


def computed_groups(spec: AlgebraSpec, report) -> Dict[tuple, _Group]:
    groups: Dict[tuple, _Group] = {}
    for row in report.rows:
        key = (spec.weight_key(row.weight), row.parity)
        g = groups.setdefault(key, _Group([], tuple(row.weight), row.parity, disputed={}))
        g.count += row.highest_count
        g.dims = _add(g.dims, row.dims)
        g.mult = _add(g.mult, (row.mult_closed, row.mult_exact))
    return groups


def _mismatches(exp: _Group, got: _Group) -> List[str]:
    bad = []
    if exp.dims is not None:
        if exp.count != got.count:
            bad.append("count")
        if exp.dims != got.dims:
            bad.append("dims")
    if exp.mult is not None and exp.mult != got.mult:
        bad.append("mult")
    return bad


def compare_rows(spec: AlgebraSpec, rows: Sequence[dict], report, algebra: str, deg: int,
                 location: str) -> List[Line]:
    exp = expected_groups(spec, rows)
    got = computed_groups(spec, report)
    out: List[Line] = []
    used = set()
    pending = []
    for key, e in exp.items():
        what = f"deg {deg} row [{'/'.join(e.labels)}]"
        g = got.get(key)
        if g is None:
            pending.append((key, e, what))
            continue
        used.add(key)
        out.append(_judge(e, g, algebra, what, location))
    # rows whose weight cell is disputed: match on parity, dims and mults instead
    for key, e, what in pending:
        cands = [k for k, g in got.items() if k not in used and k[1] == e.parity and not _mismatches(e, g)]
        if "weight" in e.disputed and cands:
            k = cands[0]
            used.add(k)
            out.append(Line("DISPUTED", algebra, what,
                            f"expected {e.describe()}, computed {got[k].describe()} ({e.disputed['weight']})",
                            location))
        else:
            out.append(Line("FAIL", algebra, what, f"expected {e.describe()}, no computed row of this weight",
                            location))
    for key, g in got.items():
        if key not in used:
            out.append(Line("FAIL", algebra, f"deg {deg} unexpected row", f"computed {g.describe()}", location))
    return out


def _judge(e: _Group, g: _Group, algebra: str, what: str, location: str) -> Line:
    bad = _mismatches(e, g)
    if not bad:
        return Line("PASS", algebra, what, g.describe(), location)
    detail = f"expected {e.describe()}, computed {g.describe()}"
    if all(b in e.disputed or (b == "count" and "dims" in e.disputed) for b in bad):
        reasons = "; ".join(e.disputed[b] for b in bad if b in e.disputed)
        return Line("DISPUTED", algebra, what, f"{detail} ({reasons})", location)
    return Line("FAIL", algebra, what, detail, location)


# ---------------------------------------------------------------------------
# running


class _Session:
    """One algebra, prolonged far enough for every requested degree."""

    def __init__(self, algebra: str, i: int, degrees: Sequence[int], threads: int, cache_dir: Optional[str]):
        self.algebra = algebra
        self.i = i
        self.threads = threads
        top = max([window_top(i, t) for t in degrees] + [0])
        self.g = prolonged(algebra, top, cache_dir=cache_dir)
        self.cx = CEComplex(self.g)
        self.spec = get_spec(algebra)
        self._dims: Dict[int, Tuple[int, int]] = {}

    def dims(self, t: int) -> Tuple[int, int]:
        if t not in self._dims:
            h = cohomology(self.i, t, self.g, cx=self.cx, with_representatives=False, threads=self.threads)
            d = h.dims
            if self.spec.parity_convention == "generating":
                d = (d[1], d[0])
            self._dims[t] = d
            log.info("%s H^%d(%d) = %s", self.algebra, self.i, t, _fmt_d(d))
        return self._dims[t]

    def report(self, t: int):
        return algebra_report(self.algebra, self.i, t, g=self.g, cx=self.cx, threads=self.threads, render=False)


def in_scope(spec: AlgebraSpec, scope: str) -> bool:
    return TIERS.index(spec.tier if spec.tier in TIERS else "all") <= TIERS.index(scope)


def verify_entry(entry: dict, threads: int = 1, cache_dir: Optional[str] = None) -> List[Line]:
    spec = get_spec(entry["algebra"])
    name = spec.id
    loc = entry.get("location", "")
    i = int(entry.get("i", 2))
    if spec.stub or entry.get("stub"):
        return [Line("STUB", name, "catalog stub", "no vector-field realization; not computed", loc)]
    t_min, t_max = 2 - spec.depth, {1: 3, 2: 2}.get(spec.depth, 1)
    blocks = entry.get("degrees", [])
    window = list(range(t_min, t_max + 1))
    if "window" in entry:
        window = list(range(entry["window"][0], entry["window"][1] + 1))
    needed = set(entry.get("zero_degrees", [])) | {b["degree"] for b in blocks}
    if "total" in entry or any("degree" in (b.get("disputed") or {}) for b in blocks):
        needed |= set(window)
    sess = _Session(name, i, sorted(needed), threads, cache_dir)
    out: List[Line] = []
    moved = set()
    for b in blocks:
        t = b["degree"]
        exp = tuple(b["dims"]) if "dims" in b else None
        disputed = b.get("disputed") or {}
        if exp is not None and sess.dims(t) != exp and "degree" in disputed:
            found = [s for s in window if s != t and sess.dims(s) == exp]
            if found:
                out.append(Line("DISPUTED", name, f"H^{i} degree {t}",
                                f"expected {_fmt_d(exp)} in degree {t}, found in degree {found[0]} "
                                f"({disputed['degree']})", loc))
                moved.add(found[0])
                t = found[0]
        if exp is not None:
            got = sess.dims(t)
            out.append(Line("PASS" if got == exp else "FAIL", name, f"H^{i} degree {t} total",
                            f"expected {_fmt_d(exp)}, computed {_fmt_d(got)}" if got != exp else _fmt_d(got), loc))
        if b.get("rows"):
            out.extend(compare_rows(spec, b["rows"], sess.report(t), name, t, loc))
    for t in entry.get("zero_degrees", []):
        if t in moved:
            continue
        got = sess.dims(t)
        ok = got == (0, 0)
        out.append(Line("PASS" if ok else "FAIL", name, f"H^{i} degree {t} vanishes",
                        "(0|0)" if ok else f"computed {_fmt_d(got)}", loc))
    if "total" in entry:
        tot = sum(sum(sess.dims(t)) for t in window)
        ok = tot == entry["total"]
        status = "PASS" if ok else ("DISPUTED" if "total" in (entry.get("disputed") or {}) else "FAIL")
        detail = f"expected {entry['total']}, computed {tot} over degrees {window[0]}..{window[-1]}"
        if not ok and status == "DISPUTED":
            detail += f" ({entry['disputed']['total']})"
        out.append(Line(status, name, f"H^{i} total dimension", detail, loc))
    return out


def verify(entries: Sequence[dict], scope: str = "small", threads: int = 1, cache_dir: Optional[str] = None,
           emit: Optional[Callable[[Line], None]] = None) -> List[Line]:
    if scope not in TIERS:
        raise FixtureError(f"unknown scope {scope!r}")
    lines: List[Line] = []
    for entry in entries:
        spec = get_spec(entry["algebra"])
        if not in_scope(spec, scope):
            continue
        for line in verify_entry(entry, threads=threads, cache_dir=cache_dir):
            lines.append(line)
            if emit:
                emit(line)
    return lines
