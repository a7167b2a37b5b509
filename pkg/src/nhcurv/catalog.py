"""Catalog of graded vectorial algebras: nonpositive parts and how to extend them.

Exceptional entries live in ``data/catalog.yaml`` as explicit polynomial
vector fields (or as regradings of another entry).  The classical families
``vect(n|m)``, ``k(2n+1)``, ``engel`` and ``on_structure(n)`` are generated
on the fly.
"""

from __future__ import annotations

import hashlib
import os
import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Dict, List, Optional, Sequence, Tuple

import yaml

from .exactalg import Echelon, Q, parse_rational
from .prolong import (Component, GradedAlgebra, ProlongError, block_homogenize, nonpositive_algebra,
                      partial_prolong, prolong, regrade)
from .superpoly import CoordinateSystem, VectorField, parse_field

CATALOG_VERSION = 1


class UnknownAlgebra(KeyError):
    pass


class CatalogStub(RuntimeError):
    """The entry is listed but has no vector-field realization."""


@dataclass
class AlgebraSpec:
    id: str
    aliases: Tuple[str, ...] = ()
    tier: str = "small"
    coordinates: List[tuple] = field(default_factory=list)
    gradings: List[list] = field(default_factory=list)
    negative: Dict[int, List[str]] = field(default_factory=dict)
    g0: object = "normalizer"
    positive: Dict[int, List[str]] = field(default_factory=dict)
    regrade: Optional[dict] = None
    rank: int = 0
    raising: dict = field(default_factory=dict)
    lowering: dict = field(default_factory=dict)
    expected: dict = field(default_factory=dict)
    parity_convention: str = "field"
    weight_modulo: List[list] = field(default_factory=list)
    weight_display: List[list] = field(default_factory=list)
    notes: str = ""
    stub: bool = False
    family: Optional[str] = None

    def display_weight(self, weight: Sequence[object]) -> tuple:
        """Weight as tabulated: ``weight_display`` rows applied to the computed weight."""
        if not self.weight_display:
            return tuple(weight)
        return tuple(sum((parse_rational(str(m)) * Q(x) for m, x in zip(row, weight)), Q(0))
                     for row in self.weight_display)

    def weight_key(self, display: Sequence[object]) -> tuple:
        """Canonical form of a displayed weight modulo the ``weight_modulo`` directions."""
        w = tuple(parse_rational(str(x)) if isinstance(x, str) else Q(x) for x in display)
        if not self.weight_modulo:
            return w
        ech = Echelon()
        for m in self.weight_modulo:
            mv = self.display_weight([parse_rational(str(x)) for x in m])
            ech.insert({k: x for k, x in enumerate(mv) if x})
        red = ech.reduce({k: x for k, x in enumerate(w) if x})
        return tuple(red.get(k, Q(0)) for k in range(len(w)))

    @property
    def depth(self) -> int:
        if "depth" in self.expected:
            return int(self.expected["depth"])
        if self.regrade:
            return -min(self.regrade.get("negative_degrees", [-1]))
        return -min(self.negative) if self.negative else 1

    def coordinate_system(self, extra_gradings=()) -> CoordinateSystem:
        coords = [(c[0], int(c[1]), int(c[2])) for c in self.coordinates]
        weights = [tuple(parse_rational(str(x)) for x in c[3]) for c in self.coordinates] \
            if self.coordinates and len(self.coordinates[0]) > 3 else None
        grads = [tuple(int(x) for x in g) for g in self.gradings] + [tuple(g) for g in extra_gradings]
        return CoordinateSystem.build(coords, weights=weights, gradings=grads)


# ---------------------------------------------------------------------------
# id normalization

_GREEK = {"ξ": "xi", "η": "eta", "\\xi": "xi", "\\eta": "eta"}


def normalize_id(text: str) -> str:
    """Canonical ASCII id: spaces dropped, greek letters spelled out."""
    s = text.strip()
    for k, v in _GREEK.items():
        s = s.replace(k, v)
    s = re.sub(r"\s+", "", s)
    s = s.replace("\\", "")
    return s


# ---------------------------------------------------------------------------
# data file


def _data_text() -> str:
    return resources.files("nhcurv").joinpath("data/catalog.yaml").read_text(encoding="utf-8")


@lru_cache(maxsize=None)
def _entries() -> Dict[str, AlgebraSpec]:
    data = yaml.safe_load(_data_text())
    if data.get("version") != CATALOG_VERSION:
        raise ProlongError("catalog version mismatch")
    out: Dict[str, AlgebraSpec] = {}
    for raw in data["algebras"]:
        spec = AlgebraSpec(
            id=raw["id"],
            aliases=tuple(raw.get("aliases", ())),
            tier=raw.get("tier", "small"),
            coordinates=[tuple(c) for c in raw.get("coordinates", [])],
            gradings=raw.get("gradings", []),
            negative={int(k): list(v) for k, v in (raw.get("negative") or {}).items()},
            g0=raw.get("g0", "normalizer"),
            positive={int(k): list(v) for k, v in (raw.get("positive") or {}).items()},
            regrade=raw.get("regrade"),
            rank=int(raw.get("rank", 0)),
            raising=raw.get("raising") or {},
            lowering=raw.get("lowering") or {},
            expected=raw.get("expected") or {},
            parity_convention=raw.get("parity_convention", "field"),
            weight_modulo=raw.get("weight_modulo") or [],
            weight_display=raw.get("weight_display") or [],
            notes=raw.get("notes", ""),
            stub=bool(raw.get("stub", False)),
            family=raw.get("family"),
        )
        out[spec.id] = spec
    return out


def _alias_table() -> Dict[str, str]:
    table = {}
    for sid, spec in _entries().items():
        table[normalize_id(sid)] = sid
        for a in spec.aliases:
            table[normalize_id(a)] = sid
    return table


# ---------------------------------------------------------------------------
# classical families


_VECT = re.compile(r"^vect\((\d+)(?:\|(\d+))?\)$")
_K = re.compile(r"^k\((\d+)\)$")
_ON = re.compile(r"^on_structure\((\d+)\)$")


def _fmt(x) -> str:
    return str(x)


def _vect_spec(n: int, m: int) -> AlgebraSpec:
    size = n + m
    coords = []
    for i in range(n):
        coords.append((f"x{i + 1}", 0, 1, [int(j == i) for j in range(size)]))
    for i in range(m):
        coords.append((f"th{i + 1}", 1, 1, [int(j == n + i) for j in range(size)]))
    roots = []
    for i in range(n - 1):
        roots.append([int(j == i) - int(j == i + 1) for j in range(size)])
    for i in range(m - 1):
        roots.append([int(j == n + i) - int(j == n + i + 1) for j in range(size)])
    return AlgebraSpec(
        id=f"vect({n}|{m})", tier="small", coordinates=coords,
        negative={-1: [f"D[{c[0]}]" for c in coords]}, g0="normalizer", rank=size,
        raising={"roots": roots}, lowering={"roots": [[-x for x in r] for r in roots]},
        expected={"depth": 1, "gminus": [n, m]}, family="vect",
        notes="all polynomial vector fields; g_0 = gl(n|m)")


def _contact_spec(dim: int) -> AlgebraSpec:
    if dim < 3 or dim % 2 == 0:
        raise UnknownAlgebra(f"k({dim}) needs an odd dimension >= 3")
    n = (dim - 1) // 2
    coords = [("t", 0, 2, [0] * n)]
    for i in range(n):
        coords.append((f"p{i + 1}", 0, 1, [int(j == i) for j in range(n)]))
    for i in range(n):
        coords.append((f"q{i + 1}", 0, 1, [-int(j == i) for j in range(n)]))
    neg1 = [f"D[p{i + 1}] - 1/2*q{i + 1}*D[t]" for i in range(n)]
    neg1 += [f"D[q{i + 1}] + 1/2*p{i + 1}*D[t]" for i in range(n)]
    return AlgebraSpec(
        id=f"k({dim})", tier="small", coordinates=coords,
        negative={-1: neg1, -2: ["D[t]"]}, g0="normalizer", rank=n,
        expected={"depth": 2, "gminus": [dim, 0]}, family="contact",
        notes="contact fields on C^{2n+1}; g_0 = csp(2n)")


def _engel_spec() -> AlgebraSpec:
    coords = [("x", 0, 1), ("y", 0, 1), ("z", 0, 2), ("w", 0, 3)]
    return AlgebraSpec(
        id="engel", tier="small", coordinates=coords,
        negative={-1: ["D[x]", "D[y] + x*D[z] + 1/2*x^2*D[w]"], -2: ["D[z] + x*D[w]"], -3: ["D[w]"]},
        g0="normalizer", rank=0, expected={"depth": 3, "gminus": [4, 0]}, family="engel",
        notes="Engel distribution spanned by d_x and d_y + x d_z + x^2/2 d_w")


def _on_spec(n: int) -> AlgebraSpec:
    if n < 2:
        raise UnknownAlgebra("on_structure(n) needs n >= 2")
    # x_{2i-1} +- i x_{2i} diagonalize o(n); use real skew generators and no weights.
    coords = [(f"x{i + 1}", 0, 1) for i in range(n)]
    g0 = []
    for i in range(n):
        for j in range(i + 1, n):
            g0.append(f"x{i + 1}*D[x{j + 1}] - x{j + 1}*D[x{i + 1}]")
    return AlgebraSpec(
        id=f"on_structure({n})", tier="small", coordinates=coords,
        negative={-1: [f"D[x{i + 1}]" for i in range(n)]}, g0=g0, rank=0,
        expected={"depth": 1, "gminus": [n, 0], "g0": [n * (n - 1) // 2, 0]}, family="on",
        notes="Riemannian structure: g_0 = o(n), prolong stops at g_0")


def get_spec(algebra_id: str) -> AlgebraSpec:
    key = normalize_id(algebra_id)
    table = _alias_table()
    if key in table:
        return _entries()[table[key]]
    m = _VECT.match(key)
    if m:
        return _vect_spec(int(m.group(1)), int(m.group(2) or 0))
    m = _K.match(key)
    if m:
        return _contact_spec(int(m.group(1)))
    if key == "engel":
        return _engel_spec()
    m = _ON.match(key)
    if m:
        return _on_spec(int(m.group(1)))
    raise UnknownAlgebra(algebra_id)


CLASSICAL_EXAMPLES = ("vect(2|0)", "vect(1|1)", "k(3)", "k(5)", "engel", "on_structure(3)")


def list_algebras() -> List[dict]:
    """Catalog entries with metadata; classical families appear via examples."""
    out = []
    for sid in list(_entries()) + list(CLASSICAL_EXAMPLES):
        spec = get_spec(sid)
        row = {"id": spec.id, "tier": spec.tier, "depth": spec.depth, "stub": spec.stub}
        if "gminus" in spec.expected:
            row["dim_gminus"] = tuple(spec.expected["gminus"])
        if "g0" in spec.expected:
            row["dim_g0"] = tuple(spec.expected["g0"])
        out.append(row)
    return out


# ---------------------------------------------------------------------------
# building


def _fields(cs, exprs: Sequence[str]) -> List[VectorField]:
    return [parse_field(cs, e) for e in exprs]


def _check_expected(spec: AlgebraSpec, alg: GradedAlgebra) -> None:
    exp = spec.expected
    if "gminus" in exp and alg.dim_minus() != tuple(exp["gminus"]):
        raise ProlongError(f"{spec.id}: dim g_- is {alg.dim_minus()}, expected {tuple(exp['gminus'])}")
    if "g0" in exp and alg.dim(0) != tuple(exp["g0"]):
        raise ProlongError(f"{spec.id}: dim g_0 is {alg.dim(0)}, expected {tuple(exp['g0'])}")
    if "depth" in exp and alg.depth != int(exp["depth"]):
        raise ProlongError(f"{spec.id}: depth is {alg.depth}, expected {exp['depth']}")


def _info(spec: AlgebraSpec) -> dict:
    return {"id": spec.id, "rank": spec.rank}


def _explicit_nonpositive(spec: AlgebraSpec, extra_gradings=()) -> GradedAlgebra:
    cs = spec.coordinate_system(extra_gradings)
    neg = {k: _fields(cs, v) for k, v in spec.negative.items()}
    g0 = None if spec.g0 == "normalizer" else _fields(cs, spec.g0)
    alg = nonpositive_algebra(spec.id, cs, neg, g0, info=_info(spec))
    if not alg.generated_by_minus_one():
        raise ProlongError(f"{spec.id}: g_- is not generated by g_-1")
    return alg


def _explicit_prolong(spec: AlgebraSpec, top: int, extra_gradings=()) -> GradedAlgebra:
    base = _explicit_nonpositive(spec, extra_gradings)
    if spec.positive:
        cs = base.cs
        given = {k: _fields(cs, v) for k, v in spec.positive.items() if k <= max(top, 0)}
        if given:
            return partial_prolong(base, given, top)
    return prolong(base, top)


def _regrade_prolong(spec: AlgebraSpec, top: int) -> GradedAlgebra:
    rg = spec.regrade
    base_spec = get_spec(rg["base"])
    grads = [tuple(int(x) for x in g) for g in rg.get("base_gradings", [])]
    store: Dict[int, GradedAlgebra] = {}

    def base_fn(D: int) -> GradedAlgebra:
        if D not in store:
            store[D] = _build(base_spec, D, grads)
        return store[D]

    weights = [tuple(parse_rational(str(x)) for x in w) for w in rg["weights"]] if rg.get("weights") else None
    exp = spec.expected.get("gminus")
    alg = regrade(base_fn, spec.id, [int(d) for d in rg["degrees"]], top, info=_info(spec),
                  expected_minus=tuple(exp) if exp else None, weights=weights)
    if not alg.generated_by_minus_one():
        raise ProlongError(f"{spec.id}: g_- is not generated by g_-1")
    return alg


def _build(spec: AlgebraSpec, top: int, extra_gradings=()) -> GradedAlgebra:
    if spec.stub:
        raise CatalogStub(f"{spec.id} is a catalog stub: {spec.notes}")
    if spec.regrade:
        alg = _regrade_prolong(spec, top)
    else:
        alg = _explicit_prolong(spec, top, extra_gradings)
    _check_expected(spec, alg)
    return alg


def build_algebra(algebra_id: str) -> GradedAlgebra:
    """The nonpositive part g_-d + ... + g_0."""
    spec = get_spec(algebra_id)
    return _build(spec, 0).truncate(0)


def _cache_path(cache_dir: str, spec: AlgebraSpec, top: int) -> str:
    tag = hashlib.sha256(repr((CATALOG_VERSION, spec)).encode()).hexdigest()[:16]
    safe = re.sub(r"[^A-Za-z0-9]+", "_", spec.id).strip("_")
    return os.path.join(cache_dir, f"{safe}-top{top}-{tag}.json")


def prolonged(algebra_id: str, top: int, cache_dir: Optional[str] = None) -> GradedAlgebra:
    """The algebra known in degrees -d..top, optionally cached as JSON."""
    spec = get_spec(algebra_id)
    if cache_dir:
        path = _cache_path(cache_dir, spec, top)
        if os.path.exists(path):
            with open(path, encoding="utf-8") as fh:
                return GradedAlgebra.from_json(fh.read())
    alg = _build(spec, top)
    if cache_dir:
        os.makedirs(cache_dir, exist_ok=True)
        tmp = path + ".tmp"
        with open(tmp, "w", encoding="utf-8") as fh:
            fh.write(alg.to_json())
        os.replace(tmp, path)
    return alg


# ---------------------------------------------------------------------------
# Cartan data


def _root_fields(g: GradedAlgebra, data: dict) -> List[VectorField]:
    from .repmod import root_vectors

    out = []
    if data.get("roots"):
        out += root_vectors(g, [tuple(parse_rational(str(x)) for x in r) for r in data["roots"]], g.cs.rank)
    for e in data.get("fields", []):
        X = parse_field(g.cs, e)
        if not g.comp(0).contains(X):
            raise ProlongError(f"{g.name}: raising/lowering field {e} is not in g_0")
        out.append(X)
    return out


def raising_ops(g: GradedAlgebra, spec: Optional[AlgebraSpec] = None) -> List[VectorField]:
    spec = spec or get_spec(g.name)
    return _root_fields(g, spec.raising)


def lowering_ops(g: GradedAlgebra, spec: Optional[AlgebraSpec] = None) -> List[VectorField]:
    spec = spec or get_spec(g.name)
    return _root_fields(g, spec.lowering)


def cartan_fields(g: GradedAlgebra) -> List[VectorField]:
    """Coordinate-diagonal fields realizing the weight functionals."""
    cs = g.cs
    out = []
    for k in range(cs.rank):
        out.append(VectorField(cs, {(cs.var(i), i): cs.weights[i][k] for i in range(cs.size) if cs.weights[i][k]}))
    return out


def check_cartan(g: GradedAlgebra, modulo: Sequence[Sequence[object]] = ()) -> None:
    """Every weight functional must be realized by an element of g_0.

    Functionals are only needed up to the span of the ``modulo`` directions,
    which covers gl(n)-weights when g_0 contains just sl(n).
    """
    cs = g.cs
    Hs = cartan_fields(g)
    extra = []
    for m in modulo:
        m = [parse_rational(str(x)) for x in m]
        terms: Dict = {}
        for k, H in enumerate(Hs):
            for t, c in H.terms.items():
                terms[t] = terms.get(t, Q(0)) + m[k] * c
        extra.append(VectorField(cs, {t: c for t, c in terms.items() if c}))
    span = Component(cs, 0, list(g.comp(0).basis) + [X for X in extra if X.terms]) if extra else g.comp(0)
    for k, H in enumerate(Hs):
        if H.terms and not span.contains(H):
            raise ProlongError(f"{g.name}: weight functional {k} is not realized in g_0")


# ---------------------------------------------------------------------------
# coefficient subalgebras


def subalgebra_coefficients(algebra_id: str, h_spec: Dict[int, Sequence[str]], top: Optional[int] = None,
                            g: Optional[GradedAlgebra] = None) -> GradedAlgebra:
    """Graded subalgebra h with h_k = g_k for k <= 0 and prescribed h_k for k > 0.

    Components not listed are zero.  The result is usable as the coefficient
    module of the cohomology engine.
    """
    given = {int(k): v for k, v in h_spec.items()}
    top = top if top is not None else max([0] + list(given))
    if g is None:
        g = prolonged(algebra_id, max(top, 0))
    cs = g.cs
    comps = {k: c for k, c in g.components.items() if k <= 0}
    for k in range(1, top + 1):
        fields = [f if isinstance(f, VectorField) else parse_field(cs, f) for f in given.get(k, [])]
        comp = Component(cs, k, block_homogenize(cs, fields, f"h_{k}")) if fields else Component(cs, k)
        if k <= g.top:
            for X in comp.basis:
                if not g.comp(k).contains(X):
                    raise ProlongError(f"h_{k} element {X} is not in the prolong")
        comps[k] = comp
    h = GradedAlgebra(f"{g.name}[h]", cs, comps, g.depth, dict(g.info))
    try:
        h.check_closure()
    except ProlongError as exc:
        raise ProlongError(f"coefficient subalgebra is not closed: {exc}") from None
    return h


def projective_subalgebra(n: int) -> Dict[int, List[str]]:
    """h_1 = span of x_i E (E the Euler field) inside vect(n): sl(n+1) = g_- + gl(n) + g_-^*."""
    out = []
    for j in range(n):
        terms = []
        for i in range(n):
            mono = f"x{i + 1}^2" if i == j else f"x{min(i, j) + 1}*x{max(i, j) + 1}"
            terms.append(f"{mono}*D[x{i + 1}]")
        out.append(" + ".join(terms))
    return {1: out}
