"""Graded Lie superalgebras of vector fields and their Cartan prolongs.

A component ``g_k`` is stored as the reduced row echelon basis of its span
inside the space of degree ``k`` vector fields, the columns being the
monomial terms ``(monomial, direction)``.  Two consequences are used all
over the package: bases are canonical, and the coordinates of an element of
``g_k`` are simply its coefficients at the pivot terms.

Computations are split into blocks labelled by the weight of a term (and by
any extra grading functionals carried by the coordinate system).  Components
are direct sums over blocks, so each block is handled independently.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .exactalg import Echelon, Q, SparseMatrix, ZERO, format_rational, kernel_basis, parse_rational
from .superpoly import (
    CoordinateSystem,
    Inhomogeneous,
    Term,
    VectorField,
    _term_key,
    ambient_component,
    ambient_terms,
    bracket_terms,
)

CACHE_VERSION = 1


class ProlongError(RuntimeError):
    """Raised when the nonpositive data is inconsistent."""


class TruncationError(KeyError):
    """A bracket landed in a degree that was not computed."""


# ---------------------------------------------------------------------------
# block labels


def term_block(cs: CoordinateSystem, t: Term):
    """Block label of a term: its weight followed by every extra grading."""
    m, i = t
    lab = []
    if cs.weights:
        w = cs.mono_weight(m)
        lab.extend(a - b for a, b in zip(w, cs.weights[i]))
    for g in cs.gradings:
        lab.append(sum((e * g[j] for j, e in enumerate(m) if e), ZERO) - g[i])
    return tuple(lab)


def split_blocks(cs: CoordinateSystem, X: VectorField) -> Dict[tuple, VectorField]:
    parts: Dict[tuple, Dict[Term, object]] = {}
    for t, c in X.terms.items():
        parts.setdefault(term_block(cs, t), {})[t] = c
    return {b: VectorField(cs, d, _clean=True) for b, d in parts.items()}


def field_block(cs: CoordinateSystem, X: VectorField):
    bs = {term_block(cs, t) for t in X.terms}
    if len(bs) > 1:
        raise Inhomogeneous("field is not block homogeneous")
    return bs.pop() if bs else None


def add_labels(a: tuple, b: tuple) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


# ---------------------------------------------------------------------------
# components


class Component:
    """Canonical basis of one graded piece ``g_k``."""

    def __init__(self, cs: CoordinateSystem, degree: int, fields: Iterable[VectorField] = ()):
        self.cs = cs
        self.degree = degree
        self.echelon = Echelon()
        for X in fields:
            self.echelon.insert(X.terms)
        self._finish()

    @classmethod
    def from_echelon(cls, cs, degree, ech: Echelon) -> "Component":
        obj = cls.__new__(cls)
        obj.cs = cs
        obj.degree = degree
        obj.echelon = ech
        obj._finish()
        return obj

    def _finish(self):
        rows = self.echelon.reduced_rows()
        self.echelon.pivots = rows
        order = sorted(rows, key=lambda t: _term_key(self.cs, t))
        self.pivots: List[Term] = order
        self.index: Dict[Term, int] = {t: n for n, t in enumerate(order)}
        self.basis: List[VectorField] = [VectorField(self.cs, dict(rows[t]), _clean=True) for t in order]
        self.parities: List[int] = [X.parity for X in self.basis]
        self.blocks: List[tuple] = [field_block(self.cs, X) for X in self.basis]

    def __len__(self):
        return len(self.basis)

    @property
    def dim(self) -> Tuple[int, int]:
        odd = sum(self.parities)
        return (len(self.parities) - odd, odd)

    def residual(self, terms: Dict[Term, object]) -> Dict[Term, object]:
        return self.echelon.reduce(terms)

    def contains(self, X) -> bool:
        terms = X.terms if isinstance(X, VectorField) else X
        return not self.echelon.reduce(terms)

    def coords(self, terms: Dict[Term, object], check: bool = True) -> Dict[int, object]:
        """Coordinates of a member; raises ProlongError when it is not a member."""
        out = {}
        for t, c in terms.items():
            n = self.index.get(t)
            if n is not None:
                out[n] = c
        if check:
            back: Dict[Term, object] = {}
            for n, c in out.items():
                for t, x in self.basis[n].terms.items():
                    back[t] = back.get(t, ZERO) + c * x
            diff = {t: back.get(t, ZERO) - terms.get(t, ZERO) for t in set(back) | set(terms)}
            if any(diff.values()):
                raise ProlongError(f"element is not in g_{self.degree}")
        return out


# ---------------------------------------------------------------------------
# graded algebra


class GradedAlgebra:
    """A Z-graded algebra of vector fields known in degrees ``-depth..top``."""

    def __init__(self, name: str, cs: CoordinateSystem, components: Dict[int, Component], depth: int,
                 info: Optional[dict] = None):
        self.name = name
        self.cs = cs
        self.components = dict(sorted(components.items()))
        self.depth = depth
        self.info = dict(info or {})
        self._sc: Dict[tuple, Dict[int, object]] = {}

    # shape ------------------------------------------------------------

    @property
    def top(self) -> int:
        return max(self.components)

    @property
    def bottom(self) -> int:
        return min(self.components)

    def degrees(self) -> List[int]:
        return list(self.components)

    def comp(self, k: int) -> Component:
        c = self.components.get(k)
        if c is None:
            if k < self.bottom:
                return Component(self.cs, k)
            raise TruncationError(k)
        return c

    def has(self, k: int) -> bool:
        return k in self.components or k < self.bottom

    def dim(self, k: int) -> Tuple[int, int]:
        return self.comp(k).dim

    def dim_minus(self) -> Tuple[int, int]:
        e = o = 0
        for k, c in self.components.items():
            if k < 0:
                a, b = c.dim
                e += a
                o += b
        return (e, o)

    def element(self, k: int, i: int) -> VectorField:
        return self.comp(k).basis[i]

    def parity(self, k: int, i: int) -> int:
        return self.comp(k).parities[i]

    def weight(self, k: int, i: int):
        X = self.comp(k).basis[i]
        return X.weight

    def truncate(self, top: int) -> "GradedAlgebra":
        comps = {k: c for k, c in self.components.items() if k <= top}
        return GradedAlgebra(self.name, self.cs, comps, self.depth, self.info)

    # brackets ---------------------------------------------------------

    def bracket_fields(self, X: VectorField, Y: VectorField) -> VectorField:
        return X.bracket(Y)

    def bracket(self, a: Tuple[int, int], b: Tuple[int, int]) -> Dict[int, object]:
        """Structure constants: [e_a, e_b] in coordinates of g_{ka+kb}."""
        key = (a, b)
        hit = self._sc.get(key)
        if hit is not None:
            return hit
        k = a[0] + b[0]
        if k < self.bottom:
            res: Dict[int, object] = {}
            X = self.element(*a)
            Y = self.element(*b)
            if bracket_terms(self.cs, X.terms, Y.terms):
                raise ProlongError(f"bracket below depth is nonzero: {a} {b}")
        else:
            comp = self.comp(k)
            X = self.element(*a)
            Y = self.element(*b)
            res = comp.coords(bracket_terms(self.cs, X.terms, Y.terms), check=True)
        self._sc[key] = res
        return res

    def check_closure(self, degrees: Optional[Sequence[int]] = None) -> None:
        """Verify [g_i, g_j] lies in g_{i+j} for all stored pairs."""
        degs = list(degrees) if degrees is not None else self.degrees()
        for i in degs:
            for j in degs:
                if j < i or not self.has(i + j):
                    continue
                for p in range(len(self.comp(i))):
                    for q in range(len(self.comp(j))):
                        try:
                            self.bracket((i, p), (j, q))
                        except ProlongError as exc:
                            raise ProlongError(
                                f"{self.name}: [g_{i}[{p}], g_{j}[{q}]] not closed: {exc}") from None

    def generated_by_minus_one(self) -> bool:
        """True when iterated brackets of g_-1 span all of g_-."""
        span = {-1: Echelon()}
        for X in self.comp(-1).basis:
            span[-1].insert(X.terms)
        for k in range(2, self.depth + 1):
            ech = Echelon()
            for Y in self.comp(-1).basis:
                for row in list(span[-(k - 1)].pivots.values()):
                    ech.insert(bracket_terms(self.cs, Y.terms, row))
            span[-k] = ech
        return all(len(span[-k]) == len(self.comp(-k)) for k in range(1, self.depth + 1))

    # serialization ----------------------------------------------------

    def to_json(self) -> str:
        cs = self.cs
        data = {
            "version": CACHE_VERSION,
            "name": self.name,
            "depth": self.depth,
            "coordinates": [[n, p, d] for n, p, d in zip(cs.names, cs.parities, cs.degrees)],
            "weights": [[format_rational(x) for x in w] for w in cs.weights],
            "gradings": [[format_rational(x) for x in g] for g in cs.gradings],
            "info": self.info,
            "components": {
                str(k): [
                    [[list(m), i, format_rational(c)] for (m, i), c in sorted(X.terms.items(), key=lambda kv: _term_key(cs, kv[0]))]
                    for X in comp.basis
                ]
                for k, comp in self.components.items()
            },
        }
        return json.dumps(data, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "GradedAlgebra":
        data = json.loads(text)
        if data.get("version") != CACHE_VERSION:
            raise ProlongError("cache version mismatch")
        cs = CoordinateSystem.build(
            [tuple(c) for c in data["coordinates"]],
            weights=[[parse_rational(x) for x in w] for w in data["weights"]],
            gradings=[[parse_rational(x) for x in g] for g in data["gradings"]],
        )
        comps = {}
        for k, rows in data["components"].items():
            fields = [VectorField(cs, {(tuple(m), i): parse_rational(c) for m, i, c in row}) for row in rows]
            comps[int(k)] = Component(cs, int(k), fields)
        return cls(data["name"], cs, comps, data["depth"], data.get("info"))


NonpositiveAlgebra = GradedAlgebra


# ---------------------------------------------------------------------------
# construction of the nonpositive part


def block_homogenize(cs: CoordinateSystem, fields: Sequence[VectorField], what: str = "basis") -> List[VectorField]:
    """Split fields into block-homogeneous parts, insisting the span is unchanged."""
    whole = Echelon()
    for X in fields:
        whole.insert(X.terms)
    parts = Echelon()
    for X in fields:
        for P in split_blocks(cs, X).values():
            parts.insert(P.terms)
    if len(parts) != len(whole):
        raise ProlongError(f"{what} is not spanned by block homogeneous elements")
    return [VectorField(cs, dict(r), _clean=True) for r in parts.reduced_rows().values()]


def nonpositive_algebra(name: str, cs: CoordinateSystem, negative: Dict[int, Sequence[VectorField]],
                        g0: Optional[Sequence[VectorField]] = None, info: Optional[dict] = None,
                        check: bool = True) -> GradedAlgebra:
    """Assemble (g_-, g_0).  ``g0=None`` means: take the full normalizer of g_-."""
    depth = -min(negative)
    comps: Dict[int, Component] = {}
    for k in range(-depth, 0):
        fields = list(negative.get(k, ()))
        for X in fields:
            if not X.is_zero() and X.degree != k:
                raise ProlongError(f"{name}: generator {X} has degree {X.degree}, expected {k}")
        comps[k] = Component(cs, k, block_homogenize(cs, fields, f"{name} g_{k}"))
    alg = GradedAlgebra(name, cs, comps, depth, info)
    if check:
        alg.check_closure()
    if g0 is None:
        comps[0] = prolong_step(alg, 0)
    else:
        for X in g0:
            if not X.is_zero() and X.degree != 0:
                raise ProlongError(f"{name}: g_0 element {X} has degree {X.degree}")
        comps[0] = Component(cs, 0, block_homogenize(cs, g0, f"{name} g_0"))
    alg = GradedAlgebra(name, cs, comps, depth, info)
    if check:
        alg.check_closure()
    return alg


# ---------------------------------------------------------------------------
# prolongation


def _condition_columns(alg: GradedAlgebra, terms: List[Term], k: int, conds: List[Tuple[int, VectorField]]):
    """Columns of the map X -> (residual of [X, Y] modulo g_{k+deg Y})_Y over the given terms."""
    cs = alg.cs
    rowkey: Dict[tuple, int] = {}
    cols: List[Dict[int, object]] = []
    for t in terms:
        col: Dict[int, object] = {}
        single = {t: Q(1)}
        for n, (dy, Y) in enumerate(conds):
            target = k + dy
            br = bracket_terms(cs, single, Y.terms)
            if not br:
                continue
            res = alg.comp(target).residual(br) if target >= alg.bottom else br
            for s, c in res.items():
                r = rowkey.setdefault((n, s), len(rowkey))
                col[r] = c
        cols.append(col)
    return rowkey, cols


def prolong_step(alg: GradedAlgebra, k: int, all_negative: bool = True) -> Component:
    """g_k = fields X of degree k with [X, g_j] inside g_{k+j} for every j < 0."""
    cs = alg.cs
    if k < 0:
        raise ValueError("prolong_step needs k >= 0")
    for j in range(k - alg.depth, k):
        if j >= alg.bottom and j not in alg.components:
            raise ProlongError(f"g_{j} missing before computing g_{k}")
    degs = range(-alg.depth, 0) if all_negative else [-1]
    conds = [(j, X) for j in degs for X in alg.comp(j).basis]
    blocks: Dict[tuple, List[Term]] = {}
    for t in ambient_terms(cs, k):
        blocks.setdefault(term_block(cs, t), []).append(t)
    ech = Echelon()
    for lab in sorted(blocks):
        terms = blocks[lab]
        rowkey, cols = _condition_columns(alg, terms, k, conds)
        mat = SparseMatrix.from_columns(len(rowkey), cols)
        for v in kernel_basis(mat):
            ech.insert({terms[i]: c for i, c in v.items()})
    return Component.from_echelon(cs, k, ech)


def prolong(base: GradedAlgebra, dmax: int, all_negative: bool = True) -> GradedAlgebra:
    """Extend ``base`` degree by degree up to ``dmax``; stored components are kept."""
    if dmax < 0:
        raise ValueError("dmax must be non-negative")
    comps = dict(base.components)
    alg = GradedAlgebra(base.name, base.cs, comps, base.depth, base.info)
    for k in range(1, dmax + 1):
        if k in comps:
            continue
        comps[k] = prolong_step(alg, k, all_negative)
        alg = GradedAlgebra(base.name, base.cs, comps, base.depth, base.info)
    return alg


def partial_prolong(base: GradedAlgebra, given: Dict[int, Sequence[VectorField]], dmax: int) -> GradedAlgebra:
    """Prolong with some positive components prescribed (e.g. a chosen g_1)."""
    comps = dict(base.components)
    for k, fields in sorted(given.items()):
        comps[k] = Component(base.cs, k, block_homogenize(base.cs, list(fields), f"{base.name} g_{k}"))
    alg = GradedAlgebra(base.name, base.cs, comps, base.depth, base.info)
    for k in sorted(given):
        check = prolong_step(GradedAlgebra(base.name, base.cs, {j: c for j, c in comps.items() if j < k},
                                           base.depth, base.info), k)
        for X in alg.comp(k).basis:
            if not check.contains(X):
                raise ProlongError(f"{base.name}: prescribed g_{k} element {X} violates the prolong condition")
    return prolong(alg, dmax)


# ---------------------------------------------------------------------------
# regrading


def regrade(base_fn, name: str, degrees: Sequence[int], top: int, max_old: int = 40,
            info: Optional[dict] = None, expected_minus: Optional[Tuple[int, int]] = None,
            weights=None) -> GradedAlgebra:
    """Regroup a prolong by a new coordinate degree vector.

    ``base_fn(D)`` must return the base algebra prolonged to old degree ``D``.
    New components up to degree ``top`` are assembled from base components;
    old degrees are added until two consecutive old degrees contribute
    nothing in new degrees at most ``top``.
    """
    cs_old = None
    pieces: Dict[int, List[VectorField]] = {}
    empty_run = 0
    D = 0
    base = None
    while True:
        if base is None or D > base.top:
            base = base_fn(max(D, 1) + 2)
            cs_old = base.cs
        if D == 0:
            olds = [k for k in base.degrees() if k <= 0]
        else:
            olds = [D]
        contributed = False
        for k in olds:
            for X in base.comp(k).basis:
                nds = {cs_old.mono_degree(m, degrees) - degrees[i] for (m, i) in X.terms}
                if len(nds) != 1:
                    raise ProlongError(f"{name}: degree vector does not grade the base algebra")
                nd = nds.pop()
                if nd <= top:
                    pieces.setdefault(nd, []).append(X)
                    contributed = True
        if D > 0:
            empty_run = 0 if contributed else empty_run + 1
            if empty_run >= 2:
                break
        D += 1
        if D > max_old:
            raise ProlongError(f"{name}: regrading did not stabilize by old degree {max_old}")
    cs_new = cs_old.with_degrees(degrees)
    if weights is not None:
        cs_new = cs_new.with_weights(weights)
    comps: Dict[int, Component] = {}
    # each base basis element must split into pieces that stay in the span
    for nd, fields in pieces.items():
        flds = [VectorField(cs_new, X.terms, _clean=True) for X in fields]
        comps[nd] = Component(cs_new, nd, block_homogenize(cs_new, flds, f"{name} g'_{nd}"))
    low = min(comps)
    for k in range(low, top + 1):
        comps.setdefault(k, Component(cs_new, k))
    alg = GradedAlgebra(name, cs_new, comps, -low, info)
    if expected_minus is not None and alg.dim_minus() != tuple(expected_minus):
        raise ProlongError(f"{name}: regraded dim g_- is {alg.dim_minus()}, expected {tuple(expected_minus)}")
    return alg
