"""g_0-module structure of cohomology: weights, multiplicities, highest vectors.

Even elements ``E`` of g_0 act on cochains by

    L_E (P (x) m) = lambda_E(P) (x) m + P (x) [E, m],
    lambda_E(c^a) = - sum_b A_ab c^b   where [E, e_b] = sum_a A_ab e_a,

which commutes with the differential.  For a weight block we report

* ``mult_closed``: closed cochains of that weight killed by every raising
  operator,
* ``mult_exact``: exact cochains of that weight killed by every raising
  operator,

and the highest vectors of cohomology, i.e. closed cochains sent into exact
ones by every raising operator, modulo exact cochains.  The dimension of the
module generated by the highest vectors of one (weight, parity) is found by
applying lowering operators inside closed/exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .cohomology import CEComplex, Cochain, CohomologySpace, quotient_representatives
from .exactalg import Echelon, SparseMatrix, ZERO, kernel_basis
from .prolong import GradedAlgebra, ProlongError, field_block
from .superpoly import VectorField, bracket_terms, mono_mul, mono_partial


class CartanError(ProlongError):
    pass


# ---------------------------------------------------------------------------
# action of g_0 on cochains


class CochainAction:
    """Even g_0 element acting on the cochains of a complex."""

    def __init__(self, cx: CEComplex, E: VectorField):
        if E.parity:
            raise ValueError("only even operators are supported")
        self.cx = cx
        self.E = E
        cs = cx.M.cs
        gh = cx.ghosts
        self.shift = field_block(cs, E) or tuple(ZERO for _ in range(len(cx.M.label((cx.M.bottom, 0)))))
        # lambda_E on ghosts
        self.lam: List[Dict[tuple, object]] = []
        g = cx.g
        for a, ea in enumerate(gh.elems):
            self.lam.append({})
        for b, eb in enumerate(gh.elems):
            Y = g.element(*eb)
            br = bracket_terms(cs, E.terms, Y.terms)
            if not br:
                continue
            coords = g.comp(eb[0]).coords(br)
            for i, c in coords.items():
                a = gh.pos[(eb[0], i)]
                # contribution -A_ab c^b to lambda(c^a)
                d = self.lam[a]
                mono = gh.cs.var(b)
                d[mono] = d.get(mono, ZERO) - c
        self._tgt: Dict[tuple, Dict[tuple, object]] = {}

    def _act_target(self, m):
        hit = self._tgt.get(m)
        if hit is None:
            M = self.cx.M
            Y = M.element(m)
            br = bracket_terms(M.cs, self.E.terms, Y.terms)
            hit = {(m[0], i): c for i, c in M.m.comp(m[0]).coords(br).items()} if br else {}
            self._tgt[m] = hit
        return hit

    def apply_element(self, e) -> Dict[tuple, object]:
        gh = self.cx.ghosts
        cs = gh.cs
        P = [0] * len(gh.elems)
        for a in e.arguments:
            P[a] += 1
        P = tuple(P)
        out: Dict[tuple, object] = {}

        def add(key, c):
            v = out.get(key, ZERO) + c
            if v:
                out[key] = v
            else:
                out.pop(key, None)

        for a in set(e.arguments):
            if not self.lam[a]:
                continue
            k, Pd = mono_partial(cs, P, a)
            for mono, c in self.lam[a].items():
                r = mono_mul(cs, mono, Pd)
                if r is None:
                    continue
                s, mm = r
                add((gh.args_of(mm), e.target), s * k * c)
        for tgt, c in self._act_target(e.target).items():
            add((e.arguments, tgt), c)
        return out

    def apply(self, q: int, t: int, vec: Dict[int, object]) -> Dict[int, object]:
        """Apply to a cochain given in C^q_t indices."""
        basis = self.cx.basis(q, t)
        idx = self.cx.index(q, t)
        out: Dict[int, object] = {}
        for n, c in vec.items():
            for key, x in self.apply_element(basis[n]).items():
                r = idx.get(key)
                if r is None:
                    raise ProlongError(f"g_0 action left the cochain window at {key}")
                v = out.get(r, ZERO) + c * x
                if v:
                    out[r] = v
                else:
                    out.pop(r, None)
        return out


def _stack_kernel(columns_by_source: List[List[Dict[int, object]]], sources: List[int]) -> List[Dict[int, object]]:
    """Kernel of the map whose column for source n is the concatenation of the given columns."""
    rowmap: Dict[tuple, int] = {}
    cols = []
    for n in range(len(sources)):
        col = {}
        for part, blocks in enumerate(columns_by_source):
            for r, c in blocks[n].items():
                col[rowmap.setdefault((part, r), len(rowmap))] = c
        cols.append(col)
    mat = SparseMatrix.from_columns(len(rowmap), cols)
    return [{sources[j]: c for j, c in v.items()} for v in kernel_basis(mat)]


# ---------------------------------------------------------------------------
# reports


@dataclass
class WeightBlock:
    weight: tuple
    parity: int
    dim_even: int
    dim_odd: int
    mult_closed: int
    mult_exact: int
    highest: bool
    representatives: List[Dict[int, object]] = field(default_factory=list)
    highest_count: int = 0
    module_dim: int = 0
    closed_dim: int = 0
    exact_dim: int = 0
    representative_text: str = ""

    @property
    def dims(self):
        return (self.dim_even, self.dim_odd)


@dataclass
class ModuleReport:
    algebra: str
    i: int
    t: int
    dim_even: int
    dim_odd: int
    blocks: List[WeightBlock]
    rows: List[WeightBlock]
    reachability: Dict[int, List[int]] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)

    @property
    def dims(self):
        return (self.dim_even, self.dim_odd)


def weight_of_label(label: tuple, rank: int) -> tuple:
    return tuple(label[:rank])


def weight_decompose(space: CohomologySpace, rank: int) -> List[WeightBlock]:
    """Weight blocks of a cohomology space (no g_0 data needed)."""
    out = []
    for (label, par), bd in sorted(space.blocks.items(), key=lambda kv: (kv[0][0], kv[0][1])):
        if not bd.dim:
            continue
        out.append(WeightBlock(weight_of_label(label, rank), par, 0 if par else bd.dim, bd.dim if par else 0,
                               bd.closed_dim, bd.exact_dim, True, closed_dim=bd.closed_dim, exact_dim=bd.exact_dim))
    return out


class Analyzer:
    """Highest vectors and generated modules for one cohomology space."""

    def __init__(self, space: CohomologySpace, raising: Sequence[VectorField], lowering: Sequence[VectorField],
                 rank: int):
        self.space = space
        self.cx = space.complex
        self.i = space.i
        self.t = space.t
        self.rank = rank
        self.raise_ops = [CochainAction(self.cx, E) for E in raising]
        self.lower_ops = [CochainAction(self.cx, F) for F in lowering]
        self.blocks = space.blocks
        self._exact_cache: Dict[tuple, Echelon] = {}

    def _shifted(self, key, op):
        label, par = key
        return (tuple(a + b for a, b in zip(label, op.shift)), par)

    def exact_echelon(self, key) -> Echelon:
        bd = self.blocks.get(key)
        if bd is not None:
            return bd.exact
        hit = self._exact_cache.get(key)
        if hit is None:
            hit = Echelon()
            members = self.cx.blocks(self.i - 1, self.t).get(key, []) if self.i > 0 else []
            if members:
                for col in self.cx.differential_columns(self.i - 1, self.t, members):
                    hit.insert(col)
            self._exact_cache[key] = hit
        return hit

    def mults(self, key) -> Tuple[int, int]:
        """(r, s): closed / exact cochains of this block killed by all raising operators."""
        bd = self.blocks[key]
        i, t = self.i, self.t
        members = bd.cochains
        dcols = self.cx.differential_columns(i, t, members)
        parts = [dcols]
        for op in self.raise_ops:
            parts.append([op.apply(i, t, {n: 1}) for n in members])
        r = len(_stack_kernel(parts, members))
        s = 0
        if i > 0 and bd.prev:
            prev = bd.prev
            pd = bd.prev_cols
            ker_d = len(_stack_kernel([pd], prev))
            parts = [[op.apply(i, t, col) for col in pd] for op in self.raise_ops]
            s = (len(_stack_kernel(parts, prev)) if parts else len(prev)) - ker_d
        return r, s

    def highest(self, key) -> List[Dict[int, object]]:
        """Closed cochains sent into exact ones by every raising operator, modulo exact."""
        bd = self.blocks[key]
        if not bd.dim:
            return []
        closed = bd.closed
        if not self.raise_ops:
            return quotient_representatives(closed, bd.exact)
        # coefficients x with sum x_j E(z_j) in B for every E
        parts = []
        for op in self.raise_ops:
            tkey = self._shifted(key, op)
            ex = self.exact_echelon(tkey)
            parts.append([ex.reduce(op.apply(self.i, self.t, z)) for z in closed])
        idx = list(range(len(closed)))
        combos = _stack_kernel(parts, idx)
        vecs = []
        for v in combos:
            acc: Dict[int, object] = {}
            for j, c in v.items():
                for n, x in closed[j].items():
                    acc[n] = acc.get(n, ZERO) + c * x
            vecs.append({n: x for n, x in acc.items() if x})
        return quotient_representatives(vecs, bd.exact)

    def generated_dim(self, key, vectors: List[Dict[int, object]]) -> Tuple[int, Dict[tuple, int]]:
        """Dimension of the span of lowering words applied to vectors, modulo exact cochains."""
        spans: Dict[tuple, Echelon] = {}
        frontier = {key: list(vectors)}
        total = 0
        per_block: Dict[tuple, int] = {}
        while frontier:
            nxt: Dict[tuple, List[Dict[int, object]]] = {}
            for k in sorted(frontier, key=lambda kk: (kk[0], kk[1])):
                vecs = frontier[k]
                ech = spans.get(k)
                if ech is None:
                    ech = Echelon()
                    ech.pivots = dict(self.exact_echelon(k).pivots)
                    spans[k] = ech
                new = []
                for v in vecs:
                    r = ech.reduce(v)
                    if r:
                        ech.insert(r)
                        new.append(r)
                if not new:
                    continue
                total += len(new)
                per_block[k] = per_block.get(k, 0) + len(new)
                for op in self.lower_ops:
                    k2 = self._shifted(k, op)
                    for v in new:
                        w = op.apply(self.i, self.t, v)
                        if w:
                            nxt.setdefault(k2, []).append(w)
            frontier = nxt
        return total, per_block


def module_report(name: str, space: CohomologySpace, raising: Sequence[VectorField],
                  lowering: Sequence[VectorField], rank: int, weight_map=None,
                  with_mults: bool = True) -> ModuleReport:
    """Rows of highest vectors with generated dimensions and r/s multiplicities."""
    an = Analyzer(space, raising, lowering, rank)
    blocks = []
    rows = []
    reached: List[Dict[tuple, int]] = []
    wm = weight_map or (lambda w: w)
    for key in sorted(space.blocks, key=lambda kk: (kk[0], kk[1])):
        bd = space.blocks[key]
        if not bd.dim:
            continue
        label, par = key
        hv = an.highest(key)
        r, s = an.mults(key) if with_mults else (0, 0)
        wb = WeightBlock(wm(weight_of_label(label, rank)), par, 0 if par else bd.dim, bd.dim if par else 0,
                         r, s, bool(hv), representatives=hv, highest_count=len(hv),
                         closed_dim=bd.closed_dim, exact_dim=bd.exact_dim)
        blocks.append(wb)
        if hv:
            dim, per_block = an.generated_dim(key, hv)
            reached.append(per_block)
            wb.module_dim = dim
            row = WeightBlock(wb.weight, par, 0 if par else dim, dim if par else 0, r, s, True,
                              representatives=hv, highest_count=len(hv), module_dim=dim,
                              closed_dim=bd.closed_dim, exact_dim=bd.exact_dim)
            rows.append(row)
    # row n -> indices of the weight blocks its module meets (lowering action mod exact)
    where = {k: n for n, k in enumerate(k for k in sorted(space.blocks, key=lambda kk: (kk[0], kk[1]))
                                        if space.blocks[k].dim)}
    reach = {n: sorted(where[k] for k in per if k in where) for n, per in enumerate(reached)}
    return ModuleReport(name, space.i, space.t, space.dim_even, space.dim_odd, blocks, rows, reach)


def root_vectors(g: GradedAlgebra, roots: Sequence[Sequence[object]], rank: int) -> List[VectorField]:
    """Even g_0 basis elements of the given weights; each root space must be one dimensional."""
    comp = g.comp(0)
    out = []
    for root in roots:
        want = tuple(root)
        hits = [X for X, p in zip(comp.basis, comp.parities)
                if not p and tuple(X.weight[:rank]) == tuple(want)]
        if len(hits) != 1:
            raise CartanError(f"{g.name}: root {list(root)} has {len(hits)} even g_0 vectors")
        out.append(hits[0])
    return out


# ---------------------------------------------------------------------------
# catalog-driven reports


def window_top(i: int, t: int) -> int:
    """Highest g_k needed for H^i in internal degree t."""
    return max(0, t - max(i - 1, 0))


def _flip(wb: WeightBlock) -> WeightBlock:
    wb.parity ^= 1
    wb.dim_even, wb.dim_odd = wb.dim_odd, wb.dim_even
    return wb


def algebra_report(algebra_id: str, i: int, t: int, g: Optional[GradedAlgebra] = None,
                   cx: Optional[CEComplex] = None, threads: int = 1, cache_dir: Optional[str] = None,
                   with_mults: bool = True, render: bool = True) -> ModuleReport:
    """Module report for a catalog algebra, in the tabulated conventions.

    Weights pass through the entry's ``weight_display``; entries using the
    generating-function parity convention get even and odd swapped.
    """
    from .catalog import get_spec, lowering_ops, prolonged, raising_ops

    spec = get_spec(algebra_id)
    if g is None:
        g = prolonged(spec.id, window_top(i, t), cache_dir=cache_dir)
    cx = cx or CEComplex(g)
    from .cohomology import cohomology, render_cochain
    space = cohomology(i, t, g, cx=cx, with_representatives=False, threads=threads)
    rep = module_report(spec.id, space, raising_ops(g, spec), lowering_ops(g, spec), g.cs.rank,
                        weight_map=spec.display_weight, with_mults=with_mults)
    if render:
        basis = cx.basis(i, t)
        for blk, row in zip([b for b in rep.blocks if b.highest], rep.rows):
            v = row.representatives[0]
            row.representative_text = render_cochain(Cochain(i, t, {basis[n]: c for n, c in v.items()}), g, cx.M)
            blk.representative_text = row.representative_text
    if spec.parity_convention == "generating":
        for wb in rep.blocks + rep.rows:
            _flip(wb)
        rep.dim_even, rep.dim_odd = rep.dim_odd, rep.dim_even
        rep.notes.append("parity: generating-function convention (even and odd swapped)")
    return rep
