"""Chevalley-Eilenberg cohomology H^i(g_-; M) graded by internal degree.

Cochains are written with ghosts: one generator ``c^a`` for every basis
vector ``a`` of g_-, of parity ``p(a) + 1``.  A q-cochain is an element of
(polynomials of ghost degree q) (x) M, so odd arguments may repeat and even
ones may not.  The differential is

    Q = c^a rho_a  -  1/2 (-1)^{p(a)(p(b)+1)} f_ab^c c^a c^b d/dc^c,

which squares to zero for any super Lie algebra g_- and module M.

The internal degree of ``c^{a_1}..c^{a_q} (x) m`` is ``deg m - sum deg a_i``,
its weight is ``w(m) - sum w(a_i)`` and its reported parity is
``p(m) + sum p(a_i)``.  The differential preserves all three.
"""

from __future__ import annotations

import multiprocessing as mp
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Dict, List, Optional, Sequence, Tuple

from .exactalg import Echelon, Q, SparseMatrix, ZERO, format_rational, kernel_basis, rank
from .prolong import GradedAlgebra, ProlongError, TruncationError, term_block
from .superpoly import CoordinateSystem, bracket_terms, mono_mul, mono_partial

Index = Tuple[int, int]


class WindowError(TruncationError):
    pass


# ---------------------------------------------------------------------------
# coefficient modules


class FieldModule:
    """Graded module over g_- spanned by vector fields, acting by bracket.

    ``gminus`` supplies the negative part, ``coeff`` the coefficient algebra
    (the prolong itself, or a subalgebra with the same nonpositive part).
    """

    def __init__(self, gminus: GradedAlgebra, coeff: Optional[GradedAlgebra] = None, name: Optional[str] = None,
                 finite: bool = False):
        # finite=True: components above the stored top are zero (a genuine
        # finite-dimensional module such as g_{<=T}), not merely unknown
        self.finite = finite
        self.g = gminus
        self.m = coeff if coeff is not None else gminus
        self.name = name or self.m.name
        self.cs = self.m.cs
        self._act: Dict[tuple, Dict[Index, object]] = {}
        self._labels: Dict[Index, tuple] = {}

    # shape
    @property
    def bottom(self) -> int:
        return self.m.bottom

    @property
    def top(self) -> int:
        return self.m.top

    def size(self, k: int) -> int:
        if k < self.m.bottom:
            return 0
        if k > self.m.top:
            if self.finite:
                return 0
            raise WindowError(k)
        return len(self.m.comp(k))

    def parity(self, m: Index) -> int:
        return self.m.comp(m[0]).parities[m[1]]

    def label(self, m: Index) -> tuple:
        lab = self._labels.get(m)
        if lab is None:
            X = self.m.element(*m)
            lab = term_block(self.cs, next(iter(X.terms)))
            self._labels[m] = lab
        return lab

    def element(self, m: Index):
        return self.m.element(*m)

    def act(self, a: Index, m: Index) -> Dict[Index, object]:
        key = (a, m)
        hit = self._act.get(key)
        if hit is not None:
            return hit
        k = a[0] + m[0]
        X = self.g.element(*a)
        Y = self.m.element(*m)
        br = bracket_terms(self.cs, X.terms, Y.terms)
        if k < self.m.bottom:
            if br:
                raise ProlongError(f"action leaves the coefficient module: {a} on {m}")
            res = {}
        else:
            res = {(k, i): c for i, c in self.m.comp(k).coords(br).items()}
        self._act[key] = res
        return res


# ---------------------------------------------------------------------------
# ghosts


class GhostAlgebra:
    """Ghost generators for g_- together with the quadratic part of Q."""

    def __init__(self, g: GradedAlgebra):
        self.g = g
        self.elems: List[Index] = [(k, i) for k in range(-g.depth, 0) for i in range(len(g.comp(k)))]
        self.pos = {e: n for n, e in enumerate(self.elems)}
        self.par = [g.parity(*e) for e in self.elems]
        self.deg = [-e[0] for e in self.elems]
        self.cs = CoordinateSystem(
            tuple(f"c{n}" for n in range(len(self.elems))),
            tuple((p + 1) & 1 for p in self.par),
            tuple(self.deg),
        )
        cs = g.cs
        self.labels = []
        for e in self.elems:
            X = g.element(*e)
            lab = term_block(cs, next(iter(X.terms)))
            self.labels.append(tuple(-x for x in lab))
        self.omega = self._omega()

    def _omega(self) -> List[Dict[tuple, object]]:
        n = len(self.elems)
        om: List[Dict[tuple, object]] = [dict() for _ in range(n)]
        half = Q(1, 2)
        for a in range(n):
            for b in range(n):
                ea, eb = self.elems[a], self.elems[b]
                if ea[0] + eb[0] < -self.g.depth:
                    continue
                f = self.g.bracket(ea, eb)
                if not f:
                    continue
                s = -1 if (self.par[a] & (self.par[b] + 1)) & 1 else 1
                r = mono_mul(self.cs, self.cs.var(a), self.cs.var(b))
                if r is None:
                    continue
                sg, mono = r
                for i, c in f.items():
                    cidx = self.pos[(ea[0] + eb[0], i)]
                    d = om[cidx]
                    d[mono] = d.get(mono, ZERO) - half * s * sg * c
        return [{m: c for m, c in d.items() if c} for d in om]

    def mono_parity(self, P) -> int:
        return self.cs.mono_parity(P)

    def mono_degree(self, P) -> int:
        return self.cs.mono_degree(P)

    def monomials(self, q: int) -> List[tuple]:
        """Ghost monomials with q factors, in lexicographic order of argument lists."""
        n = len(self.elems)
        out = []
        for args in combinations_with_replacement(range(n), q):
            bad = False
            for x, y in zip(args, args[1:]):
                if x == y and not self.par[x]:
                    bad = True
                    break
            if bad:
                continue
            m = [0] * n
            for x in args:
                m[x] += 1
            out.append(tuple(m))
        return out

    @staticmethod
    def args_of(P) -> Tuple[int, ...]:
        out = []
        for i, e in enumerate(P):
            out.extend([i] * e)
        return tuple(out)


# ---------------------------------------------------------------------------
# cochains


@dataclass(frozen=True)
class CochainBasisElement:
    q: int
    arguments: Tuple[int, ...]
    target: Index
    degree: int
    parity: int
    label: tuple


@dataclass
class Cochain:
    q: int
    degree: int
    coords: Dict[CochainBasisElement, object]


class CEComplex:
    """All cochain spaces and differentials of g_- with coefficients in M."""

    def __init__(self, g: GradedAlgebra, M: Optional[FieldModule] = None):
        self.g = g
        self.M = M if M is not None else FieldModule(g)
        self.ghosts = GhostAlgebra(g)
        self._bases: Dict[tuple, List[CochainBasisElement]] = {}
        self._index: Dict[tuple, Dict[tuple, int]] = {}
        self._mono_cache: Dict[tuple, List[tuple]] = {}

    def _ghost_monos(self, q):
        hit = self._mono_cache.get(q)
        if hit is None:
            hit = self.ghosts.monomials(q)
            self._mono_cache[q] = hit
        return hit

    def basis(self, q: int, t: int) -> List[CochainBasisElement]:
        key = (q, t)
        hit = self._bases.get(key)
        if hit is not None:
            return hit
        gh = self.ghosts
        M = self.M
        out = []
        for P in self._ghost_monos(q):
            k = t - gh.mono_degree(P)
            n = M.size(k)
            if not n:
                continue
            args = gh.args_of(P)
            gpar = sum(gh.par[a] for a in args)
            glab = None
            for a in args:
                glab = gh.labels[a] if glab is None else tuple(x + y for x, y in zip(glab, gh.labels[a]))
            for i in range(n):
                m = (k, i)
                lab = M.label(m)
                if glab is not None:
                    lab = tuple(x + y for x, y in zip(lab, glab))
                out.append(CochainBasisElement(q, args, m, t, (gpar + M.parity(m)) & 1, lab))
        self._bases[key] = out
        self._index[key] = {(e.arguments, e.target): n for n, e in enumerate(out)}
        return out

    def index(self, q: int, t: int) -> Dict[tuple, int]:
        self.basis(q, t)
        return self._index[(q, t)]

    def apply_d(self, e: CochainBasisElement) -> Dict[Tuple[Tuple[int, ...], Index], object]:
        """Q applied to one basis element, keyed by (arguments, target)."""
        gh = self.ghosts
        cs = gh.cs
        P = [0] * len(gh.elems)
        for a in e.arguments:
            P[a] += 1
        P = tuple(P)
        pP = cs.mono_parity(P)
        out: Dict[tuple, object] = {}

        def add(mono, target, c):
            key = (gh.args_of(mono), target)
            v = out.get(key, ZERO) + c
            if v:
                out[key] = v
            else:
                out.pop(key, None)

        # quadratic part: sum_c Omega_c * d/dc^c P
        for cidx in set(e.arguments):
            r = mono_partial(cs, P, cidx)
            if r is None or not gh.omega[cidx]:
                continue
            k, Pd = r
            for om, oc in gh.omega[cidx].items():
                rr = mono_mul(cs, om, Pd)
                if rr is None:
                    continue
                s, mono = rr
                add(mono, e.target, s * k * oc)
        # action part: sum_a (-1)^{p(a) p(P)} c^a P (x) rho_a(m)
        for a, ea in enumerate(gh.elems):
            acted = self.M.act(ea, e.target)
            if not acted:
                continue
            rr = mono_mul(cs, cs.var(a), P)
            if rr is None:
                continue
            s, mono = rr
            if gh.par[a] & pP:
                s = -s
            for tgt, c in acted.items():
                add(mono, tgt, s * c)
        return out

    def differential_columns(self, q: int, t: int, sources: Optional[Sequence[int]] = None) -> List[Dict[int, object]]:
        src = self.basis(q, t)
        idx = self.index(q + 1, t)
        cols = []
        for n in (range(len(src)) if sources is None else sources):
            col = {}
            for key, c in self.apply_d(src[n]).items():
                r = idx.get(key)
                if r is None:
                    raise ProlongError(f"differential left the cochain window at {key}")
                col[r] = c
            cols.append(col)
        return cols

    def differential_matrix(self, q: int, t: int) -> SparseMatrix:
        rows = len(self.basis(q + 1, t))
        return SparseMatrix.from_columns(rows, self.differential_columns(q, t))

    def blocks(self, q: int, t: int) -> Dict[tuple, List[int]]:
        out: Dict[tuple, List[int]] = {}
        for n, e in enumerate(self.basis(q, t)):
            out.setdefault((e.label, e.parity), []).append(n)
        return out


def cochain_basis(q: int, t: int, g: GradedAlgebra, M: Optional[FieldModule] = None) -> List[CochainBasisElement]:
    return CEComplex(g, M).basis(q, t)


def differential_matrix(q: int, t: int, g: GradedAlgebra, M: Optional[FieldModule] = None) -> SparseMatrix:
    return CEComplex(g, M).differential_matrix(q, t)


# ---------------------------------------------------------------------------
# cohomology


@dataclass
class BlockData:
    label: tuple
    parity: int
    closed: List[Dict[int, object]]      # kernel basis of d_i on the block
    exact: Echelon                       # image of d_{i-1} inside the block
    cochains: List[int]                  # indices in C^i
    prev: List[int]                      # indices in C^{i-1}
    prev_cols: List[Dict[int, object]]   # d_{i-1} columns, keyed by C^i index

    @property
    def closed_dim(self):
        return len(self.closed)

    @property
    def exact_dim(self):
        return len(self.exact)

    @property
    def dim(self):
        return len(self.closed) - len(self.exact)


@dataclass
class CohomologySpace:
    i: int
    t: int
    dim_even: int
    dim_odd: int
    closed_dim: int
    exact_dim: int
    representatives: List[Cochain]
    blocks: Dict[tuple, BlockData] = field(default_factory=dict)
    complex: Optional[CEComplex] = None

    @property
    def dims(self):
        return (self.dim_even, self.dim_odd)


def _block_kernel(cx: CEComplex, q: int, t: int, members: List[int]) -> List[Dict[int, object]]:
    """Kernel of d_q restricted to the listed C^q indices, in C^q indices."""
    if not members:
        return []
    cols = cx.differential_columns(q, t, members)
    rowmap: Dict[int, int] = {}
    local = []
    for col in cols:
        local.append({rowmap.setdefault(r, len(rowmap)): c for r, c in col.items()})
    mat = SparseMatrix.from_columns(len(rowmap), local)
    return [{members[j]: c for j, c in v.items()} for v in kernel_basis(mat)]


_POOL_STATE: Optional[tuple] = None


def _pool_kernel(key):
    cx, q, t, cur = _POOL_STATE
    return _block_kernel(cx, q, t, cur[key])


def _kernels(cx: CEComplex, q: int, t: int, cur: Dict[tuple, List[int]], keys: List[tuple],
             threads: int) -> List[List[Dict[int, object]]]:
    """Block kernels, serially or on a forked worker pool; results come back in key order."""
    global _POOL_STATE
    if threads <= 1 or len(keys) < 2 or "fork" not in mp.get_all_start_methods():
        return [_block_kernel(cx, q, t, cur[k]) for k in keys]
    _POOL_STATE = (cx, q, t, cur)
    try:
        with mp.get_context("fork").Pool(threads) as pool:
            return pool.map(_pool_kernel, keys, chunksize=1)
    finally:
        _POOL_STATE = None


def cohomology(i: int, t: int, g: GradedAlgebra, M: Optional[FieldModule] = None,
               cx: Optional[CEComplex] = None, with_representatives: bool = True,
               label_filter=None, threads: int = 1) -> CohomologySpace:
    """H^i in internal degree t, block by block over (weight label, parity).

    With ``threads > 1`` the block kernels are computed by forked workers;
    the result does not depend on the worker count.
    """
    if i < 0:
        raise ValueError("cohomology order must be non-negative")
    cx = cx or CEComplex(g, M)
    cur = cx.blocks(i, t)
    prev = cx.blocks(i - 1, t) if i > 0 else {}
    if not cx.M.finite and cx.M.top < t - max(i - 1, 0):
        raise WindowError(t - max(i - 1, 0))
    cx.basis(i + 1, t)
    even = odd = closed_total = exact_total = 0
    reps: List[Cochain] = []
    blocks: Dict[tuple, BlockData] = {}
    basis_i = cx.basis(i, t)
    keys = [k for k in sorted(cur, key=_block_sort_key) if label_filter is None or label_filter(k)]
    kernels = _kernels(cx, i, t, cur, keys, threads)
    for key, closed in zip(keys, kernels):
        members = cur[key]
        ech = Echelon()
        pmembers = prev.get(key, [])
        pcols = cx.differential_columns(i - 1, t, pmembers) if pmembers else []
        for col in pcols:
            ech.insert(col)
        bd = BlockData(key[0], key[1], closed, ech, members, pmembers, pcols)
        blocks[key] = bd
        closed_total += bd.closed_dim
        exact_total += bd.exact_dim
        if key[1]:
            odd += bd.dim
        else:
            even += bd.dim
        if with_representatives and bd.dim:
            for v in quotient_representatives(closed, ech):
                reps.append(Cochain(i, t, {basis_i[n]: c for n, c in v.items()}))
    return CohomologySpace(i, t, even, odd, closed_total, exact_total, reps, blocks, cx)


def _block_sort_key(key):
    return (tuple(key[0]), key[1])


def quotient_representatives(closed: List[Dict[int, object]], exact: Echelon) -> List[Dict[int, object]]:
    """Canonical complement of the exact space inside the closed space."""
    ech = Echelon()
    ech.pivots = dict(exact.pivots)
    reps = []
    for v in closed:
        r = ech.reduce(v)
        if r:
            ech.insert(r)
            reps.append(r)
    # canonical form: fully reduce each representative against the others' pivots
    return reps


def degree_range(g: GradedAlgebra) -> Tuple[int, int]:
    """(lowest possible degree of H^2, default scan top)."""
    d = g.depth
    tmax = {1: 3, 2: 2}.get(d, 1)
    return 2 - d, tmax


def centralizer(g: GradedAlgebra, t: int, M: Optional[FieldModule] = None) -> Tuple[int, int]:
    """dim (even|odd) of {v in M_t : [x, v] = 0 for x in g_-}, computed on fields."""
    M = M or FieldModule(g)
    n = M.size(t)
    if not n:
        return (0, 0)
    cs = M.cs
    rows: Dict[tuple, int] = {}
    cols = []
    xs = [g.element(*e) for e in GhostAlgebra(g).elems]
    for i in range(n):
        Y = M.element((t, i))
        col = {}
        for a, X in enumerate(xs):
            for term, c in bracket_terms(cs, X.terms, Y.terms).items():
                col[rows.setdefault((a, term), len(rows))] = c
        cols.append(col)
    ker = kernel_basis(SparseMatrix.from_columns(len(rows), cols))
    ev = od = 0
    for v in ker:
        if M.parity((t, next(iter(v)))):
            od += 1
        else:
            ev += 1
    return (ev, od)


def render_cochain(c: Cochain, g: GradedAlgebra, M: FieldModule, names: Optional[Dict[Index, str]] = None) -> str:
    """Text form ``coeff*(target) d[arg] ^ d[arg] + ...`` using field names for arguments."""
    gh = GhostAlgebra(g)
    parts = []
    for e in sorted(c.coords, key=lambda e: (e.arguments, e.target)):
        coef = c.coords[e]
        tgt = str(M.element(e.target))
        args = " ^ ".join(
            f"d[{names.get(gh.elems[a]) if names and gh.elems[a] in names else g.element(*gh.elems[a])}]"
            for a in e.arguments)
        parts.append(f"{format_rational(coef)}*({tgt}) {args}".rstrip())
    return " + ".join(parts) if parts else "0"
