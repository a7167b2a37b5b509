"""Constructions that produce the explicit realizations stored in the catalog.

Nothing here runs when an algebra is built from the catalog; these helpers
generate (and regenerate) the data file.  ``python -m nhcurv.recipes`` prints
the catalog YAML to stdout.
"""

from __future__ import annotations

import sys
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from .exactalg import Echelon, Q, SparseMatrix, kernel_basis
from .prolong import (Component, GradedAlgebra, ProlongError, nonpositive_algebra,
                      partial_prolong, prolong_step)
from .superpoly import (CoordinateSystem, SuperPolynomial, VectorField, linear_field,
                        parse_field, render_field)

Matrix = List[List[object]]


# ---------------------------------------------------------------------------
# vect(0|n) acting on lambda-densities


def _lam_cs(n: int) -> CoordinateSystem:
    return CoordinateSystem.build([(f"th{i + 1}", 1, 1) for i in range(n)])


def _lam_mono(cs, S):
    p = SuperPolynomial.const(cs)
    for i in S:
        p = p * SuperPolynomial.coord(cs, i)
    return p


def _lam_coords(cs, p: SuperPolynomial, basis, dropped=()):
    out = [Q(0)] * len(basis)
    for m, c in p.terms.items():
        S = frozenset(i for i in range(cs.size) if m[i])
        for n, T in enumerate(basis):
            if frozenset(T) == S:
                out[n] += c / _lam_mono(cs, T).terms[m]
                break
        else:
            if S not in dropped:
                raise ProlongError(f"monomial {sorted(S)} leaves the module")
    return out


def divergence(cs, D: VectorField) -> SuperPolynomial:
    """Berezinian divergence of a field on C^{0|n}: sum (-1)^{p(f_i)} d_i f_i."""
    out = SuperPolynomial.const(cs).scale(0)
    for (m, j), c in D.terms.items():
        g = SuperPolynomial(cs, {m: c})
        out = out + g.partial(j).scale(-1 if cs.mono_parity(m) else 1)
    return out


def vect0n_fields(n: int) -> List[VectorField]:
    cs = _lam_cs(n)
    out = []
    for r in range(n + 1):
        for T in combinations(range(n), r):
            for j in range(n):
                out.append(VectorField.from_summands(cs, [(_lam_mono(cs, T), j)]))
    return out


def density_matrices(n: int, lam, basis: Sequence[Tuple[int, ...]], dropped=()) -> List[Tuple[Matrix, int]]:
    """Matrices of vect(0|n) on lambda-densities f vol^lam in the given monomial basis.

    ``dropped`` lists monomials (as frozensets) that are set to zero, which
    realizes quotients such as Lambda(n)/C.
    """
    cs = _lam_cs(n)
    lam = Q(lam)
    dropped = {frozenset(s) for s in dropped}
    out = []
    for D in vect0n_fields(n):
        dv = divergence(cs, D)
        A = [[Q(0)] * len(basis) for _ in basis]
        for c, T in enumerate(basis):
            v = _lam_mono(cs, T)
            col = _lam_coords(cs, D.apply(v) + (dv * v).scale(lam), basis, dropped)
            for b in range(len(basis)):
                A[b][c] = col[b]
        out.append((A, D.parity))
    return out


def identity(n: int) -> Matrix:
    return [[Q(int(i == j)) for j in range(n)] for i in range(n)]


# ---------------------------------------------------------------------------
# invariant forms and depth-2 negative parts


def invariant_forms(mats: Sequence[Tuple[Matrix, int]], par: Sequence[int]) -> List[Matrix]:
    """Bilinear forms w with w(Ax, y) + (-1)^{p(A)p(x)} w(x, Ay) = 0 for all given A."""
    n = len(par)
    rows = []
    for A, pA in mats:
        for x in range(n):
            for y in range(n):
                row: Dict[int, object] = {}
                s = -1 if (pA * par[x]) & 1 else 1
                for b in range(n):
                    if A[b][x]:
                        row[b * n + y] = row.get(b * n + y, 0) + A[b][x]
                    if A[b][y]:
                        row[x * n + b] = row.get(x * n + b, 0) + s * A[b][y]
                row = {k: Q(v) for k, v in row.items() if v}
                if row:
                    rows.append(row)
    ker = kernel_basis(SparseMatrix.from_rows(n * n, rows))
    return [[[k.get(a * n + b, Q(0)) for b in range(n)] for a in range(n)] for k in ker]


def two_step_negative(cs: CoordinateSystem, low: Sequence[int], high: Sequence[int],
                      bracket: Dict[Tuple[int, int], Dict[int, object]]) -> Dict[int, List[VectorField]]:
    """g_-1 and g_-2 with prescribed [X_a, X_b] = sum_m bracket[a, b][m] d_high[m].

    ``low`` indexes coordinates dual to g_-1, ``high`` those dual to g_-2.
    For a < b the structure constant is planted into X_b as y_a d_m, so
    [X_a, X_b] = d_a(coefficient) and no other term contributes.
    """
    neg1 = []
    for pos_b, b in enumerate(low):
        X = VectorField.partial_field(cs, b)
        extra: Dict = {}
        for pos_a, a in enumerate(low[:pos_b]):
            for m, c in bracket.get((pos_a, pos_b), {}).items():
                if c:
                    key = (cs.var(a), high[m])
                    extra[key] = extra.get(key, 0) + Q(c)
        neg1.append(X + VectorField(cs, extra))
    return {-1: neg1, -2: [VectorField.partial_field(cs, h) for h in high]}


def action_matrix(alg: GradedAlgebra, Z: VectorField, neg1: Sequence[VectorField]) -> Matrix:
    """Matrix of ad Z on the ordered g_-1 basis, read off from the d_coordinate leads."""
    cs = alg.cs
    lead = []
    for X in neg1:
        ks = [i for (m, i), c in X.terms.items() if m == cs.one()]
        if len(ks) != 1:
            raise ProlongError("g_-1 basis element lacks a unique constant lead")
        lead.append(ks[0])
    n = len(neg1)
    A = [[Q(0)] * n for _ in range(n)]
    for c, X in enumerate(neg1):
        T = Z.bracket(X)
        alg.comp(-1).coords(T.terms)
        for b, i in enumerate(lead):
            A[b][c] = T.terms.get((cs.one(), i), Q(0))
    return A


def lift_matrices(alg: GradedAlgebra, neg1: Sequence[VectorField], mats: Sequence[Matrix]) -> List[VectorField]:
    """For each matrix A find Z in the stored g_0 with ad Z|g_-1 = A."""
    der = alg.comp(0).basis
    n = len(neg1)
    cols = []
    for Z in der:
        A = action_matrix(alg, Z, neg1)
        cols.append({c * n + b: A[b][c] for c in range(n) for b in range(n) if A[b][c]})
    out = []
    for A in mats:
        target = {c * n + b: Q(A[b][c]) for c in range(n) for b in range(n) if A[b][c]}
        ker = kernel_basis(SparseMatrix.from_columns(n * n, cols + [target]))
        sol = [k for k in ker if k.get(len(der))]
        if not sol:
            raise ProlongError("matrix is not induced by any element of g_0")
        k = sol[0]
        t = k[len(der)]
        Z = VectorField(cs=alg.cs)
        for z, c in sorted(k.items()):
            if z < len(der):
                Z = Z + der[z].scale(-c / t)
        out.append(Z)
    return out


def generated_module(seed: Sequence[VectorField], acting: Sequence[VectorField]) -> List[VectorField]:
    """Span of iterated brackets of ``acting`` applied to ``seed``."""
    E = Echelon()
    frontier = [X for X in seed if E.insert(X.terms)]
    while frontier:
        nxt = []
        for X in frontier:
            for Y in acting:
                Z = Y.bracket(X)
                if E.insert(Z.terms):
                    nxt.append(Z)
        frontier = nxt
    cs = seed[0].cs
    return [VectorField(cs, dict(r)) for r in E.reduced_rows().values()]


def annihilated(fields: Sequence[VectorField], ops: Sequence[VectorField]) -> List[VectorField]:
    """Combinations of ``fields`` killed by every op."""
    rows: Dict[tuple, int] = {}
    cols = []
    for X in fields:
        col = {}
        for n, E in enumerate(ops):
            for t, c in E.bracket(X).terms.items():
                col[rows.setdefault((n, t), len(rows))] = c
        cols.append(col)
    ker = kernel_basis(SparseMatrix.from_columns(len(rows), cols))
    cs = fields[0].cs
    out = []
    for v in ker:
        Z = VectorField(cs)
        for j, c in sorted(v.items()):
            Z = Z + fields[j].scale(c)
        out.append(Z)
    return out


def levi_partner(root_space: Sequence[VectorField], lowering: VectorField) -> VectorField:
    """The element e of a root space that spans an sl(2) with the given f.

    Used when a positive root space of (g_0)_ev is not one-dimensional: with
    h = [e0, f] for any candidate e0 acting nontrivially, e is the unique
    ad h eigenvector in the root space with the eigenvalue of e0.
    """
    cs = lowering.cs
    h = None
    lam = None
    for e0 in root_space:
        h0 = e0.bracket(lowering)
        if h0.is_zero():
            continue
        he = h0.bracket(e0)
        t = next(iter(e0.terms))
        h, lam = h0, he.terms.get(t, Q(0)) / e0.terms[t]
        break
    if h is None or not lam:
        raise ProlongError("no sl(2) partner in the root space")
    rows: Dict[tuple, int] = {}
    cols = []
    for X in root_space:
        col = {}
        Y = h.bracket(X) - X.scale(lam)
        for t, c in Y.terms.items():
            col[rows.setdefault(t, len(rows))] = c
        cols.append(col)
    ker = kernel_basis(SparseMatrix.from_columns(max(len(rows), 1), cols))
    if len(ker) != 1:
        raise ProlongError(f"sl(2) partner is not unique ({len(ker)} candidates)")
    Z = VectorField(cs)
    for j, c in sorted(ker[0].items()):
        Z = Z + root_space[j].scale(c)
    return Z


def even_root_space(g: GradedAlgebra, root) -> List[VectorField]:
    root = tuple(Q(x) for x in root)
    return [X for X in g.comp(0).basis if X.parity == 0 and X.weight == root]


# ---------------------------------------------------------------------------
# catalog entries


def _w(seq) -> List[str]:
    return [str(Q(x)) for x in seq]


def _coords(cs: CoordinateSystem) -> List[list]:
    return [[cs.names[i], cs.parities[i], cs.degrees[i], _w(cs.weights[i])] for i in range(cs.size)]


def _render(cs, fields: Sequence[VectorField]) -> List[str]:
    return [render_field(cs, X.terms) for X in fields]


def _perm_sign(p) -> int:
    s = 1
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                s = -s
    return s


def vle43_system():
    """vle(4|3): g_-1 = Pi(Lambda(3)/C), g_0 = c(vect(0|3))."""
    basis = [(0,), (1,), (2,), (1, 2), (2, 0), (0, 1), (0, 1, 2)]
    cs = CoordinateSystem.build(
        [("y", 0, 1), ("u1", 0, 1), ("u2", 0, 1), ("u3", 0, 1), ("xi1", 1, 1), ("xi2", 1, 1), ("xi3", 1, 1)],
        weights=[(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)])
    dirs = [1, 2, 3, 4, 5, 6, 0]
    mats = [A for A, _ in density_matrices(3, 0, basis, dropped=[()])] + [identity(7)]
    g0 = [linear_field(cs, dirs, A) for A in mats]
    return cs, g0


def entry_vle43() -> dict:
    cs, g0 = vle43_system()
    return {
        "id": "vle(4|3)", "tier": "small", "rank": 3, "coordinates": _coords(cs),
        "negative": {-1: [f"D[{n}]" for n in cs.names]}, "g0": _render(cs, g0),
        "raising": {"roots": [[1, -1, 0], [0, 1, -1], [1, 0, -1]]},
        "lowering": {"roots": [[-1, 1, 0], [0, -1, 1]]},
        "expected": {"depth": 1, "gminus": [4, 3]},
        "notes": "g_-1 = Pi(Lambda(3)/C) with g_0 = c(vect(0|3)) acting on it",
    }


def entry_vle43_K() -> dict:
    return {
        "id": "vle(4|3;K)", "aliases": ["vle(4|3; K)"], "tier": "small", "rank": 4,
        "regrade": {"base": "vle(4|3)", "degrees": [0, 2, 2, 2, 1, 1, 1],
                    "weights": [[2, 0, 0, 0], [-2, 0, 1, 1], [-2, 1, 0, 1], [-2, 1, 1, 0],
                                [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]},
        "raising": {"roots": [[2, 0, 0, 0], [0, 1, -1, 0], [0, 0, 1, -1]]},
        "lowering": {"roots": [[-2, 0, 0, 0], [0, -1, 1, 0], [0, 0, -1, 1]]},
        "expected": {"depth": 2, "gminus": [3, 6]},
        "notes": "regrading of vle(4|3) with deg u_i = 2, deg xi_i = 1, deg y = 0",
    }


def entry_vle43_1() -> dict:
    # the fourth weight coordinate refines the torus and is not displayed
    return {
        "id": "vle(4|3;1)", "aliases": ["vle(4|3; 1)"], "tier": "small", "rank": 4,
        "weight_display": [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]],
        "regrade": {"base": "vle(4|3)", "degrees": [0, 2, 1, 1, 0, 1, 1],
                    "weights": [[-2, 0, 0, -1], [0, 1, 1, 1], [0, 0, 1, 1], [0, 1, 0, 1],
                                [-1, 0, 0, 0], [-1, 1, 0, 0], [-1, 0, 1, 0]]},
        "raising": {"roots": [[0, 1, -1, 0]], "fields": ["D[y]"]},
        "lowering": {"roots": [[-2, 0, 0, -1], [0, -1, 1, 0]]},
        "expected": {"depth": 2, "gminus": [5, 4]},
        "notes": "regrading of vle(4|3) with deg u1 = 2, deg u2 = deg u3 = deg xi2 = deg xi3 = 1",
    }


def vas44_system():
    h = Q(1, 2)
    W = [tuple(Q(int(i == j)) - h for j in range(4)) for i in range(4)]
    W += [tuple(Q(-int(i == j)) for j in range(4)) for i in range(4)]
    cs = CoordinateSystem.build([(f"u{i}", 0, 1) for i in range(1, 5)] + [(f"xi{i}", 1, 1) for i in range(1, 5)],
                                weights=W)
    mats = []
    for i in range(4):
        for j in range(4):
            A = [[Q(0)] * 8 for _ in range(8)]
            A[j][i] -= 1
            A[4 + i][4 + j] += 1
            if i == j:
                for k in range(4):
                    A[4 + k][4 + k] -= h
            mats.append(A)
    for i in range(4):
        for j in range(4):
            A = [[Q(0)] * 8 for _ in range(8)]
            A[4 + i][j] -= 1
            for k in range(4):
                if len({i, j, k}) == 3:
                    l = ({0, 1, 2, 3} - {i, j, k}).pop()
                    A[l][4 + k] += _perm_sign((j, i, k, l))
            mats.append(A)
    return cs, [linear_field(cs, list(range(8)), A) for A in mats]


def entry_vas44() -> dict:
    cs, g0 = vas44_system()
    return {
        "id": "vas(4|4)", "tier": "medium", "rank": 4, "coordinates": _coords(cs),
        "negative": {-1: [f"D[{n}]" for n in cs.names]}, "g0": _render(cs, g0),
        "raising": {"roots": [[1, -1, 0, 0], [0, 1, -1, 0], [0, 0, 1, -1]]},
        "lowering": {"roots": [[-1, 1, 0, 0], [0, -1, 1, 0], [0, 0, -1, 1]]},
        "expected": {"depth": 1, "gminus": [4, 4], "g0": [16, 16]},
        "notes": "g_-1 = Vol(0|4) twisted, g_0 = as(4) realized by 32 linear fields",
    }


def kas_system():
    W = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, 0, 0), (0, -1, 0), (0, 0, -1)]
    cs = CoordinateSystem.build([("t", 0, 2)] + [(f"xi{i}", 1, 1) for i in (1, 2, 3)]
                                + [(f"eta{i}", 1, 1) for i in (1, 2, 3)], weights=W)
    neg = {-1: [parse_field(cs, f"D[xi{i}] + 1/2*eta{i}*D[t]") for i in (1, 2, 3)]
           + [parse_field(cs, f"D[eta{i}] + 1/2*xi{i}*D[t]") for i in (1, 2, 3)],
           -2: [parse_field(cs, "D[t]")]}
    a = nonpositive_algebra("kas", cs, neg)
    return cs, neg, a


def kas_positive(a: GradedAlgebra) -> List[VectorField]:
    """g_1 of kas: Lambda^3 of the xi-space plus the module generated by a highest vector of weight e_1."""
    from .repmod import root_vectors

    g0 = a.comp(0).basis
    k1 = prolong_step(a, 1)
    one = (Q(1), Q(1), Q(1))
    L3 = generated_module([X for X in k1.basis if X.weight == one], g0)
    e1 = (Q(1), Q(0), Q(0))
    cand = [X for X in k1.basis if X.weight == e1]
    R = root_vectors(a, [(1, -1, 0), (0, 1, -1), (0, 1, 1)], 3)
    V = generated_module(annihilated(cand, R), g0)
    return L3 + V


def entry_kas() -> dict:
    cs, neg, a = kas_system()
    return {
        "id": "kas", "tier": "small", "rank": 3, "coordinates": _coords(cs),
        "negative": {k: _render(cs, v) for k, v in neg.items()}, "g0": "normalizer",
        "positive": {1: _render(cs, kas_positive(a))},
        "raising": {"roots": [[1, -1, 0], [0, 1, -1], [0, 1, 1]]},
        "lowering": {"roots": [[-1, 1, 0], [0, -1, 1], [0, -1, -1]]},
        "expected": {"depth": 2, "gminus": [1, 6]},
        "notes": "contact structure on C^{1|6}; g_1 is prescribed, the prolong is generated from it",
    }


def entry_kas_variant(tag: str, degrees: List[int], depth: int, gminus: List[int], roots: List[list]) -> dict:
    # roots: simple roots of o(6) cap g_0, weights stay o(6)-weights
    return {
        "id": f"kas(;{tag})", "aliases": [f"kas(; {tag})", f"kas;{tag}"], "tier": "small", "rank": 3,
        "regrade": {"base": "kas", "degrees": degrees},
        "raising": {"roots": roots}, "lowering": {"roots": [[-x for x in r] for r in roots]},
        "expected": {"depth": depth, "gminus": gminus},
        "notes": f"regrading of kas by coordinate degrees {degrees}",
    }


def mb45_system():
    basis = [(0, 1, 2), (0,), (1,), (2,), (), (1, 2), (2, 0), (0, 1)]
    dens = density_matrices(3, Q(1, 2), basis)
    par = [(len(T) + 1) & 1 for T in basis]
    forms = invariant_forms(dens, par)
    if len(forms) != 1:
        raise ProlongError("half-densities carry no unique invariant form")
    W = forms[0]
    wts = [(0, 0), (1, 0), (-1, 1), (0, -1)]
    wts = wts + [(-a, -b) for a, b in wts] + [(0, 0)]
    cs = CoordinateSystem.build([(f"u{i}", 0, 1) for i in range(4)] + [(f"xi{i}", 1, 1) for i in range(4)]
                                + [("tau", 1, 2)], weights=wts)
    bracket = {(a, b): {0: W[a][b]} for a in range(8) for b in range(a + 1, 8) if W[a][b]}
    neg = two_step_negative(cs, list(range(8)), [8], bracket)
    der = nonpositive_algebra("mb-der", cs, neg)
    g0 = lift_matrices(der, neg[-1], [A for A, _ in dens] + [identity(8)])
    return cs, neg, g0


def entry_mb45() -> dict:
    cs, neg, g0 = mb45_system()
    return {
        "id": "mb(4|5)", "tier": "small", "rank": 2, "coordinates": _coords(cs),
        "negative": {k: _render(cs, v) for k, v in neg.items()}, "g0": _render(cs, g0),
        "raising": {"roots": [[2, -1], [-1, 2], [1, 1]]},
        "lowering": {"roots": [[-2, 1], [1, -2]]},
        "expected": {"depth": 2, "gminus": [4, 5], "g0": [13, 12]},
        "parity_convention": "generating",
        "notes": "g_-1 = half-densities on C^{0|3} with their odd invariant form; g_0 from vect(0|3) plus the grading",
    }


def entry_mb45_K() -> dict:
    return {
        "id": "mb(4|5;K)", "aliases": ["mb(4|5; K)"], "tier": "medium", "rank": 4,
        "regrade": {"base": "mb(4|5)", "degrees": [0, 2, 2, 2, 3, 1, 1, 1, 3],
                    "base_gradings": [[0, 2, 2, 2, 3, 1, 1, 1, 3]],
                    "weights": [[1, -1, -1, -1], [-1, 1, 0, 0], [-1, 0, 1, 0], [-1, 0, 0, 1], [-2, 1, 1, 1],
                                [0, -1, 0, 0], [0, 0, -1, 0], [0, 0, 0, -1], [-1, 0, 0, 0]]},
        "raising": {"roots": [[1, -1, -1, -1], [0, 1, -1, 0], [0, 0, 1, -1], [0, 1, 0, -1]]},
        "lowering": {"roots": [[-1, 1, 1, 1], [0, -1, 1, 0], [0, 0, -1, 1]]},
        "expected": {"depth": 3, "gminus": [3, 8]},
        "parity_convention": "generating",
        "notes": "regrading of mb(4|5) with deg u0 = 0",
    }


def entry_mb45_1() -> dict:
    deg = [0, 2, 1, 1, 2, 0, 1, 1, 2]
    return {
        "id": "mb(4|5;1)", "aliases": ["mb(4|5; 1)"], "tier": "medium", "rank": 2,
        "regrade": {"base": "mb(4|5)", "degrees": deg, "base_gradings": [deg],
                    "weights": [[0, -2], [0, 0], [-1, 0], [1, 0], [0, 1], [0, -1], [1, -1], [-1, -1], [0, -1]]},
        "raising": {"fields": ["-u3*D[u2] + xi2*D[xi3]", "D[u0]"]},
        "lowering": {"fields": ["-u2*D[u3] + xi3*D[xi2]",
                                "tau*D[xi0] - u0^2*D[u0] + u0*xi0*D[xi0] - u0*xi1*D[xi1] - u0*xi2*D[xi2]"
                                " - u0*xi3*D[xi3] - u0*tau*D[tau] - xi1*xi2*D[u3] + xi1*xi3*D[u2]"
                                " - xi2*xi3*D[u1] + 2*xi1*xi2*xi3*D[tau]"]},
        "expected": {"depth": 2, "gminus": [5, 6]},
        "parity_convention": "generating",
        "notes": "regrading of mb(4|5) with deg u0 = deg xi1 = 0",
    }


def ksle96K_system():
    """ksle(9|6;K): g_-2 = id, g_-1 = Pi(Lambda^2 id) with [D_ij, D_kl] = eps_ijklm d_m, g_0 = sl(5)."""
    pairs = list(combinations(range(5), 2))
    h = Q(1, 2)
    W = [tuple(Q(int(i == j)) for j in range(5)) for i in range(5)]
    W += [tuple(h - int(k in p) for k in range(5)) for p in pairs]
    cs = CoordinateSystem.build([(f"x{i + 1}", 0, 2) for i in range(5)]
                                + [(f"xi{i + 1}{j + 1}", 1, 1) for i, j in pairs], weights=W)
    bracket = {}
    for a, (i, j) in enumerate(pairs):
        for b, (k, l) in enumerate(pairs):
            if a < b and len({i, j, k, l}) == 4:
                m = ({0, 1, 2, 3, 4} - {i, j, k, l}).pop()
                bracket[(a, b)] = {m: _perm_sign((i, j, k, l, m))}
    neg = two_step_negative(cs, list(range(5, 15)), list(range(5)), bracket)
    norm = nonpositive_algebra("ksle-norm", cs, neg)
    ev = [X for X in norm.comp(0).basis if X.parity == 0]
    E = Echelon()
    g0 = []
    for X in ev:
        for Y in ev:
            Z = X.bracket(Y)
            if E.insert(Z.terms):
                g0.append(Z)
    return cs, neg, g0


def entry_ksle96_K() -> dict:
    cs, neg, g0 = ksle96K_system()
    simple = [[int(j == i) - int(j == i + 1) for j in range(5)] for i in range(4)]
    return {
        "id": "ksle(9|6;K)", "aliases": ["ksle(9|6; K)"], "tier": "small", "rank": 5, "coordinates": _coords(cs),
        "negative": {k: _render(cs, v) for k, v in neg.items()}, "g0": _render(cs, g0),
        "raising": {"roots": simple}, "lowering": {"roots": [[-x for x in r] for r in simple]},
        "expected": {"depth": 2, "gminus": [5, 10], "g0": [24, 0]},
        "weight_modulo": [["1/2"] * 5],
        "notes": "gl(5) weights are defined modulo the trace since g_0 = sl(5)",
    }


def ksle_degrees(a: Sequence[int]) -> List[int]:
    """Coordinate degrees of a grading of ksle: deg x_i = a_i, deg xi_ij = sum(a)/2 - a_i - a_j."""
    S = sum(a)
    if S % 2:
        raise ProlongError("the x-degrees must have an even sum")
    return list(a) + [S // 2 - a[i] - a[j] for i, j in combinations(range(5), 2)]


def ksle_weights(rows: Sequence[Sequence[int]]) -> List[List[str]]:
    """Coordinate weights obtained by applying traceless functionals to the gl(5)-weights."""
    cs, _, _ = ksle96K_system()
    return [_w(sum((Q(m) * x for m, x in zip(r, w)), Q(0)) for r in rows) for w in cs.weights]


def _cartan_rows(n: int) -> List[List[int]]:
    return [[2 if i == j else -1 if abs(i - j) == 1 else 0 for j in range(n)] for i in range(n)]


def _block(rows: List[List[int]], size: int, at: int) -> List[List[int]]:
    return [[0] * at + r + [0] * (size - at - len(r)) for r in rows]


def entry_ksle96() -> dict:
    deg = ksle_degrees([1, 1, 1, 1, 2])
    labels = [[1, -1, 0, 0, 0], [0, 1, -1, 0, 0], [0, 0, 1, -1, 0]]
    roots = _cartan_rows(3)
    return {
        "id": "ksle(9|6)", "tier": "all", "rank": 3,
        "regrade": {"base": "ksle(9|6;K)", "degrees": deg, "base_gradings": [deg], "weights": ksle_weights(labels)},
        "raising": {"roots": roots}, "lowering": {"roots": [[-x for x in r] for r in roots]},
        "expected": {"depth": 2, "gminus": [9, 6], "g0": [26, 24]},
        "notes": "regrading of ksle(9|6;K) with deg x = (1,1,1,1,2); weights are sl(4) Dynkin labels",
    }


def entry_ksle96_2() -> dict:
    deg = ksle_degrees([1, 1, 2, 2, 2])
    labels = [[0, 0, 1, -1, 0], [0, 0, 0, 1, -1], [1, -1, 0, 0, 0]]
    roots = _block(_cartan_rows(2), 3, 0) + _block([[2]], 3, 2)
    return {
        "id": "ksle(9|6;2)", "aliases": ["ksle(9|6; 2)"], "tier": "all", "rank": 3,
        "regrade": {"base": "ksle(9|6;K)", "degrees": deg, "base_gradings": [deg], "weights": ksle_weights(labels)},
        "raising": {"roots": roots}, "lowering": {"roots": [[-x for x in r] for r in roots]},
        "expected": {"depth": 2, "gminus": [11, 9], "g0": [21, 18]},
        "notes": "regrading of ksle(9|6;K) with deg x = (1,1,2,2,2); weights are sl(3)+sl(2) Dynkin labels",
    }


def entry_ksle96_CK() -> dict:
    deg = ksle_degrees([3, 3, 2, 2, 2])
    labels = [[1, -1, 0, 0, 0], [0, 0, 1, -1, 0], [0, 0, 0, 1, -1]]
    roots = _block([[2]], 3, 0) + _block(_cartan_rows(2), 3, 1)
    return {
        "id": "ksle(9|6;CK)", "aliases": ["ksle(9|6; CK)"], "tier": "medium", "rank": 3,
        "regrade": {"base": "ksle(9|6;K)", "degrees": deg, "base_gradings": [deg], "weights": ksle_weights(labels)},
        "raising": {"roots": roots}, "lowering": {"roots": [[-x for x in r] for r in roots]},
        "expected": {"depth": 3, "gminus": [11, 9], "g0": [12, 9]},
        "notes": "regrading of ksle(9|6;K) with deg x = (3,3,2,2,2); weights are sl(2)+sl(3) Dynkin labels",
    }


def entry_ck911() -> dict:
    return {
        "id": "ck(9|11)", "tier": "all", "stub": True,
        "expected": {"depth": 3, "gminus": [9, 11]},
        "notes": "no vector-field realization is available; listed for completeness only",
    }


def entries() -> List[dict]:
    return [
        entry_vle43(), entry_vle43_1(), entry_vle43_K(),
        entry_vas44(),
        entry_kas(),
        entry_kas_variant("1xi", [2, 0, 1, 1, 2, 1, 1], 2, [5, 5], [[0, 1, -1], [0, 1, 1]]),
        entry_kas_variant("3xi", [1, 0, 0, 0, 1, 1, 1], 1, [4, 4], [[1, -1, 0], [0, 1, -1]]),
        entry_kas_variant("3eta", [1, 1, 1, 1, 0, 0, 0], 1, [4, 3], [[1, -1, 0], [0, 1, -1]]),
        entry_mb45(), entry_mb45_1(), entry_mb45_K(),
        entry_ksle96(), entry_ksle96_2(), entry_ksle96_K(), entry_ksle96_CK(),
        entry_ck911(),
    ]


def main(argv: Optional[Sequence[str]] = None) -> int:
    import yaml

    doc = {"version": 1, "algebras": entries()}
    header = "# generated by `python -m nhcurv.recipes`; edit the recipes, not this file\n"
    sys.stdout.write(header + yaml.safe_dump(doc, sort_keys=False, width=200, default_flow_style=None))
    return 0


if __name__ == "__main__":
    sys.exit(main())
