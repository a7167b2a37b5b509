"""Shared checks on structure constants and complexes."""

import random
from itertools import product

from nhcurv.exactalg import Q


def _bracket_vec(g, a, kv):
    k, vec = kv
    out = {}
    for j, c in vec.items():
        for n, x in g.bracket(a, (k, j)).items():
            out[n] = out.get(n, 0) + c * x
    return {n: x for n, x in out.items() if x}


def jacobi_failures(g, samples=None, seed=0):
    """Triples of basis elements violating super Jacobi, computed from structure constants only.

    [a,[b,c]] = [[a,b],c] + (-1)^{p(a)p(b)} [b,[a,c]]
    """
    elems = [(k, i) for k in g.degrees() for i in range(g.dim(k)[0] + g.dim(k)[1])]
    triples = [t for t in product(elems, repeat=3)
               if max(t[0][0] + t[1][0], t[1][0] + t[2][0], t[0][0] + t[2][0], sum(x[0] for x in t)) <= g.top]
    if samples is not None and len(triples) > samples:
        triples = random.Random(seed).sample(triples, samples)
    bad = []
    for a, b, c in triples:
        bc = (b[0] + c[0], g.bracket(b, c))
        ab = (a[0] + b[0], g.bracket(a, b))
        ac = (a[0] + c[0], g.bracket(a, c))
        lhs = _bracket_vec(g, a, bc)
        # [[a,b],c] = -(-1)^{p([a,b]) p(c)} [c,[a,b]]
        pab = (g.parity(*a) + g.parity(*b)) % 2
        s1 = -1 if pab * g.parity(*c) else 1
        t1 = {n: -s1 * x for n, x in _bracket_vec(g, c, ab).items()}
        s2 = -1 if g.parity(*a) * g.parity(*b) else 1
        t2 = _bracket_vec(g, b, ac)
        rhs = dict(t1)
        for n, x in t2.items():
            rhs[n] = rhs.get(n, 0) + s2 * x
        rhs = {n: x for n, x in rhs.items() if x}
        if {n: Q(x) for n, x in lhs.items()} != {n: Q(x) for n, x in rhs.items()}:
            bad.append((a, b, c))
    return bad


def d_squared_failures(cx, q, t):
    """Columns of d_{q+1} d_q that do not vanish, in internal degree t."""
    bad = []
    cols = cx.differential_columns(q, t)
    nxt = cx.differential_matrix(q + 1, t)
    for n, col in enumerate(cols):
        if nxt.apply(col):
            bad.append(n)
    return bad


# algebra and largest N with dim g_{<=N} <= 6, over every catalog or
# classical entry with dim g_- <= 4
ORACLE_CASES = [
    ("vect(1|0)", 4), ("vect(2|0)", 0), ("vect(1|1)", 0), ("vect(1|2)", -1), ("vect(2|1)", -1),
    ("vect(3|0)", -1), ("vect(4|0)", -1), ("vect(2|2)", -1), ("vect(3|1)", -1), ("vect(1|3)", -1),
    ("k(3)", -1), ("engel", -1), ("on_structure(2)", 0), ("on_structure(3)", 0),
]

# (algebra, prolong top) used by the sweeps over assembled differentials
SWEEP_CASES = [("vect(1|1)", 3), ("k(3)", 3), ("engel", 2), ("vle(4|3)", 2), ("kas", 2),
               ("on_structure(3)", 1), ("kas(;3eta)", 2), ("vle(4|3;K)", 1), ("mb(4|5)", 1)]


def oracle_pair(name, n):
    """(engine, oracle) dims of H^0, H^1, H^2 summed over degrees, coefficients g_{<=n}."""
    from ce_oracle import dense_from_fields
    from nhcurv.catalog import prolonged
    from nhcurv.cohomology import CEComplex, FieldModule, cohomology

    g = prolonged(name, max(n, 0)).truncate(n)
    gm = [X for k in range(-g.depth, 0) for X in g.comp(k).basis]
    mf = [X for k in g.degrees() for X in g.comp(k).basis]
    assert len(gm) <= 4 and len(mf) <= 6
    oracle = dense_from_fields(gm, [X.parity for X in gm], mf, [X.parity for X in mf],
                               lambda X, Y: X.bracket(Y).terms)
    M = FieldModule(g, finite=True)
    cx = CEComplex(g, M)
    engine, expected = [], []
    for q in (0, 1, 2):
        ev = od = 0
        for t in range(-3 * g.depth, g.top + 3 * g.depth + 1):
            h = cohomology(q, t, g, M=M, cx=cx, with_representatives=False)
            ev += h.dim_even
            od += h.dim_odd
        engine.append((ev, od))
        expected.append(oracle.cohomology_dims(q))
    return engine, expected


def complex_audit(g, q, t):
    """Failures of d d = 0, block-vs-full rank and rank-nullity at C^q_t."""
    from nhcurv.cohomology import CEComplex, cohomology
    from nhcurv.exactalg import rank, span_rank

    out = []
    cx = CEComplex(g)
    if q < 2 or g.top >= t - q:
        if d_squared_failures(cx, q, t):
            out.append(f"{g.name} d d != 0 at q={q} t={t}")
    n = len(cx.basis(q, t))
    r_full = rank(cx.differential_matrix(q, t))
    blocks = cx.blocks(q, t)
    r_blocks = sum(span_rank(cx.differential_columns(q, t, m)) for m in blocks.values())
    if r_blocks != r_full:
        out.append(f"{g.name} block rank {r_blocks} != full rank {r_full} at q={q} t={t}")
    if g.top >= t - max(q - 1, 0):
        h = cohomology(q, t, g, cx=cx)
        if h.closed_dim + r_full != n:
            out.append(f"{g.name} rank-nullity fails at q={q} t={t}")
        if h.dim_even + h.dim_odd != h.closed_dim - h.exact_dim:
            out.append(f"{g.name} dim H != closed - exact at q={q} t={t}")
    return out
