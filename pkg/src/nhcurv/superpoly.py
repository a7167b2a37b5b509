"""Supercommutative polynomials C[u] (x) Lambda(xi) and polynomial super vector fields.

Monomials are tuples of exponents, one slot per coordinate; odd slots hold 0
or 1.  Odd factors are kept in ascending coordinate order, so every monomial
has a unique representation and the sign bookkeeping lives in
:func:`mono_mul` and :func:`mono_partial`.  Partial derivatives are left
derivatives.

A vector field is a dict ``(monomial, direction) -> coefficient`` meaning
``sum coefficient * monomial * d/dx_direction``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .exactalg import Q, ZERO, format_rational, parse_rational

Mono = Tuple[int, ...]


class CoordinateError(ValueError):
    pass


class Inhomogeneous(ValueError):
    pass


@dataclass(frozen=True)
class CoordinateSystem:
    """Named coordinates with parity, Z-degree and weight vector.

    ``gradings`` carries extra integer-valued coordinate functionals (weights,
    alternative degree vectors) used to split computations into blocks; each
    is a tuple with one entry per coordinate.
    """

    names: Tuple[str, ...]
    parities: Tuple[int, ...]
    degrees: Tuple[int, ...]
    weights: Tuple[Tuple[object, ...], ...] = ()
    gradings: Tuple[Tuple[object, ...], ...] = ()

    def __post_init__(self):
        n = len(self.names)
        if len(set(self.names)) != n:
            raise CoordinateError("coordinate names must be unique")
        if len(self.parities) != n or len(self.degrees) != n:
            raise CoordinateError("parities/degrees length mismatch")
        if any(p not in (0, 1) for p in self.parities):
            raise CoordinateError("parity must be 0 or 1")
        if any(d < 0 for d in self.degrees):
            raise CoordinateError("degrees must be non-negative")
        weights = self.weights or tuple(() for _ in range(n))
        if len(weights) != n or len({len(w) for w in weights}) > 1:
            raise CoordinateError("weight vectors must all have one common length")
        object.__setattr__(self, "weights", tuple(tuple(Q(x) for x in w) for w in weights))
        for g in self.gradings:
            if len(g) != n:
                raise CoordinateError("grading functional has wrong length")
        object.__setattr__(self, "gradings", tuple(tuple(Q(x) for x in g) for g in self.gradings))
        object.__setattr__(self, "_index", {nm: i for i, nm in enumerate(self.names)})
        object.__setattr__(self, "odd", tuple(i for i in range(n) if self.parities[i]))

    @classmethod
    def build(cls, coords: Sequence[Tuple[str, int, int]], weights=None, gradings=()) -> "CoordinateSystem":
        names = tuple(c[0] for c in coords)
        par = tuple(int(c[1]) for c in coords)
        deg = tuple(int(c[2]) for c in coords)
        return cls(names, par, deg, tuple(weights) if weights else (), tuple(gradings))

    @property
    def size(self) -> int:
        return len(self.names)

    @property
    def even_count(self) -> int:
        return self.size - len(self.odd)

    @property
    def odd_count(self) -> int:
        return len(self.odd)

    @property
    def rank(self) -> int:
        return len(self.weights[0]) if self.weights else 0

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise CoordinateError(f"unknown coordinate {name!r}") from None

    def with_gradings(self, gradings) -> "CoordinateSystem":
        return CoordinateSystem(self.names, self.parities, self.degrees, self.weights, tuple(gradings))

    def with_degrees(self, degrees) -> "CoordinateSystem":
        return CoordinateSystem(self.names, self.parities, tuple(degrees), self.weights, self.gradings)

    def with_weights(self, weights) -> "CoordinateSystem":
        return CoordinateSystem(self.names, self.parities, self.degrees, tuple(weights), self.gradings)

    # monomial helpers -------------------------------------------------

    def one(self) -> Mono:
        return (0,) * self.size

    def var(self, i: int) -> Mono:
        m = [0] * self.size
        m[i] = 1
        return tuple(m)

    def mono_parity(self, m: Mono) -> int:
        return sum(m[i] for i in self.odd) & 1

    def mono_degree(self, m: Mono, degrees=None) -> int:
        d = degrees or self.degrees
        return sum(e * d[i] for i, e in enumerate(m) if e)

    def mono_weight(self, m: Mono):
        if not self.weights:
            return ()
        r = self.rank
        out = [ZERO] * r
        for i, e in enumerate(m):
            if e:
                w = self.weights[i]
                for k in range(r):
                    out[k] += e * w[k]
        return tuple(out)


def mono_mul(cs: CoordinateSystem, a: Mono, b: Mono):
    """Product of monomials: (sign, monomial) or None if an odd square appears."""
    sign = 1
    out = list(a)
    count_after = 0  # odd factors of a with index greater than current
    odd = cs.odd
    # walk odd slots from the right, counting a's odd factors to the right
    for i in reversed(odd):
        if b[i]:
            if a[i]:
                return None
            if count_after & 1:
                sign = -sign
        if a[i]:
            count_after += 1
    for i, e in enumerate(b):
        if e:
            out[i] += e
    return sign, tuple(out)


def mono_partial(cs: CoordinateSystem, m: Mono, i: int):
    """Left derivative d/dx_i of a monomial: (coefficient, monomial) or None."""
    e = m[i]
    if not e:
        return None
    out = list(m)
    out[i] = e - 1
    if cs.parities[i]:
        passed = sum(m[j] for j in cs.odd if j < i)
        return (-1 if passed & 1 else 1), tuple(out)
    return e, tuple(out)


def monomials_of_degree(cs: CoordinateSystem, deg: int, degrees=None) -> List[Mono]:
    """All monomials of weighted degree ``deg`` (positive coordinate degrees)."""
    d = degrees or cs.degrees
    if deg < 0:
        return []
    if any(d[i] <= 0 for i in range(cs.size) if not cs.parities[i]):
        raise CoordinateError("monomial enumeration needs positive even degrees")
    n = cs.size
    out: List[Mono] = []
    cur = [0] * n

    def rec(i: int, remaining: int):
        if i == n:
            if remaining == 0:
                out.append(tuple(cur))
            return
        di = d[i]
        if cs.parities[i]:
            choices = (0, 1)
        elif di == 0:
            choices = (0,)
        else:
            choices = range(remaining // di + 1)
        for e in choices:
            if e * di > remaining:
                break
            cur[i] = e
            rec(i + 1, remaining - e * di)
        cur[i] = 0

    rec(0, deg)
    out.sort(key=lambda m: mono_sort_key(cs, m))
    return out


def mono_sort_key(cs: CoordinateSystem, m: Mono):
    # degree-lex, even coordinates before odd ones
    ev = tuple(-m[i] for i in range(cs.size) if not cs.parities[i])
    od = tuple(-m[i] for i in cs.odd)
    return (sum(m), ev, od)


# ---------------------------------------------------------------------------
# polynomials


class SuperPolynomial:
    """Element of C[u] (x) Lambda(xi) with exact rational coefficients."""

    __slots__ = ("cs", "terms")

    def __init__(self, cs: CoordinateSystem, terms: Optional[Dict[Mono, object]] = None):
        self.cs = cs
        self.terms = {m: Q(c) for m, c in (terms or {}).items() if c}

    @classmethod
    def const(cls, cs, c=1) -> "SuperPolynomial":
        return cls(cs, {cs.one(): c})

    @classmethod
    def coord(cls, cs, name) -> "SuperPolynomial":
        i = name if isinstance(name, int) else cs.index(name)
        return cls(cs, {cs.var(i): 1})

    def _check(self, other: "SuperPolynomial"):
        if other.cs is not self.cs and other.cs != self.cs:
            raise CoordinateError("coordinate systems differ")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            nc = out.get(m, ZERO) + c
            if nc:
                out[m] = nc
            else:
                out.pop(m, None)
        return SuperPolynomial(self.cs, out)

    def __neg__(self):
        return SuperPolynomial(self.cs, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, a) -> "SuperPolynomial":
        return SuperPolynomial(self.cs, {m: a * c for m, c in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, SuperPolynomial):
            return self.scale(Q(other))
        self._check(other)
        return SuperPolynomial(self.cs, poly_mul_terms(self.cs, self.terms, other.terms))

    __rmul__ = scale

    def __eq__(self, other):
        return isinstance(other, SuperPolynomial) and self.cs == other.cs and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def partial(self, i) -> "SuperPolynomial":
        if not isinstance(i, int):
            i = self.cs.index(i)
        if not 0 <= i < self.cs.size:
            raise CoordinateError(f"bad coordinate index {i}")
        return SuperPolynomial(self.cs, poly_partial_terms(self.cs, self.terms, i))

    @property
    def parity(self) -> int:
        ps = {self.cs.mono_parity(m) for m in self.terms}
        if len(ps) > 1:
            raise Inhomogeneous("polynomial mixes parities")
        return ps.pop() if ps else 0

    @property
    def degree(self) -> int:
        ds = {self.cs.mono_degree(m) for m in self.terms}
        if len(ds) > 1:
            raise Inhomogeneous("polynomial mixes degrees")
        return ds.pop() if ds else 0

    def __repr__(self):
        return f"SuperPolynomial({render_poly(self.cs, self.terms)})"

    def __str__(self):
        return render_poly(self.cs, self.terms)


def poly_mul_terms(cs, a: Dict[Mono, object], b: Dict[Mono, object]) -> Dict[Mono, object]:
    out: Dict[Mono, object] = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            r = mono_mul(cs, ma, mb)
            if r is None:
                continue
            s, m = r
            nc = out.get(m, ZERO) + (ca * cb if s > 0 else -(ca * cb))
            if nc:
                out[m] = nc
            else:
                out.pop(m, None)
    return out


def poly_partial_terms(cs, a: Dict[Mono, object], i: int) -> Dict[Mono, object]:
    out: Dict[Mono, object] = {}
    for m, c in a.items():
        r = mono_partial(cs, m, i)
        if r is None:
            continue
        k, m2 = r
        nc = out.get(m2, ZERO) + k * c
        if nc:
            out[m2] = nc
        else:
            out.pop(m2, None)
    return out


def poly_mul(a: SuperPolynomial, b: SuperPolynomial) -> SuperPolynomial:
    return a * b


def partial(p: SuperPolynomial, coord) -> SuperPolynomial:
    return p.partial(coord)


# ---------------------------------------------------------------------------
# vector fields

Term = Tuple[Mono, int]


class VectorField:
    """Finite sum of monomial * d/dx_i with rational coefficients."""

    __slots__ = ("cs", "terms", "_parity")

    def __init__(self, cs: CoordinateSystem, terms: Optional[Dict[Term, object]] = None, _clean=False):
        self.cs = cs
        if _clean:
            self.terms = terms
        else:
            self.terms = {k: Q(c) for k, c in (terms or {}).items() if c}
        self._parity = None

    @classmethod
    def partial_field(cls, cs, name) -> "VectorField":
        i = name if isinstance(name, int) else cs.index(name)
        return cls(cs, {(cs.one(), i): 1})

    @classmethod
    def from_summands(cls, cs, summands: Iterable[Tuple[SuperPolynomial, int]]) -> "VectorField":
        out: Dict[Term, object] = {}
        for poly, i in summands:
            for m, c in poly.terms.items():
                out[(m, i)] = out.get((m, i), ZERO) + c
        return cls(cs, out)

    def summands(self) -> List[Tuple[SuperPolynomial, int]]:
        by_dir: Dict[int, Dict[Mono, object]] = {}
        for (m, i), c in self.terms.items():
            by_dir.setdefault(i, {})[m] = c
        return [(SuperPolynomial(self.cs, by_dir[i]), i) for i in sorted(by_dir)]

    def coefficient(self, i: int) -> SuperPolynomial:
        return SuperPolynomial(self.cs, {m: c for (m, j), c in self.terms.items() if j == i})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "VectorField") -> "VectorField":
        out = dict(self.terms)
        _axpy(out, 1, other.terms)
        return VectorField(self.cs, out, _clean=True)

    def __sub__(self, other: "VectorField") -> "VectorField":
        out = dict(self.terms)
        _axpy(out, -1, other.terms)
        return VectorField(self.cs, out, _clean=True)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, a) -> "VectorField":
        a = Q(a)
        if not a:
            return VectorField(self.cs, {}, _clean=True)
        return VectorField(self.cs, {k: a * c for k, c in self.terms.items()}, _clean=True)

    __rmul__ = scale

    def __mul__(self, a):
        return self.scale(a)

    def __eq__(self, other):
        return isinstance(other, VectorField) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def term_parity(self, t: Term) -> int:
        m, i = t
        return (self.cs.mono_parity(m) + self.cs.parities[i]) & 1

    def term_degree(self, t: Term, degrees=None) -> int:
        d = degrees or self.cs.degrees
        m, i = t
        return self.cs.mono_degree(m, d) - d[i]

    def term_weight(self, t: Term):
        m, i = t
        w = self.cs.mono_weight(m)
        wi = self.cs.weights[i] if self.cs.weights else ()
        return tuple(a - b for a, b in zip(w, wi))

    @property
    def parity(self) -> int:
        if self._parity is None:
            ps = {self.term_parity(t) for t in self.terms}
            if len(ps) > 1:
                raise Inhomogeneous("vector field mixes parities")
            self._parity = ps.pop() if ps else 0
        return self._parity

    @property
    def degree(self) -> int:
        ds = {self.term_degree(t) for t in self.terms}
        if len(ds) > 1:
            raise Inhomogeneous("vector field mixes degrees")
        return ds.pop() if ds else 0

    @property
    def weight(self):
        ws = {self.term_weight(t) for t in self.terms}
        if len(ws) > 1:
            raise Inhomogeneous("vector field mixes weights")
        return ws.pop() if ws else tuple(ZERO for _ in range(self.cs.rank))

    def parity_parts(self) -> Dict[int, "VectorField"]:
        parts: Dict[int, Dict[Term, object]] = {}
        for t, c in self.terms.items():
            parts.setdefault(self.term_parity(t), {})[t] = c
        return {p: VectorField(self.cs, d, _clean=True) for p, d in parts.items()}

    def apply(self, f: SuperPolynomial) -> SuperPolynomial:
        """Action as a derivation: sum_i X_i * d_i(f)."""
        return SuperPolynomial(self.cs, field_apply_terms(self.cs, self.terms, f.terms))

    def bracket(self, other: "VectorField") -> "VectorField":
        if other.cs is not self.cs and other.cs != self.cs:
            raise CoordinateError("coordinate systems differ")
        return VectorField(self.cs, bracket_terms(self.cs, self.terms, other.terms), _clean=True)

    def __repr__(self):
        return f"VectorField({render_field(self.cs, self.terms)})"

    def __str__(self):
        return render_field(self.cs, self.terms)


def _axpy(out: Dict, a, src: Dict) -> None:
    for k, c in src.items():
        nc = out.get(k, ZERO) + a * c
        if nc:
            out[k] = nc
        else:
            out.pop(k, None)


def field_apply_terms(cs, X: Dict[Term, object], f: Dict[Mono, object]) -> Dict[Mono, object]:
    out: Dict[Mono, object] = {}
    by_dir: Dict[int, List[Tuple[Mono, object]]] = {}
    for (m, i), c in X.items():
        by_dir.setdefault(i, []).append((m, c))
    for i, coefs in by_dir.items():
        df = poly_partial_terms(cs, f, i)
        if not df:
            continue
        for m, c in coefs:
            for m2, c2 in df.items():
                r = mono_mul(cs, m, m2)
                if r is None:
                    continue
                s, mm = r
                nc = out.get(mm, ZERO) + (c * c2 if s > 0 else -(c * c2))
                if nc:
                    out[mm] = nc
                else:
                    out.pop(mm, None)
    return out


def _split_parity(cs, X: Dict[Term, object]):
    parts: Dict[int, Dict[Term, object]] = {}
    for t, c in X.items():
        m, i = t
        p = (cs.mono_parity(m) + cs.parities[i]) & 1
        parts.setdefault(p, {})[t] = c
    return parts


def _bracket_homog(cs, X, px, Y, py) -> Dict[Term, object]:
    """[X, Y]_j = X(Y_j) - (-1)^{pX pY} Y(X_j) for homogeneous X, Y."""
    out: Dict[Term, object] = {}
    ycoef: Dict[int, Dict[Mono, object]] = {}
    for (m, j), c in Y.items():
        ycoef.setdefault(j, {})[m] = c
    xcoef: Dict[int, Dict[Mono, object]] = {}
    for (m, j), c in X.items():
        xcoef.setdefault(j, {})[m] = c
    for j, yj in ycoef.items():
        for m, c in field_apply_terms(cs, X, yj).items():
            out[(m, j)] = out.get((m, j), ZERO) + c
    sgn = -1 if (px & py) else 1
    for j, xj in xcoef.items():
        for m, c in field_apply_terms(cs, Y, xj).items():
            out[(m, j)] = out.get((m, j), ZERO) + sgn * c * -1
    return {k: v for k, v in out.items() if v}


def bracket_terms(cs, X: Dict[Term, object], Y: Dict[Term, object]) -> Dict[Term, object]:
    out: Dict[Term, object] = {}
    xs = _split_parity(cs, X)
    ys = _split_parity(cs, Y)
    for px, Xp in xs.items():
        for py, Yp in ys.items():
            _axpy(out, 1, _bracket_homog(cs, Xp, px, Yp, py))
    return out


def bracket(x: VectorField, y: VectorField) -> VectorField:
    return x.bracket(y)


def field_degree_weight(x: VectorField):
    """(degree, parity, weight) of a homogeneous field, or the string "inhomogeneous"."""
    try:
        return x.degree, x.parity, x.weight
    except Inhomogeneous:
        return "inhomogeneous"


def ambient_component(cs: CoordinateSystem, k: int, degrees=None) -> List[VectorField]:
    """Monomial fields of degree k: monomial degree minus direction degree = k."""
    d = degrees or cs.degrees
    out = []
    for i in range(cs.size):
        for m in monomials_of_degree(cs, k + d[i], d):
            out.append(VectorField(cs, {(m, i): 1}))
    out.sort(key=lambda X: _term_key(cs, next(iter(X.terms))))
    return out


def ambient_terms(cs: CoordinateSystem, k: int, degrees=None) -> List[Term]:
    d = degrees or cs.degrees
    out = [(m, i) for i in range(cs.size) for m in monomials_of_degree(cs, k + d[i], d)]
    out.sort(key=lambda t: _term_key(cs, t))
    return out


def _term_key(cs, t: Term):
    m, i = t
    return (mono_sort_key(cs, m), i)


# ---------------------------------------------------------------------------
# text rendering and parsing
#
# grammar:  field  := term (('+'|'-') term)*
#           term   := [rational '*'] [monomial '*'] 'D[' name ']'
#           monomial := factor ('*' factor)*,  factor := name ['^' int]


def render_mono(cs, m: Mono) -> str:
    parts = []
    for i, e in enumerate(m):
        if e == 1:
            parts.append(cs.names[i])
        elif e > 1:
            parts.append(f"{cs.names[i]}^{e}")
    return "*".join(parts)


def _render_sum(items: List[Tuple[object, str]]) -> str:
    if not items:
        return "0"
    out = []
    for k, (c, body) in enumerate(items):
        neg = c < 0
        a = -c if neg else c
        coef = format_rational(a)
        if body:
            s = body if coef == "1" else f"{coef}*{body}"
        else:
            s = coef
        if k == 0:
            out.append(("-" if neg else "") + s)
        else:
            out.append((" - " if neg else " + ") + s)
    return "".join(out)


def render_poly(cs, terms: Dict[Mono, object]) -> str:
    keys = sorted(terms, key=lambda m: mono_sort_key(cs, m))
    return _render_sum([(terms[m], render_mono(cs, m)) for m in keys])


def render_field(cs, terms: Dict[Term, object]) -> str:
    keys = sorted(terms, key=lambda t: _term_key(cs, t))
    items = []
    for m, i in keys:
        mono = render_mono(cs, m)
        body = f"{mono}*D[{cs.names[i]}]" if mono else f"D[{cs.names[i]}]"
        items.append((terms[(m, i)], body))
    return _render_sum(items)


_TOKEN = re.compile(r"\s*(?:(D\[([A-Za-z_][A-Za-z0-9_]*)\])|(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z0-9_]*)|(\^)|([*+\-()]))")


class ParseError(ValueError):
    pass


def _tokens(text: str):
    pos = 0
    out = []
    text = text.strip()
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if not mt or mt.end() == pos:
            raise ParseError(f"cannot parse near {text[pos:pos + 10]!r}")
        pos = mt.end()
        if mt.group(1):
            out.append(("D", mt.group(2)))
        elif mt.group(3):
            out.append(("num", mt.group(3)))
        elif mt.group(4):
            out.append(("name", mt.group(4)))
        elif mt.group(5):
            out.append(("^", "^"))
        else:
            out.append(("op", mt.group(6)))
    return out


def _parse_sum(cs, text: str, allow_field: bool):
    toks = _tokens(text)
    poly_out: Dict[Mono, object] = {}
    field_out: Dict[Term, object] = {}
    i = 0
    if not toks:
        raise ParseError("empty expression")
    while i < len(toks):
        sign = 1
        while i < len(toks) and toks[i][0] == "op" and toks[i][1] in "+-":
            if toks[i][1] == "-":
                sign = -sign
            i += 1
        coef = Q(sign)
        mono = cs.one()
        direction = None
        expect_factor = True
        while i < len(toks) and expect_factor:
            kind, val = toks[i]
            if kind == "num":
                coef = coef * parse_rational(val)
                i += 1
            elif kind == "name":
                k = cs.index(val)
                e = 1
                i += 1
                if i < len(toks) and toks[i][0] == "^":
                    e = int(toks[i + 1][1])
                    i += 2
                r = mono_mul(cs, mono, tuple(e if j == k else 0 for j in range(cs.size)))
                if cs.parities[k] and e > 1:
                    r = None
                if r is None:
                    coef = Q(0)
                else:
                    s, mono = r
                    coef = coef * s
            elif kind == "D":
                if not allow_field:
                    raise ParseError("derivation in polynomial expression")
                if direction is not None:
                    raise ParseError("two derivations in one term")
                direction = cs.index(val)
                i += 1
            else:
                raise ParseError(f"unexpected token {val!r}")
            if i < len(toks) and toks[i] == ("op", "*"):
                i += 1
            else:
                expect_factor = False
        if allow_field:
            if direction is None:
                raise ParseError("field term without D[...]")
            key = (mono, direction)
            field_out[key] = field_out.get(key, ZERO) + coef
        else:
            poly_out[mono] = poly_out.get(mono, ZERO) + coef
    if allow_field:
        return VectorField(cs, field_out)
    return SuperPolynomial(cs, poly_out)


def parse_field(cs: CoordinateSystem, text: str) -> VectorField:
    return _parse_sum(cs, text, True)


def parse_poly(cs: CoordinateSystem, text: str) -> SuperPolynomial:
    return _parse_sum(cs, text, False)


def linear_field(cs: CoordinateSystem, dirs: Sequence[int], matrix) -> VectorField:
    """Linear field Z with [Z, d_c] = sum_b matrix[b][c] d_b on the span of the d_dirs.

    Uses [x_a d_b, d_c] = -(-1)^{(p_a + p_b) p_c} delta_ac d_b.
    """
    terms: Dict[Term, object] = {}
    n = len(dirs)
    for a in range(n):
        pa = cs.parities[dirs[a]]
        for b in range(n):
            c = matrix[b][a]
            if not c:
                continue
            pb = cs.parities[dirs[b]]
            s = -1 if ((pa + pb) * pa) & 1 else 1
            key = (cs.var(dirs[a]), dirs[b])
            terms[key] = terms.get(key, ZERO) - s * Q(c)
    return VectorField(cs, terms)
