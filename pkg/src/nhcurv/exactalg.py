"""Exact rational linear algebra on sparse matrices.

Every cohomology dimension in the package is a rank over Q, so nothing here
touches floating point.  Rationals are ``gmpy2.mpq`` when gmpy2 is importable
and :class:`fractions.Fraction` otherwise; both normalise to lowest terms
with a positive denominator.

Sparse vectors are plain ``dict[int, Rational]`` with zeros absent.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

try:  # pragma: no cover - exercised implicitly
    from gmpy2 import mpq as _mpq

    def Q(num=0, den=1):
        return _mpq(num, den)

    RATIONAL_TYPES = (type(_mpq(0)), Fraction, int)
except ImportError:  # pragma: no cover
    def Q(num=0, den=1):
        return Fraction(num, den)

    RATIONAL_TYPES = (Fraction, int)

SparseVec = Dict[int, object]

ZERO = Q(0)
ONE = Q(1)


def parse_rational(text: str):
    """Parse ``"3"``, ``"-3/4"`` into a rational."""
    text = text.strip()
    if "/" in text:
        num, den = text.split("/")
        return Q(int(num), int(den))
    return Q(int(text))


def format_rational(x) -> str:
    x = Q(x)
    if x.denominator == 1:
        return str(int(x.numerator))
    return f"{int(x.numerator)}/{int(x.denominator)}"


def vec_axpy(target: SparseVec, alpha, source: Mapping[int, object]) -> None:
    """In place ``target += alpha * source`` keeping zeros absent."""
    for k, v in source.items():
        nv = target.get(k, ZERO) + alpha * v
        if nv:
            target[k] = nv
        else:
            target.pop(k, None)


def vec_scale(v: Mapping[int, object], alpha) -> SparseVec:
    if not alpha:
        return {}
    return {k: alpha * c for k, c in v.items()}


class DimensionError(ValueError):
    pass


@dataclass(frozen=True)
class SparseMatrix:
    """Immutable sparse matrix; ``entries`` maps (row, col) to a nonzero rational."""

    rows: int
    cols: int
    entries: Mapping[Tuple[int, int], object] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (r, c), v in self.entries.items():
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise DimensionError(f"entry ({r}, {c}) outside {self.rows}x{self.cols}")
            v = Q(v)
            if v:
                clean[(r, c)] = v
        object.__setattr__(self, "entries", clean)

    @classmethod
    def from_dense(cls, data: Sequence[Sequence[object]]) -> "SparseMatrix":
        rows = len(data)
        cols = len(data[0]) if rows else 0
        ent = {(i, j): x for i, row in enumerate(data) for j, x in enumerate(row) if x}
        return cls(rows, cols, ent)

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[Mapping[int, object]]) -> "SparseMatrix":
        ent = {(r, j): v for j, col in enumerate(columns) for r, v in col.items()}
        return cls(rows, len(columns), ent)

    @classmethod
    def from_rows(cls, cols: int, rowvecs: Sequence[Mapping[int, object]]) -> "SparseMatrix":
        ent = {(i, c): v for i, row in enumerate(rowvecs) for c, v in row.items()}
        return cls(len(rowvecs), cols, ent)

    @property
    def nnz(self) -> int:
        return len(self.entries)

    def row_dicts(self) -> List[SparseVec]:
        out: List[SparseVec] = [dict() for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def col_dicts(self) -> List[SparseVec]:
        out: List[SparseVec] = [dict() for _ in range(self.cols)]
        for (r, c), v in self.entries.items():
            out[c][r] = v
        return out

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.cols, self.rows, {(c, r): v for (r, c), v in self.entries.items()})

    def to_dense(self) -> List[List[object]]:
        out = [[ZERO] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def apply(self, v: Mapping[int, object]) -> SparseVec:
        if v and max(v) >= self.cols:
            raise DimensionError("vector longer than matrix width")
        out: SparseVec = {}
        for (r, c), x in self.entries.items():
            if c in v:
                nv = out.get(r, ZERO) + x * v[c]
                if nv:
                    out[r] = nv
                else:
                    out.pop(r, None)
        return out

    def matmul(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.cols != other.rows:
            raise DimensionError("inner dimensions differ")
        orows = other.row_dicts()
        out: Dict[Tuple[int, int], object] = {}
        for (r, k), x in self.entries.items():
            for c, y in orows[k].items():
                out[(r, c)] = out.get((r, c), ZERO) + x * y
        return SparseMatrix(self.rows, other.cols, out)

    def dump(self) -> str:
        """Triplet text format: header ``rows cols nnz`` then ``row col num/den`` lines."""
        lines = [f"{self.rows} {self.cols} {self.nnz}"]
        for (r, c) in sorted(self.entries):
            lines.append(f"{r} {c} {format_rational(self.entries[(r, c)])}")
        return "\n".join(lines) + "\n"

    @classmethod
    def load(cls, text: str) -> "SparseMatrix":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        rows, cols, nnz = (int(x) for x in lines[0].split())
        if len(lines) - 1 != nnz:
            raise DimensionError(f"header announces {nnz} entries, found {len(lines) - 1}")
        ent = {}
        for ln in lines[1:]:
            r, c, v = ln.split()
            ent[(int(r), int(c))] = parse_rational(v)
        return cls(rows, cols, ent)


class Echelon:
    """Incrementally maintained row-echelon basis of a subspace of Q^n.

    Rows are stored with leading coefficient 1, keyed by pivot column.  The pivot
    set depends only on the spanned subspace (columns are processed in
    ascending order), so residuals returned by :meth:`reduce` are canonical.
    """

    __slots__ = ("pivots",)

    def __init__(self):
        self.pivots: Dict[int, SparseVec] = {}

    def __len__(self) -> int:
        return len(self.pivots)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, vec: Mapping[int, object]) -> SparseVec:
        v = dict(vec)
        pivots = self.pivots
        heap = [k for k in v if k in pivots]
        heapq.heapify(heap)
        seen = set()
        while heap:
            c = heapq.heappop(heap)
            if c in seen:
                continue
            seen.add(c)
            coef = v.get(c)
            if not coef:
                continue
            row = pivots[c]
            for k, x in row.items():
                nv = v.get(k, ZERO) - coef * x
                if nv:
                    v[k] = nv
                    if k in pivots and k not in seen:
                        heapq.heappush(heap, k)
                else:
                    v.pop(k, None)
        return v

    def insert(self, vec: Mapping[int, object]) -> bool:
        """Add ``vec`` to the span; returns False when it was already dependent."""
        v = self.reduce(vec)
        if not v:
            return False
        lead = min(v)
        inv = ONE / v[lead]
        self.pivots[lead] = {k: x * inv for k, x in v.items()}
        return True

    def contains(self, vec: Mapping[int, object]) -> bool:
        return not self.reduce(vec)

    def reduced_rows(self) -> Dict[int, SparseVec]:
        """Reduced row echelon form, pivot column -> row (pivot entry 1)."""
        out: Dict[int, SparseVec] = {}
        for c in sorted(self.pivots, reverse=True):
            row = dict(self.pivots[c])
            for k in sorted(k for k in row if k in out and k != c):
                coef = row.get(k)
                if coef:
                    vec_axpy(row, -coef, out[k])
            out[c] = row
        return dict(sorted(out.items()))


@dataclass(frozen=True)
class RowEchelonResult:
    rank: int
    pivot_cols: Tuple[int, ...]
    kernel_basis: Tuple[SparseVec, ...]
    image_basis: Tuple[SparseVec, ...]


def _echelon_of_rows(m: SparseMatrix) -> Echelon:
    ech = Echelon()
    # sparsest rows first: a cheap Markowitz-style fill heuristic
    for row in sorted(m.row_dicts(), key=len):
        if row:
            ech.insert(row)
    return ech


def _dense_rank(m: SparseMatrix) -> int:
    a = m.to_dense()
    rank = 0
    nrows, ncols = m.rows, m.cols
    for c in range(ncols):
        piv = next((r for r in range(rank, nrows) if a[r][c]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        p = a[rank]
        inv = ONE / p[c]
        for r in range(rank + 1, nrows):
            f = a[r][c]
            if f:
                f = f * inv
                row = a[r]
                for j in range(c, ncols):
                    if p[j]:
                        row[j] -= f * p[j]
        rank += 1
        if rank == nrows:
            break
    return rank


DENSE_FILL_THRESHOLD = 0.3


def rank(m: SparseMatrix) -> int:
    """Rank over Q.  Dense elimination once fill exceeds 30% of the matrix."""
    if m.nnz == 0:
        return 0
    if m.nnz > DENSE_FILL_THRESHOLD * m.rows * m.cols and m.rows * m.cols <= 250_000:
        return _dense_rank(m)
    if m.rows > m.cols:
        m = m.transpose()
    return _echelon_of_rows(m).rank


def rank_fraction_free(m: SparseMatrix) -> int:
    """Bareiss fraction-free elimination on an integer-scaled dense copy."""
    a = []
    for row in m.to_dense():
        den = 1
        for x in row:
            den = den * Q(x).denominator // _gcd(den, Q(x).denominator)
        a.append([int(Q(x) * den) for x in row])
    nrows, ncols = m.rows, m.cols
    rank_ = 0
    prev = 1
    for c in range(ncols):
        piv = next((r for r in range(rank_, nrows) if a[r][c]), None)
        if piv is None:
            continue
        a[rank_], a[piv] = a[piv], a[rank_]
        p = a[rank_][c]
        for r in range(rank_ + 1, nrows):
            arc = a[r][c]
            row, prow = a[r], a[rank_]
            for j in range(c, ncols):
                row[j] = (p * row[j] - arc * prow[j]) // prev
        prev = p
        rank_ += 1
        if rank_ == nrows:
            break
    return rank_


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def row_echelon(m: SparseMatrix) -> RowEchelonResult:
    ech = _echelon_of_rows(m)
    rref = ech.reduced_rows()
    pivots = tuple(rref)
    free = [c for c in range(m.cols) if c not in rref]
    kernel = []
    for f in free:
        v = {f: ONE}
        for p, row in rref.items():
            x = row.get(f)
            if x:
                v[p] = -x
        kernel.append(dict(sorted(v.items())))
    # image basis: canonical RREF of the column space
    image = list(_echelon_of_rows(m.transpose()).reduced_rows().values())
    return RowEchelonResult(len(pivots), pivots, tuple(kernel), tuple(image))


def kernel_basis(m: SparseMatrix) -> List[SparseVec]:
    """Canonical null-space basis: one vector per free column, ascending."""
    return list(row_echelon(m).kernel_basis)


def reduce_against_image(v: Mapping[int, object] | Sequence[object], m: SparseMatrix):
    """Residual of ``v`` modulo the column space of ``m`` and whether it vanished."""
    if not isinstance(v, Mapping):
        if len(v) != m.rows:
            raise DimensionError(f"vector of length {len(v)} against {m.rows} rows")
        v = {i: Q(x) for i, x in enumerate(v) if x}
    elif v and max(v) >= m.rows:
        raise DimensionError("vector index outside matrix rows")
    ech = Echelon()
    for col in m.col_dicts():
        if col:
            ech.insert(col)
    res = ech.reduce(v)
    return res, not res


def dense_vector(v: Mapping[int, object], n: int) -> List[object]:
    return [v.get(i, ZERO) for i in range(n)]


def span_rank(vectors: Iterable[Mapping[int, object]]) -> int:
    ech = Echelon()
    for v in vectors:
        ech.insert(v)
    return ech.rank
