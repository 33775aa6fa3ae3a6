"""Exact linear algebra over Q and GF(p) on sparse rows.

Vectors are ``dict[int, scalar]`` holding only nonzero entries.  Every row
reduction goes through :class:`RowSpace`, which keeps the reduced row echelon
form of a growing subspace.  The RREF of a subspace is canonical, so pivots,
quotient bases and kernel bases do not depend on insertion order.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Iterable, Sequence

from .fields import QQ, Field


class CompositionError(ArithmeticError):
    """Two maps that should compose to zero do not."""


class SingularMatrixError(ArithmeticError):
    pass


# -- sparse vectors ---------------------------------------------------------


def as_sparse(v) -> dict:
    if isinstance(v, dict):
        return {k: c for k, c in v.items() if c}
    return {i: c for i, c in enumerate(v) if c}


def dense(v: dict, n: int, zero=0) -> list:
    out = [zero] * n
    for k, c in v.items():
        out[k] = c
    return out


def axpy(dst: dict, c, src: dict) -> dict:
    """dst += c * src, in place; drops cancelled entries."""
    if not c:
        return dst
    for k, v in src.items():
        nv = dst.get(k, 0) + c * v
        if nv:
            dst[k] = nv
        else:
            dst.pop(k, None)
    return dst


def vscale(c, v: dict) -> dict:
    if not c:
        return {}
    return {k: c * x for k, x in v.items()}


def vadd(*vs: dict) -> dict:
    out: dict = {}
    for v in vs:
        axpy(out, 1, v)
    return out


def vsub(a: dict, b: dict) -> dict:
    return axpy(dict(a), -1, b)


# -- row reduction ----------------------------------------------------------


class RowSpace:
    """Reduced row echelon form of the span of the vectors added so far.

    ``pivots`` maps a pivot column to its row (pivot entry 1, zero in every
    other pivot column).  ``_occ`` indexes which rows touch each non-pivot
    column so that back-elimination only visits affected rows.
    """

    def __init__(self, ncols: int, field: Field = QQ):
        self.ncols = ncols
        self.field = field
        self.pivots: dict[int, dict] = {}
        self._occ: dict[int, set] = defaultdict(set)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, v: dict) -> dict:
        out = dict(v)
        hits = [c for c in out if c in self.pivots]
        for c in hits:
            coef = out.get(c)
            if coef:
                axpy(out, -coef, self.pivots[c])
        return out

    def contains(self, v: dict) -> bool:
        return not self.reduce(v)

    def add(self, v: dict) -> bool:
        """Insert v; return True when it enlarged the span."""
        r = self.reduce(v)
        if not r:
            return False
        p = min(r)
        lead = r[p]
        if lead != 1:
            inv = self.field.div(1, lead)
            r = {k: x * inv for k, x in r.items()}
        occ = self._occ
        for q in list(occ.get(p, ())):
            row = self.pivots[q]
            coef = row[p]
            for k, x in r.items():
                nv = row.get(k, 0) - coef * x
                if nv:
                    if k not in row:
                        occ[k].add(q)
                    row[k] = nv
                else:
                    if k in row:
                        del row[k]
                        if k != q:
                            occ[k].discard(q)
        occ.pop(p, None)
        self.pivots[p] = r
        for k in r:
            if k != p:
                occ[k].add(p)
        return True

    def extend(self, vs: Iterable[dict]) -> "RowSpace":
        for v in vs:
            self.add(v)
        return self

    def rows(self) -> list[dict]:
        return [self.pivots[p] for p in sorted(self.pivots)]

    def free_columns(self) -> list[int]:
        return [c for c in range(self.ncols) if c not in self.pivots]

    def rows_touching(self, col: int) -> list[int]:
        return sorted(self._occ.get(col, ()))


# -- matrices ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Matrix:
    nrows: int
    ncols: int
    rows: tuple
    field: Field = QQ

    @classmethod
    def from_dense(cls, entries: Sequence[Sequence], field: Field = QQ, ncols: int | None = None) -> "Matrix":
        rows = tuple(as_sparse([field(x) for x in r]) for r in entries)
        if ncols is None:
            ncols = len(entries[0]) if entries else 0
        return cls(len(rows), ncols, rows, field)

    @classmethod
    def from_rows(cls, rows: Sequence[dict], ncols: int, field: Field = QQ) -> "Matrix":
        return cls(len(rows), ncols, tuple(as_sparse(r) for r in rows), field)

    @classmethod
    def from_columns(cls, cols: Sequence[dict], nrows: int, field: Field = QQ) -> "Matrix":
        rows: list[dict] = [{} for _ in range(nrows)]
        for j, col in enumerate(cols):
            for i, x in col.items():
                if x:
                    rows[i][j] = x
        return cls(nrows, len(cols), tuple(rows), field)

    @classmethod
    def zero(cls, nrows: int, ncols: int, field: Field = QQ) -> "Matrix":
        return cls(nrows, ncols, tuple({} for _ in range(nrows)), field)

    @classmethod
    def identity(cls, n: int, field: Field = QQ) -> "Matrix":
        return cls(n, n, tuple({i: field(1)} for i in range(n)), field)

    @cached_property
    def columns(self) -> tuple:
        cols: list[dict] = [{} for _ in range(self.ncols)]
        for i, row in enumerate(self.rows):
            for j, x in row.items():
                cols[j][i] = x
        return tuple(cols)

    def column(self, j: int) -> dict:
        return self.columns[j]

    def transpose(self) -> "Matrix":
        return Matrix(self.ncols, self.nrows, tuple(dict(c) for c in self.columns), self.field)

    @property
    def T(self) -> "Matrix":
        return self.transpose()

    def apply(self, v: dict) -> dict:
        """Matrix times column vector."""
        out: dict = {}
        cols = self.columns
        for j, x in v.items():
            axpy(out, x, cols[j])
        return out

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise ValueError(f"shape mismatch {self.nrows}x{self.ncols} @ {other.nrows}x{other.ncols}")
            rows = []
            for row in self.rows:
                out: dict = {}
                for k, x in row.items():
                    axpy(out, x, other.rows[k])
                rows.append(out)
            return Matrix(self.nrows, other.ncols, tuple(rows), self.field)
        return self.apply(as_sparse(other))

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix(self.nrows, self.ncols, tuple(vadd(a, b) for a, b in zip(self.rows, other.rows)), self.field)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix(self.nrows, self.ncols, tuple(vsub(a, b) for a, b in zip(self.rows, other.rows)), self.field)

    def __neg__(self) -> "Matrix":
        return self.scale(-1)

    def scale(self, c) -> "Matrix":
        return Matrix(self.nrows, self.ncols, tuple(vscale(c, r) for r in self.rows), self.field)

    def _same_shape(self, other):
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch")

    def is_zero(self) -> bool:
        return not any(self.rows)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.nrows, self.ncols) == (other.nrows, other.ncols) and all(
            as_sparse(a) == as_sparse(b) for a, b in zip(self.rows, other.rows)
        )

    __hash__ = None

    def to_dense(self) -> list[list]:
        return [dense(r, self.ncols) for r in self.rows]

    def __repr__(self):
        return f"Matrix({self.nrows}x{self.ncols}, {self.to_dense()})"


def lincomb(coeffs: dict, mats: Sequence[Matrix]) -> Matrix:
    """Sum of coeffs[i] * mats[i]; coeffs must be nonempty or mats nonempty."""
    first = mats[0]
    rows: list[dict] = [{} for _ in range(first.nrows)]
    for i, c in coeffs.items():
        for r, row in zip(rows, mats[i].rows):
            axpy(r, c, row)
    return Matrix(first.nrows, first.ncols, tuple(rows), first.field)


# -- operations -------------------------------------------------------------


def rank(M: Matrix) -> int:
    return RowSpace(M.ncols, M.field).extend(M.rows).rank


def kernel_basis(M: Matrix) -> list[dict]:
    """Basis of {v : M v = 0}; one vector per free column, which carries a 1."""
    rs = RowSpace(M.ncols, M.field).extend(M.rows)
    return _kernel_from_rref(rs)


def _kernel_from_rref(rs: RowSpace) -> list[dict]:
    out = []
    one = rs.field(1)
    for f in rs.free_columns():
        v = {f: one}
        for p in rs.rows_touching(f):
            v[p] = -rs.pivots[p][f]
        out.append(v)
    return out


@dataclass(eq=False)
class QuotientSpace:
    """ambient / span(relations), with the non-pivot coordinates as basis."""

    ambient_dim: int
    relations: RowSpace
    basis_columns: list = dc_field(default_factory=list)

    def __post_init__(self):
        self.basis_columns = self.relations.free_columns()
        self._index = {c: i for i, c in enumerate(self.basis_columns)}

    @property
    def field(self) -> Field:
        return self.relations.field

    @property
    def dim(self) -> int:
        return len(self.basis_columns)

    @property
    def relation_basis(self) -> list[dict]:
        return self.relations.rows()

    def project(self, v: dict) -> dict:
        r = self.relations.reduce(v)
        idx = self._index
        return {idx[c]: x for c, x in r.items()}

    def section(self, i: int) -> dict:
        return {self.basis_columns[i]: self.field(1)}

    def lift(self, q: dict) -> dict:
        cols = self.basis_columns
        return {cols[i]: x for i, x in q.items() if x}

    @cached_property
    def project_matrix(self) -> Matrix:
        cols = [self.project({j: self.field(1)}) for j in range(self.ambient_dim)]
        return Matrix.from_columns(cols, self.dim, self.field)

    @cached_property
    def section_matrix(self) -> Matrix:
        return Matrix.from_columns([self.section(i) for i in range(self.dim)], self.ambient_dim, self.field)


def quotient(ambient_dim: int, relations: Iterable, field: Field = QQ) -> QuotientSpace:
    rs = RowSpace(ambient_dim, field)
    for r in relations:
        rs.add(as_sparse(r))
    return QuotientSpace(ambient_dim, rs)


def solve(A: Matrix, b) -> dict | None:
    """Some x with A x = b (free variables set to 0), or None if inconsistent."""
    b = as_sparse(b)
    aug = A.ncols
    rs = RowSpace(A.ncols + 1, A.field)
    for i, row in enumerate(A.rows):
        r = dict(row)
        if b.get(i):
            r[aug] = b[i]
        rs.add(r)
    if aug in rs.pivots:
        return None
    return {p: row[aug] for p, row in rs.pivots.items() if row.get(aug)}


def inverse(M: Matrix) -> Matrix:
    if M.nrows != M.ncols:
        raise SingularMatrixError("non-square matrix")
    n = M.nrows
    one = M.field(1)
    rs = RowSpace(2 * n, M.field)
    for i, row in enumerate(M.rows):
        r = dict(row)
        r[n + i] = one
        rs.add(r)
    if any(p >= n for p in rs.pivots) or rs.rank < n:
        raise SingularMatrixError("matrix is not invertible")
    rows = []
    for p in range(n):
        rows.append({k - n: x for k, x in rs.pivots[p].items() if k >= n})
    return Matrix(n, n, tuple(rows), M.field)


@dataclass
class Homology:
    dim: int
    kernel_dim: int
    image_rank: int
    representatives: list


def homology_dim(d_in: Matrix, d_out: Matrix) -> Homology:
    """ker(d_out) / im(d_in), with representatives reduced against the image."""
    if d_in.nrows != d_out.ncols:
        raise ValueError("maps are not composable")
    if not (d_out @ d_in).is_zero():
        raise CompositionError("d_out . d_in != 0")
    field = d_out.field
    ker = kernel_basis(d_out)
    image = RowSpace(d_out.ncols, field).extend(d_in.columns)
    img_rank = image.rank
    combined = RowSpace(d_out.ncols, field).extend(image.rows())
    reps = []
    for v in ker:
        if combined.add(v):
            reps.append(image.reduce(v))
    return Homology(len(ker) - img_rank, len(ker), img_rank, reps)
