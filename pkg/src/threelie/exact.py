"""Exact rational scalars, sparse vectors and fraction-free elimination.

Vectors are sparse dicts ``{index: value}`` holding only nonzero entries.
Dense matrices are tuples of row tuples.  Nothing here ever rounds.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from numbers import Rational

from .errors import DimensionMismatch

ZERO = Fraction(0)
ONE = Fraction(1)


def scalar(value) -> Fraction:
    """Coerce ``value`` to an exact rational.

    Accepts ints, Fractions, ``"p/q"`` strings and ``[num, den]`` pairs.
    Floats are refused: there is no floating-point mode.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, (list, tuple)) and len(value) == 2:
        num, den = value
        if isinstance(num, int) and isinstance(den, int) and not isinstance(num, bool):
            if den == 0:
                raise ZeroDivisionError("zero denominator")
            return Fraction(num, den)
    raise TypeError(f"not an exact scalar: {value!r}")


# -- sparse vectors -----------------------------------------------------------

def sparse(values) -> dict:
    """Dense sequence -> sparse dict."""
    out = {}
    for i, v in enumerate(values):
        v = scalar(v)
        if v:
            out[i] = v
    return out


def to_json(x):
    """Exact scalar as JSON: an int when integral, else "p/q"."""
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def dense_json(vec: dict, n: int) -> list:
    return [to_json(vec.get(i, ZERO)) for i in range(n)]


def dense(vec: dict, n: int) -> tuple:
    return tuple(vec.get(i, ZERO) for i in range(n))


def unit(i: int) -> dict:
    return {i: ONE}


def add_into(acc: dict, vec: dict, coef=ONE) -> dict:
    """``acc += coef * vec`` in place; drops entries that cancel."""
    for k, v in vec.items():
        s = acc.get(k, 0) + coef * v
        if s:
            acc[k] = s
        else:
            acc.pop(k, None)
    return acc


def vec_sub(u: dict, v: dict) -> dict:
    return add_into(dict(u), v, -ONE)


def vec_scale(v: dict, c) -> dict:
    if not c:
        return {}
    return {k: c * x for k, x in v.items()}


def lin_comb(pairs) -> dict:
    acc = {}
    for c, v in pairs:
        add_into(acc, v, c)
    return acc


# -- dense matrices -----------------------------------------------------------

def as_matrix(rows, nrows: int | None = None, ncols: int | None = None) -> tuple:
    mat = tuple(tuple(scalar(x) for x in row) for row in rows)
    if nrows is not None and len(mat) != nrows:
        raise DimensionMismatch(f"expected {nrows} rows, got {len(mat)}")
    widths = {len(r) for r in mat}
    if len(widths) > 1:
        raise DimensionMismatch("ragged matrix")
    if ncols is not None and mat and widths != {ncols}:
        raise DimensionMismatch(f"expected {ncols} columns, got {widths.pop()}")
    return mat


def identity_matrix(n: int) -> tuple:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


def zero_matrix(rows: int, cols: int) -> tuple:
    return tuple((ZERO,) * cols for _ in range(rows))


def mat_vec(mat: tuple, vec: dict) -> dict:
    out = {}
    for i, row in enumerate(mat):
        s = sum((row[j] * x for j, x in vec.items()), ZERO)
        if s:
            out[i] = s
    return out


def mat_mul(a: tuple, b: tuple) -> tuple:
    inner = len(b)
    cols = len(b[0]) if b else 0
    return tuple(
        tuple(sum((row[k] * b[k][j] for k in range(inner)), ZERO) for j in range(cols))
        for row in a)


def columns(mat: tuple, ncols: int) -> list:
    return [{i: row[j] for i, row in enumerate(mat) if row[j]} for j in range(ncols)]


def from_columns(cols, nrows: int) -> tuple:
    return tuple(tuple(c.get(i, ZERO) for c in cols) for i in range(nrows))


def inverse(mat: tuple) -> tuple:
    """Gauss-Jordan inverse over Q; raises ValueError if singular."""
    n = len(mat)
    work = [list(row) + [ONE if i == j else ZERO for j in range(n)]
            for i, row in enumerate(mat)]
    for col in range(n):
        piv = next((r for r in range(col, n) if work[r][col]), None)
        if piv is None:
            raise ValueError("matrix is singular")
        work[col], work[piv] = work[piv], work[col]
        p = work[col][col]
        work[col] = [x / p for x in work[col]]
        for r in range(n):
            if r != col and work[r][col]:
                c = work[r][col]
                work[r] = [x - c * y for x, y in zip(work[r], work[col])]
    return tuple(tuple(row[n:]) for row in work)


# -- elimination --------------------------------------------------------------

def _integer_row(vec: dict) -> dict:
    """Scale a rational sparse vector to a primitive integer one."""
    vec = {k: v for k, v in vec.items() if v}
    if not vec:
        return {}
    den = 1
    for v in vec.values():
        den = lcm(den, Fraction(v).denominator)
    row = {k: int(Fraction(v) * den) for k, v in vec.items()}
    return _primitive(row)


def _primitive(row: dict) -> dict:
    g = 0
    for v in row.values():
        g = gcd(g, v)
    lead = row[min(row)]
    if lead < 0:
        g = -g
    if g not in (0, 1):
        row = {k: v // g for k, v in row.items()}
    return row


class Echelon:
    """Incremental fraction-free row echelon form over Z.

    Each stored row is a primitive integer vector with positive leading entry.
    Elimination cross-multiplies (``a*row - b*pivot``) and then divides out the
    content, so coefficients stay small without ever leaving the integers.
    """

    def __init__(self):
        self.rows: dict[int, dict] = {}   # pivot column -> row

    def reduce(self, vec: dict) -> dict:
        """Fraction-free reduction of ``vec`` against the stored rows (primitive, may be {})."""
        if not vec:
            return {}
        row = _integer_row(vec)
        while row:
            c = min(row)
            piv = self.rows.get(c)
            if piv is None:
                return row
            a, b = piv[c], row[c]
            new = {k: a * v for k, v in row.items()}
            for k, v in piv.items():
                s = new.get(k, 0) - b * v
                if s:
                    new[k] = s
                else:
                    new.pop(k, None)
            row = _primitive(new) if new else {}
        return row

    def add(self, vec: dict) -> bool:
        """Insert ``vec``; return True if it was independent of the stored rows."""
        row = self.reduce(vec)
        if not row:
            return False
        self.rows[min(row)] = row
        return True

    def __contains__(self, vec: dict) -> bool:
        return not self.reduce(vec)

    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def pivots(self) -> list:
        return sorted(self.rows)

    def reduced(self) -> dict:
        """Reduced row echelon form over Q: pivot -> row with leading 1."""
        red = {}
        for c in sorted(self.rows, reverse=True):
            row = {k: Fraction(v, self.rows[c][c]) for k, v in self.rows[c].items()}
            for c2, r2 in red.items():
                coef = row.get(c2)
                if coef:
                    add_into(row, r2, -coef)
            red[c] = row
        return dict(sorted(red.items()))


def rank(vectors) -> int:
    ech = Echelon()
    for v in vectors:
        ech.add(v)
    return ech.rank


def nullspace(rows, ncols: int) -> list:
    """Basis of {x : row . x = 0 for every row}, one vector per free column."""
    ech = Echelon()
    for r in rows:
        ech.add(r)
    red = ech.reduced()
    basis = []
    for j in range(ncols):
        if j in red:
            continue
        x = {j: ONE}
        for c, row in red.items():
            v = row.get(j)
            if v:
                x[c] = -v
        basis.append(x)
    return basis


def complement_basis(vectors, n: int) -> list:
    """Standard basis vectors completing span(vectors) to Q^n (deterministic)."""
    ech = Echelon()
    for v in vectors:
        ech.add(v)
    out = []
    for j in range(n):
        if ech.add({j: ONE}):
            out.append({j: ONE})
    return out


# -- sparse matrices ----------------------------------------------------------

class SparseMatrix:
    """Exact sparse matrix stored by columns: ``cols[j] = {i: value}``."""

    __slots__ = ("shape", "cols")

    def __init__(self, nrows: int, ncols: int, cols=None):
        self.shape = (nrows, ncols)
        self.cols: dict[int, dict] = {}
        for j, col in (cols or {}).items():
            col = {i: v for i, v in col.items() if v}
            if col:
                self.cols[j] = col

    @classmethod
    def from_triplets(cls, nrows, ncols, triplets):
        cols: dict[int, dict] = {}
        for i, j, v in triplets:
            col = cols.setdefault(j, {})
            col[i] = col.get(i, 0) + v
        return cls(nrows, ncols, cols)

    @classmethod
    def from_dense(cls, rows):
        rows = as_matrix(rows)
        n = len(rows)
        m = len(rows[0]) if rows else 0
        return cls(n, m, dict(enumerate(columns(rows, m))))

    @classmethod
    def identity(cls, n):
        return cls(n, n, {i: {i: ONE} for i in range(n)})

    def column(self, j: int) -> dict:
        return self.cols.get(j, {})

    def rows(self) -> dict:
        out: dict[int, dict] = {}
        for j, col in self.cols.items():
            for i, v in col.items():
                out.setdefault(i, {})[j] = v
        return out

    @property
    def nnz(self) -> int:
        return sum(len(c) for c in self.cols.values())

    def is_zero(self) -> bool:
        return not self.cols

    def apply(self, vec: dict) -> dict:
        out = {}
        for j, x in vec.items():
            col = self.cols.get(j)
            if col:
                add_into(out, col, x)
        return out

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.shape[1] != other.shape[0]:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        return SparseMatrix(self.shape[0], other.shape[1],
                            {j: self.apply(col) for j, col in other.cols.items()})

    def __sub__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.shape != other.shape:
            raise DimensionMismatch(f"shape {self.shape} vs {other.shape}")
        cols = {j: dict(c) for j, c in self.cols.items()}
        for j, c in other.cols.items():
            add_into(cols.setdefault(j, {}), c, -ONE)
        return SparseMatrix(*self.shape, cols)

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and self.cols == other.cols

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.shape[1], self.shape[0], self.rows())

    def rank(self) -> int:
        return rank(self.cols.values())

    def kernel(self) -> list:
        return nullspace(self.rows().values(), self.shape[1])

    def in_column_space(self, vec: dict) -> bool:
        ech = Echelon()
        for c in self.cols.values():
            ech.add(c)
        return vec in ech

    def to_dense(self) -> tuple:
        n, m = self.shape
        return tuple(tuple(self.cols.get(j, {}).get(i, ZERO) for j in range(m))
                     for i in range(n))

    def __repr__(self):
        return f"SparseMatrix(shape={self.shape}, nnz={self.nnz})"
