"""3-Lie algebras from structure constants, linear maps, subspaces, quotients.

Indices are 0-based throughout the library; the JSON layer converts from the
1-based convention used in input files.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .errors import (DimensionMismatch, FundamentalIdentityViolation,
                     IndexOutOfRange, NotASubalgebra)
from .exact import (ONE, ZERO, Echelon, add_into, as_matrix, dense, dense_json,
                    inverse, mat_vec, scalar, sparse, vec_sub)


def perm_sign(seq) -> int:
    """Sign of the permutation sorting ``seq`` (0 if it has repeats)."""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return 0
    inv = sum(1 for a, b in itertools.combinations(seq, 2) if a > b)
    return -1 if inv % 2 else 1


class PairBasis:
    """Canonical basis e_i ^ e_j (i < j) of the second exterior power.

    Pairs are numbered lexicographically, so ``pairs[n]`` is the n-th basis
    element and ``index(j, i)`` resolves to ``(index(i, j)[0], -1)``.
    """

    def __init__(self, dim: int):
        self.dim = dim
        self.pairs = tuple(itertools.combinations(range(dim), 2))
        self._index = {p: n for n, p in enumerate(self.pairs)}

    def __len__(self):
        return len(self.pairs)

    def index(self, i: int, j: int):
        """``(n, sign)`` with e_i ^ e_j = sign * pairs[n], or None when i == j."""
        if i == j:
            return None
        if i < j:
            return self._index[(i, j)], 1
        return self._index[(j, i)], -1

    def unit(self, i: int, j: int) -> dict:
        hit = self.index(i, j)
        return {} if hit is None else {hit[0]: Fraction(hit[1])}

    def wedge(self, u: dict, v: dict) -> dict:
        """Coordinates of u ^ v for sparse vectors u, v."""
        out = {}
        for i, a in u.items():
            for j, b in v.items():
                if i == j:
                    continue
                n, s = self.index(i, j)
                c = out.get(n, 0) + s * a * b
                if c:
                    out[n] = c
                else:
                    out.pop(n, None)
        return out


@lru_cache(maxsize=None)
def pair_basis(dim: int) -> PairBasis:
    return PairBasis(dim)


class ThreeLieAlgebra:
    """Finite-dimensional vector space with a totally antisymmetric ternary bracket.

    ``constants`` maps sorted triples ``(i, j, k)`` with i < j < k to the sparse
    vector pi(e_i, e_j, e_k); every other slot order follows by antisymmetry.
    Instances are immutable; use :func:`make_algebra` to build validated ones.
    """

    def __init__(self, dim: int, constants: dict):
        if dim < 1:
            raise ValueError("dimension must be positive")
        self.dim = dim
        self.constants = {t: dict(v) for t, v in constants.items() if v}
        self._basis = {}
        for (i, j, k), v in self.constants.items():
            for perm in itertools.permutations((i, j, k)):
                s = perm_sign(perm)
                self._basis[perm] = {l: s * x for l, x in v.items()}

    @property
    def pairs(self) -> PairBasis:
        return pair_basis(self.dim)

    def basis_bracket(self, i: int, j: int, k: int) -> dict:
        return self._basis.get((i, j, k), {})

    def bracket(self, x: dict, y: dict, z: dict) -> dict:
        """Trilinear evaluation on sparse vectors (any ring of coefficients)."""
        out = {}
        for i, a in x.items():
            for j, b in y.items():
                if i == j:
                    continue
                ab = a * b
                for k, c in z.items():
                    v = self._basis.get((i, j, k))
                    if v:
                        add_into(out, v, ab * c)
        return out

    def ad(self, x: dict, y: dict) -> tuple:
        """Matrix of z -> pi(x, y, z)."""
        cols = [self.bracket(x, y, {k: ONE}) for k in range(self.dim)]
        return tuple(tuple(cols[k].get(l, ZERO) for k in range(self.dim))
                     for l in range(self.dim))

    def structure_tensor(self) -> list:
        """Dense c[i][j][k][l] with pi(e_i, e_j, e_k) = sum_l c[i][j][k][l] e_l."""
        d = self.dim
        return [[[list(dense(self.basis_bracket(i, j, k), d)) for k in range(d)]
                 for j in range(d)] for i in range(d)]

    def is_abelian(self) -> bool:
        return not self.constants

    def __eq__(self, other):
        if not isinstance(other, ThreeLieAlgebra):
            return NotImplemented
        return self.dim == other.dim and self.constants == other.constants

    def __hash__(self):
        return hash((self.dim, tuple(sorted((t, tuple(sorted(v.items())))
                                            for t, v in self.constants.items()))))

    def __repr__(self):
        return f"ThreeLieAlgebra(dim={self.dim}, nonzero_brackets={len(self.constants)})"


@dataclass(frozen=True)
class IdentityCheck:
    ok: bool
    tuples_checked: int
    witness: tuple | None = None     # first failing basis 5-tuple (0-based)
    residual: dict | None = None     # LHS - RHS at the witness


def fundamental_identity_residual(A: ThreeLieAlgebra, x1, x2, x3, x4, x5) -> dict:
    """pi(x1,x2,pi(x3,x4,x5)) minus the three derivation terms, for sparse vectors."""
    br = A.bracket
    lhs = br(x1, x2, br(x3, x4, x5))
    rhs = br(br(x1, x2, x3), x4, x5)
    add_into(rhs, br(x3, br(x1, x2, x4), x5))
    add_into(rhs, br(x3, x4, br(x1, x2, x5)))
    return vec_sub(lhs, rhs)


def check_fundamental_identity(A: ThreeLieAlgebra) -> IdentityCheck:
    """Exhaustive check over all dim**5 basis tuples, stopping at the first failure."""
    d = A.dim
    e = [{i: ONE} for i in range(d)]
    count = 0
    for t in itertools.product(range(d), repeat=5):
        count += 1
        if t[0] == t[1]:
            continue
        res = fundamental_identity_residual(A, *(e[i] for i in t))
        if res:
            return IdentityCheck(False, count, t, res)
    return IdentityCheck(True, count)


def _check_index(i, d, what):
    if not isinstance(i, int) or not 0 <= i < d:
        raise IndexOutOfRange(f"{what} index {i!r} out of range for dimension {d}",
                              {"index": i, "dim": d})


def make_algebra(dim: int, entries=(), *, validate: bool = True) -> ThreeLieAlgebra:
    """Build a 3-Lie algebra from structure constants.

    ``entries`` holds ``(i, j, k, l, value)`` tuples meaning the e_l coordinate
    of pi(e_i, e_j, e_k), given only for i < j < k.  Repeated entries add up.
    With ``validate`` the fundamental identity is checked exhaustively.
    """
    if not isinstance(dim, int) or dim < 1:
        raise ValueError(f"dimension must be a positive integer, got {dim!r}")
    table: dict = {}
    for entry in entries:
        i, j, k, l, value = entry
        for idx, what in ((i, "i"), (j, "j"), (k, "k"), (l, "l")):
            _check_index(idx, dim, what)
        if not i < j < k:
            raise IndexOutOfRange(f"structure constants must have i<j<k, got {(i, j, k)}",
                                  {"triple": [i, j, k]})
        add_into(table.setdefault((i, j, k), {}), {l: scalar(value)})
    A = ThreeLieAlgebra(dim, table)
    if validate:
        chk = check_fundamental_identity(A)
        if not chk.ok:
            raise FundamentalIdentityViolation(
                f"fundamental identity fails at basis tuple {chk.witness}",
                {"tuple": list(chk.witness), "residual": dense_json(chk.residual, dim)})
    return A


def algebra_from_brackets(dim: int, brackets: dict, *, validate: bool = True) -> ThreeLieAlgebra:
    """Convenience: ``{(i, j, k): dense output vector}`` with i < j < k."""
    entries = [(i, j, k, l, v) for (i, j, k), vec in brackets.items()
               for l, v in enumerate(vec) if v]
    return make_algebra(dim, entries, validate=validate)


def abelian(dim: int) -> ThreeLieAlgebra:
    return ThreeLieAlgebra(dim, {})


def as_vector(v, dim: int) -> dict:
    """Accept a dense sequence or sparse dict; return a sparse dict of length ``dim``."""
    if isinstance(v, dict):
        if any(not 0 <= k < dim for k in v):
            raise DimensionMismatch(f"vector index out of range for dimension {dim}")
        return {k: scalar(x) for k, x in v.items() if x}
    v = list(v)
    if len(v) != dim:
        raise DimensionMismatch(f"expected a vector of length {dim}, got {len(v)}")
    return sparse(v)


def bracket_eval(A: ThreeLieAlgebra, x, y, z) -> tuple:
    """pi(x, y, z) for dense or sparse vectors; returns a dense tuple."""
    x, y, z = (as_vector(v, A.dim) for v in (x, y, z))
    return dense(A.bracket(x, y, z), A.dim)


# -- linear maps --------------------------------------------------------------

@dataclass(frozen=True)
class LinearMap:
    """Matrix of a linear map; column j is the image of e_j."""

    source_dim: int
    target_dim: int
    matrix: tuple

    def __post_init__(self):
        object.__setattr__(self, "matrix",
                           as_matrix(self.matrix, self.target_dim, self.source_dim))

    @classmethod
    def from_rows(cls, rows):
        rows = as_matrix(rows)
        return cls(len(rows[0]) if rows else 0, len(rows), rows)

    @classmethod
    def identity(cls, n):
        return cls(n, n, [[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, source_dim, target_dim):
        return cls(source_dim, target_dim, [[0] * source_dim for _ in range(target_dim)])

    @classmethod
    def diagonal(cls, entries):
        n = len(entries)
        return cls(n, n, [[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    def column(self, j: int) -> dict:
        return {i: row[j] for i, row in enumerate(self.matrix) if row[j]}

    def apply(self, vec: dict) -> dict:
        return mat_vec(self.matrix, vec)

    def __call__(self, v) -> tuple:
        return dense(self.apply(as_vector(v, self.source_dim)), self.target_dim)

    def __add__(self, other: "LinearMap") -> "LinearMap":
        self._same_shape(other)
        return LinearMap(self.source_dim, self.target_dim,
                         [[a + b for a, b in zip(r, s)] for r, s in zip(self.matrix, other.matrix)])

    def __sub__(self, other: "LinearMap") -> "LinearMap":
        return self + other.scaled(-1)

    def scaled(self, c) -> "LinearMap":
        c = scalar(c)
        return LinearMap(self.source_dim, self.target_dim,
                         [[c * a for a in r] for r in self.matrix])

    def _same_shape(self, other):
        if (self.source_dim, self.target_dim) != (other.source_dim, other.target_dim):
            raise DimensionMismatch("linear maps have different shapes")


@dataclass(frozen=True)
class MorphismDefect:
    """D(i,j,k) = mu(f e_i, f e_j, f e_k) - f(pi(e_i, e_j, e_k)) over i<j<k."""

    defects: dict = field(default_factory=dict)   # only nonzero triples

    @property
    def is_morphism(self) -> bool:
        return not self.defects


def _check_map_shape(f: LinearMap, A: ThreeLieAlgebra, B: ThreeLieAlgebra):
    if f.source_dim != A.dim or f.target_dim != B.dim:
        raise DimensionMismatch(
            f"map is {f.source_dim}->{f.target_dim}, algebras are {A.dim}->{B.dim}")


def morphism_defect(f: LinearMap, A: ThreeLieAlgebra, B: ThreeLieAlgebra, i, j, k) -> dict:
    fi, fj, fk = f.column(i), f.column(j), f.column(k)
    return vec_sub(B.bracket(fi, fj, fk), f.apply(A.basis_bracket(i, j, k)))


def check_morphism(f: LinearMap, A: ThreeLieAlgebra, B: ThreeLieAlgebra) -> MorphismDefect:
    _check_map_shape(f, A, B)
    defects = {}
    for t in itertools.combinations(range(A.dim), 3):
        d = morphism_defect(f, A, B, *t)
        if d:
            defects[t] = d
    return MorphismDefect(defects)


def direct_sum(A: ThreeLieAlgebra, B: ThreeLieAlgebra) -> ThreeLieAlgebra:
    """g (+) h with componentwise bracket; mixed brackets vanish."""
    d = A.dim
    table = dict(A.constants)
    for (i, j, k), v in B.constants.items():
        table[(i + d, j + d, k + d)] = {l + d: x for l, x in v.items()}
    return ThreeLieAlgebra(d + B.dim, table)


# -- subspaces and quotients --------------------------------------------------

class Subspace:
    """Span of linearly independent column vectors inside an algebra's carrier."""

    def __init__(self, algebra: ThreeLieAlgebra, basis):
        self.algebra = algebra
        self.ambient_dim = algebra.dim
        self.basis = tuple(as_vector(v, algebra.dim) for v in basis)
        self._echelon = Echelon()
        for v in self.basis:
            if not self._echelon.add(v):
                raise ValueError("subspace basis vectors are linearly dependent")

    @classmethod
    def whole(cls, algebra):
        return cls(algebra, [{i: ONE} for i in range(algebra.dim)])

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> list:
        return self._echelon.pivots

    def contains(self, v: dict) -> bool:
        return v in self._echelon

    def matrix(self) -> tuple:
        return tuple(tuple(b.get(i, ZERO) for b in self.basis) for i in range(self.ambient_dim))

    def __repr__(self):
        return f"Subspace(rank={self.rank}, ambient_dim={self.ambient_dim})"


@dataclass(frozen=True)
class ClosureCheck:
    closed: bool
    witness: tuple | None = None    # indices into the subspace basis
    residual: dict | None = None    # ambient vector, the bracket modulo H


@dataclass(frozen=True)
class QuotientSplit:
    """g = H (+) C with projection p: g -> g/H and section s: g/H -> g.

    The quotient basis is fixed by the canonical complement (standard vectors
    off H's echelon pivots); ``complement`` is the image of ``s``.
    """

    subspace: Subspace
    complement: tuple       # sparse ambient vectors spanning im(s)
    p: tuple                # (d-k) x d
    s: tuple                # d x (d-k)
    _coords: tuple = field(repr=False)   # d x d: ambient -> (H coords, quotient coords)

    @property
    def quotient_dim(self) -> int:
        return len(self.p)

    def project(self, v: dict) -> dict:
        return mat_vec(self.p, v)

    def lift(self, q: dict) -> dict:
        return mat_vec(self.s, q)

    def subspace_coords(self, v: dict) -> dict:
        """Coordinates of the H-component of v (along the canonical complement)."""
        k = self.subspace.rank
        full = mat_vec(self._coords, v)
        return {i: x for i, x in full.items() if i < k}

    def reduce(self, v: dict) -> dict:
        """Ambient representative of v mod H supported on the canonical complement."""
        k = self.subspace.rank
        full = mat_vec(self._coords, v)
        comp = self._canonical
        out = {}
        for i, x in full.items():
            if i >= k:
                add_into(out, comp[i - k], x)
        return out

    @property
    def _canonical(self):
        return [{c: ONE} for c in range(self.subspace.ambient_dim)
                if c not in set(self.subspace.pivots)]


def subspace_closure_check(A: ThreeLieAlgebra, H: Subspace) -> ClosureCheck:
    if H.ambient_dim != A.dim:
        raise DimensionMismatch(f"subspace lives in dimension {H.ambient_dim}, algebra has {A.dim}")
    split = quotient_split(A, H)
    for t in itertools.combinations(range(H.rank), 3):
        v = A.bracket(*(H.basis[i] for i in t))
        if not H.contains(v):
            return ClosureCheck(False, t, split.reduce(v))
    return ClosureCheck(True)


def quotient_split(A: ThreeLieAlgebra, H: Subspace, complement=None) -> QuotientSplit:
    """Deterministic splitting of g -> g/H.

    Without ``complement`` the section maps the quotient basis onto the standard
    vectors avoiding H's echelon pivots.  Given complement vectors C, the
    quotient basis stays canonical and the section becomes s = C (p C)^-1.
    """
    if H.ambient_dim != A.dim:
        raise DimensionMismatch(f"subspace lives in dimension {H.ambient_dim}, algebra has {A.dim}")
    d, k = A.dim, H.rank
    pivots = set(H.pivots)
    canonical = [{c: ONE} for c in range(d) if c not in pivots]
    frame = [list(dense(v, d)) for v in H.basis + tuple(canonical)]
    # columns = H basis then canonical complement; invert to get coordinates
    coords = inverse(tuple(tuple(frame[c][r] for c in range(d)) for r in range(d)))
    p = coords[k:]
    if complement is None:
        comp = tuple(canonical)
        s = tuple(tuple(ONE if canonical[q].get(r) else ZERO for q in range(d - k))
                  for r in range(d))
    else:
        comp = tuple(as_vector(v, d) for v in complement)
        if len(comp) != d - k:
            raise DimensionMismatch(f"complement needs {d - k} vectors, got {len(comp)}")
        pc = tuple(tuple(mat_vec(p, c).get(r, ZERO) for c in comp) for r in range(d - k))
        try:
            pc_inv = inverse(pc)
        except ValueError:
            raise ValueError("complement vectors do not span a complement of H") from None
        cmat = tuple(tuple(c.get(r, ZERO) for c in comp) for r in range(d))
        s = tuple(tuple(sum((cmat[r][a] * pc_inv[a][b] for a in range(d - k)), ZERO)
                        for b in range(d - k)) for r in range(d))
    return QuotientSplit(H, comp, p, s, coords)


def restrict_algebra(A: ThreeLieAlgebra, H: Subspace, split: QuotientSplit | None = None) -> ThreeLieAlgebra:
    """The subalgebra H as a 3-Lie algebra in the coordinates of H's basis."""
    chk = subspace_closure_check(A, H)
    if not chk.closed:
        raise NotASubalgebra("subspace is not closed under the bracket",
                             {"triple": list(chk.witness),
                              "residual": dense_json(chk.residual, A.dim)})
    split = split or quotient_split(A, H)
    table = {}
    for t in itertools.combinations(range(H.rank), 3):
        v = A.bracket(*(H.basis[i] for i in t))
        if v:
            table[t] = split.subspace_coords(v)
    return ThreeLieAlgebra(H.rank, table)
