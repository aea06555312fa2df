"""Cochains, the Nijenhuis-Richardson bracket and the morphism L-infinity algebra.

A degree-p cochain is a multilinear map
``(wedge^2 V)^{(x) p} (x) V -> W``.  Its table is keyed by
``(pair_1, ..., pair_p, x)`` (pair indices from :class:`PairBasis`, ``x`` a basis
index) and holds sparse output vectors; absent keys are zero.

Two kinds of cochain appear:

* ``kind="g"``: W = V, elements of the graded Lie algebra with the NR bracket;
* ``kind="h"``: V = g, W = h, elements of the abelian subalgebra F of
  ``Hom(... (g+h) ..., g+h)`` that carries the brackets l1 and l3.

Brackets of F-elements are formed by lifting into the cochains of g (+) h,
bracketing there and projecting back.  Those intermediate products are lazy:
entries are computed on demand and cached, so projecting only touches the
g-inputs it needs.
"""
from __future__ import annotations

import itertools
from fractions import Fraction

from .algebra import LinearMap, ThreeLieAlgebra, pair_basis
from .errors import DegreeOverflowGuard, DimensionMismatch
from .exact import ONE, ZERO, add_into, dense

MAX_DEGREE = 4


class _Cochain:
    """Evaluation machinery shared by stored and lazy cochains."""

    degree: int
    dim: int
    target_dim: int
    kind: str

    def entry(self, key: tuple) -> dict:
        raise NotImplementedError

    @property
    def pairs(self):
        return pair_basis(self.dim)

    def evaluate(self, pair_args, x: dict) -> dict:
        """Value on sparse pair-vectors ``pair_args`` and sparse vector ``x``."""
        if len(pair_args) != self.degree:
            raise DimensionMismatch(f"degree {self.degree} cochain got {len(pair_args)} pair arguments")
        out = {}
        for combo in itertools.product(*(a.items() for a in pair_args), x.items()):
            coef = ONE
            for _, c in combo:
                coef *= c
            if coef:
                v = self.entry(tuple(k for k, _ in combo))
                if v:
                    add_into(out, v, coef)
        return out

    def keys(self):
        """Every basis key in lexicographic order."""
        N = len(self.pairs)
        for ps in itertools.product(range(N), repeat=self.degree):
            for x in range(self.dim):
                yield ps + (x,)

    def materialize(self) -> "GCochain":
        table = {}
        for key in self.keys():
            v = self.entry(key)
            if v:
                table[key] = dict(v)
        return GCochain(self.degree, self.dim, self.target_dim, table, kind=self.kind)


class GCochain(_Cochain):
    """Stored cochain; immutable after construction."""

    def __init__(self, degree: int, dim: int, target_dim: int, table=None, *, kind: str = "g"):
        if kind not in ("g", "h"):
            raise ValueError("kind must be 'g' or 'h'")
        if kind == "g" and dim != target_dim:
            raise DimensionMismatch("g-valued cochains need target_dim == dim")
        self.degree = degree
        self.dim = dim
        self.target_dim = target_dim
        self.kind = kind
        N = len(pair_basis(dim))
        clean = {}
        for key, vec in (table or {}).items():
            key = tuple(key)
            if (len(key) != degree + 1 or any(not 0 <= k < N for k in key[:-1])
                    or not 0 <= key[-1] < dim):
                raise DimensionMismatch(f"bad cochain key {key} for degree {degree}, dim {dim}")
            vec = {l: Fraction(v) for l, v in vec.items() if v}
            if any(not 0 <= l < target_dim for l in vec):
                raise DimensionMismatch(f"output index out of range at key {key}")
            if vec:
                clean[key] = vec
        self.table = clean

    def entry(self, key):
        return self.table.get(key, {})

    def materialize(self):
        return self

    # -- construction helpers --

    @classmethod
    def zero(cls, degree, dim, target_dim, kind="g"):
        return cls(degree, dim, target_dim, {}, kind=kind)

    @classmethod
    def from_function(cls, degree, dim, target_dim, fn, kind="g"):
        """Tabulate ``fn(key) -> sparse vector`` over all basis keys."""
        proto = cls.zero(degree, dim, target_dim, kind)
        return cls(degree, dim, target_dim, {k: fn(k) for k in proto.keys()}, kind=kind)

    @classmethod
    def from_vector(cls, vec: dict, degree, dim, target_dim, kind="h"):
        """Inverse of :meth:`to_vector`."""
        N = len(pair_basis(dim))
        table = {}
        for flat, v in vec.items():
            flat, comp = divmod(flat, target_dim)
            flat, x = divmod(flat, dim)
            ps = []
            for _ in range(degree):
                flat, p = divmod(flat, N)
                ps.append(p)
            table.setdefault(tuple(reversed(ps)) + (x,), {})[comp] = v
        return cls(degree, dim, target_dim, table, kind=kind)

    def to_vector(self) -> dict:
        """Coordinates in the lexicographic (pairs, x, output) basis."""
        return {flat_index(key, c, len(self.pairs), self.dim, self.target_dim): v
                for key, vec in self.table.items() for c, v in vec.items()}

    # -- vector space structure --

    def _check_compatible(self, other):
        if (self.degree, self.dim, self.target_dim, self.kind) != \
                (other.degree, other.dim, other.target_dim, other.kind):
            raise DimensionMismatch("cochains live in different spaces")

    def __add__(self, other):
        self._check_compatible(other)
        table = {k: dict(v) for k, v in self.table.items()}
        for k, v in other.table.items():
            add_into(table.setdefault(k, {}), v)
        return GCochain(self.degree, self.dim, self.target_dim, table, kind=self.kind)

    def __neg__(self):
        return self.scaled(-1)

    def __sub__(self, other):
        return self + (-other)

    def scaled(self, c):
        c = Fraction(c)
        return GCochain(self.degree, self.dim, self.target_dim,
                        {k: {l: c * x for l, x in v.items()} for k, v in self.table.items()},
                        kind=self.kind)

    def __rmul__(self, c):
        return self.scaled(c)

    def __eq__(self, other):
        if not isinstance(other, GCochain):
            return NotImplemented
        return ((self.degree, self.dim, self.target_dim, self.kind, self.table)
                == (other.degree, other.dim, other.target_dim, other.kind, other.table))

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.table

    @property
    def nnz(self) -> int:
        return sum(len(v) for v in self.table.values())

    def __repr__(self):
        return (f"GCochain(degree={self.degree}, dim={self.dim}, target_dim={self.target_dim}, "
                f"kind={self.kind!r}, nnz={self.nnz})")


def flat_index(key, comp, n_pairs, dim, target_dim) -> int:
    idx = 0
    for p in key[:-1]:
        idx = idx * n_pairs + p
    return (idx * dim + key[-1]) * target_dim + comp


def algebra_cochain(A: ThreeLieAlgebra) -> GCochain:
    """pi as a degree-1 g-valued cochain."""
    pb = A.pairs
    table = {}
    for n, (i, j) in enumerate(pb.pairs):
        for k in range(A.dim):
            v = A.basis_bracket(i, j, k)
            if v:
                table[(n, k)] = v
    return GCochain(1, A.dim, A.dim, table)


def map_cochain(f: LinearMap, kind: str = "h") -> GCochain:
    """A linear map as a degree-0 cochain (``kind="g"`` needs a square map)."""
    table = {(j,): f.column(j) for j in range(f.source_dim)}
    return GCochain(0, f.source_dim, f.target_dim, table, kind=kind)


def cochain_map(c: GCochain) -> LinearMap:
    if c.degree != 0:
        raise DimensionMismatch("only degree-0 cochains are linear maps")
    return LinearMap(c.dim, c.target_dim,
                     [[c.entry((j,)).get(i, ZERO) for j in range(c.dim)]
                      for i in range(c.target_dim)])


# -- the NR product -----------------------------------------------------------

def shuffles(n: int, k: int):
    """(k, n-k)-shuffles of range(n) as (first, rest, sign); both blocks increasing."""
    for first in itertools.combinations(range(n), k):
        rest = tuple(i for i in range(n) if i not in first)
        inv = sum(f - i for i, f in enumerate(first))
        yield first, rest, (-1 if inv % 2 else 1)


def _product_entry(P: _Cochain, Q: _Cochain, key: tuple) -> dict:
    """(P o Q)(X_1, ..., X_{p+q}, x) on basis arguments."""
    p, q = P.degree, Q.degree
    pb = P.pairs
    Xs, x = key[:-1], key[-1]
    units = [{X: ONE} for X in Xs]
    out = {}
    # insertion of Q into a pair slot: Q(..., x_j) ^ y_j + x_j ^ Q(..., y_j)
    for k in range(1, p + 1):
        sign_k = -1 if ((k - 1) * q) % 2 else 1
        j = k + q - 1                      # 0-based position of X_{k+q}
        a, b = pb.pairs[Xs[j]]
        tail = units[j + 1:]
        for first, mid, sig in shuffles(j, k - 1):
            q_keys = tuple(Xs[m] for m in mid)
            qa = Q.entry(q_keys + (a,))
            qb = Q.entry(q_keys + (b,))
            if not qa and not qb:
                continue
            slot = pb.wedge(qa, {b: ONE})
            add_into(slot, pb.wedge({a: ONE}, qb))
            if slot:
                args = [units[m] for m in first] + [slot] + tail
                add_into(out, P.evaluate(args, {x: ONE}), sign_k * sig)
    # insertion of Q into the last slot
    sign_pq = -1 if (p * q) % 2 else 1
    for first, rest, sig in shuffles(p + q, p):
        qv = Q.entry(tuple(Xs[m] for m in rest) + (x,))
        if qv:
            add_into(out, P.evaluate([units[m] for m in first], qv), sign_pq * sig)
    return out


def _check_degree(p, q, max_degree):
    if p + q > max_degree:
        raise DegreeOverflowGuard(f"product degree {p + q} exceeds the cap {max_degree}",
                                  {"degree": p + q, "max_degree": max_degree})


def _check_g_pair(P, Q):
    if P.dim != Q.dim or P.kind != "g" or Q.kind != "g":
        raise DimensionMismatch("NR bracket needs g-valued cochains on the same carrier")


class LazyBracket(_Cochain):
    """[P, Q] = P o Q - (-1)^{pq} Q o P, one basis entry at a time (cached)."""

    kind = "g"

    def __init__(self, P: _Cochain, Q: _Cochain, max_degree: int = MAX_DEGREE):
        _check_g_pair(P, Q)
        _check_degree(P.degree, Q.degree, max_degree)
        self.P, self.Q = P, Q
        self.degree = P.degree + Q.degree
        self.dim = self.target_dim = P.dim
        self._sign = -1 if (P.degree * Q.degree) % 2 else 1
        self._cache = {}

    def entry(self, key):
        v = self._cache.get(key)
        if v is None:
            v = _product_entry(self.P, self.Q, key)
            add_into(v, _product_entry(self.Q, self.P, key), -self._sign)
            self._cache[key] = v
        return v


def nr_product(P: GCochain, Q: GCochain, *, max_degree: int = MAX_DEGREE) -> GCochain:
    _check_g_pair(P, Q)
    _check_degree(P.degree, Q.degree, max_degree)
    proto = GCochain.zero(P.degree + Q.degree, P.dim, P.dim)
    return GCochain(proto.degree, P.dim, P.dim,
                    {k: _product_entry(P, Q, k) for k in proto.keys()})


def nr_bracket(P: GCochain, Q: GCochain, *, max_degree: int = MAX_DEGREE) -> GCochain:
    return LazyBracket(P, Q, max_degree).materialize()


def structure_mc_residual(A) -> GCochain:
    """(1/2)[pi, pi]; zero exactly when pi satisfies the fundamental identity.

    ``A`` may be an unvalidated ThreeLieAlgebra or a degree-1 g-valued cochain.
    """
    pi = algebra_cochain(A) if isinstance(A, ThreeLieAlgebra) else A
    return nr_bracket(pi, pi).scaled(Fraction(1, 2))


# -- the morphism L-infinity algebra ------------------------------------------

class MorphismLInfinity:
    """Derived brackets on F = Hom((wedge^2 g)^{(x) n} (x) g, h).

    l1(a) = [pi, a] and l3(a, b, c) = [[[mu, a], b], c], computed in the cochains
    of g (+) h and projected onto F; l2 and all higher brackets vanish.
    Intermediate brackets are cached per argument tuple, so repeated calls with
    the same f (twisted brackets, coboundaries on whole bases) stay cheap.
    """

    def __init__(self, source: ThreeLieAlgebra, target: ThreeLieAlgebra,
                 max_degree: int = MAX_DEGREE):
        self.source, self.target = source, target
        self.d, self.e = source.dim, target.dim
        self.D = self.d + self.e
        self.max_degree = max_degree
        self._pbG = pair_basis(self.D)
        self._gpair = [self._pbG.index(i, j)[0] for i, j in source.pairs.pairs]
        self._hpair = [self._pbG.index(self.d + a, self.d + b)[0] for a, b in target.pairs.pairs]
        self.pi = self._embed(algebra_cochain(source), self._gpair, 0)
        self.mu = self._embed(algebra_cochain(target), self._hpair, self.d)
        self._nodes = {}

    def _embed(self, c: GCochain, pair_map, offset) -> GCochain:
        table = {}
        for key, vec in c.table.items():
            gkey = tuple(pair_map[p] for p in key[:-1]) + (key[-1] + offset,)
            table[gkey] = {l + offset: v for l, v in vec.items()}
        return GCochain(c.degree, self.D, self.D, table)

    def lift(self, a: GCochain) -> GCochain:
        """The isomorphism onto L: (X_1, ..., (x, u)) -> (0, a(x-parts))."""
        self._check_F(a)
        table = {}
        for key, vec in a.table.items():
            gkey = tuple(self._gpair[p] for p in key[:-1]) + (key[-1],)
            table[gkey] = {l + self.d: v for l, v in vec.items()}
        return GCochain(a.degree, self.D, self.D, table)

    def project(self, c: _Cochain) -> GCochain:
        """Restriction to g-inputs followed by the h-component of the output."""
        Ng = len(self._gpair)
        table = {}
        for ps in itertools.product(range(Ng), repeat=c.degree):
            gps = tuple(self._gpair[p] for p in ps)
            for x in range(self.d):
                v = c.entry(gps + (x,))
                hv = {l - self.d: val for l, val in v.items() if l >= self.d}
                if hv:
                    table[ps + (x,)] = hv
        return GCochain(c.degree, self.d, self.e, table, kind="h")

    def _check_F(self, a):
        if a.kind != "h" or a.dim != self.d or a.target_dim != self.e:
            raise DimensionMismatch(
                f"expected an element of F over dims ({self.d}, {self.e}), got {a!r}")

    def _node(self, base: str, args: tuple) -> _Cochain:
        """Cached lazy bracket [[[base, args0], args1], ...]."""
        key = (base,) + tuple(id(a) for a in args)
        hit = self._nodes.get(key)
        if hit is not None:
            return hit[0]
        if args:
            prev = self._node(base, args[:-1])
            node = LazyBracket(prev, self.lift(args[-1]), self.max_degree)
        else:
            node = self.pi if base == "pi" else self.mu
        self._nodes[key] = (node, args)    # keep args alive so ids stay unique
        return node

    def l1(self, a: GCochain) -> GCochain:
        return self.project(self._node("pi", (a,)))

    def l2(self, a: GCochain, b: GCochain) -> GCochain:
        self._check_F(a)
        self._check_F(b)
        return GCochain.zero(a.degree + b.degree + 1, self.d, self.e, kind="h")

    def l3(self, a: GCochain, b: GCochain, c: GCochain) -> GCochain:
        return self.project(self._node("mu", (a, b, c)))

    def bracket(self, k: int, args) -> GCochain | None:
        """l_k(args); None stands for the zero bracket when k is 2 or at least 4."""
        args = tuple(args)
        if len(args) != k:
            raise ValueError(f"l_{k} takes {k} arguments, got {len(args)}")
        if k == 1:
            return self.l1(*args)
        if k == 3:
            return self.l3(*args)
        for a in args:
            self._check_F(a)
        return None

    def mc_residual(self, f: GCochain) -> GCochain:
        """l1(f) + (1/6) l3(f, f, f)."""
        return self.l1(f) + self.l3(f, f, f).scaled(Fraction(1, 6))

    def twisted(self, k: int, f: GCochain, args) -> GCochain:
        """l_k^f(args) = sum_n (1/n!) l_{k+n}(f, ..., f, args); only l1, l3 contribute."""
        args = tuple(args)
        if len(args) != k:
            raise ValueError(f"l_{k}^f takes {k} arguments, got {len(args)}")
        self._check_F(f)
        for a in args:
            self._check_F(a)
        out_degree = sum(a.degree for a in args) + 1
        total = GCochain.zero(out_degree, self.d, self.e, kind="h")
        for m in (1, 3):
            n = m - k
            if n < 0:
                continue
            term = self.bracket(m, (f,) * n + args)
            if term is not None:
                total = total + term.scaled(Fraction(1, _factorial(n)))
        return total

    def clear_cache(self):
        self._nodes.clear()


def _factorial(n):
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


def derived_l1(theta: GCochain, source: ThreeLieAlgebra, target: ThreeLieAlgebra) -> GCochain:
    return MorphismLInfinity(source, target).l1(theta)


def derived_l3(a1, a2, a3, source: ThreeLieAlgebra, target: ThreeLieAlgebra) -> GCochain:
    return MorphismLInfinity(source, target).l3(a1, a2, a3)


def _as_F(f, d, e) -> GCochain:
    if isinstance(f, LinearMap):
        if (f.source_dim, f.target_dim) != (d, e):
            raise DimensionMismatch(f"map is {f.source_dim}->{f.target_dim}, expected {d}->{e}")
        return map_cochain(f)
    return f


def morphism_mc_residual(f, source: ThreeLieAlgebra, target: ThreeLieAlgebra) -> GCochain:
    """l1(f) + (1/6) l3(f,f,f) as an F-cochain of degree 1."""
    L = MorphismLInfinity(source, target)
    return L.mc_residual(_as_F(f, source.dim, target.dim))


def twisted_bracket(k: int, f, args, source: ThreeLieAlgebra, target: ThreeLieAlgebra,
                    *, linf: MorphismLInfinity | None = None) -> GCochain:
    L = linf or MorphismLInfinity(source, target)
    return L.twisted(k, _as_F(f, source.dim, target.dim), args)


def residual_table(c: GCochain) -> dict:
    """Readable form {(pair, ..., x): dense output} of the nonzero entries."""
    return {k: dense(v, c.target_dim) for k, v in c.table.items()}
