"""Morphism and representation cochain complexes as exact sparse matrices.

Cochain coordinates follow :func:`threelie.nr.flat_index`: a degree-n cochain
(n >= 1) is a table over keys ``(pair_1, ..., pair_{n-1}, x)`` with values in
the coefficient space, flattened lexicographically with the output component
varying fastest.  C^0(f) = wedge^2 g (+) wedge^2 h lists g-pairs first.

Both differentials come out of one engine parameterised by the action
``(a, b) -> matrix``: for the representation complex the action is rho, for a
morphism f it is ``mu(f e_a, f e_b, .)``.  The NR route in :mod:`threelie.nr`
is kept separate so the two can be checked against each other.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .algebra import (LinearMap, Subspace, ThreeLieAlgebra, check_morphism,
                      direct_sum, pair_basis, quotient_split, restrict_algebra)
from .errors import DegreeOverflowGuard, DimensionMismatch, NotAMorphism
from .exact import ONE, SparseMatrix, add_into, dense_json
from .nr import GCochain, MorphismLInfinity, flat_index, map_cochain
from .representations import Representation, induced_quotient_rep

MAX_DEGREE = 4

RIGID = "rigid"
STABLE = "stable"
INCONCLUSIVE = "criterion inconclusive"


# -- the coboundary engine ----------------------------------------------------

class _Coboundary:
    """The coboundary of C^n(g, V) for an action ``act(a, b) -> m x m matrix``.

    Values of the cochain being differentiated are dicts ``{(c, tag): coef}``.
    With a concrete cochain ``tag`` is a dummy; with the symbolic cochain used
    for assembly ``tag`` is the input coordinate, which turns each output entry
    into a row of the matrix.
    """

    def __init__(self, algebra: ThreeLieAlgebra, module_dim: int, act):
        self.A = algebra
        self.m = module_dim
        self._act = act
        self._act_cache = {}

    def act(self, a: int, b: int):
        key = (a, b)
        if key not in self._act_cache:
            M = self._act(a, b)
            self._act_cache[key] = M if M is not None and any(any(r) for r in M) else None
        return self._act_cache[key]

    def _theta(self, value, pair_args, last):
        out = {}
        for combo in itertools.product(*(a.items() for a in pair_args), last.items()):
            coef = ONE
            for _, c in combo:
                coef *= c
            if coef:
                v = value(tuple(k for k, _ in combo))
                if v:
                    add_into(out, v, coef)
        return out

    def _act_on(self, out, a, b, val, coef):
        M = self.act(a, b)
        if M is None or not val:
            return
        for (c, tag), v in val.items():
            for r in range(self.m):
                x = M[r][c]
                if x:
                    add_into(out, {(r, tag): x * v}, coef)

    def at(self, n: int, key: tuple, value) -> dict:
        """(d theta)(X_1, ..., X_n, x) for basis arguments; theta has n-1 pair slots."""
        A = self.A
        pb = A.pairs
        Xs, x = key[:-1], key[-1]
        P = [pb.pairs[X] for X in Xs]
        units = [{X: ONE} for X in Xs]
        ex = {x: ONE}
        out = {}
        for i in range(n):
            sign = -1 if i % 2 == 0 else 1          # (-1)^i with i 1-based
            xi, yi = P[i]
            rest = units[:i] + units[i + 1:]
            for j in range(i + 1, n):
                xj, yj = P[j]
                slot = pb.wedge(A.basis_bracket(xi, yi, xj), {yj: ONE})
                add_into(slot, pb.wedge({xj: ONE}, A.basis_bracket(xi, yi, yj)))
                if slot:
                    args = list(rest)
                    args[j - 1] = slot
                    add_into(out, self._theta(value, args, ex), sign)
            bx = A.basis_bracket(xi, yi, x)
            if bx:
                add_into(out, self._theta(value, rest, bx), sign)
            self._act_on(out, xi, yi, self._theta(value, rest, ex), -sign)
        xn, yn = P[n - 1]
        head = units[:n - 1]
        last = -1 if n % 2 == 0 else 1               # (-1)^{n+1}
        self._act_on(out, yn, x, self._theta(value, head, {xn: ONE}), last)
        self._act_on(out, x, xn, self._theta(value, head, {yn: ONE}), last)
        return out

    def keys(self, n):
        N = len(self.A.pairs)
        for ps in itertools.product(range(N), repeat=n - 1):
            for x in range(self.A.dim):
                yield ps + (x,)

    def matrix(self, n: int) -> SparseMatrix:
        d, m = self.A.dim, self.m
        N = len(self.A.pairs)

        def symbolic(k):
            base = flat_index(k, 0, N, d, m)
            return {(c, base + c): ONE for c in range(m)}

        triplets = []
        for key in self.keys(n + 1):
            for (r, j), v in self.at(n, key, symbolic).items():
                triplets.append((flat_index(key, r, N, d, m), j, v))
        return SparseMatrix.from_triplets(N ** n * d * m, N ** (n - 1) * d * m, triplets)

    def apply(self, n: int, theta: GCochain) -> GCochain:
        if theta.degree != n - 1 or theta.dim != self.A.dim or theta.target_dim != self.m:
            raise DimensionMismatch(f"cochain {theta!r} is not in C^{n} with dims "
                                    f"({self.A.dim}, {self.m})")

        def concrete(k):
            return {(c, 0): v for c, v in theta.entry(k).items()}

        table = {}
        for key in self.keys(n + 1):
            val = self.at(n, key, concrete)
            if val:
                table[key] = {r: v for (r, _), v in val.items()}
        return GCochain(n, self.A.dim, self.m, table, kind=theta.kind)


def _morphism_action(f: LinearMap, target: ThreeLieAlgebra):
    def act(a, b):
        return target.ad(f.column(a), f.column(b))
    return act


# -- complexes ----------------------------------------------------------------

class _Complex:
    kind: str
    start: int
    max_degree: int

    def __init__(self):
        self._diff = {}
        self._rank = {}

    def _guard(self, n):
        if n > self.max_degree:
            raise DegreeOverflowGuard(f"degree {n} exceeds the cap {self.max_degree}",
                                      {"degree": n, "max_degree": self.max_degree})
        if n < self.start:
            raise ValueError(f"{self.kind} complex starts in degree {self.start}")

    def differential(self, n: int) -> SparseMatrix:
        self._guard(n)
        if n not in self._diff:
            self._diff[n] = self._assemble(n)
        return self._diff[n]

    def rank(self, n: int) -> int:
        """Rank of the differential leaving degree n (0 below the start)."""
        if n < self.start:
            return 0
        if n not in self._rank:
            self._rank[n] = self.differential(n).rank()
        return self._rank[n]

    def dims(self, top: int) -> dict:
        return {n: self.dim(n) for n in range(self.start, top + 1)}


class MorphismComplex(_Complex):
    """C^*(f) for a morphism f: (g, pi) -> (h, mu)."""

    kind = "morphism"
    start = 0

    def __init__(self, f: LinearMap, source: ThreeLieAlgebra, target: ThreeLieAlgebra,
                 *, max_degree: int = MAX_DEGREE, check: bool = True):
        super().__init__()
        if check:
            defect = check_morphism(f, source, target)
            if not defect.is_morphism:
                t, v = next(iter(defect.defects.items()))
                raise NotAMorphism(f"map is not a morphism: defect at basis triple {t}",
                                   {"triple": list(t), "defect": dense_json(v, target.dim)})
        self.f, self.source, self.target = f, source, target
        self.d, self.e = source.dim, target.dim
        self.max_degree = max_degree
        self.engine = _Coboundary(source, self.e, _morphism_action(f, target))

    def dim(self, n: int) -> int:
        Ng, Nh = len(self.source.pairs), len(self.target.pairs)
        if n == 0:
            return Ng + Nh
        return Ng ** (n - 1) * self.d * self.e

    def _assemble(self, n):
        if n == 0:
            return delta0_matrix(self.f, self.source, self.target)
        return self.engine.matrix(n)

    def apply(self, n: int, theta: GCochain) -> GCochain:
        self._guard(n)
        return self.engine.apply(n, theta)

    def descriptor(self, top: int = 3) -> dict:
        return {"kind": "morphism-complex", "source_dim": self.d, "target_dim": self.e,
                "dims": self.dims(top)}


class RepresentationComplex(_Complex):
    """C^*(g, V) for a representation rho, starting in degree 1."""

    kind = "representation"
    start = 1

    def __init__(self, rho: Representation, *, max_degree: int = MAX_DEGREE):
        super().__init__()
        self.rho = rho
        self.algebra = rho.algebra
        self.max_degree = max_degree
        self.engine = _Coboundary(rho.algebra, rho.module_dim, rho.basis_action)

    def dim(self, n: int) -> int:
        if n < 1:
            return 0
        return len(self.algebra.pairs) ** (n - 1) * self.algebra.dim * self.rho.module_dim

    def _assemble(self, n):
        return self.engine.matrix(n)

    def apply(self, n: int, theta: GCochain) -> GCochain:
        self._guard(n)
        return self.engine.apply(n, theta)

    def descriptor(self, top: int = 3) -> dict:
        return {"kind": "representation-complex", "algebra_dim": self.algebra.dim,
                "module_dim": self.rho.module_dim, "dims": self.dims(top)}


# -- single operators ---------------------------------------------------------

def delta0_matrix(f: LinearMap, source: ThreeLieAlgebra, target: ThreeLieAlgebra) -> SparseMatrix:
    d, e = source.dim, target.dim
    cols = {}
    gp, hp = source.pairs.pairs, target.pairs.pairs
    for n, (a, b) in enumerate(gp):
        col = {}
        for z in range(d):
            for r, v in f.apply(source.basis_bracket(a, b, z)).items():
                col[z * e + r] = -v
        cols[n] = col
    for n, (a, b) in enumerate(hp):
        col = {}
        for z in range(d):
            for r, v in target.bracket({a: ONE}, {b: ONE}, f.column(z)).items():
                col[z * e + r] = v
        cols[len(gp) + n] = col
    return SparseMatrix(d * e, len(gp) + len(hp), cols)


def _wedge_vector(X, dim) -> dict:
    """Accept {n: coef} over pair indices or {(i, j): coef} / [(i, j, coef)] over index pairs."""
    pb = pair_basis(dim)
    items = X.items() if isinstance(X, dict) else ((tuple(t[:2]), t[2]) for t in X)
    out = {}
    for k, c in items:
        if isinstance(k, tuple):
            i, j = k
            if not (0 <= i < dim and 0 <= j < dim):
                raise DimensionMismatch(f"wedge index {(i, j)} out of range for dimension {dim}")
            add_into(out, pb.unit(i, j), c)
        else:
            if not 0 <= k < len(pb):
                raise DimensionMismatch(f"pair index {k} out of range")
            add_into(out, {k: c})
    return out


def delta0(X, U, f: LinearMap, source: ThreeLieAlgebra, target: ThreeLieAlgebra) -> GCochain:
    """z -> mu(U, f z) - f(pi(X, z)) as a C^1(f) cochain."""
    if (f.source_dim, f.target_dim) != (source.dim, target.dim):
        raise DimensionMismatch("map shape does not match the algebras")
    Xv, Uv = _wedge_vector(X, source.dim), _wedge_vector(U, target.dim)
    gp, hp = source.pairs.pairs, target.pairs.pairs
    table = {}
    for z in range(source.dim):
        out = {}
        for n, c in Xv.items():
            a, b = gp[n]
            add_into(out, f.apply(source.basis_bracket(a, b, z)), -c)
        fz = f.column(z)
        for n, c in Uv.items():
            a, b = hp[n]
            add_into(out, target.bracket({a: ONE}, {b: ONE}, fz), c)
        if out:
            table[(z,)] = out
    return GCochain(0, source.dim, target.dim, table, kind="h")


def c0_vector(X, U, source_dim: int, target_dim: int) -> dict:
    """Coordinates of (X, U) in C^0(f)."""
    Ng = len(pair_basis(source_dim))
    out = dict(_wedge_vector(X, source_dim))
    for n, c in _wedge_vector(U, target_dim).items():
        out[Ng + n] = c
    return out


def delta_n(theta: GCochain, f: LinearMap, source: ThreeLieAlgebra,
            target: ThreeLieAlgebra) -> GCochain:
    """The explicit coboundary of theta in C^n(f), n = theta.degree + 1 >= 1."""
    engine = _Coboundary(source, target.dim, _morphism_action(f, target))
    return engine.apply(theta.degree + 1, theta)


def partial_rep_n(theta: GCochain, rho: Representation) -> GCochain:
    """The coboundary of theta in C^n(g, V), n = theta.degree + 1 >= 1."""
    engine = _Coboundary(rho.algebra, rho.module_dim, rho.basis_action)
    return engine.apply(theta.degree + 1, theta)


def delta_twisted(theta: GCochain, f: LinearMap, linf: MorphismLInfinity) -> GCochain:
    """(-1)^{n-1} l_1^f(theta): the coboundary through derived brackets."""
    n = theta.degree + 1
    out = linf.twisted(1, _cached_f(linf, f), (theta,))
    return out if n % 2 == 1 else -out


def _cached_f(linf, f):
    # one cochain object per map so the bracket cache on linf is reused
    cache = linf.__dict__.setdefault("_f_cochains", {})
    key = (f.source_dim, f.target_dim, f.matrix)
    if key not in cache:
        cache[key] = map_cochain(f)
    return cache[key]


def assemble_matrix(cx: _Complex, n: int) -> SparseMatrix:
    return cx.differential(n)


# -- reports ------------------------------------------------------------------

@dataclass
class CohomologyReport:
    degree: int
    dimC: int
    dimZ: int
    dimB: int
    verdict: str | None = None
    extra: dict = field(default_factory=dict)
    matrices: dict | None = field(default=None, repr=False)

    @property
    def dimH(self) -> int:
        return self.dimZ - self.dimB

    def to_json(self) -> dict:
        out = {"degree": self.degree, "dimC": self.dimC, "dimZ": self.dimZ,
               "dimB": self.dimB, "dimH": self.dimH}
        if self.verdict is not None:
            out["verdict"] = self.verdict
        out.update(self.extra)
        return out


def cohomology_report(cx: _Complex, n: int, *, attach: bool = False) -> CohomologyReport:
    if n < cx.start:
        raise ValueError(f"{cx.kind} complex starts in degree {cx.start}")
    dimC = cx.dim(n)
    dimZ = dimC - cx.rank(n)
    dimB = cx.rank(n - 1)
    mats = None
    if attach:
        mats = {n: cx.differential(n)}
        if n - 1 >= cx.start:
            mats[n - 1] = cx.differential(n - 1)
    return CohomologyReport(n, dimC, dimZ, dimB, matrices=mats)


def cohomology_table(cx: _Complex, top: int) -> list:
    return [cohomology_report(cx, n) for n in range(cx.start, top + 1)]


# -- verdicts -----------------------------------------------------------------

def rigidity(f, source, target, *, max_degree: int = MAX_DEGREE) -> CohomologyReport:
    """H^1(f) = 0 is the hypothesis of the rigidity criterion."""
    rep = cohomology_report(MorphismComplex(f, source, target, max_degree=max_degree), 1)
    rep.verdict = RIGID if rep.dimH == 0 else INCONCLUSIVE
    return rep


def stability(f, source, target, *, max_degree: int = MAX_DEGREE) -> CohomologyReport:
    """H^2(f) = 0 is the hypothesis of the stability criterion; dim Z^1 is reported too."""
    cx = MorphismComplex(f, source, target, max_degree=max_degree)
    rep = cohomology_report(cx, 2)
    rep.verdict = STABLE if rep.dimH == 0 else INCONCLUSIVE
    rep.extra["dimZ1"] = cohomology_report(cx, 1).dimZ
    return rep


def subalgebra_complex(A: ThreeLieAlgebra, H: Subspace, split=None,
                       *, max_degree: int = MAX_DEGREE) -> RepresentationComplex:
    return RepresentationComplex(induced_quotient_rep(A, H, split), max_degree=max_degree)


def subalgebra_stability(A: ThreeLieAlgebra, H: Subspace, split=None,
                         *, max_degree: int = MAX_DEGREE) -> CohomologyReport:
    cx = subalgebra_complex(A, H, split, max_degree=max_degree)
    rep = cohomology_report(cx, 2)
    rep.verdict = STABLE if rep.dimH == 0 else INCONCLUSIVE
    rep.extra["dimZ1"] = cohomology_report(cx, 1).dimZ
    return rep


# -- pullback -----------------------------------------------------------------

def pullback(theta: GCochain, f: LinearMap) -> GCochain:
    """f^* theta = theta(f x_1 ^ f y_1, ..., f x); theta in C^n(h, h)."""
    d, e = f.source_dim, f.target_dim
    if theta.dim != e or theta.target_dim != e:
        raise DimensionMismatch(f"cochain lives on dimension {theta.dim}, map target is {e}")
    pbh = pair_basis(e)
    images = [pbh.wedge(f.column(a), f.column(b)) for a, b in pair_basis(d).pairs]
    table = {}
    for ps in itertools.product(range(len(images)), repeat=theta.degree):
        args = [images[p] for p in ps]
        if any(not a for a in args):
            continue
        for x in range(d):
            v = theta.evaluate(args, f.column(x))
            if v:
                table[ps + (x,)] = v
    return GCochain(theta.degree, d, e, table, kind="h")


def pullback_matrix(f: LinearMap, n: int) -> SparseMatrix:
    """Matrix of f^*: C^n(h, h) -> C^n(f) in the canonical bases (n >= 1)."""
    d, e = f.source_dim, f.target_dim
    Nh = len(pair_basis(e))
    cols = {}
    for j in range(Nh ** (n - 1) * e * e):
        basis = GCochain.from_vector({j: ONE}, n - 1, e, e, kind="g")
        cols[j] = pullback(basis, f).to_vector()
    return SparseMatrix(len(pair_basis(d)) ** (n - 1) * d * e, Nh ** (n - 1) * e * e, cols)


# -- the ambient formula for subalgebras ---------------------------------------

def tilde_partial(alpha: GCochain, A: ThreeLieAlgebra, H: Subspace, split=None) -> GCochain:
    """Degree-2 coboundary of alpha in C^2(H, g/H) written with ambient brackets.

    Every bracket that is fed back into alpha is first corrected by (1 - s p),
    which lands it in H; the action terms are p(pi(., ., s(.))).
    """
    split = split or quotient_split(A, H)
    restrict_algebra(A, H, split)           # raises NotASubalgebra
    k, q = H.rank, split.quotient_dim
    if alpha.degree != 1 or alpha.dim != k or alpha.target_dim != q:
        raise DimensionMismatch(f"alpha must be a C^2 cochain on dims ({k}, {q}), got {alpha!r}")
    pb = pair_basis(k)
    B = H.basis
    br = A.bracket

    def in_H(y):
        corr = add_into(dict(y), split.lift(split.project(y)), -ONE)
        return split.subspace_coords(corr)

    def al(pair_vec, w_coords):
        return alpha.evaluate([pair_vec], w_coords)

    def act(u, v, val):
        return split.project(br(u, v, split.lift(val)))

    table = {}
    for P1, P2 in itertools.product(range(len(pb)), repeat=2):
        a1, b1 = pb.pairs[P1]
        a2, b2 = pb.pairs[P2]
        u1, v1, u2, v2 = B[a1], B[b1], B[a2], B[b2]
        X1, X2 = {P1: ONE}, {P2: ONE}
        slot = pb.wedge(in_H(br(u1, v1, u2)), {b2: ONE})
        add_into(slot, pb.wedge({a2: ONE}, in_H(br(u1, v1, v2))))
        for c in range(k):
            w, wc = B[c], {c: ONE}
            out = {}
            add_into(out, al(slot, wc), -ONE)
            add_into(out, al(X2, in_H(br(u1, v1, w))), -ONE)
            add_into(out, al(X1, in_H(br(u2, v2, w))))
            add_into(out, act(u1, v1, al(X2, wc)))
            add_into(out, act(u2, v2, al(X1, wc)), -ONE)
            add_into(out, act(v2, w, al(X1, {a2: ONE})), -ONE)
            add_into(out, act(w, u2, al(X1, {b2: ONE})), -ONE)
            if out:
                table[(P1, P2, c)] = out
    return GCochain(2, k, q, table, kind="h")


# -- the graph of a morphism -----------------------------------------------------

def graph_subspace(f: LinearMap, source: ThreeLieAlgebra, target: ThreeLieAlgebra):
    """(g (+) h, G_f) with G_f spanned by (e_i, f e_i)."""
    G = direct_sum(source, target)
    d = source.dim
    basis = []
    for i in range(d):
        v = {i: ONE}
        for r, x in f.column(i).items():
            v[d + r] = x
        basis.append(v)
    return G, Subspace(G, basis)


def xi_matrix(n: int, f: LinearMap, split) -> SparseMatrix:
    """Xi_n: C^n(f) -> C^n(G_f, (g+h)/G_f), alpha -> [(0, alpha(.))] on graph arguments.

    The graph basis (e_i, f e_i) gives G_f the pair coordinates of g, so Xi_n
    acts entrywise by the matrix of u -> [(0, u)].
    """
    d, e = f.source_dim, f.target_dim
    q = split.quotient_dim
    N = len(pair_basis(d))
    P_h = [[split.p[r][d + c] for c in range(e)] for r in range(q)]
    cols = {}
    for ps in itertools.product(range(N), repeat=n - 1):
        for x in range(d):
            key = ps + (x,)
            for c in range(e):
                cols[flat_index(key, c, N, d, e)] = {
                    flat_index(key, r, N, d, q): P_h[r][c] for r in range(q) if P_h[r][c]}
    return SparseMatrix(N ** (n - 1) * d * q, N ** (n - 1) * d * e, cols)


@dataclass
class GraphCorrespondence:
    degree: int
    morphism: CohomologyReport
    graph: CohomologyReport
    xi: dict                  # n -> Xi_n
    bijective: dict           # n -> bool
    intertwines: dict         # n -> bool, Xi_{n+1} delta_n == partial_n Xi_n

    @property
    def dimensions_agree(self) -> bool:
        return self.morphism.dimH == self.graph.dimH

    def to_json(self) -> dict:
        return {"degree": self.degree, "morphism": self.morphism.to_json(),
                "graph": self.graph.to_json(), "dimensions_agree": self.dimensions_agree,
                "xi_bijective": {str(k): v for k, v in sorted(self.bijective.items())},
                "xi_intertwines": {str(k): v for k, v in sorted(self.intertwines.items())}}


def graph_correspondence(f: LinearMap, source: ThreeLieAlgebra, target: ThreeLieAlgebra,
                         k: int, *, max_degree: int = MAX_DEGREE) -> GraphCorrespondence:
    if k < 1:
        raise ValueError("the graph correspondence is stated for degrees k >= 1")
    mcx = MorphismComplex(f, source, target, max_degree=max_degree)
    G, Gf = graph_subspace(f, source, target)
    split = quotient_split(G, Gf)
    gcx = RepresentationComplex(induced_quotient_rep(G, Gf, split), max_degree=max_degree)
    xi, bij, inter = {}, {}, {}
    for n in range(max(1, k - 1), k + 2):
        xi[n] = xi_matrix(n, f, split)
        X = xi[n]
        bij[n] = X.shape[0] == X.shape[1] and X.rank() == X.shape[1]
    for n in range(max(1, k - 1), k + 1):
        inter[n] = xi[n + 1] @ mcx.differential(n) == gcx.differential(n) @ xi[n]
    return GraphCorrespondence(k, cohomology_report(mcx, k), cohomology_report(gcx, k),
                               xi, bij, inter)


__all__ = [
    "MAX_DEGREE", "RIGID", "STABLE", "INCONCLUSIVE", "MorphismComplex",
    "RepresentationComplex", "delta0", "delta0_matrix", "c0_vector", "delta_n",
    "partial_rep_n", "delta_twisted", "assemble_matrix", "CohomologyReport",
    "cohomology_report", "cohomology_table", "rigidity", "stability",
    "subalgebra_complex", "subalgebra_stability", "pullback", "pullback_matrix",
    "tilde_partial", "graph_subspace", "xi_matrix", "GraphCorrespondence",
    "graph_correspondence",
]
