"""First-order deformations of morphisms and subalgebras, computed with dual numbers."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .algebra import (LinearMap, QuotientSplit, Subspace, ThreeLieAlgebra,
                      check_morphism, pair_basis, quotient_split, restrict_algebra)
from .cohomology import delta0, delta_n
from .errors import BaseNotMorphism, DimensionMismatch, NotFirstOrderDeformation
from .exact import ZERO, add_into, as_matrix, dense_json, scalar
from .nr import GCochain, map_cochain


class Dual:
    """a + b t with t^2 = 0, over exact rationals."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        self.a = Fraction(a)
        self.b = Fraction(b)

    @staticmethod
    def _lift(x):
        return x if isinstance(x, Dual) else Dual(x)

    def __add__(self, other):
        o = self._lift(other)
        return Dual(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return Dual(-self.a, -self.b)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        return Dual(self.a * o.a, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def __eq__(self, other):
        try:
            o = self._lift(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __bool__(self):
        return bool(self.a or self.b)

    def __repr__(self):
        return f"Dual({self.a}, {self.b})"


def _dual_columns(base: LinearMap, velocity: LinearMap):
    """Columns of base + t velocity as sparse dicts of Dual numbers."""
    cols = []
    for j in range(base.source_dim):
        col = {}
        for i in range(base.target_dim):
            x = Dual(base.matrix[i][j], velocity.matrix[i][j])
            if x:
                col[i] = x
        cols.append(col)
    return cols


@dataclass(frozen=True)
class Jet1Map:
    base: LinearMap
    velocity: LinearMap

    def __post_init__(self):
        if (self.base.source_dim, self.base.target_dim) != \
                (self.velocity.source_dim, self.velocity.target_dim):
            raise DimensionMismatch("base and velocity must have the same shape")

    def columns(self):
        return _dual_columns(self.base, self.velocity)


@dataclass(frozen=True)
class JetResidual:
    """t-coefficients over basis triples i<j<k (sparse, nonzero only)."""

    dim: int
    target_dim: int
    tensor: dict

    @property
    def is_zero(self) -> bool:
        return not self.tensor

    def as_cochain(self) -> GCochain:
        """The residual as a cochain (x ^ y, z) -> R(x, y, z) on all basis keys."""
        pb = pair_basis(self.dim)
        table = {}
        for (i, j, k), v in self.tensor.items():
            for perm in itertools.permutations((i, j, k)):
                a, b, c = perm
                n, s = pb.index(a, b)
                sign = s * _perm_parity(perm)
                table[(n, c)] = {r: sign * x for r, x in v.items()}
        return GCochain(1, self.dim, self.target_dim, table, kind="h")


def _perm_parity(seq):
    inv = sum(1 for x, y in itertools.combinations(seq, 2) if x > y)
    return -1 if inv % 2 else 1


def jet_morphism_residual(jet: Jet1Map, source: ThreeLieAlgebra,
                          target: ThreeLieAlgebra) -> JetResidual:
    """t-coefficient of mu(f_t x, f_t y, f_t z) - f_t(pi(x, y, z)), f_t = f + t alpha."""
    f = jet.base
    if (f.source_dim, f.target_dim) != (source.dim, target.dim):
        raise DimensionMismatch("jet shape does not match the algebras")
    defect = check_morphism(f, source, target)
    if not defect.is_morphism:
        t, v = next(iter(defect.defects.items()))
        raise BaseNotMorphism(f"base map is not a morphism at basis triple {t}",
                              {"triple": list(t), "defect": dense_json(v, target.dim)})
    cols = jet.columns()
    tensor = {}
    for t in itertools.combinations(range(source.dim), 3):
        lhs = target.bracket(*(cols[i] for i in t))
        img = {}
        for l, c in source.basis_bracket(*t).items():
            add_into(img, cols[l], c)
        res = {}
        for r in set(lhs) | set(img):
            v = lhs.get(r, Dual()) - img.get(r, Dual())
            if v.a:
                raise AssertionError("zeroth-order defect of a morphism must vanish")
            if v.b:
                res[r] = v.b
        if res:
            tensor[t] = res
    return JetResidual(source.dim, target.dim, tensor)


@dataclass(frozen=True)
class TangentCocycle:
    alpha: LinearMap
    cochain: GCochain
    is_cocycle: bool


def tangent_cocycle(jet: Jet1Map, source: ThreeLieAlgebra,
                    target: ThreeLieAlgebra) -> TangentCocycle:
    """The velocity of a first-order deformation, confirmed to be a 1-cocycle."""
    res = jet_morphism_residual(jet, source, target)
    if not res.is_zero:
        t, v = next(iter(res.tensor.items()))
        raise NotFirstOrderDeformation(
            f"f + t*alpha is not a morphism to first order: defect at basis triple {t}",
            {"triple": list(t), "residual": dense_json(v, target.dim)})
    alpha = map_cochain(jet.velocity)
    if not delta_n(alpha, jet.base, source, target).is_zero():
        raise AssertionError("vanishing jet residual but nonzero coboundary")
    return TangentCocycle(jet.velocity, alpha, True)


def gauge_difference(X, U, f: LinearMap, source: ThreeLieAlgebra,
                     target: ThreeLieAlgebra) -> GCochain:
    """delta(X, U): the amount by which tangents of equivalent deformations differ."""
    return delta0(X, U, f, source, target)


# -- subalgebras ---------------------------------------------------------------

@dataclass(frozen=True)
class Jet1Subspace:
    """Span of u_i + t s(alpha(u_i)); ``velocity`` is the (d-k) x k matrix of alpha."""

    subspace: Subspace
    velocity: tuple
    split: QuotientSplit

    @classmethod
    def build(cls, A: ThreeLieAlgebra, H: Subspace, velocity, split=None):
        split = split or quotient_split(A, H)
        q, k = split.quotient_dim, H.rank
        vel = as_matrix(velocity, q, k) if q else tuple()
        return cls(H, vel, split)

    def alpha(self, i: int) -> dict:
        return {r: row[i] for r, row in enumerate(self.velocity) if row[i]}

    def deformed_basis(self):
        """Ambient vectors u_i + t s(alpha(u_i)) with Dual coordinates."""
        out = []
        for i, u in enumerate(self.subspace.basis):
            lift = self.split.lift(self.alpha(i))
            vec = {}
            for r in set(u) | set(lift):
                x = Dual(u.get(r, ZERO), lift.get(r, ZERO))
                if x:
                    vec[r] = x
            out.append(vec)
        return out


@dataclass(frozen=True)
class SubalgebraJetCheck:
    passes: bool
    dim: int
    quotient_dim: int
    residual: dict            # triple (i<j<k in H) -> sparse quotient vector

    def as_cochain(self) -> GCochain:
        return JetResidual(self.dim, self.quotient_dim, self.residual).as_cochain()


def jet_subalgebra_check(jet: Jet1Subspace, A: ThreeLieAlgebra) -> SubalgebraJetCheck:
    """Is the deformed span closed under the bracket to first order?

    For each basis triple, pi(w_a, w_b, w_c) = P0 + t P1 with w_i the deformed
    vectors.  P0 = sum c_i u_i exactly (H is a subalgebra), and the first-order
    equation P1 = sum c1_i u_i + sum c_i s(alpha(u_i)) is solvable iff
    p(P1 - sum c_i s(alpha(u_i))) = 0; that class is the residual.
    """
    H, split = jet.subspace, jet.split
    restrict_algebra(A, H, split)       # raises NotASubalgebra
    k, q = H.rank, split.quotient_dim
    W = jet.deformed_basis()
    residual = {}
    for t in itertools.combinations(range(k), 3):
        val = A.bracket(*(W[i] for i in t))
        P0 = {r: x.a for r, x in val.items() if x.a}
        P1 = {r: x.b for r, x in val.items() if x.b}
        c0 = split.subspace_coords(P0)
        for i, c in c0.items():
            add_into(P1, split.lift(jet.alpha(i)), -c)
        r = split.project(P1)
        if r:
            residual[t] = r
    return SubalgebraJetCheck(not residual, k, q, residual)


def velocity_cochain(jet: Jet1Subspace) -> GCochain:
    """alpha as a C^1(H, g/H) cochain in H-basis coordinates."""
    k, q = jet.subspace.rank, jet.split.quotient_dim
    table = {(i,): jet.alpha(i) for i in range(k)}
    return GCochain(0, k, q, table, kind="h")


def velocity_from_cochain(c: GCochain) -> tuple:
    return tuple(tuple(c.entry((i,)).get(r, ZERO) for i in range(c.dim))
                 for r in range(c.target_dim))


def jet_from_vector(vec: dict, base: LinearMap) -> Jet1Map:
    """Jet with velocity given by C^1(f) coordinates (x, component) -> x * e + component."""
    e, d = base.target_dim, base.source_dim
    rows = [[ZERO] * d for _ in range(e)]
    for idx, v in vec.items():
        x, c = divmod(idx, e)
        rows[c][x] = scalar(v)
    return Jet1Map(base, LinearMap(d, e, rows))


__all__ = [
    "Dual", "Jet1Map", "JetResidual", "jet_morphism_residual", "TangentCocycle",
    "tangent_cocycle", "gauge_difference", "Jet1Subspace", "SubalgebraJetCheck",
    "jet_subalgebra_check", "velocity_cochain", "velocity_from_cochain", "jet_from_vector",
]
