"""Representations rho: wedge^2 g -> End(V), the adjoint and induced quotient ones."""
from __future__ import annotations

import itertools

from .algebra import (QuotientSplit, Subspace, ThreeLieAlgebra, quotient_split,
                      restrict_algebra)
from .errors import DimensionMismatch, RepresentationAxiomViolation
from .exact import ZERO, as_matrix, mat_mul, mat_vec, to_json, zero_matrix


def _madd(*terms):
    """Sum of (coef, matrix) pairs."""
    n = len(terms[0][1])
    m = len(terms[0][1][0]) if n else 0
    return tuple(tuple(sum((c * M[i][j] for c, M in terms), ZERO) for j in range(m))
                 for i in range(n))


class Representation:
    """Pair-indexed action: ``action[n]`` is the matrix of rho(e_i, e_j) for pairs[n] = (i, j).

    Antisymmetry is structural; rho(e_j, e_i) is read as -action[n].
    """

    def __init__(self, algebra: ThreeLieAlgebra, module_dim: int, action):
        self.algebra = algebra
        self.module_dim = module_dim
        pb = algebra.pairs
        if len(action) != len(pb):
            raise DimensionMismatch(f"need {len(pb)} action matrices, got {len(action)}")
        self.action = tuple(as_matrix(M, module_dim, module_dim) for M in action)
        self._neg = tuple(tuple(tuple(-x for x in row) for row in M) for M in self.action)
        self._zero = zero_matrix(module_dim, module_dim)

    def basis_action(self, i: int, j: int) -> tuple:
        hit = self.algebra.pairs.index(i, j)
        if hit is None:
            return self._zero
        n, s = hit
        return self.action[n] if s > 0 else self._neg[n]

    def act(self, x: dict, y: dict) -> tuple:
        """rho(x, y) for sparse vectors."""
        terms = [(a * b, self.basis_action(i, j))
                 for i, a in x.items() for j, b in y.items() if i != j]
        return _madd(*terms) if terms else self._zero

    def apply(self, i: int, j: int, v: dict) -> dict:
        return mat_vec(self.basis_action(i, j), v)

    def is_zero(self) -> bool:
        return all(not any(any(r) for r in M) for M in self.action)

    def __eq__(self, other):
        if not isinstance(other, Representation):
            return NotImplemented
        return (self.algebra == other.algebra and self.module_dim == other.module_dim
                and self.action == other.action)

    def __repr__(self):
        return f"Representation(algebra_dim={self.algebra.dim}, module_dim={self.module_dim})"


def axiom_residuals(rho: Representation, x1: int, x2: int, x3: int, x4: int):
    """Residual matrices (LHS - RHS) of both representation axioms on basis vectors."""
    A = rho.algebra
    e = lambda i: {i: 1}
    r = rho.basis_action
    # rho(x1,x2)rho(x3,x4) = rho(pi(x1,x2,x3),x4) + rho(x3,pi(x1,x2,x4)) + rho(x3,x4)rho(x1,x2)
    first = _madd((1, mat_mul(r(x1, x2), r(x3, x4))),
                  (-1, rho.act(A.basis_bracket(x1, x2, x3), e(x4))),
                  (-1, rho.act(e(x3), A.basis_bracket(x1, x2, x4))),
                  (-1, mat_mul(r(x3, x4), r(x1, x2))))
    # rho(x1,pi(x2,x3,x4)) = rho(x3,x4)rho(x1,x2) - rho(x2,x4)rho(x1,x3) + rho(x2,x3)rho(x1,x4)
    second = _madd((1, rho.act(e(x1), A.basis_bracket(x2, x3, x4))),
                   (-1, mat_mul(r(x3, x4), r(x1, x2))),
                   (1, mat_mul(r(x2, x4), r(x1, x3))),
                   (-1, mat_mul(r(x2, x3), r(x1, x4))))
    return first, second


def validate_representation(rho: Representation) -> Representation:
    d = rho.algebra.dim
    if rho.module_dim == 0:
        return rho
    for t in itertools.product(range(d), repeat=4):
        for axiom, res in enumerate(axiom_residuals(rho, *t), start=1):
            if any(any(row) for row in res):
                raise RepresentationAxiomViolation(
                    f"representation axiom {axiom} fails at basis tuple {t}",
                    {"axiom": axiom, "tuple": list(t),
                     "residual": [[to_json(x) for x in row] for row in res]})
    return rho


def make_representation(A: ThreeLieAlgebra, m: int, entries) -> Representation:
    """Validated representation from ``{(i, j): matrix}`` (i < j, 0-based).

    Missing pairs act by zero.
    """
    pb = A.pairs
    action = [zero_matrix(m, m) for _ in range(len(pb))]
    items = entries.items() if isinstance(entries, dict) else entries
    for (i, j), M in items:
        hit = pb.index(i, j) if 0 <= i < A.dim and 0 <= j < A.dim else None
        if hit is None or hit[1] < 0:
            raise DimensionMismatch(f"action keys must be pairs i<j within dimension {A.dim}, got {(i, j)}")
        action[hit[0]] = as_matrix(M, m, m)
    return validate_representation(Representation(A, m, action))


def adjoint_rep(A: ThreeLieAlgebra) -> Representation:
    """ad_{x^y} z = pi(x, y, z)."""
    e = lambda i: {i: 1}
    action = [A.ad(e(i), e(j)) for i, j in A.pairs.pairs]
    return Representation(A, A.dim, action)


def induced_quotient_rep(A: ThreeLieAlgebra, H: Subspace,
                         split: QuotientSplit | None = None) -> Representation:
    """Action of the subalgebra H on g/H: [x] -> p(pi(u, v, s[x])).

    The returned representation's algebra is H in the coordinates of its basis.
    """
    split = split or quotient_split(A, H)
    sub = restrict_algebra(A, H, split)
    q = split.quotient_dim
    action = []
    for a, b in sub.pairs.pairs:
        u, v = H.basis[a], H.basis[b]
        cols = [split.project(A.bracket(u, v, split.lift({c: 1}))) for c in range(q)]
        action.append(tuple(tuple(cols[c].get(r, ZERO) for c in range(q)) for r in range(q)))
    return Representation(sub, q, action)
