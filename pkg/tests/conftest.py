from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest

from threelie import LinearMap, Subspace, abelian, make_algebra
from threelie.algebra import pair_basis
from threelie.exact import inverse, mat_mul
from threelie.nr import GCochain

A4_ENTRIES = [(0, 1, 2, 3, 1), (0, 1, 3, 2, -1), (0, 2, 3, 1, 1), (1, 2, 3, 0, -1)]
# pi(e1,e2,e3) = e4, pi(e1,e3,e4) = e1 breaks the fundamental identity
INVALID_ENTRIES = [(0, 1, 2, 3, 1), (0, 2, 3, 0, 1)]


@pytest.fixture(scope="session")
def A4():
    return make_algebra(4, A4_ENTRIES)


@pytest.fixture(scope="session")
def ab2():
    return abelian(2)


@pytest.fixture(scope="session")
def id4():
    return LinearMap.identity(4)


@pytest.fixture(scope="session")
def span12(A4):
    return Subspace(A4, [{0: 1}, {1: 1}])


# -- random data --------------------------------------------------------------

def rand_fraction(rng, lo=-3, hi=3, denoms=(1, 1, 1, 2, 3)):
    return Fraction(rng.randint(lo, hi), rng.choice(denoms))


def random_entries(rng, d, density=0.5):
    out = []
    for i, j, k in itertools.combinations(range(d), 3):
        for l in range(d):
            if rng.random() < density:
                v = rand_fraction(rng)
                if v:
                    out.append((i, j, k, l, v))
    return out


def cayley_rotation(rng, n):
    """A rational matrix in SO(n): (I - S)(I + S)^{-1} with S skew."""
    S = [[Fraction(0)] * n for _ in range(n)]
    for i, j in itertools.combinations(range(n), 2):
        S[i][j] = rand_fraction(rng, -2, 2)
        S[j][i] = -S[i][j]
    I = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    minus = [[I[i][j] - S[i][j] for j in range(n)] for i in range(n)]
    plus = [[I[i][j] + S[i][j] for j in range(n)] for i in range(n)]
    return mat_mul(minus, inverse(plus))


def random_invertible(rng, n):
    while True:
        M = [[rand_fraction(rng, -2, 2) for _ in range(n)] for _ in range(n)]
        try:
            return inverse(M)
        except (ValueError, ZeroDivisionError):
            continue


def change_of_basis_entries(entries, d, M):
    """Entries of x, y, z -> M^{-1} pi(M x, M y, M z), again a 3-Lie bracket."""
    A = make_algebra(d, entries, validate=False)
    Minv = inverse(M)
    cols = [{r: M[r][c] for r in range(d) if M[r][c]} for c in range(d)]
    out = []
    for i, j, k in itertools.combinations(range(d), 3):
        v = A.bracket(cols[i], cols[j], cols[k])
        for l in range(d):
            x = sum((Minv[l][r] * c for r, c in v.items()), Fraction(0))
            if x:
                out.append((i, j, k, l, x))
    return out


def semidirect_entries(rng, d):
    """[e1, e2, v] = D v on span{e3, ...}, every other bracket zero."""
    out = []
    for k in range(2, d):
        for l in range(2, d):
            v = rand_fraction(rng)
            if v:
                out.append((0, 1, k, l, v))
    return out


def valid_entries(rng, d):
    """A 3-Lie bracket that is valid by construction."""
    if d == 3:
        return [(0, 1, 2, l, rand_fraction(rng)) for l in range(3)]
    choice = rng.randrange(3)
    if choice == 0:
        return change_of_basis_entries(A4_ENTRIES, 4, random_invertible(rng, 4))
    if choice == 1:
        return semidirect_entries(rng, d)
    return change_of_basis_entries(semidirect_entries(rng, d), d, random_invertible(rng, d))


def random_map(rng, d, e, density=0.6):
    return LinearMap(d, e, [[rand_fraction(rng) if rng.random() < density else Fraction(0)
                             for _ in range(d)] for _ in range(e)])


def random_cochain(rng, degree, dim, target_dim, kind="h", density=0.4):
    N = len(pair_basis(dim))
    table = {}
    for ps in itertools.product(range(N), repeat=degree):
        for x in range(dim):
            if rng.random() < density:
                v = {r: rand_fraction(rng) for r in range(target_dim)}
                v = {r: c for r, c in v.items() if c}
                if v:
                    table[ps + (x,)] = v
    return GCochain(degree, dim, target_dim, table, kind=kind)


@pytest.fixture
def rng():
    return random.Random(20240601)


# -- acceptance summary -----------------------------------------------------------

_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    if report.when != "call" or "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if name.startswith("test_criterion_"):
        _ACCEPTANCE[name] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE):
        parts = name[len("test_criterion_"):].split("_", 1)
        number, label = int(parts[0]), parts[1].replace("_", " ")
        status = "PASS" if _ACCEPTANCE[name] == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d} {status}  {label}")
