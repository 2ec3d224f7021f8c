"""Shared instance generators and small exact helpers for the test modules."""
from __future__ import annotations

import random
from fractions import Fraction
from pathlib import Path

import pytest

from orbitcert.instance import OrbitInstance, load_instance
from orbitcert.polyalg import cyclotomic
from orbitcert.ratmat import Matrix, Vector, mat_pow

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def fixture_path(name: str) -> Path:
    return FIXTURES / f"{name}.json"


def fixture(name: str) -> OrbitInstance:
    return load_instance(fixture_path(name))


def unimodular(rng: random.Random, d: int, steps: int = 6) -> tuple[Matrix, Matrix]:
    """A random integer matrix of determinant +-1 and its inverse, built from row operations."""
    U = [[Fraction(int(i == j)) for j in range(d)] for i in range(d)]
    V = [row[:] for row in U]
    for _ in range(steps if d > 1 else 0):
        i, j = rng.sample(range(d), 2)
        c = rng.choice([-2, -1, 1, 2])
        # U <- E U, V <- V E^-1 with E = I + c e_i e_j^T
        U[i] = [a + c * b for a, b in zip(U[i], U[j])]
        for row in V:
            row[j] -= c * row[i]
    return Matrix(U), Matrix(V)


def conjugate(rng: random.Random, T: Matrix) -> Matrix:
    U, V = unimodular(rng, T.nrows)
    return U @ T @ V


def small_vector(rng: random.Random, d: int, span: int = 3) -> Vector:
    return Vector(rng.randint(-span, span) for _ in range(d))


def triangular(rng: random.Random, diagonal, off=(-2, 2)) -> Matrix:
    d = len(diagonal)
    return Matrix([[diagonal[i] if i == j else (rng.randint(*off) if j > i else 0) for j in range(d)]
                   for i in range(d)])


NON_UNIT = [Fraction(v) for v in ("2", "-2", "3", "-3", "1/2", "-1/2", "2/3", "-3/2", "5/2", "1/3")]


def growth_instance(rng: random.Random) -> OrbitInstance:
    """Rational eigenvalues, all of modulus other than 0 and 1."""
    d = rng.randint(1, 3)
    A = conjugate(rng, triangular(rng, [rng.choice(NON_UNIT) for _ in range(d)]))
    return _with_target(rng, A, "Q")


def unipotent_instance(rng: random.Random) -> OrbitInstance:
    """Integer matrices similar to a unipotent upper triangular one."""
    d = rng.randint(2, 4)
    A = conjugate(rng, triangular(rng, [1] * d, off=(-1, 2)))
    return _with_target(rng, A, "Z")


def companion(p) -> Matrix:
    """Companion matrix of a monic polynomial (last column holds -coefficients)."""
    c = p.monic().coeffs
    d = len(c) - 1
    return Matrix([[1 if i == j + 1 else 0 for j in range(d - 1)] + [-c[i]] for i in range(d)])


def cyclotomic_instance(rng: random.Random, m: int | None = None) -> tuple[OrbitInstance, int]:
    m = m or rng.randint(1, 12)
    return _with_target(rng, companion(cyclotomic(m)), "Z"), m


def _with_target(rng: random.Random, A: Matrix, ring: str) -> OrbitInstance:
    d = A.nrows
    X = small_vector(rng, d)
    if rng.random() < 0.15:
        Y = mat_pow(A, rng.randint(0, 6)) @ X
    else:
        Y = small_vector(rng, d)
    return OrbitInstance(A, X, Y, ring)


def least_period(A: Matrix, limit: int = 200) -> int | None:
    I = Matrix.identity(A.nrows)
    P = A
    for L in range(1, limit + 1):
        if P == I:
            return L
        P = P @ A
    return None


def random_matrix(rng: random.Random, d: int, span: int = 3) -> Matrix:
    return Matrix([[rng.randint(-span, span) for _ in range(d)] for _ in range(d)])


def structured_matrix(rng: random.Random, d: int) -> Matrix:
    """Random conjugate of a block triangular matrix with repeated rational eigenvalues."""
    vals = [Fraction(rng.choice([-2, -1, 0, 1, 2, 3])) for _ in range(rng.randint(1, 2))]
    diag = [rng.choice(vals) for _ in range(d)]
    diag.sort()
    return conjugate(rng, triangular(rng, diag, off=(-1, 1)))


@pytest.fixture
def rng():
    return random.Random(20261016)


class Checks:
    """Collects named sub-checks so one test reports every failing part at once."""

    def __init__(self):
        self.failed: list[str] = []

    def __call__(self, name: str, ok, detail="") -> bool:
        if not ok:
            self.failed.append(f"{name}: {detail}" if detail != "" else name)
        return bool(ok)

    def finish(self):
        assert not self.failed, "failed sub-checks:\n  " + "\n  ".join(self.failed)


@pytest.fixture
def checks():
    return Checks()
