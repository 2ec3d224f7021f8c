"""Elevation of a linear map to the monomials of degree <= k.

For A acting on d variables, ``elevate_matrix(A, k)`` is the matrix M on
the monomial basis with ``M @ monomials(X) == monomials(A @ X)``.  A linear
map sends homogeneous polynomials of degree j to homogeneous polynomials
of degree j, so M is block diagonal with one block per degree.

Basis order: degree k first down to the constant monomial, and within a
degree the exponent tuples in decreasing lexicographic order
(x^2, xy, y^2, x, y, 1 for d = k = 2).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

from .mpoly import MPoly
from .ratmat import Matrix, Vector

DEFAULT_CAP = 3003  # C(14, 6)


class ElevationTooLarge(ValueError):
    def __init__(self, size: int, cap: int):
        super().__init__(f"elevated basis has {size} monomials, cap is {cap}")
        self.size = size
        self.cap = cap


@lru_cache(maxsize=None)
def homogeneous_monomials(d: int, j: int) -> tuple[tuple[int, ...], ...]:
    if d == 1:
        return ((j,),)
    out = []
    for first in range(j, -1, -1):
        for rest in homogeneous_monomials(d - 1, j - first):
            out.append((first,) + rest)
    return tuple(out)


@dataclass(frozen=True)
class MonomialBasis:
    var_count: int
    max_degree: int
    monomials: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.monomials)

    def index(self, e) -> int:
        return self._index()[tuple(e)]

    def _index(self):
        return _basis_index(self.monomials)

    def block(self, j: int) -> range:
        """Positions of the degree-j monomials."""
        start = sum(comb(self.var_count - 1 + i, i) for i in range(j + 1, self.max_degree + 1))
        return range(start, start + comb(self.var_count - 1 + j, j))

    def evaluate(self, v) -> Vector:
        return elevate_vector(v, self.max_degree)

    def as_mpolys(self) -> list[MPoly]:
        return [MPoly(self.var_count, {e: 1}) for e in self.monomials]

    def form(self, coeffs) -> MPoly:
        """The polynomial sum_e coeffs[e] * x^e."""
        return MPoly(self.var_count, dict(zip(self.monomials, coeffs)))

    def to_json(self) -> list:
        return [list(e) for e in self.monomials]


@lru_cache(maxsize=None)
def _basis_index(monos):
    return {e: i for i, e in enumerate(monos)}


def monomial_basis(d: int, k: int) -> MonomialBasis:
    if d < 1 or k < 1:
        raise ValueError(f"monomial basis needs d >= 1 and k >= 1, got d={d}, k={k}")
    monos = tuple(e for j in range(k, -1, -1) for e in homogeneous_monomials(d, j))
    return MonomialBasis(d, k, monos)


@dataclass(frozen=True)
class ElevationMatrix:
    basis: MonomialBasis
    matrix: Matrix

    def block_matrix(self, j: int) -> Matrix:
        idx = list(self.basis.block(j))
        return self.matrix.submatrix(idx, idx)

    def to_json(self) -> dict:
        return {"basis": self.basis.to_json(), "matrix": self.matrix.to_json()}


def elevate_block(A: Matrix, j: int) -> Matrix:
    """Action of A on the homogeneous monomials of degree exactly j."""
    A._require_square()
    d = A.nrows
    monos = homogeneous_monomials(d, j)
    index = _basis_index(monos)
    images = [MPoly.linear(list(A.rows[i])) for i in range(d)]
    powers: dict[tuple[int, int], MPoly] = {}
    rows = []
    for e in monos:
        image = MPoly.const(d, 1)
        for i, k in enumerate(e):
            if k:
                if (i, k) not in powers:
                    powers[(i, k)] = images[i] ** k
                image = image * powers[(i, k)]
        row = [Fraction(0)] * len(monos)
        for m, c in image.terms.items():
            row[index[m]] = c
        rows.append(row)
    return Matrix(rows, len(monos))


def elevate_matrix(A: Matrix, k: int, cap: int | None = None) -> ElevationMatrix:
    A._require_square()
    basis = monomial_basis(A.nrows, k)
    if cap is not None and basis.size > cap:
        raise ElevationTooLarge(basis.size, cap)
    n = basis.size
    rows = [[Fraction(0)] * n for _ in range(n)]
    for j in range(k, -1, -1):
        blk = elevate_block(A, j)
        pos = list(basis.block(j))
        for a, ia in enumerate(pos):
            for b, ib in enumerate(pos):
                rows[ia][ib] = blk[a, b]
    return ElevationMatrix(basis, Matrix(rows, n))


def elevate_vector(v, k: int) -> Vector:
    ents = list(v)
    basis = monomial_basis(len(ents), k)
    return Vector(_monomial_value(ents, e) for e in basis.monomials)


def elevate_vector_block(v, j: int) -> Vector:
    ents = list(v)
    return Vector(_monomial_value(ents, e) for e in homogeneous_monomials(len(ents), j))


def _monomial_value(ents, e) -> Fraction:
    out = Fraction(1)
    for x, p in zip(ents, e):
        if p:
            out *= x ** p
    return out
