from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orbitcert.elevate import (
    ElevationTooLarge, elevate_block, elevate_matrix, elevate_vector, homogeneous_monomials, monomial_basis,
)
from orbitcert.mpoly import MPoly, linear_images
from orbitcert.ratmat import Matrix, Vector

ROT = Matrix([["4/5", "-3/5"], ["3/5", "4/5"]])
small = st.fractions(min_value=-3, max_value=3, max_denominator=3)


@st.composite
def matrix_and_vector(draw):
    d = draw(st.integers(1, 3))
    A = Matrix([[draw(small) for _ in range(d)] for _ in range(d)])
    v = Vector([draw(small) for _ in range(d)])
    return A, v, draw(st.integers(1, 3))


def test_basis_examples():
    b = monomial_basis(1, 2)
    assert b.monomials == ((2,), (1,), (0,)) and b.size == 3
    assert monomial_basis(2, 2).monomials == ((2, 0), (1, 1), (0, 2), (1, 0), (0, 1), (0, 0))
    assert monomial_basis(3, 3).size == comb(6, 3) == 20
    with pytest.raises(ValueError):
        monomial_basis(0, 2)
    with pytest.raises(ValueError):
        monomial_basis(2, 0)


def test_block_positions():
    b = monomial_basis(2, 2)
    assert list(b.block(2)) == [0, 1, 2] and list(b.block(1)) == [3, 4] and list(b.block(0)) == [5]
    assert b.index((1, 1)) == 1


def test_unit_step_square():
    # x -> x + one on (x, one)
    E = elevate_matrix(Matrix([[1, 1], [0, 1]]), 2)
    assert list(E.matrix.row(0)) == [1, 2, 1, 0, 0, 0]
    assert list(E.matrix.row(3)) == [0, 0, 0, 1, 1, 0]
    assert E.block_matrix(0) == Matrix([[1]])


def test_identity_elevates_to_identity():
    for d, k in [(1, 3), (2, 2), (3, 2)]:
        assert elevate_matrix(Matrix.identity(d), k).matrix == Matrix.identity(comb(d + k, k))


def test_vector_examples():
    assert elevate_vector(Vector([2]), 2) == Vector([4, 2, 1])
    assert elevate_vector(Vector([1, 1, 1]), 3) == Vector([1] * 20)
    assert elevate_vector(Vector([1, 0]), 2) == Vector([1, 0, 0, 1, 0, 1])


def test_rotation_square_block():
    blk = elevate_block(ROT, 2)
    # x^2 + y^2 is a left 1-eigenvector of the degree-2 block
    w = Vector([1, 0, 1])
    assert blk.T @ w == w


def test_cap():
    with pytest.raises(ElevationTooLarge) as exc:
        elevate_matrix(Matrix.identity(4), 3, cap=20)
    assert exc.value.size == 35


def test_homogeneous_count():
    for d in range(1, 5):
        for j in range(5):
            assert len(homogeneous_monomials(d, j)) == comb(d - 1 + j, j)


@settings(max_examples=80, deadline=None)
@given(matrix_and_vector(), st.data())
def test_elevation_is_functorial(avk, data):
    A, v, k = avk
    d = A.nrows
    B = Matrix([[data.draw(small) for _ in range(d)] for _ in range(d)])
    EA = elevate_matrix(A, k).matrix
    assert elevate_matrix(A @ B, k).matrix == EA @ elevate_matrix(B, k).matrix
    assert EA @ elevate_vector(v, k) == elevate_vector(A @ v, k)


@settings(max_examples=60, deadline=None)
@given(matrix_and_vector())
def test_rows_are_monomial_images(avk):
    A, _, k = avk
    E = elevate_matrix(A, k)
    images = linear_images(A)
    for e, row in zip(E.basis.monomials, E.matrix.rows):
        want = MPoly(A.nrows, {e: 1}).substitute(images)
        assert E.basis.form(row) == want
