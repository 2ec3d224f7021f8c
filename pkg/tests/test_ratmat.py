from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from orbitcert.polyalg import Polynomial
from orbitcert.ratmat import (
    DimensionError, Matrix, Vector, canonical, char_poly, column_space_restriction, det, faddeev_leverrier,
    fraction_str, kernel, mat_pow, mat_vec, rank, to_fraction,
)

A4 = Matrix([[0, 3, 0, 0], [-3, 3, 1, 0], [0, 0, 2, 1], [1, 1, 0, 1]])
A3 = Matrix([[1, 1, 0], [0, 1, 1], [0, 0, 1]])

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def square(draw, max_dim=5):
    d = draw(st.integers(1, max_dim))
    return Matrix([[draw(rationals) for _ in range(d)] for _ in range(d)])


def to_sympy(A: Matrix):
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in A.rows])


def test_mat_vec_examples():
    assert mat_vec(Matrix.identity(3), Vector([1, 2, 3])) == Vector([1, 2, 3])
    assert mat_vec(A4, Vector([1, 1, 1, 1])) == Vector([3, 1, 3, 3])
    assert mat_vec(Matrix.zeros(2, 2), Vector([7, "1/3"])).is_zero()


def test_mat_vec_dimension_error_names_both():
    with pytest.raises(DimensionError, match="3.*2|2.*3"):
        mat_vec(A3, Vector([1, 2]))


def test_mat_pow_examples():
    assert mat_pow(A4, 0) == Matrix.identity(4)
    assert mat_pow(Matrix([[1, 2], [0, 1]]), 3) == Matrix([[1, 6], [0, 1]])
    assert mat_pow(Matrix.diag([2, 3]), 5) == Matrix.diag([32, 243])
    with pytest.raises(DimensionError):
        mat_pow(Matrix([[1, 2]]), 2)


def test_char_poly_examples():
    assert char_poly(Matrix.identity(2)) == Polynomial([1, -2, 1])
    assert char_poly(A3) == Polynomial([-1, 3, -3, 1])
    assert char_poly(A4)(Fraction(0)) == det(A4) == 15


def test_kernel_examples():
    assert kernel(Matrix.identity(2)) == []
    assert kernel(Matrix([[1, 1], [1, 1]])) == [Vector([1, -1])]
    assert kernel(A3.shift(1).T) == [Vector([0, 0, 1])]


def test_column_space_restriction_examples():
    basis, project, embed = column_space_restriction(A4)
    assert project == embed == Matrix.identity(4) and len(basis) == 4
    basis, project, embed = column_space_restriction(Matrix([[0, 1], [0, 0]]))
    assert basis == [Vector([1, 0])]
    assert project @ Matrix([[0, 1], [0, 0]]) @ embed == Matrix([[0]])
    D = Matrix.diag([0, 2])
    basis, project, embed = column_space_restriction(D)
    assert basis == [Vector([0, 1])]
    assert project @ D @ embed == Matrix([[2]])


def test_rationals_are_canonical():
    assert to_fraction("-6/4") == Fraction(-3, 2)
    assert to_fraction(" 2 ") == 2
    assert to_fraction("1.5") == Fraction(3, 2)
    assert fraction_str(Fraction(-3, 2)) == "-3/2" and fraction_str(Fraction(4, 2)) == "2"
    with pytest.raises(TypeError):
        to_fraction(0.1)
    with pytest.raises(TypeError):
        to_fraction(True)


def test_matrix_json_round_trip():
    M = Matrix([["1/3", 2], [0, "-5/7"]])
    assert Matrix.from_json(M.to_json()) == M
    assert Vector.from_json(Vector(["2/4", 1]).to_json()) == Vector([Fraction(1, 2), 1])


def test_ragged_matrix_rejected():
    with pytest.raises(DimensionError):
        Matrix([[1, 2], [3]])


def test_canonical_scaling():
    assert canonical([0, Fraction(2, 3), Fraction(-4, 3)]) == Vector([0, 1, -2])
    assert canonical([0, -3, 6]) == Vector([0, 1, -2])


@settings(max_examples=60, deadline=None)
@given(square())
def test_char_poly_matches_sympy_and_faddeev(A):
    ours = char_poly(A)
    x = sympy.Symbol("x")
    ref = sympy.Poly(to_sympy(A).charpoly(x).as_expr(), x).all_coeffs()[::-1]
    assert [sympy.Rational(c.numerator, c.denominator) for c in ours.coeffs] == ref
    assert faddeev_leverrier(A)[0] == ours


@settings(max_examples=60, deadline=None)
@given(square())
def test_det_rank_kernel_match_sympy(A):
    S = to_sympy(A)
    assert det(A) == Fraction(str(S.det()))
    assert rank(A) == S.rank()
    K = kernel(A)
    assert len(K) == A.ncols - S.rank()
    assert all((A @ v).is_zero() for v in K)


@settings(max_examples=40, deadline=None)
@given(square(4), st.integers(0, 6))
def test_mat_pow_is_repeated_product(A, n):
    P = Matrix.identity(A.nrows)
    for _ in range(n):
        P = P @ A
    assert mat_pow(A, n) == P


@settings(max_examples=40, deadline=None)
@given(square(4))
def test_restriction_commutes_with_embedding(A):
    basis, project, embed = column_space_restriction(A)
    R = project @ A @ embed
    assert A @ embed == embed @ R
    assert project @ embed == Matrix.identity(len(basis))


@settings(max_examples=40, deadline=None)
@given(square(4))
def test_adjugate_terms_give_the_adjugate(A):
    n = A.nrows
    _, terms = faddeev_leverrier(A)
    # adj(xI - A) at x = 0 is adj(-A) = (-1)^(n-1) adj(A)
    adj = terms[n - 1].scale((-1) ** (n - 1))
    assert A @ adj == Matrix.identity(n).scale(det(A))
