"""Exact dense linear algebra over the rationals.

Scalars are :class:`fractions.Fraction`.  Matrices and vectors are
immutable; every operation returns a new value.

The characteristic polynomial is computed by reduction to upper
Hessenberg form followed by the Hessenberg recurrence (O(d^3) field
operations).  :func:`faddeev_leverrier` is an independent O(d^4) route
that additionally yields the polynomial adjugate of ``xI - A``.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

__all__ = [
    "DimensionError", "Matrix", "Vector", "to_fraction", "fraction_str",
    "mat_vec", "mat_pow", "char_poly", "faddeev_leverrier", "kernel",
    "rref", "rank", "det", "column_space_restriction", "canonical",
]


class DimensionError(ValueError):
    """Operand shapes do not fit the requested operation."""


def to_fraction(x) -> Fraction:
    """Parse an int, Fraction or string ("p/q", "p", "1.5") exactly.

    Floats are rejected: a float in an instance is almost always a
    transcription error and would silently round.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot read {x!r} as an exact rational")


def fraction_str(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class Vector:
    __slots__ = ("_e",)

    def __init__(self, entries: Iterable):
        object.__setattr__(self, "_e", tuple(to_fraction(x) for x in entries))

    def __setattr__(self, name, value):
        raise AttributeError("Vector is immutable")

    @classmethod
    def zeros(cls, n: int) -> "Vector":
        return cls([0] * n)

    @classmethod
    def unit(cls, n: int, i: int) -> "Vector":
        return cls([1 if j == i else 0 for j in range(n)])

    @property
    def dim(self) -> int:
        return len(self._e)

    @property
    def entries(self) -> tuple:
        return self._e

    def __len__(self):
        return len(self._e)

    def __iter__(self):
        return iter(self._e)

    def __getitem__(self, i):
        return self._e[i]

    def __eq__(self, other):
        return isinstance(other, Vector) and self._e == other._e

    def __hash__(self):
        return hash(("Vector", self._e))

    def __repr__(self):
        return "Vector([" + ", ".join(fraction_str(x) for x in self._e) + "])"

    def _check(self, other: "Vector"):
        if self.dim != other.dim:
            raise DimensionError(f"vector dims differ: {self.dim} vs {other.dim}")

    def __add__(self, other: "Vector") -> "Vector":
        self._check(other)
        return Vector(a + b for a, b in zip(self._e, other._e))

    def __sub__(self, other: "Vector") -> "Vector":
        self._check(other)
        return Vector(a - b for a, b in zip(self._e, other._e))

    def __neg__(self) -> "Vector":
        return Vector(-a for a in self._e)

    def __mul__(self, c) -> "Vector":
        c = to_fraction(c)
        return Vector(c * a for a in self._e)

    __rmul__ = __mul__

    def dot(self, other: "Vector") -> Fraction:
        self._check(other)
        return sum((a * b for a, b in zip(self._e, other._e)), Fraction(0))

    def is_zero(self) -> bool:
        return not any(self._e)

    def to_json(self) -> list:
        return [fraction_str(x) for x in self._e]

    @classmethod
    def from_json(cls, data: Sequence) -> "Vector":
        return cls(data)


class Matrix:
    """Row-major rational matrix."""

    __slots__ = ("_rows", "_ncols")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        r = tuple(tuple(to_fraction(x) for x in row) for row in rows)
        if r:
            widths = {len(row) for row in r}
            if len(widths) != 1:
                raise DimensionError(f"ragged matrix rows: widths {sorted(widths)}")
            ncols = widths.pop()
        elif ncols is None:
            ncols = 0
        object.__setattr__(self, "_rows", r)
        object.__setattr__(self, "_ncols", ncols)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, m: int, n: int) -> "Matrix":
        return cls([[0] * n for _ in range(m)], n)

    @classmethod
    def diag(cls, values: Sequence) -> "Matrix":
        n = len(values)
        return cls([[values[i] if i == j else 0 for j in range(n)] for i in range(n)], n)

    @classmethod
    def from_columns(cls, cols: Sequence[Vector], nrows: int) -> "Matrix":
        if not cols:
            return cls([[] for _ in range(nrows)], 0) if nrows else cls([], 0)
        return cls([[c[i] for c in cols] for i in range(nrows)], len(cols))

    @property
    def nrows(self) -> int:
        return len(self._rows)

    @property
    def ncols(self) -> int:
        return self._ncols

    rows_count = nrows

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self._rows), self._ncols)

    @property
    def rows(self) -> tuple:
        return self._rows

    @property
    def entries(self) -> tuple:
        return tuple(x for row in self._rows for x in row)

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self._rows[i][j]

    def row(self, i: int) -> Vector:
        return Vector(self._rows[i])

    def col(self, j: int) -> Vector:
        return Vector(row[j] for row in self._rows)

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.shape == other.shape and self._rows == other._rows

    def __hash__(self):
        return hash(("Matrix", self._ncols, self._rows))

    def __repr__(self):
        body = "; ".join(" ".join(fraction_str(x) for x in row) for row in self._rows)
        return f"Matrix[{self.nrows}x{self.ncols}]({body})"

    @property
    def T(self) -> "Matrix":
        return Matrix(zip(*self._rows), self.nrows) if self._rows else Matrix([], 0)

    def transpose(self) -> "Matrix":
        return self.T

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise DimensionError(f"cannot add {self.shape} and {other.shape}")
        return Matrix((a + b for a, b in zip(r, s)) for r, s in zip(self._rows, other._rows))

    def __sub__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise DimensionError(f"cannot subtract {self.shape} and {other.shape}")
        return Matrix((a - b for a, b in zip(r, s)) for r, s in zip(self._rows, other._rows))

    def __neg__(self) -> "Matrix":
        return Matrix((-a for a in r) for r in self._rows)

    def scale(self, c) -> "Matrix":
        c = to_fraction(c)
        return Matrix(((c * a for a in r) for r in self._rows), self._ncols)

    def __matmul__(self, other):
        if isinstance(other, Vector):
            return mat_vec(self, other)
        if self.ncols != other.nrows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        cols = list(zip(*other._rows))
        out = []
        for r in self._rows:
            nz = [(k, a) for k, a in enumerate(r) if a]
            out.append([sum((a * c[k] for k, a in nz), Fraction(0)) for c in cols])
        return Matrix(out, other.ncols)

    def shift(self, lam) -> "Matrix":
        """Return ``self - lam * I``."""
        self._require_square()
        lam = to_fraction(lam)
        return Matrix(
            (a - lam if i == j else a for j, a in enumerate(r)) for i, r in enumerate(self._rows)
        )

    def trace(self) -> Fraction:
        self._require_square()
        return sum((self._rows[i][i] for i in range(self.nrows)), Fraction(0))

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for r in self._rows for x in r)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix(([self._rows[i][j] for j in cols] for i in rows), len(cols))

    def _require_square(self):
        if not self.is_square():
            raise DimensionError(f"square matrix required, got {self.nrows}x{self.ncols}")

    def to_json(self) -> list:
        return [[fraction_str(x) for x in r] for r in self._rows]

    @classmethod
    def from_json(cls, data: Sequence[Sequence]) -> "Matrix":
        return cls(data)


def mat_vec(A: Matrix, v: Vector) -> Vector:
    if A.ncols != v.dim:
        raise DimensionError(f"matrix has {A.ncols} columns but vector has dim {v.dim}")
    ve = v.entries
    return Vector(sum((a * b for a, b in zip(r, ve) if a), Fraction(0)) for r in A.rows)


def mat_pow(A: Matrix, n: int) -> Matrix:
    A._require_square()
    if n < 0:
        raise ValueError("negative exponent")
    result = Matrix.identity(A.nrows)
    base = A
    while n:
        if n & 1:
            result = result @ base
        n >>= 1
        if n:
            base = base @ base
    return result


def rref(A: Matrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (rows, pivot_columns)."""
    M = [list(r) for r in A.rows]
    m, n = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        p = next((i for i in range(r, m) if M[i][c]), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        pr = M[r]
        for i in range(m):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], pr)]
        pivots.append(c)
        r += 1
    return M[:r], pivots


def rank(A: Matrix) -> int:
    return len(rref(A)[1])


def det(A: Matrix) -> Fraction:
    A._require_square()
    M = [list(r) for r in A.rows]
    n = A.nrows
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if M[i][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            M[c], M[p] = M[p], M[c]
            d = -d
        piv = M[c][c]
        d *= piv
        for i in range(c + 1, n):
            if M[i][c]:
                f = M[i][c] / piv
                M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    return d


def canonical(v: Sequence) -> Vector:
    """Scale to coprime integer entries with the first nonzero entry positive."""
    ents = [to_fraction(x) for x in v]
    nz = [x for x in ents if x]
    if not nz:
        return Vector(ents)
    den = lcm(*(x.denominator for x in nz))
    ints = [int(x * den) for x in ents]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if nz[0] < 0:
        g = -g
    return Vector(Fraction(x // g) for x in ints)


def kernel(A: Matrix) -> list[Vector]:
    """Canonical basis of the right null space, one vector per free column."""
    R, piv = rref(A)
    n = A.ncols
    pivset = set(piv)
    basis = []
    for f in range(n):
        if f in pivset:
            continue
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, p in zip(R, piv):
            v[p] = -row[f]
        basis.append(canonical(v))
    return basis


def char_poly(A: Matrix):
    """Monic characteristic polynomial det(xI - A) via Hessenberg reduction."""
    from .polyalg import Polynomial

    A._require_square()
    n = A.nrows
    H = [list(r) for r in A.rows]
    for m in range(1, n - 1):
        i = next((i for i in range(m, n) if H[i][m - 1]), None)
        if i is None:
            continue
        if i != m:
            H[i], H[m] = H[m], H[i]
            for row in H:
                row[i], row[m] = row[m], row[i]
        t = H[m][m - 1]
        for i in range(m + 1, n):
            u = H[i][m - 1] / t
            if not u:
                continue
            H[i] = [x - u * y for x, y in zip(H[i], H[m])]
            for row in H:
                row[m] += u * row[i]
    # p[k] = char poly of the leading k x k block
    p = [Polynomial([1])]
    x = Polynomial([0, 1])
    for m in range(n):
        acc = (x - Polynomial([H[m][m]])) * p[m]
        prod = Fraction(1)
        for i in range(m - 1, -1, -1):
            prod *= H[i + 1][i]
            if not prod:
                break
            if H[i][m]:
                acc = acc - p[i].scale_by(prod * H[i][m])
        p.append(acc)
    return p[n]


def faddeev_leverrier(A: Matrix):
    """Return (char_poly, adjugate_terms) by the Faddeev-LeVerrier recursion.

    ``adjugate_terms[k]`` is the matrix coefficient of x^(n-1-k) in
    adj(xI - A), so adj(xI - A) = sum_k adjugate_terms[k] * x^(n-1-k).
    """
    from .polyalg import Polynomial

    A._require_square()
    n = A.nrows
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    terms: list[Matrix] = []
    M = Matrix.zeros(n, n)
    for k in range(1, n + 1):
        M = (A @ M) + Matrix.identity(n).scale(coeffs[n - k + 1])
        terms.append(M)
        coeffs[n - k] = -(A @ M).trace() / k
    return Polynomial(coeffs), terms


def column_space_restriction(A: Matrix) -> tuple[list[Vector], Matrix, Matrix]:
    """Basis of Im(A) with projection/embedding maps.

    The basis is the reduced row echelon basis of the row space of A^T, so
    coordinates of a vector of Im(A) are read off at the pivot positions:
    ``project`` selects those positions and ``embed`` has the basis as
    columns.  ``project @ A @ embed`` is A restricted to its image.
    """
    A._require_square()
    n = A.nrows
    R, piv = rref(A.T)
    if len(piv) == n:
        return [Vector.unit(n, i) for i in range(n)], Matrix.identity(n), Matrix.identity(n)
    basis = [Vector(r) for r in R]
    embed = Matrix.from_columns(basis, n)
    project = Matrix([[1 if j == p else 0 for j in range(n)] for p in piv], n)
    return basis, project, embed
