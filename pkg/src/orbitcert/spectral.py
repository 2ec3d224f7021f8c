"""Left eigenvectors, left Jordan chains and the spectrum report.

Exact eigenvectors are computed only for rational eigenvalues.  For a
simple irrational real eigenvalue the eigenvector is returned as a vector
of polynomials in the eigenvalue, read off a column of the polynomial
adjugate adj(tI - A^T).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .elevate import DEFAULT_CAP, elevate_block
from .polyalg import (
    Modulus, ModulusClass, Polynomial, RealRoot, RootGroup, classify_roots,
    squarefree_part, squarefree_rational_roots,
)
from .ratmat import Matrix, Vector, canonical, fraction_str, char_poly, det, faddeev_leverrier, kernel, rank


class NotAnEigenvalue(ValueError):
    pass


@dataclass(frozen=True)
class EigenChain:
    """Left chain e_0..e_k: e_0 A = lam e_0 and e_i A = lam e_i + e_{i-1}."""

    lam: Fraction
    vectors: tuple[Vector, ...]

    @property
    def length(self) -> int:
        return len(self.vectors)

    @property
    def top(self) -> Vector:
        return self.vectors[-1]

    def holds_for(self, A: Matrix) -> bool:
        At = A.T
        prev = None
        for e in self.vectors:
            lhs = At @ e
            rhs = e * self.lam if prev is None else e * self.lam + prev
            if lhs != rhs:
                return False
            prev = e
        return True

    def to_json(self) -> dict:
        return {"lambda": fraction_str(self.lam), "vectors": [v.to_json() for v in self.vectors]}

    @classmethod
    def from_json(cls, d: dict) -> "EigenChain":
        return cls(Fraction(d["lambda"]), tuple(Vector.from_json(v) for v in d["vectors"]))


def left_eigenvectors(A: Matrix, lam) -> list[Vector]:
    """Canonical basis of ker((A - lam I)^T); empty when lam is not an eigenvalue."""
    return kernel(A.shift(lam).T)


def _row_rank(vectors) -> int:
    return rank(Matrix([list(v) for v in vectors])) if vectors else 0


def jordan_chains(A: Matrix, lam) -> list[EigenChain]:
    """Maximal left Jordan chains for a rational eigenvalue, longest first."""
    lam = Fraction(lam)
    N = A.shift(lam).T
    levels = [[]]  # levels[j] = basis of ker N^j
    P = Matrix.identity(A.nrows)
    while True:
        P = N @ P
        K = kernel(P)
        if len(K) == len(levels[-1]):
            break
        levels.append(K)
        if len(K) == A.nrows:
            break
    if len(levels) == 1:
        raise NotAnEigenvalue(f"{lam} is not an eigenvalue")
    top = len(levels) - 1
    chains: list[list[Vector]] = []
    covered: list[Vector] = []
    for j in range(top, 0, -1):
        span = list(levels[j - 1]) + covered
        r = _row_rank(span)
        chosen = []
        for cand in levels[j]:
            r2 = _row_rank(span + chosen + [cand])
            if r2 > r:
                chosen.append(cand)
                r = r2
        for v in chosen:
            chain = [v]
            for _ in range(j - 1):
                chain.append(N @ chain[-1])
            chains.append(chain[::-1])
        covered = [N @ v for v in covered + chosen]
    out = []
    for ch in chains:
        e0 = ch[0]
        i = next(i for i, x in enumerate(e0) if x)
        s = canonical(e0)[i] / e0[i]
        out.append(EigenChain(lam, tuple(v * s for v in ch)))
    out.sort(key=lambda c: -c.length)
    return out


def algebraic_left_eigenvector(A: Matrix, root: RealRoot) -> list[Polynomial] | None:
    """Left eigenvector for a real algebraic eigenvalue, entries polynomial in it.

    Entries are reduced modulo ``root.poly``.  Returns ``None`` when every
    column of the adjugate vanishes at the root (eigenvalue not simple).
    """
    B = A.T
    n = B.nrows
    _, terms = faddeev_leverrier(B)
    for j in range(n):
        col = []
        for i in range(n):
            coeffs = [terms[n - 1 - p][i, j] for p in range(n)]
            col.append(Polynomial(coeffs) % root.poly)
        if any(not root.is_zero_of(c) for c in col):
            return col
    return None


def matrix_poly_eval(p: Polynomial, A: Matrix) -> Matrix:
    n = A.nrows
    acc = Matrix.zeros(n, n)
    for c in reversed(p.coeffs):
        acc = acc @ A + Matrix.identity(n).scale(c)
    return acc


def is_diagonalizable(A: Matrix, cp: Polynomial | None = None) -> bool:
    """Diagonalizable over C iff the squarefree part of the char poly annihilates A."""
    cp = cp if cp is not None else char_poly(A)
    s = squarefree_part(cp)
    M = matrix_poly_eval(s, A)
    return all(not x for x in M.entries)


@dataclass(frozen=True)
class RationalEigenData:
    lam: Fraction
    multiplicity: int
    eigenvectors: tuple[Vector, ...]
    chains: tuple[EigenChain, ...]

    def to_json(self) -> dict:
        return {
            "lambda": fraction_str(self.lam), "multiplicity": self.multiplicity,
            "eigenvectors": [v.to_json() for v in self.eigenvectors],
            "chains": [c.to_json() for c in self.chains],
        }

    @classmethod
    def from_json(cls, d: dict) -> "RationalEigenData":
        return cls(Fraction(d["lambda"]), int(d["multiplicity"]),
                   tuple(Vector.from_json(v) for v in d["eigenvectors"]),
                   tuple(EigenChain.from_json(c) for c in d["chains"]))


@dataclass(frozen=True)
class SpectrumReport:
    matrix_dim: int
    char_poly: Polynomial
    det: Fraction
    classes: tuple[RootGroup, ...]
    rational_eigen_data: tuple[RationalEigenData, ...]
    diagonalizable: bool
    categories: tuple[str, ...]
    elevation_used: tuple[int, int] | None = None
    elevation_eigenvalue: Fraction | None = None
    limitation: str | None = None

    def to_json(self) -> dict:
        return {
            "dim": self.matrix_dim, "char_poly": self.char_poly.to_json(), "det": fraction_str(self.det),
            "classes": [g.to_json() for g in self.classes],
            "rational_eigen_data": [e.to_json() for e in self.rational_eigen_data],
            "diagonalizable": self.diagonalizable, "categories": list(self.categories),
            "elevation_used": list(self.elevation_used) if self.elevation_used else None,
            "elevation_eigenvalue": fraction_str(self.elevation_eigenvalue)
            if self.elevation_eigenvalue is not None else None,
            "limitation": self.limitation,
        }

    @classmethod
    def from_json(cls, d: dict) -> "SpectrumReport":
        ev = d.get("elevation_eigenvalue")
        eu = d.get("elevation_used")
        return cls(
            int(d["dim"]), Polynomial.from_json(d["char_poly"]), Fraction(d["det"]),
            tuple(RootGroup.from_json(g) for g in d["classes"]),
            tuple(RationalEigenData.from_json(e) for e in d["rational_eigen_data"]),
            bool(d["diagonalizable"]), tuple(d["categories"]),
            tuple(eu) if eu else None, Fraction(ev) if ev is not None else None, d.get("limitation"),
        )


def _categories(groups, diag: bool) -> tuple[str, ...]:
    tags = {g.modulus.tag for g in groups}
    cats = []
    if Modulus.ZERO in tags:
        cats.append("null-eigenvalue")
    if tags & {Modulus.LT1, Modulus.GT1}:
        cats.append("off-unit-circle")
    if tags - {Modulus.ZERO} <= {Modulus.EQ1} and Modulus.EQ1 in tags:
        cats.append("unit-circle-diagonalizable" if diag else "unit-circle-non-diagonalizable")
    return tuple(cats)


def spectrum(A: Matrix, elevation_cap: int = DEFAULT_CAP) -> SpectrumReport:
    A._require_square()
    d = A.nrows
    cp = char_poly(A)
    groups = tuple(classify_roots(cp))
    rats, _ = squarefree_rational_roots(cp)
    data = []
    for lam, mult in rats:
        data.append(RationalEigenData(lam, mult, tuple(left_eigenvectors(A, lam)),
                                      tuple(jordan_chains(A, lam))))
    diag = is_diagonalizable(A, cp)
    report = dict(
        matrix_dim=d, char_poly=cp, det=det(A), classes=groups,
        rational_eigen_data=tuple(data), diagonalizable=diag,
        categories=_categories(groups, diag),
    )
    usable = any(abs(lam) not in (0, 1) for lam, _ in rats)
    off_circle = any(g.modulus.tag in (Modulus.LT1, Modulus.GT1) for g in groups)
    if not usable and off_circle:
        report.update(_elevation_search(A, elevation_cap))
    return SpectrumReport(**report)


def _elevation_search(A: Matrix, cap: int) -> dict:
    d = A.nrows
    size2 = comb(d + 2, 2)
    if size2 > cap:
        return {"limitation": "elevation-too-large"}
    blk = elevate_block(A, 2)
    rats, _ = squarefree_rational_roots(char_poly(blk))
    good = [lam for lam, _ in rats if abs(lam) not in (0, 1)]
    if good:
        return {"elevation_used": (2, size2), "elevation_eigenvalue": max(good, key=abs)}
    D = det(A)
    if d <= 2 or abs(D) in (0, 1):
        return {"limitation": "no-rational-eigenvalue-by-elevation"}
    size_d = comb(2 * d, d)
    if size_d > cap:
        return {"limitation": "elevation-too-large"}
    if left_eigenvectors(elevate_block(A, d), D):
        return {"elevation_used": (d, size_d), "elevation_eigenvalue": D}
    return {"limitation": "no-rational-eigenvalue-by-elevation"}
