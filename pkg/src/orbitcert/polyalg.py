"""Univariate rational polynomials and certified root-modulus classification.

Real roots are isolated with Sturm sequences and carried as
:class:`RealRoot` (a squarefree polynomial plus an isolating interval
whose endpoints have opposite signs).  Complex roots are never isolated
as points: their moduli are bracketed by exact counting of the roots
inside a disk of rational radius (Schur-Cohn matrix inertia), which is
all the downstream code consumes.

Roots on the unit circle are counted exactly through the substitution
y = x + 1/x applied to gcd(p, reciprocal(p)).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key, lru_cache
from math import floor, gcd, lcm
from typing import Iterable, Sequence

__all__ = [
    "Polynomial", "RealRoot", "Modulus", "ModulusClass", "RootGroup",
    "cyclotomic", "euler_phi", "squarefree_decomposition", "squarefree_part",
    "sturm_sequence", "count_real_roots", "isolate_real_roots",
    "squarefree_rational_roots", "unit_circle_factor", "unit_circle_count",
    "root_of_unity_order", "roots_inside", "classify_roots", "cauchy_bound",
    "modulus_brackets",
]


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


class Polynomial:
    """Dense polynomial with rational coefficients, constant term first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        c = [_frac(x) for x in coeffs]
        while c and not c[-1]:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    @classmethod
    def x(cls) -> "Polynomial":
        return cls([0, 1])

    @classmethod
    def const(cls, c) -> "Polynomial":
        return cls([c])

    @classmethod
    def from_roots(cls, roots: Iterable) -> "Polynomial":
        p = cls([1])
        for r in roots:
            p = p * cls([-_frac(r), 1])
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Polynomial([other]).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(("Polynomial", self.coeffs))

    def __repr__(self):
        return f"Polynomial({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            if k and a == 1:
                body = mono
            else:
                body = f"{a}" + (f"*{mono}" if mono else "")
            parts.append((sign, body))
        first_sign, first = parts[0]
        s = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    def __call__(self, x):
        acc = 0 * x if not isinstance(x, Fraction) else Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def _coerce(self, other) -> "Polynomial":
        return other if isinstance(other, Polynomial) else Polynomial([other])

    def __add__(self, other):
        other = self._coerce(other)
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return Polynomial(
            (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)
        )

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale_by(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Polynomial()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return Polynomial(out)

    __rmul__ = __mul__

    def scale_by(self, c) -> "Polynomial":
        c = _frac(c)
        return Polynomial(c * x for x in self.coeffs)

    def __pow__(self, n: int):
        result = Polynomial([1])
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def divmod(self, other: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        d = other.degree
        if len(r) - 1 < d:
            return Polynomial(), self
        q = [Fraction(0)] * (len(r) - d)
        inv = 1 / other.lc
        oc = other.coeffs
        for k in range(len(r) - 1 - d, -1, -1):
            c = r[k + d] * inv
            q[k] = c
            if c:
                for j in range(d + 1):
                    r[k + j] -= c * oc[j]
        return Polynomial(q), Polynomial(r[:d])

    def __floordiv__(self, other):
        return self.divmod(self._coerce(other))[0]

    def __mod__(self, other):
        return self.divmod(self._coerce(other))[1]

    def divides(self, other: "Polynomial") -> bool:
        return (other % self).is_zero()

    def powmod(self, n: int, mod: "Polynomial") -> "Polynomial":
        result = Polynomial([1]) % mod
        base = self % mod
        while n:
            if n & 1:
                result = (result * base) % mod
            n >>= 1
            if n:
                base = (base * base) % mod
        return result

    def derivative(self) -> "Polynomial":
        return Polynomial(k * c for k, c in enumerate(self.coeffs) if k)

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        return self.scale_by(1 / self.lc)

    def primitive(self) -> "Polynomial":
        """Integer coefficients, content 1, positive leading coefficient."""
        if self.is_zero():
            return self
        den = lcm(*(c.denominator for c in self.coeffs))
        ints = [int(c * den) for c in self.coeffs]
        g = 0
        for v in ints:
            g = gcd(g, v)
        if ints[-1] < 0:
            g = -g
        return Polynomial(Fraction(v // g) for v in ints)

    def gcd(self, other: "Polynomial") -> "Polynomial":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def compose(self, inner: "Polynomial") -> "Polynomial":
        acc = Polynomial()
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc

    def scale_var(self, rho) -> "Polynomial":
        """Return p(rho * x)."""
        rho = _frac(rho)
        out, pw = [], Fraction(1)
        for c in self.coeffs:
            out.append(c * pw)
            pw *= rho
        return Polynomial(out)

    def reciprocal(self) -> "Polynomial":
        """x^deg * p(1/x)."""
        return Polynomial(reversed(self.coeffs))

    def trailing_zero_order(self) -> int:
        k = 0
        while k < len(self.coeffs) and not self.coeffs[k]:
            k += 1
        return k

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def to_json(self) -> list:
        from .ratmat import fraction_str

        return [fraction_str(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence) -> "Polynomial":
        return cls(Fraction(str(x)) for x in data)


X = Polynomial.x()


# -- number theory helpers ---------------------------------------------------

def euler_phi(m: int) -> int:
    result, n, p = m, m, 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            result -= result // p
        p += 1
    if n > 1:
        result -= result // n
    return result


@lru_cache(maxsize=None)
def cyclotomic(m: int) -> Polynomial:
    if m < 1:
        raise ValueError("cyclotomic index must be positive")
    p = Polynomial([-1] + [0] * (m - 1) + [1])
    for d in range(1, m):
        if m % d == 0:
            p = p // cyclotomic(d)
    return p


@lru_cache(maxsize=None)
def _unity_candidates(degree: int) -> tuple[int, ...]:
    # phi(m) >= sqrt(m/2), so phi(m) <= degree forces m <= 2 * degree^2
    return tuple(m for m in range(1, 2 * degree * degree + 3) if euler_phi(m) <= degree)


# -- squarefree decomposition ------------------------------------------------

def squarefree_decomposition(p: Polynomial) -> list[tuple[Polynomial, int]]:
    """Yun's algorithm: monic squarefree, pairwise coprime (s_i, i) with p = c * prod s_i^i."""
    if p.is_zero():
        raise ValueError("zero polynomial has no squarefree decomposition")
    out = []
    f = p.monic()
    if f.degree <= 0:
        return out
    df = f.derivative()
    a = f.gcd(df)
    b = f // a
    c = df // a
    d = c - b.derivative()
    i = 1
    while b.degree > 0:
        a = b.gcd(d)
        b = b // a
        c = d // a
        if a.degree > 0:
            out.append((a.monic(), i))
        i += 1
        d = c - b.derivative()
    return out


def squarefree_part(p: Polynomial) -> Polynomial:
    if p.is_zero():
        raise ValueError("zero polynomial")
    f = p.monic()
    return (f // f.gcd(f.derivative())).monic()


# -- Sturm machinery ---------------------------------------------------------

def sturm_sequence(p: Polynomial) -> list[Polynomial]:
    """Sturm chain of a squarefree polynomial, each member scaled by a positive constant."""
    if p.is_zero():
        raise ValueError("zero polynomial")
    seq = [p.scale_by(1 / abs(p.lc))]
    if p.degree <= 0:
        return seq
    d = p.derivative()
    seq.append(d.scale_by(1 / abs(d.lc)))
    while seq[-1].degree > 0:
        r = -(seq[-2] % seq[-1])
        if r.is_zero():
            break
        seq.append(r.scale_by(1 / abs(r.lc)))
    return seq


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _variations(signs: Iterable[int]) -> int:
    v, last = 0, 0
    for s in signs:
        if s:
            if last and s != last:
                v += 1
            last = s
    return v


def _sturm_v(seq: Sequence[Polynomial], x) -> int:
    if x == "+inf":
        return _variations(_sign(q.lc) for q in seq)
    if x == "-inf":
        return _variations(_sign(q.lc) * (-1 if q.degree % 2 else 1) for q in seq)
    return _variations(_sign(q(x)) for q in seq)


def count_real_roots(p: Polynomial, lo=None, hi=None, seq=None) -> int:
    """Number of distinct real roots in (lo, hi]; ``None`` means infinite."""
    seq = seq or sturm_sequence(squarefree_part(p))
    a = "-inf" if lo is None else _frac(lo)
    b = "+inf" if hi is None else _frac(hi)
    return _sturm_v(seq, a) - _sturm_v(seq, b)


def cauchy_bound(p: Polynomial) -> Fraction:
    """1 + max |a_i / a_n|: every complex root has strictly smaller modulus."""
    if p.degree < 1:
        return Fraction(1)
    lc = abs(p.lc)
    return 1 + max(abs(c) / lc for c in p.coeffs[:-1])


def _isolate_intervals(seq, lo: Fraction, hi: Fraction, vlo: int, vhi: int, out: list):
    n = vlo - vhi
    if n == 0:
        return
    if n == 1:
        out.append((lo, hi))
        return
    mid = (lo + hi) / 2
    vmid = _sturm_v(seq, mid)
    _isolate_intervals(seq, lo, mid, vlo, vmid, out)
    _isolate_intervals(seq, mid, hi, vmid, vhi, out)


def _sqf_intervals(s: Polynomial) -> tuple[list, list]:
    seq = sturm_sequence(s)
    B = cauchy_bound(s)
    out: list = []
    _isolate_intervals(seq, -B, B, _sturm_v(seq, -B), _sturm_v(seq, B), out)
    return seq, out


def _rational_roots_sqf(s: Polynomial) -> list[Fraction]:
    """Rational roots of a squarefree polynomial.

    A rational root of a primitive integer polynomial with leading
    coefficient L lies in (1/L)Z; an isolating interval narrower than
    1/L holds at most one such point, which is then tested exactly.
    """
    if s.degree < 1:
        return []
    prim = s.primitive()
    L = int(prim.lc)
    seq, ivals = _sqf_intervals(prim)
    roots = []
    step = Fraction(1, L)
    for a, b in ivals:
        va, vb = _sturm_v(seq, a), _sturm_v(seq, b)
        while b - a >= step:
            m = (a + b) / 2
            vm = _sturm_v(seq, m)
            if va - vm == 1:
                b, vb = m, vm
            else:
                a, va = m, vm
        cand = Fraction(floor(b * L), L)
        if cand > a and not prim(cand):
            roots.append(cand)
    return roots


def squarefree_rational_roots(p: Polynomial) -> tuple[list[tuple[Fraction, int]], Polynomial]:
    """Rational roots with multiplicity, and the cofactor free of rational roots."""
    if p.is_zero():
        raise ValueError("zero polynomial")
    found = []
    cof = p
    for s, mult in squarefree_decomposition(p):
        for r in _rational_roots_sqf(s):
            found.append((r, mult))
            cof = cof // (Polynomial([-r, 1]) ** mult)
    found.sort()
    return found, cof


# -- real algebraic numbers ----------------------------------------------------

def _interval_eval(p: Polynomial, a: Fraction, b: Fraction) -> tuple[Fraction, Fraction]:
    lo = hi = Fraction(0)
    for c in reversed(p.coeffs):
        prods = (lo * a, lo * b, hi * a, hi * b)
        lo, hi = min(prods) + c, max(prods) + c
    return lo, hi


def _centered_sign(p: Polynomial, a: Fraction, b: Fraction) -> int | None:
    """Sign of p on [a, b] if it is constant there, from the Taylor expansion at the midpoint."""
    m, r = (a + b) / 2, (b - a) / 2
    c = list(p.coeffs)
    n = len(c)
    # Taylor shift by synthetic division: c[k] becomes p^(k)(m)/k!
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            c[j] += m * c[j + 1]
    err, rk = Fraction(0), Fraction(1)
    for k in range(1, n):
        rk *= r
        err += abs(c[k]) * rk
    if c and abs(c[0]) > err:
        return 1 if c[0] > 0 else -1
    return None


# tightest known isolating interval per irrational root, shared by all sign queries
_TIGHT: dict = {}


@dataclass(frozen=True)
class RealRoot:
    """A real algebraic number: the unique root of ``poly`` in (lo, hi).

    When ``lo == hi`` the number is the rational ``lo`` itself.  Otherwise
    ``poly`` is squarefree and takes opposite nonzero signs at ``lo`` and
    ``hi``.  Refinement returns a new value.
    """

    poly: Polynomial
    lo: Fraction
    hi: Fraction

    @classmethod
    def rational(cls, q) -> "RealRoot":
        q = _frac(q)
        return cls(Polynomial([-q, 1]), q, q)

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def approx(self) -> float:
        return float((self.lo + self.hi) / 2)

    def refine(self, width) -> "RealRoot":
        width = _frac(width)
        lo, hi = self.lo, self.hi
        if lo == hi or hi - lo <= width:
            return self
        slo = _sign(self.poly(lo))
        while hi - lo > width:
            mid = (lo + hi) / 2
            sm = _sign(self.poly(mid))
            if sm == 0:
                return RealRoot(self.poly, mid, mid)
            if sm == slo:
                lo = mid
            else:
                hi = mid
        return RealRoot(self.poly, lo, hi)

    def is_zero_of(self, h: Polynomial) -> bool:
        if self.is_exact:
            return h(self.lo) == 0
        h = h % self.poly
        if h.is_zero():
            return True
        if h.degree == 0:
            return False
        g = h.gcd(self.poly)
        return g.degree > 0 and count_real_roots(g, self.lo, self.hi) > 0

    def sign_of(self, h: Polynomial) -> int:
        """Exact sign of h evaluated at this number."""
        if self.is_exact:
            return _sign(h(self.lo))
        h = h % self.poly
        if h.degree <= 0:
            return _sign(h.coeffs[0]) if h.coeffs else 0
        key = (self.poly, self.lo, self.hi)
        lo, hi = _TIGHT.get(key, (self.lo, self.hi))
        quick = _centered_sign(h, lo, hi)
        if quick is not None:
            return quick
        if self.is_zero_of(h):
            return 0
        slo = _sign(self.poly(lo))
        while True:
            s = _centered_sign(h, lo, hi)
            if s is not None:
                if len(_TIGHT) > 4096:
                    _TIGHT.clear()
                _TIGHT[key] = (lo, hi)
                return s
            for _ in range(8):
                mid = (lo + hi) / 2
                sm = _sign(self.poly(mid))
                if sm == 0:
                    return _sign(h(mid))
                if sm == slo:
                    lo = mid
                else:
                    hi = mid

    def compare(self, q) -> int:
        """sign(self - q) for a rational q."""
        return self.sign_of(Polynomial([-_frac(q), 1]))

    def abs_compare(self, q) -> int:
        """sign(|self| - q) for a rational q >= 0."""
        q = _frac(q)
        return self.sign_of(Polynomial([-q * q, 0, 1]))

    def value(self) -> Fraction:
        if not self.is_exact:
            raise ValueError("irrational real root has no exact rational value")
        return self.lo

    def to_json(self) -> dict:
        from .ratmat import fraction_str

        return {"poly": self.poly.to_json(), "lo": fraction_str(self.lo), "hi": fraction_str(self.hi)}

    @classmethod
    def from_json(cls, d: dict) -> "RealRoot":
        return cls(Polynomial.from_json(d["poly"]), Fraction(d["lo"]), Fraction(d["hi"]))


def isolate_real_roots(p: Polynomial) -> list[RealRoot]:
    """All distinct real roots of p in increasing order."""
    if p.is_zero():
        raise ValueError("zero polynomial")
    s = squarefree_part(p)
    if s.degree < 1:
        return []
    rats = _rational_roots_sqf(s)
    rest = s
    for r in rats:
        rest = rest // Polynomial([-r, 1])
    roots = [RealRoot.rational(r) for r in rats]
    if rest.degree >= 1:
        _, ivals = _sqf_intervals(rest)
        roots += [RealRoot(rest, a, b) for a, b in ivals]
    return sorted(roots, key=cmp_to_key(_order))


def _order(a: RealRoot, b: RealRoot) -> int:
    if a.is_exact:
        return -b.compare(a.lo)
    if b.is_exact:
        return a.compare(b.lo)
    # irrational roots of one squarefree factor have disjoint isolating intervals
    return -1 if a.lo < b.lo else (1 if a.lo > b.lo else 0)


def real_roots_in(p: Polynomial, lo: Fraction, hi: Fraction) -> list[RealRoot]:
    """Distinct real roots of p lying strictly between lo and hi."""
    out = []
    for r in isolate_real_roots(p):
        if r.compare(lo) > 0 and r.compare(hi) < 0:
            out.append(r)
    return out


# -- unit circle ---------------------------------------------------------------

def _strip_zero_roots(p: Polynomial) -> Polynomial:
    k = p.trailing_zero_order()
    return Polynomial(p.coeffs[k:])


def unit_circle_factor(p: Polynomial) -> Polynomial:
    """gcd(p, reciprocal(p)), monic; it carries every unit-modulus root of p."""
    if p.is_zero():
        raise ValueError("zero polynomial")
    q = _strip_zero_roots(p)
    return q.gcd(q.reciprocal())


def _dickson_transform(g: Polynomial) -> Polynomial:
    """h with g(x) = x^m h(x + 1/x) for a palindromic g of degree 2m."""
    m = g.degree // 2
    a = g.coeffs
    y = Polynomial.x()
    D_prev, D = Polynomial([2]), y
    h = Polynomial([a[m]])
    for j in range(1, m + 1):
        h = h + D.scale_by(a[m + j])
        D_prev, D = D, y * D - D_prev
    return h


def unit_circle_count(p: Polynomial) -> int:
    """Exact number of distinct roots of p on the unit circle."""
    g = squarefree_part(unit_circle_factor(p)) if p.degree > 0 else Polynomial([1])
    count = 0
    for r in (1, -1):
        if g.degree > 0 and g(Fraction(r)) == 0:
            count += 1
            g = g // Polynomial([-r, 1])
    if g.degree <= 0:
        return count
    h = _dickson_transform(g)
    inner = count_real_roots(h, -2, 2) - (1 if h(Fraction(2)) == 0 else 0)
    return count + 2 * inner


def root_of_unity_order(q: Polynomial) -> int | None:
    """Least m with q | x^m - 1, searched over m with phi(m) <= deg q."""
    if q.degree < 1:
        return None
    qm = q.monic()
    if qm(Fraction(0)) == 0 or not qm.is_integral():
        return None
    x = Polynomial.x()
    for m in _unity_candidates(qm.degree):
        if x.powmod(m, qm) == Polynomial([1]):
            return m
    return None


# -- counting roots in disks ----------------------------------------------------

def roots_inside(p: Polynomial, rho=1) -> int | None:
    """Number of roots (with multiplicity) of p with |z| < rho.

    Uses the inertia of the Schur-Cohn matrix B^T B - A^T A of p(rho*z).
    Returns ``None`` when that matrix is singular, which happens exactly
    when p has a pair of roots mirrored through the circle |z| = rho
    (in particular any root on the circle).
    """
    from .ratmat import Matrix, char_poly

    f = p.scale_var(rho)
    n = f.degree
    if n < 1:
        return 0
    a = f.coeffs
    A = [[a[i - j] if j <= i else Fraction(0) for j in range(n)] for i in range(n)]
    B = [[a[n - (i - j)] if j <= i else Fraction(0) for j in range(n)] for i in range(n)]
    C = [
        [
            sum((B[k][i] * B[k][j] - A[k][i] * A[k][j] for k in range(n)), Fraction(0))
            for j in range(n)
        ]
        for i in range(n)
    ]
    cp = char_poly(Matrix(C))
    if cp.coeffs[0] == 0:
        return None
    # symmetric matrix: char poly is real-rooted, so Descartes' count is exact
    return _variations(_sign(c) for c in cp.coeffs)


def _roots_inside_near(p: Polynomial, rho: Fraction) -> tuple[Fraction, int]:
    """Count at rho, nudging rho by tiny amounts if the count is singular."""
    k = 40
    r = rho
    while True:
        c = roots_inside(p, r)
        if c is not None:
            return r, c
        r = rho + Fraction(1, 2 ** k) * (1 if k % 2 else -1)
        k += 1


# -- classification ------------------------------------------------------------

class Modulus(str, enum.Enum):
    ZERO = "Zero"
    LT1 = "ModulusLessThanOne"
    EQ1 = "ModulusEqualOne"
    GT1 = "ModulusGreaterThanOne"


@dataclass(frozen=True)
class ModulusClass:
    tag: Modulus
    unity_order: int | None = None

    def __post_init__(self):
        if self.unity_order is not None and self.tag is not Modulus.EQ1:
            raise ValueError("a unity order requires modulus one")


@dataclass(frozen=True)
class RootGroup:
    """Distinct roots of ``factor`` sharing a modulus class.

    ``count`` distinct roots, each of multiplicity ``multiplicity`` in the
    classified polynomial.  Real single roots carry ``root``; complex groups
    carry ``modulus_bracket``, a rational interval containing |lambda|.
    """

    factor: Polynomial
    multiplicity: int
    modulus: ModulusClass
    count: int
    real: bool
    root: RealRoot | None = None
    modulus_bracket: tuple[Fraction, Fraction] | None = None

    @property
    def weight(self) -> int:
        return self.count * self.multiplicity

    def to_json(self) -> dict:
        from .ratmat import fraction_str

        d = {
            "factor": self.factor.to_json(), "multiplicity": self.multiplicity,
            "modulus": self.modulus.tag.value, "unity_order": self.modulus.unity_order,
            "count": self.count, "real": self.real,
            "root": self.root.to_json() if self.root is not None else None,
            "modulus_bracket": [fraction_str(x) for x in self.modulus_bracket] if self.modulus_bracket else None,
        }
        if self.root is not None:
            d["approx"] = self.root.refine(Fraction(1, 2 ** 40)).approx()
        elif self.modulus_bracket:
            d["approx_modulus"] = float(sum(self.modulus_bracket) / 2)
        return d

    @classmethod
    def from_json(cls, d: dict) -> "RootGroup":
        br = d.get("modulus_bracket")
        return cls(
            Polynomial.from_json(d["factor"]), int(d["multiplicity"]),
            ModulusClass(Modulus(d["modulus"]), d.get("unity_order")), int(d["count"]), bool(d["real"]),
            RealRoot.from_json(d["root"]) if d.get("root") else None,
            (Fraction(br[0]), Fraction(br[1])) if br else None,
        )


def _real_class(r: RealRoot) -> Modulus:
    if r.is_exact:
        v = abs(r.lo)
        return Modulus.ZERO if v == 0 else Modulus.LT1 if v < 1 else Modulus.EQ1 if v == 1 else Modulus.GT1
    c = r.abs_compare(1)
    return Modulus.LT1 if c < 0 else Modulus.GT1 if c > 0 else Modulus.EQ1


def modulus_brackets(
    s: Polynomial, lo: Fraction, hi: Fraction, real_roots: Sequence[RealRoot], tol: Fraction
) -> list[tuple[Fraction, Fraction, int]]:
    """Brackets (a, b, count) of the moduli of non-real roots of s in lo <= |z| < hi."""

    def real_below(rho):
        return sum(1 for r in real_roots if r.abs_compare(rho) < 0)

    out: list = []

    def rec(a, na, b, nb):
        k = (nb - real_below(b)) - (na - real_below(a))
        if k <= 0:
            return
        if b - a <= tol:
            out.append((a, b, k))
            return
        m, nm = _roots_inside_near(s, (a + b) / 2)
        rec(a, na, m, nm)
        rec(m, nm, b, nb)

    a, na = _roots_inside_near(s, lo)
    b, nb = _roots_inside_near(s, hi)
    rec(a, na, b, nb)
    return out


def _classify_sqf(s: Polynomial, mult: int, tol: Fraction) -> list[RootGroup]:
    groups: list[RootGroup] = []
    for m in _unity_candidates(max(s.degree, 1)):
        if s.degree < 1:
            break
        if euler_phi(m) > s.degree:
            continue
        phi = cyclotomic(m)
        if phi.divides(s):
            groups.append(RootGroup(phi, mult, ModulusClass(Modulus.EQ1, m), phi.degree, m <= 2,
                                    RealRoot.rational(1 if m == 1 else -1) if m <= 2 else None))
            s = s // phi
    if s.degree < 1:
        return groups
    reals = isolate_real_roots(s)
    for r in reals:
        groups.append(RootGroup(s, mult, ModulusClass(_real_class(r)), 1, True, r))
    n_complex = s.degree - len(reals)
    if n_complex == 0:
        return groups
    u_total = unit_circle_count(s)
    u_real = sum(1 for r in reals if _real_class(r) is Modulus.EQ1)
    u_complex = u_total - u_real
    eps = Fraction(1, 16)
    while True:
        lo, n_lo = _roots_inside_near(s, 1 - eps)
        hi, n_hi = _roots_inside_near(s, 1 + eps)
        if n_hi - n_lo == u_total and lo < 1 < hi:
            break
        eps /= 4
    B = cauchy_bound(s)
    for a, b, k in modulus_brackets(s, Fraction(0), lo, reals, tol):
        groups.append(RootGroup(s, mult, ModulusClass(Modulus.LT1), k, False, None, (a, b)))
    if u_complex:
        groups.append(RootGroup(s, mult, ModulusClass(Modulus.EQ1), u_complex, False, None,
                                (Fraction(1), Fraction(1))))
    for a, b, k in modulus_brackets(s, hi, B, reals, tol):
        groups.append(RootGroup(s, mult, ModulusClass(Modulus.GT1), k, False, None, (a, b)))
    return groups


def classify_roots(p: Polynomial, tol=Fraction(1, 2 ** 20)) -> list[RootGroup]:
    """Assign every root of p exactly one modulus class.

    Multiplicity-weighted group sizes sum to deg p.
    """
    if p.is_zero():
        raise ValueError("zero polynomial")
    groups: list[RootGroup] = []
    z = p.trailing_zero_order()
    if z:
        groups.append(RootGroup(Polynomial.x(), z, ModulusClass(Modulus.ZERO), 1, True,
                                RealRoot.rational(0)))
    rest = Polynomial(p.coeffs[z:])
    if rest.degree < 1:
        return groups
    for s, mult in squarefree_decomposition(rest):
        groups.extend(_classify_sqf(s, mult, _frac(tol)))
    return groups
