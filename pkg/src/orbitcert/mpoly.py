"""Sparse multivariate polynomials with rational coefficients."""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .polyalg import Polynomial
from .ratmat import fraction_str, to_fraction

Exp = tuple[int, ...]


class MPoly:
    """Polynomial in ``nvars`` variables stored as {exponent tuple: coefficient}."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Exp, object] | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        t: dict[Exp, Fraction] = {}
        for e, c in items:
            e = tuple(int(x) for x in e)
            if len(e) != nvars:
                raise ValueError(f"exponent {e} does not match {nvars} variables")
            c = to_fraction(c)
            if c:
                t[e] = t.get(e, Fraction(0)) + c
                if not t[e]:
                    del t[e]
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "terms", t)

    def __setattr__(self, name, value):
        raise AttributeError("MPoly is immutable")

    @classmethod
    def const(cls, nvars: int, c) -> "MPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars: int, i: int) -> "MPoly":
        return cls(nvars, {tuple(1 if j == i else 0 for j in range(nvars)): 1})

    @classmethod
    def linear(cls, coeffs: Sequence, nvars: int | None = None) -> "MPoly":
        n = len(coeffs) if nvars is None else nvars
        return cls(n, {tuple(1 if j == i else 0 for j in range(n)): c for i, c in enumerate(coeffs)})

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def __eq__(self, other):
        return isinstance(other, MPoly) and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __repr__(self):
        return f"MPoly({self.nvars}, {self.format()})"

    def format(self, names: Sequence[str] | None = None) -> str:
        names = names or [f"x{i}" for i in range(self.nvars)]
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                names[i] if k == 1 else f"{names[i]}^{k}" for i, k in enumerate(e) if k
            )
            if mono and abs(c) == 1:
                body = mono
            else:
                body = fraction_str(abs(c)) + (f"*{mono}" if mono else "")
            parts.append(("-" if c < 0 else "+", body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    def _lift(self, other) -> "MPoly":
        if isinstance(other, MPoly):
            if other.nvars != self.nvars:
                raise ValueError(f"variable counts differ: {self.nvars} vs {other.nvars}")
            return other
        return MPoly.const(self.nvars, other)

    def __add__(self, other):
        other = self._lift(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, Fraction(0)) + c
        return MPoly(self.nvars, t)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, MPoly):
            c = to_fraction(other)
            return MPoly(self.nvars, {e: c * v for e, v in self.terms.items()})
        other = self._lift(other)
        t: dict[Exp, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, Fraction(0)) + c1 * c2
        return MPoly(self.nvars, t)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = MPoly.const(self.nvars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def evaluate(self, point: Sequence) -> Fraction:
        if len(point) != self.nvars:
            raise ValueError(f"point has {len(point)} coordinates, polynomial has {self.nvars} variables")
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for x, k in zip(point, e):
                if k:
                    term *= x ** k
            total += term
        return total

    def substitute(self, images: Sequence["MPoly"]) -> "MPoly":
        """Replace variable i by ``images[i]`` (all images share one variable count)."""
        if len(images) != self.nvars:
            raise ValueError("one image per variable required")
        nv = images[0].nvars if images else 0
        out = MPoly(nv)
        powers: dict[tuple[int, int], MPoly] = {}

        def pw(i, k):
            key = (i, k)
            if key not in powers:
                powers[key] = images[i] ** k
            return powers[key]

        for e, c in self.terms.items():
            term = MPoly.const(nv, c)
            for i, k in enumerate(e):
                if k:
                    term = term * pw(i, k)
            out = out + term
        return out

    def specialize(self, values: Sequence, keep: int) -> Polynomial:
        """Fix every variable except ``keep`` and return a univariate polynomial in it."""
        out: dict[int, Fraction] = {}
        for e, c in self.terms.items():
            term = c
            for i, (x, k) in enumerate(zip(values, e)):
                if i != keep and k:
                    term *= x ** k
            out[e[keep]] = out.get(e[keep], Fraction(0)) + term
        n = max(out, default=-1) + 1
        return Polynomial(out.get(i, Fraction(0)) for i in range(n))

    def coefficients_in(self, var: int) -> dict[Exp, Polynomial]:
        """Group terms by the exponents of the other variables; values are polynomials in ``var``."""
        grouped: dict[Exp, dict[int, Fraction]] = {}
        for e, c in self.terms.items():
            rest = e[:var] + (0,) + e[var + 1:]
            grouped.setdefault(rest, {})[e[var]] = c
        return {
            k: Polynomial(v.get(i, Fraction(0)) for i in range(max(v) + 1)) for k, v in grouped.items()
        }

    def uses_var(self, i: int) -> bool:
        return any(e[i] for e in self.terms)

    def with_nvars(self, nvars: int) -> "MPoly":
        """Append (or drop unused trailing) variables."""
        if nvars >= self.nvars:
            pad = (0,) * (nvars - self.nvars)
            return MPoly(nvars, {e + pad: c for e, c in self.terms.items()})
        for e in self.terms:
            if any(e[nvars:]):
                raise ValueError("cannot drop a variable that is used")
        return MPoly(nvars, {e[:nvars]: c for e, c in self.terms.items()})

    def linear_coefficients(self) -> list[Fraction] | None:
        """Coefficient vector when the polynomial is a homogeneous linear form."""
        out = [Fraction(0)] * self.nvars
        for e, c in self.terms.items():
            if sum(e) != 1:
                return None
            out[e.index(1)] = c
        return out

    def to_json(self) -> dict:
        return {
            "nvars": self.nvars,
            "coeffs": {",".join(map(str, e)): fraction_str(c) for e, c in sorted(self.terms.items())},
        }

    @classmethod
    def from_json(cls, data: dict) -> "MPoly":
        n = int(data["nvars"])
        terms = {}
        for k, v in data["coeffs"].items():
            e = tuple(int(x) for x in k.split(",")) if k else ()
            terms[e] = Fraction(str(v))
        return cls(n, terms)


def linear_images(M, nvars_out: int | None = None) -> list[MPoly]:
    """Images of the variables under v -> M v, as linear forms in the columns of M."""
    n_out = M.ncols if nvars_out is None else nvars_out
    return [MPoly.linear(list(M.rows[i]), n_out) for i in range(M.nrows)]
