"""Semialgebraic certificate sets.

A predicate is a tree of :class:`And` / :class:`Or` over atoms.  Atom
polynomials range over the instance variables x0..x(d-1); inside an
:class:`AuxRoot` they may also use one extra variable (index d) standing
for a real algebraic number, the root of a univariate polynomial inside
a rational interval.  Evaluation is exact: atoms involving the auxiliary
number are decided by exact sign determination at that root.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Union

from .mpoly import MPoly
from .polyalg import Polynomial, RealRoot, real_roots_in
from .ratmat import fraction_str, to_fraction

CMPS = ("<", "<=", ">", ">=", "=", "!=")


class MalformedPredicate(ValueError):
    pass


def _check_cmp(cmp: str):
    if cmp not in CMPS:
        raise MalformedPredicate(f"unknown comparison {cmp!r}")


def holds(sign: int, cmp: str) -> bool:
    return {
        "<": sign < 0, "<=": sign <= 0, ">": sign > 0, ">=": sign >= 0,
        "=": sign == 0, "!=": sign != 0,
    }[cmp]


@dataclass(frozen=True)
class And:
    items: tuple = ()


@dataclass(frozen=True)
class Or:
    items: tuple = ()


@dataclass(frozen=True)
class PolyCmp:
    """poly(v) cmp rhs."""

    poly: MPoly
    cmp: str
    rhs: Fraction = Fraction(0)

    def __post_init__(self):
        _check_cmp(self.cmp)


@dataclass(frozen=True)
class AbsCmp:
    """|form(v)| cmp bound, the bound being constant or a polynomial in the auxiliary number."""

    form: MPoly
    cmp: str
    bound: MPoly

    def __post_init__(self):
        _check_cmp(self.cmp)
        if self.cmp in ("=", "!="):
            raise MalformedPredicate("absolute-value atoms take an order comparison")


@dataclass(frozen=True)
class Congruence:
    """(form(v) - offset) / modulus is an integer k, with k >= threshold if given."""

    form: MPoly
    modulus: Fraction
    offset: Fraction = Fraction(0)
    threshold: int | None = None

    def __post_init__(self):
        if not self.modulus:
            raise MalformedPredicate("congruence modulus must be nonzero")


@dataclass(frozen=True)
class AuxRoot:
    """There is a root t of ``poly`` with lo < t < hi such that ``body`` holds."""

    var: int
    poly: Polynomial
    lo: Fraction
    hi: Fraction
    body: "Predicate"


Predicate = Union[And, Or, PolyCmp, AbsCmp, Congruence, AuxRoot]


@lru_cache(maxsize=256)
def _roots(poly: Polynomial, lo: Fraction, hi: Fraction) -> tuple[RealRoot, ...]:
    return tuple(real_roots_in(poly, lo, hi))


def aux_roots(node: AuxRoot) -> tuple[RealRoot, ...]:
    return _roots(node.poly, node.lo, node.hi)


def _poly_sign(p: MPoly, v: Sequence[Fraction], aux: RealRoot | None) -> int:
    d = len(v)
    if p.nvars == d:
        x = p.evaluate(v)
        return (x > 0) - (x < 0)
    if p.nvars != d + 1 or aux is None:
        raise MalformedPredicate(
            f"atom over {p.nvars} variables evaluated at a {d}-dimensional point"
            + ("" if aux is not None else " outside an auxiliary-root scope")
        )
    return aux.sign_of(p.specialize(list(v) + [Fraction(0)], d))


def _lift(p: MPoly, n: int) -> MPoly:
    return p if p.nvars == n else p.with_nvars(n)


def _eval(node, v, aux: RealRoot | None) -> bool:
    if isinstance(node, And):
        return all(_eval(x, v, aux) for x in node.items)
    if isinstance(node, Or):
        return any(_eval(x, v, aux) for x in node.items)
    if isinstance(node, PolyCmp):
        return holds(_poly_sign(node.poly - node.rhs, v, aux), node.cmp)
    if isinstance(node, AbsCmp):
        n = max(node.form.nvars, node.bound.nvars)
        form, bound = _lift(node.form, n), _lift(node.bound, n)
        s = _poly_sign(form, v, aux)
        return holds(_poly_sign(form * s - bound, v, aux), node.cmp)
    if isinstance(node, Congruence):
        if node.form.nvars != len(v):
            raise MalformedPredicate("congruence forms must be rational")
        k = (node.form.evaluate(v) - node.offset) / node.modulus
        if k.denominator != 1:
            return False
        return node.threshold is None or k >= node.threshold
    if isinstance(node, AuxRoot):
        if aux is not None:
            raise MalformedPredicate("nested auxiliary roots are not supported")
        if node.var != len(v):
            raise MalformedPredicate(f"auxiliary variable must have index {len(v)}, got {node.var}")
        return any(_eval(node.body, v, r) for r in aux_roots(node))
    raise MalformedPredicate(f"unknown predicate node {node!r}")


def eval_predicate(P: Predicate, v) -> bool:
    """Exact membership test of the point v in P."""
    return _eval(P, [to_fraction(x) for x in v], None)


def substitute(P: Predicate, images: Sequence[MPoly]) -> Predicate:
    """Rewrite P(y) as P(images(x)); images are polynomials in the new variables."""
    d_new = images[0].nvars if images else 0

    def sub(p: MPoly, in_aux: bool) -> MPoly:
        if not in_aux:
            return p.substitute(images)
        ims = [im.with_nvars(d_new + 1) for im in images] + [MPoly.var(d_new + 1, d_new)]
        return _lift(p, len(images) + 1).substitute(ims)

    def rec(node, in_aux: bool):
        if isinstance(node, And):
            return And(tuple(rec(x, in_aux) for x in node.items))
        if isinstance(node, Or):
            return Or(tuple(rec(x, in_aux) for x in node.items))
        if isinstance(node, PolyCmp):
            return PolyCmp(sub(node.poly, in_aux), node.cmp, node.rhs)
        if isinstance(node, AbsCmp):
            return AbsCmp(sub(node.form, in_aux), node.cmp, sub(node.bound, in_aux))
        if isinstance(node, Congruence):
            return Congruence(sub(node.form, False), node.modulus, node.offset, node.threshold)
        if isinstance(node, AuxRoot):
            return AuxRoot(d_new, node.poly, node.lo, node.hi, rec(node.body, True))
        raise MalformedPredicate(f"unknown predicate node {node!r}")

    return rec(P, False)


# -- serialization -------------------------------------------------------------

def to_json(node) -> dict:
    if isinstance(node, (And, Or)):
        return {"op": "and" if isinstance(node, And) else "or", "args": [to_json(x) for x in node.items]}
    if isinstance(node, PolyCmp):
        return {"op": "poly", "cmp": node.cmp, "poly": node.poly.to_json(), "rhs": fraction_str(node.rhs)}
    if isinstance(node, AbsCmp):
        return {"op": "abs", "cmp": node.cmp, "form": node.form.to_json(), "bound": node.bound.to_json()}
    if isinstance(node, Congruence):
        return {
            "op": "congruence", "form": node.form.to_json(), "modulus": fraction_str(node.modulus),
            "offset": fraction_str(node.offset), "threshold": node.threshold,
        }
    if isinstance(node, AuxRoot):
        return {
            "op": "auxroot", "var": node.var, "poly": node.poly.to_json(),
            "lo": fraction_str(node.lo), "hi": fraction_str(node.hi), "body": to_json(node.body),
        }
    raise MalformedPredicate(f"unknown predicate node {node!r}")


def from_json(d: dict):
    try:
        op = d["op"]
        if op == "and":
            return And(tuple(from_json(x) for x in d["args"]))
        if op == "or":
            return Or(tuple(from_json(x) for x in d["args"]))
        if op == "poly":
            return PolyCmp(MPoly.from_json(d["poly"]), d["cmp"], Fraction(d.get("rhs", "0")))
        if op == "abs":
            return AbsCmp(MPoly.from_json(d["form"]), d["cmp"], MPoly.from_json(d["bound"]))
        if op == "congruence":
            return Congruence(MPoly.from_json(d["form"]), Fraction(d["modulus"]),
                              Fraction(d.get("offset", "0")), d.get("threshold"))
        if op == "auxroot":
            return AuxRoot(int(d["var"]), Polynomial.from_json(d["poly"]), Fraction(d["lo"]),
                           Fraction(d["hi"]), from_json(d["body"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedPredicate(f"bad predicate node {d!r}: {exc}") from exc
    raise MalformedPredicate(f"unknown predicate op {d.get('op')!r}")


# -- human-readable and SMT-LIB rendering -----------------------------------------

def format_predicate(node, names: Sequence[str] | None = None, aux_name: str = "t") -> str:
    def nm(p: MPoly, aux_var):
        out = list(names[: p.nvars]) if names else []
        out += [f"x{i}" for i in range(len(out), p.nvars)]
        if aux_var is not None and aux_var < p.nvars:
            out[aux_var] = aux_name
        return out

    def lin(form: MPoly, aux_var, offset: Fraction) -> str:
        s = form.format(nm(form, aux_var))
        if offset:
            s = f"{s} - ({fraction_str(offset)})"
        return s

    def rec(n, aux_var=None):
        if isinstance(n, And):
            return "true" if not n.items else " and ".join(f"({rec(x, aux_var)})" for x in n.items)
        if isinstance(n, Or):
            return "false" if not n.items else " or ".join(f"({rec(x, aux_var)})" for x in n.items)
        if isinstance(n, PolyCmp):
            return f"{n.poly.format(nm(n.poly, aux_var))} {n.cmp} {fraction_str(n.rhs)}"
        if isinstance(n, AbsCmp):
            return f"|{n.form.format(nm(n.form, aux_var))}| {n.cmp} {n.bound.format(nm(n.bound, aux_var))}"
        if isinstance(n, Congruence):
            k = "k" if n.threshold is None else f"k >= {n.threshold}"
            step = "k" if n.modulus == 1 else f"{fraction_str(n.modulus)}*k"
            return f"{lin(n.form, aux_var, n.offset)} = {step} for some integer {k}"
        if isinstance(n, AuxRoot):
            dp = MPoly(1, {(k,): c for k, c in enumerate(n.poly.coeffs) if c}).format([aux_name])
            return (f"exists {aux_name} in ({fraction_str(n.lo)}, {fraction_str(n.hi)}) with {dp} = 0: "
                    f"{rec(n.body, n.var)}")
        raise MalformedPredicate(f"unknown predicate node {n!r}")

    return rec(node)


def _smt_num(q: Fraction) -> str:
    q = Fraction(q)
    body = f"{abs(q.numerator)}.0" if q.denominator == 1 else f"(/ {abs(q.numerator)}.0 {q.denominator}.0)"
    return f"(- {body})" if q < 0 else body


def _smt_poly(p: MPoly, names: Sequence[str]) -> str:
    if not p.terms:
        return "0.0"
    terms = []
    for e, c in sorted(p.terms.items()):
        factors = [_smt_num(c)]
        for i, k in enumerate(e):
            factors += [names[i]] * k
        terms.append(factors[0] if len(factors) == 1 else f"(* {' '.join(factors)})")
    return terms[0] if len(terms) == 1 else f"(+ {' '.join(terms)})"


def _smt_upoly(p: Polynomial, var: str) -> str:
    return _smt_poly(MPoly(1, {(k,): c for k, c in enumerate(p.coeffs) if c}), [var])


_SMT_CMP = {"<": "<", "<=": "<=", ">": ">", ">=": ">=", "=": "="}


def to_smtlib(node, names: Sequence[str], aux: str = "aux_t", hoist: list | None = None) -> str:
    """SMT-LIB2 term for ``node``.

    Congruence and auxiliary-root atoms introduce existential variables.
    With ``hoist`` given, those become free constants recorded as
    ``(name, sort)`` pairs instead; the AST has no negation, so this keeps
    satisfiability and solvers handle free constants far better.
    """
    counter = [0]

    def fresh(base):
        counter[0] += 1
        return f"{base}{counter[0]}"

    def nm(p: MPoly, a):
        return list(names[: p.nvars]) + [a] * max(0, p.nvars - len(names))

    def cmp(op, a, b):
        return f"(not (= {a} {b}))" if op == "!=" else f"({_SMT_CMP[op]} {a} {b})"

    def bind(var, sort, body):
        if hoist is not None:
            hoist.append((var, sort))
            return body
        return f"(exists (({var} {sort})) {body})"

    def rec(n, a, depth=0):
        if isinstance(n, And):
            return "true" if not n.items else f"(and {' '.join(rec(x, a, depth) for x in n.items)})"
        if isinstance(n, Or):
            return "false" if not n.items else f"(or {' '.join(rec(x, a, depth) for x in n.items)})"
        if isinstance(n, PolyCmp):
            return cmp(n.cmp, _smt_poly(n.poly, nm(n.poly, a)), _smt_num(n.rhs))
        if isinstance(n, AbsCmp):
            f = _smt_poly(n.form, nm(n.form, a))
            return cmp(n.cmp, f"(ite (< {f} 0.0) (- {f}) {f})", _smt_poly(n.bound, nm(n.bound, a)))
        if isinstance(n, Congruence):
            f = _smt_poly(n.form, nm(n.form, a))
            k = f"k{depth}" if hoist is None else fresh("k")
            body = f"(= (- {f} {_smt_num(n.offset)}) (* {_smt_num(n.modulus)} (to_real {k})))"
            if n.threshold is not None:
                body = f"(and {body} (>= {k} {n.threshold}))"
            return bind(k, "Int", body)
        if isinstance(n, AuxRoot):
            t = aux if hoist is None else fresh(aux)
            body = (f"(and (= {_smt_upoly(n.poly, t)} 0.0) (> {t} {_smt_num(n.lo)}) (< {t} {_smt_num(n.hi)}) "
                    f"{rec(n.body, t, depth + 1)})")
            return bind(t, "Real", body)
        raise MalformedPredicate(f"unknown predicate node {n!r}")

    return rec(node, aux)


def smtlib_query(P: Predicate, point: Sequence[Fraction]) -> str:
    """SMT-LIB2 script asserting point in P; an unsat answer confirms the point lies outside."""
    names = [f"x{i}" for i in range(len(point))]
    bound: list = []
    term = to_smtlib(P, names, hoist=bound)
    lines = ["(set-logic ALL)"]
    lines += [f"(declare-const {n} Real)" for n in names]
    lines += [f"(declare-const {n} {sort})" for n, sort in bound]
    lines += [f"(assert (= {n} {_smt_num(to_fraction(x))}))" for n, x in zip(names, point)]
    lines.append(f"(assert {term})")
    lines.append("(check-sat)")
    return "\n".join(lines) + "\n"
