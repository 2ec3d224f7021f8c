"""Brute-force certificate checking.

Deliberately small: exact orbit iteration, exact predicate evaluation and
a re-derivation of the tail argument named by the certificate's witness.
Nothing here calls the spectral or synthesis code.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass
from fractions import Fraction
from math import factorial, floor

from . import certificate as cw
from .mpoly import MPoly, linear_images
from .polyalg import Polynomial, count_real_roots, isolate_real_roots
from .predicate import AbsCmp, And, AuxRoot, Congruence, Or, PolyCmp, aux_roots, eval_predicate, substitute
from .ratmat import Matrix, Vector, mat_pow, mat_vec

DEFAULT_HORIZON = 200
TAIL_SCAN_LIMIT = 100_000

__all__ = ["orbit_prefix", "eval_predicate", "verify_certificate", "check_tail", "VerificationReport",
           "TailFailure", "DEFAULT_HORIZON"]


def orbit_prefix(A: Matrix, X: Vector, horizon: int) -> list[Vector]:
    """X, AX, ..., A^horizon X."""
    out = [X]
    for _ in range(horizon):
        out.append(mat_vec(A, out[-1]))
    return out


class TailFailure(Exception):
    pass


def _images(A: Matrix, extra: bool) -> list[MPoly]:
    n = A.ncols + (1 if extra else 0)
    ims = linear_images(A, n)
    if extra:
        ims.append(MPoly.var(n, A.ncols))
    return ims


def _compose(form: MPoly, A: Matrix) -> MPoly:
    """form(A v), keeping an auxiliary trailing variable fixed."""
    return form.substitute(_images(A, form.nvars == A.ncols + 1))


def _upoly_as_mpoly(p: Polynomial, nvars: int, var: int) -> MPoly:
    return MPoly(nvars, {tuple(k if i == var else 0 for i in range(nvars)): c for k, c in enumerate(p.coeffs)})


def _binom_poly(i: int) -> Polynomial:
    p = Polynomial([1])
    for j in range(i):
        p = p * Polynomial([-j, 1])
    return p.scale_by(Fraction(1, factorial(i)))


def _eigenform(w, A, X, P) -> int:
    d = A.nrows
    if w.start < 0:
        raise TailFailure("negative start")
    if w.root is not None:
        if not (isinstance(P, AuxRoot) and P.var == d and P.poly == w.root.poly
                and P.lo == w.root.lo and P.hi == w.root.hi):
            raise TailFailure("set does not bind the witness's algebraic number")
        roots = aux_roots(P)
        if len(roots) != 1:
            raise TailFailure(f"interval isolates {len(roots)} roots, need exactly one")
        root, body, nv = roots[0], P.body, d + 1
    else:
        root, body, nv = None, P, d
        if w.lam.degree > 0:
            raise TailFailure("algebraic eigenvalue without a defining root")
    if w.form.nvars != nv:
        raise TailFailure("eigenform has the wrong number of variables")

    def sign(p: Polynomial) -> int:
        if root is not None:
            return root.sign_of(p)
        c = p.coeffs[0] if p.coeffs else Fraction(0)
        return (c > 0) - (c < 0)

    lam = _upoly_as_mpoly(w.lam, nv, d) if root else (w.lam.coeffs[0] if w.lam.coeffs else 0)
    G = _compose(w.form, A) - w.form * lam
    if root is not None:
        if any(not root.is_zero_of(c) for c in G.coefficients_in(d).values()):
            raise TailFailure("form(A v) != lambda form(v)")
    elif not G.is_zero():
        raise TailFailure("form(A v) != lambda form(v)")
    growth = sign(w.lam * w.lam - Polynomial([1]))
    if isinstance(body, PolyCmp) and body.poly == w.form and body.rhs == 0 and body.cmp == "=":
        pass
    elif isinstance(body, PolyCmp) and body.poly == w.form and body.rhs == 0 and body.cmp == "!=":
        if sign(w.lam) == 0:
            raise TailFailure("zero eigenvalue cannot keep the form nonzero")
    elif isinstance(body, AbsCmp) and body.form == w.form and body.cmp in (">", ">="):
        if growth < 0:
            raise TailFailure("|lambda| < 1 cannot keep |form| above a bound")
    elif isinstance(body, AbsCmp) and body.form == w.form and body.cmp in ("<", "<="):
        if growth > 0:
            raise TailFailure("|lambda| > 1 cannot keep |form| below a bound")
    else:
        raise TailFailure("set shape does not match an eigenform argument")
    if not eval_predicate(P, mat_vec(mat_pow(A, w.start), X)):
        raise TailFailure(f"base case fails at n = {w.start}")
    return w.start


def _positive_from(g: Polynomial) -> int:
    """Least n0 >= 0 with g > 0 on the real half-line [n0, oo)."""
    if g.is_zero():
        raise TailFailure("threshold polynomial is identically zero")
    if g.lc < 0:
        raise TailFailure("threshold polynomial is eventually negative")
    roots = isolate_real_roots(g) if g.degree > 0 else []
    n0 = max(0, floor(roots[-1].hi) + 1) if roots else 0
    if g(n0) <= 0 or count_real_roots(g, n0, None) != 0:
        raise TailFailure("positivity beyond the root bound failed")
    return n0


def _chain(w, A, X, P) -> int:
    if abs(w.lam) != 1 or not w.forms:
        raise TailFailure("chain witness needs |lambda| = 1 and at least one form")
    prev = None
    for F in w.forms:
        rhs = F * w.lam if prev is None else F * w.lam + prev
        if _compose(F, A) != rhs:
            raise TailFailure("chain relation fails")
        prev = F
    vals = [F.evaluate(list(X)) for F in w.forms]
    k = len(w.forms) - 1
    r = Polynomial([0])
    for i in range(k + 1):
        r = r + _binom_poly(i).scale_by(vals[k - i] * w.lam ** (-i))
    top = w.forms[-1]
    if isinstance(P, PolyCmp) and P.poly == top and P.cmp in (">", "<"):
        if w.lam != 1:
            raise TailFailure("one-sided bound needs lambda = 1")
        g = r - P.rhs if P.cmp == ">" else Polynomial([P.rhs]) - r
        return _positive_from(g)
    if isinstance(P, AbsCmp) and P.form == top and P.cmp == ">":
        if P.bound.degree > 0 or P.bound.nvars != top.nvars:
            raise TailFailure("bound must be a constant")
        c = P.bound.constant_term()
        if c < 0:
            raise TailFailure("negative bound")
        return _positive_from(r * r - Polynomial([c * c]))
    if isinstance(P, Congruence) and P.form == top:
        if w.lam != 1 or r != Polynomial([P.offset, P.modulus]):
            raise TailFailure("congruence needs the form to advance by the modulus each step")
        return max(P.threshold, 0) if P.threshold is not None else 0
    raise TailFailure("set shape does not match a chain argument")


def _invariant(w, A, X, P) -> int:
    if _compose(w.form, A) != w.form:
        raise TailFailure("form(A v) != form(v)")
    if not (isinstance(P, PolyCmp) and P.poly == w.form and P.cmp == "=" and P.rhs == w.form.evaluate(list(X))):
        raise TailFailure("set must be the level set of the invariant through X")
    return 0


def _subspace(w, A, X, P) -> int:
    if w.start < 0:
        raise TailFailure("negative start")
    At = mat_pow(A, w.start)
    for f in w.forms:
        if not _compose(f, At).is_zero():
            raise TailFailure("form does not vanish on the image")
    if P != And(tuple(PolyCmp(f, "=", Fraction(0)) for f in w.forms)):
        raise TailFailure("set must be the zero set of the witness forms")
    return w.start


def _fixed(w, A, X, P) -> int:
    if mat_vec(A, X) != X:
        raise TailFailure("start is not a fixed point")
    if not eval_predicate(P, X):
        raise TailFailure("fixed point outside the set")
    return 0


def _periodic(w, A, X, P) -> int:
    L = w.period
    if L < 1 or not isinstance(P, Or) or len(P.items) != L or len(w.parts) != L:
        raise TailFailure("periodic witness needs one set per residue")
    AL = mat_pow(A, L)
    Xr = X
    worst = 0
    for r in range(L):
        worst = max(worst, check_tail(w.parts[r], AL, Xr, P.items[r]))
        Xr = mat_vec(A, Xr)
    return L * worst


def _restricted(w, A, X, P) -> int:
    E, Pj, R = w.embed, w.project, w.reduced
    r = R.nrows
    if E.shape != (A.nrows, r) or Pj.shape != (r, A.nrows):
        raise TailFailure("restriction maps have the wrong shape")
    if A @ E != E @ R:
        raise TailFailure("A embed != embed reduced")
    if Pj @ E != Matrix.identity(r):
        raise TailFailure("project embed != identity")
    Xt = mat_vec(mat_pow(A, w.steps), X)
    Xr = mat_vec(Pj, Xt)
    if mat_vec(E, Xr) != Xt:
        raise TailFailure("orbit has not entered the image after the stated steps")
    for f in w.equations:
        if not f.substitute(linear_images(E)).is_zero():
            raise TailFailure("an equation does not vanish on the image")
    expected = And(tuple(PolyCmp(f, "=", Fraction(0)) for f in w.equations)
                   + (substitute(w.sub_set, linear_images(Pj)),))
    if P != expected:
        raise TailFailure("set is not the lifted reduced set")
    return w.steps + check_tail(w.sub_witness, R, Xr, w.sub_set)


_CHECKS = {
    cw.EigenformWitness: _eigenform, cw.ChainWitness: _chain, cw.InvariantWitness: _invariant,
    cw.SubspaceWitness: _subspace, cw.FixedPointWitness: _fixed, cw.PeriodicWitness: _periodic,
    cw.RestrictedWitness: _restricted,
}


def check_tail(w, A: Matrix, X: Vector, P) -> int:
    """Index n0 with A^n X in P for every n >= n0, or raise TailFailure."""
    fn = _CHECKS.get(type(w))
    if fn is None:
        raise TailFailure(f"unknown witness {w!r}")
    return fn(w, A, X, P)


@dataclass
class VerificationReport:
    index: int
    horizon: int
    condition1_ok: bool
    condition2_ok: bool
    condition2_checked_to: int
    condition2_tail: str
    tail_start: int | None
    tail_detail: str
    condition3_ok: bool
    first_violation: dict | None
    insufficient_horizon: bool

    @property
    def passed(self) -> bool:
        return (self.condition1_ok and self.condition2_ok and self.condition3_ok
                and self.condition2_tail == "proved_symbolically")

    def to_json(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d

    @classmethod
    def from_json(cls, d: dict) -> "VerificationReport":
        d = dict(d)
        d.pop("passed", None)
        return cls(**d)


def verify_certificate(inst, cert, horizon: int = DEFAULT_HORIZON) -> VerificationReport:
    """Check the three certificate conditions exactly.

    Condition 2 is checked explicitly for N <= n <= max(horizon, n0) where
    n0 is the start of the witness's tail argument.
    """
    A, X, Y, N, P = inst.A, inst.X, inst.Y, cert.index, cert.set
    violation = None
    tail, n0, detail = "horizon_only", None, "no witness"
    if N < 0:
        violation = {"condition": 1, "n": None, "detail": f"index {N} is negative"}
    if cert.witness is not None:
        try:
            n0 = check_tail(cert.witness, A, X, P)
            tail, detail = "proved_symbolically", f"{cert.witness.kind} argument holds from n = {n0}"
        except TailFailure as exc:
            detail = f"tail argument rejected: {exc}"
        if n0 is not None and n0 > TAIL_SCAN_LIMIT:
            tail, detail = "horizon_only", f"tail starts at {n0}, beyond the scan limit"
            n0 = None

    last = max(horizon, N, n0 or 0)
    c1 = N >= 0
    c2 = True
    v = X
    for n in range(last + 1):
        if n < N and v == Y:
            c1 = False
            violation = violation or {"condition": 1, "n": n, "detail": f"A^{n} X equals the target"}
        if n >= N and c2 and not eval_predicate(P, v):
            c2 = False
            violation = violation or {"condition": 2, "n": n, "detail": f"A^{n} X is outside the set"}
        if not c1 and not c2:
            break
        if n < last:
            v = mat_vec(A, v)
    c3 = not eval_predicate(P, Y)
    if not c3:
        violation = violation or {"condition": 3, "n": None, "detail": "the target lies in the set"}
    return VerificationReport(
        index=N, horizon=horizon, condition1_ok=c1, condition2_ok=c2, condition2_checked_to=last,
        condition2_tail=tail, tail_start=n0, tail_detail=detail, condition3_ok=c3,
        first_violation=violation, insufficient_horizon=horizon < N,
    )
