"""Certificate synthesis for the orbit problem.

Dispatch order: a short reachability probe, then the singular part of A
is peeled off (the orbit enters the image of A^t after t steps), then the
periodic split for integer data, then eigenforms with |lambda| != 1,
Jordan chains with |lambda| = 1, and finally polynomial invariants of
degree <= 2.  Within a stage every candidate certificate is checked by the
oracle and the one with the smallest index wins.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, floor, lcm, sqrt

from .certificate import (
    Certificate, ChainWitness, EigenformWitness, FixedPointWitness, Inconclusive, InvariantWitness,
    PeriodicWitness, ReachableWitness, RestrictedWitness, SubspaceWitness,
)
from .elevate import DEFAULT_CAP, elevate_block, elevate_matrix, homogeneous_monomials, monomial_basis
from .instance import OrbitInstance
from .mpoly import MPoly, linear_images
from .oracle import DEFAULT_HORIZON, verify_certificate
from .polyalg import (
    Modulus, Polynomial, RealRoot, classify_roots, isolate_real_roots, squarefree_decomposition,
    squarefree_rational_roots,
)
from .predicate import AbsCmp, And, AuxRoot, Congruence, Or, PolyCmp, eval_predicate, substitute
from .ratmat import Matrix, Vector, char_poly, column_space_restriction, fraction_str, kernel, mat_pow, mat_vec, rank
from .spectral import (
    EigenChain, NotAnEigenvalue, algebraic_left_eigenvector, is_diagonalizable, jordan_chains,
    left_eigenvectors, spectrum,
)

log = logging.getLogger(__name__)

PROBE_HORIZON = 32


@dataclass(frozen=True)
class CertifyConfig:
    horizon: int = DEFAULT_HORIZON
    probe_horizon: int = PROBE_HORIZON
    elevation_cap: int = DEFAULT_CAP
    emit_all: bool = False

    def __post_init__(self):
        if self.horizon < 1:
            raise ValueError("horizon must be at least 1")


class InvalidEigenObject(ValueError):
    pass


# -- small exact helpers ---------------------------------------------------------------

def bounded_reach_search(inst: OrbitInstance, horizon: int) -> int | None:
    """Least n <= horizon with A^n X = Y."""
    v = inst.X
    for n in range(horizon + 1):
        if v == inst.Y:
            return n
        if n < horizon:
            v = mat_vec(inst.A, v)
    return None


def _sgn(x) -> int:
    return (x > 0) - (x < 0)


class _Field:
    """Arithmetic sign oracle for Q or Q(t), t a fixed real algebraic number."""

    def __init__(self, root: RealRoot | None):
        self.root = root
        self._mid = None

    def sign(self, p: Polynomial) -> int:
        if self.root is None:
            return _sgn(p.coeffs[0] if p.coeffs else 0)
        return self.root.sign_of(p)

    def reduce(self, p: Polynomial) -> Polynomial:
        return p if self.root is None else p % self.root.poly

    def power(self, p: Polynomial, n: int) -> Polynomial:
        if self.root is None:
            return Polynomial([p.coeffs[0] ** n]) if p.coeffs else Polynomial([0 if n else 1])
        return p.powmod(n, self.root.poly)

    def approx(self, p: Polynomial) -> float:
        if self.root is None:
            return float(p.coeffs[0]) if p.coeffs else 0.0
        if self._mid is None:
            r = self.root.refine(Fraction(1, 2 ** 80))
            self._mid = (r.lo + r.hi) / 2
        return float(p(self._mid))


def _least_index(holds, limit: int = 1 << 20) -> int | None:
    """Least n >= 0 with holds(n), for a predicate that stays true once true."""
    if holds(0):
        return 0
    hi = 1
    while not holds(hi):
        hi *= 2
        if hi > limit:
            return None
    lo = hi // 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if holds(mid):
            hi = mid
        else:
            lo = mid
    return hi


def _tighten(inst: OrbitInstance, cert: Certificate) -> Certificate:
    """Lower the index while the previous iterate is already in the set (and is not Y)."""
    N = cert.index
    if N == 0:
        return cert
    powers = [inst.X]
    for _ in range(N - 1):
        powers.append(mat_vec(inst.A, powers[-1]))
    while N > 0:
        v = powers[N - 1]
        if v == inst.Y or not eval_predicate(cert.set, v):
            break
        N -= 1
    if N == cert.index:
        return cert
    return Certificate(N, cert.set, cert.provenance, cert.witness)


def _linear_form(vec, nvars: int | None = None) -> MPoly:
    return MPoly.linear(list(vec), nvars)


def _const_mpoly(nvars: int, p: Polynomial, var: int | None) -> MPoly:
    if var is None:
        return MPoly.const(nvars, p.coeffs[0] if p.coeffs else 0)
    return MPoly(nvars, {tuple(k if i == var else 0 for i in range(nvars)): c for k, c in enumerate(p.coeffs)})


def _algebraic_form(monomials, coeffs: list[Polynomial], d: int) -> MPoly:
    """sum_m coeffs[m](t) * v^m as a polynomial in v_0..v_{d-1}, t."""
    terms: dict = {}
    for e, c in zip(monomials, coeffs):
        for k, a in enumerate(c.coeffs):
            if a:
                terms[tuple(e) + (k,)] = a
    return MPoly(d + 1, terms)


def _eval_in_field(F: MPoly, v, d: int) -> Polynomial:
    """F(v, t) as a polynomial in t (F over d or d + 1 variables)."""
    if F.nvars == d:
        return Polynomial([F.evaluate(list(v))])
    return F.specialize(list(v) + [Fraction(0)], d)


# -- zero eigenvalue: restrict to the eventual image -----------------------------------

@dataclass(frozen=True)
class Case1Result:
    """Outcome of peeling off the nilpotent part of A.

    ``prefix`` holds the iterates A^n X for n < steps that were compared to
    Y.  Exactly one of ``reached``, ``certificate`` and ``reduced`` is set.
    """

    prefix: tuple
    steps: int
    reached: int | None = None
    certificate: Certificate | None = None
    reduced: OrbitInstance | None = None
    embed: Matrix | None = None
    project: Matrix | None = None
    equations: tuple = ()


def case1_reduce(inst: OrbitInstance) -> Case1Result:
    A, X, Y, d = inst.A, inst.X, inst.Y, inst.dim
    ranks = [d]
    powers = [Matrix.identity(d)]
    while True:
        powers.append(powers[-1] @ A)
        ranks.append(rank(powers[-1]))
        if ranks[-1] == ranks[-2]:
            break
    t = len(ranks) - 2  # image of A^t is stable
    prefix = [X]
    for _ in range(max(t, 1)):
        prefix.append(mat_vec(A, prefix[-1]))
    for s in range(1, t + 1):
        if prefix[s - 1] == Y:
            return Case1Result(tuple(prefix[:s]), s, reached=s - 1)
        eqs = kernel(powers[s].T)
        if any(w.dot(Y) for w in eqs):
            forms = tuple(_linear_form(w) for w in eqs)
            cert = Certificate(
                s, And(tuple(PolyCmp(f, "=", Fraction(0)) for f in forms)),
                {"case": "case1-image", "steps": s}, SubspaceWitness(forms, s),
            )
            return Case1Result(tuple(prefix[:s]), s, certificate=cert)
    if t == 0:
        return Case1Result((), 0, reduced=inst, embed=Matrix.identity(d), project=Matrix.identity(d))
    _, project, embed = column_space_restriction(powers[t])
    R = project @ A @ embed
    Xt = prefix[t]
    red_X, red_Y = mat_vec(project, Xt), mat_vec(project, Y)
    ring = "Z" if inst.ring == "Z" and all(x.denominator == 1 for x in list(R.entries) + list(red_X) + list(red_Y)) else "Q"
    if R.nrows == 0:
        # the orbit dies; Y is in the zero image, so Y = 0 = A^t X
        return Case1Result(tuple(prefix[:t]), t, reached=t)
    eqs = tuple(_linear_form(w) for w in kernel(powers[t].T))
    return Case1Result(tuple(prefix[:t]), t, reduced=OrbitInstance(R, red_X, red_Y, ring),
                       embed=embed, project=project, equations=eqs)


def _lift_restricted(res: Case1Result, cert: Certificate) -> Certificate:
    sub_lift = substitute(cert.set, linear_images(res.project))
    P = And(tuple(PolyCmp(f, "=", Fraction(0)) for f in res.equations) + (sub_lift,))
    prov = dict(cert.provenance)
    prov["restricted"] = {"steps": res.steps, "dim": res.reduced.dim}
    w = RestrictedWitness(res.steps, res.embed, res.project, res.reduced.A, res.equations, cert.set, cert.witness)
    return Certificate(res.steps + cert.index, P, prov, w)


# -- eigenvalues off the unit circle: growth or decay ----------------------------------

def case2_certificate(inst: OrbitInstance, form: MPoly, lam, root: RealRoot | None = None,
                      elevation: int | None = None) -> Certificate | None:
    """Certificate from an eigenform: form(A v) = lam * form(v), |lam| not in {0, 1}.

    ``form`` may also be an eigenvector (rationals, or polynomials in the
    algebraic number).  ``lam`` is a rational, a RealRoot, or a polynomial
    in the algebraic number ``root`` (variable d of ``form``).  Returns None when the form
    vanishes at both X and Y.
    """
    d = inst.dim
    if not isinstance(form, MPoly):
        ents = list(form)
        if ents and isinstance(ents[0], Polynomial):
            form = _algebraic_form([tuple(1 if j == i else 0 for j in range(d)) for i in range(d)], ents, d)
        else:
            form = _linear_form(ents)
    if isinstance(lam, RealRoot) and root is None:
        lam, root = (Fraction(lam.lo), None) if lam.is_exact else (Polynomial.x(), lam)
    K = _Field(root)
    lam_p = lam if isinstance(lam, Polynomial) else Polynomial([Fraction(lam)])
    aux = d if root is not None else None
    _check_eigenform(inst.A, form, lam_p, K, aux)
    sl = K.sign(lam_p)
    growth = K.sign(K.reduce(lam_p * lam_p) - Polynomial([1]))
    if sl == 0 or growth == 0:
        raise InvalidEigenObject("eigenvalue modulus must avoid 0 and 1")
    a_p, c_p = K.reduce(_eval_in_field(form, inst.X, d)), K.reduce(_eval_in_field(form, inst.Y, d))
    sa, sc = K.sign(a_p), K.sign(c_p)
    nv = form.nvars
    prov = {"case": "case2", "elevation": elevation, "eigenvalue": K.approx(lam_p),
            "eigenvalue_exact": root.to_json() if root is not None and lam_p == Polynomial.x()
            else (fraction_str(lam_p.coeffs[0]) if lam_p.degree <= 0 else None)}
    norm = _form_norm(form, K, d)
    prov["form_at_start"] = K.approx(a_p) / norm
    prov["form_at_target"] = K.approx(c_p) / norm
    if sa == 0 and sc == 0:
        return None
    if sa == 0:
        body, N, loose = PolyCmp(form, "=", Fraction(0)), 0, 0
    elif sc == 0:
        body, N, loose = PolyCmp(form, "!=", Fraction(0)), 0, 0
    else:
        A_, C_, L_ = a_p.scale_by(sa), c_p.scale_by(sc), lam_p.scale_by(sl)
        bound = K.reduce(L_ * C_)
        want = 1 if growth > 0 else -1

        def reached(threshold):
            return lambda n: K.sign(K.reduce(K.power(L_, n) * A_) - threshold) * want >= 0

        N = _least_index(reached(bound))
        loose = _least_index(reached(C_))
        if N is None:
            return None
        body = AbsCmp(form, ">=" if growth > 0 else "<=", _const_mpoly(nv, bound, aux))
        prov["ratio"] = abs(prov["form_at_start"] / prov["form_at_target"])
    prov["threshold_index"] = loose
    P = AuxRoot(d, root.poly, root.lo, root.hi, body) if root is not None else body
    return Certificate(N, P, prov, EigenformWitness(form, lam_p, N, root))


def _form_norm(form: MPoly, K: _Field, d: int) -> float:
    if form.nvars == d:
        return sqrt(sum(float(c) ** 2 for c in form.terms.values())) or 1.0
    tot = 0.0
    for p in form.coefficients_in(d).values():
        tot += K.approx(K.reduce(p)) ** 2
    return sqrt(tot) or 1.0


def _check_eigenform(A: Matrix, form: MPoly, lam_p: Polynomial, K: _Field, aux):
    nv = form.nvars
    ims = linear_images(A, nv)
    if aux is not None:
        ims.append(MPoly.var(nv, aux))
    G = form.substitute(ims) - form * _const_mpoly(nv, lam_p, aux)
    if aux is None:
        ok = G.is_zero()
    else:
        ok = all(K.root.is_zero_of(p) for p in G.coefficients_in(aux).values())
    if not ok:
        raise InvalidEigenObject("form is not an eigenform for the given eigenvalue")


def case2_candidates(inst: OrbitInstance, cap: int = DEFAULT_CAP, report=None,
                     elevated: bool | None = None) -> list[Certificate]:
    """Eigenform certificates with |lambda| not in {0, 1}.

    Linear forms come from the left eigenvectors of A; elevated ones from
    the degree-2 block and from the determinant block.  ``elevated`` picks
    one family (None: both).
    """
    A, d = inst.A, inst.dim
    report = report or spectrum(A, cap)
    out = []

    def add(c):
        if c is not None:
            out.append(c)

    if elevated is True:
        return _elevated_case2(inst, cap, report)
    for data in report.rational_eigen_data:
        if abs(data.lam) in (0, 1):
            continue
        for phi in data.eigenvectors:
            add(case2_certificate(inst, _linear_form(phi), data.lam))
    for g in report.classes:
        if g.real and g.root is not None and not g.root.is_exact and g.multiplicity == 1 \
                and g.modulus.tag in (Modulus.LT1, Modulus.GT1):
            phi = algebraic_left_eigenvector(A, g.root)
            if phi is not None:
                form = _algebraic_form([tuple(1 if j == i else 0 for j in range(d)) for i in range(d)], phi, d)
                add(case2_certificate(inst, form, Polynomial.x(), g.root))
    if elevated is None:
        out.extend(_elevated_case2(inst, cap, report))
    return out


def _elevated_case2(inst: OrbitInstance, cap: int, report) -> list[Certificate]:
    A, d = inst.A, inst.dim
    out = []
    complex_off = any(not g.real and g.modulus.tag in (Modulus.LT1, Modulus.GT1) for g in report.classes)
    if complex_off and d >= 2 and comb(d + 2, 2) <= cap:
        out.extend(_block_candidates(inst, 2))
    if report.elevation_used and report.elevation_used[0] > 2:
        k, _ = report.elevation_used
        lam = report.elevation_eigenvalue
        B = elevate_block(A, k)
        monos = homogeneous_monomials(d, k)
        for w in left_eigenvectors(B, lam):
            c = case2_certificate(inst, MPoly(d, dict(zip(monos, w))), lam, elevation=k)
            if c is not None:
                out.append(c)
    return out


def _block_candidates(inst: OrbitInstance, k: int) -> list[Certificate]:
    """Eigenforms of degree k: simple real eigenvalues of the degree-k block off the unit circle."""
    d = inst.dim
    B = elevate_block(inst.A, k)
    monos = homogeneous_monomials(d, k)
    out = []
    cp = char_poly(B)
    rats, _ = squarefree_rational_roots(cp)
    for lam, _m in rats:
        if abs(lam) in (0, 1):
            continue
        for w in left_eigenvectors(B, lam):
            c = case2_certificate(inst, MPoly(d, dict(zip(monos, w))), lam, elevation=k)
            if c is not None:
                out.append(c)
    for s, mult in squarefree_decomposition(cp):
        if mult != 1:
            continue
        for r in isolate_real_roots(s):
            if r.is_exact or r.abs_compare(1) == 0:
                continue
            phi = algebraic_left_eigenvector(B, r)
            if phi is None:
                continue
            c = case2_certificate(inst, _algebraic_form(monos, phi, d), Polynomial.x(), r, elevation=k)
            if c is not None:
                out.append(c)
    return out


# -- unit-circle Jordan chains: polynomial growth --------------------------------------

def chain_polynomial(values, lam) -> Polynomial:
    """r(n) with <e_k, A^n X> = lam^n r(n), from values[i] = <e_i, X>."""
    k = len(values) - 1
    lam = Fraction(lam)
    r = Polynomial([0])
    binom = Polynomial([1])
    for i in range(k + 1):
        r = r + binom.scale_by(values[k - i] / lam ** i)
        binom = (binom * Polynomial([-i, 1])).scale_by(Fraction(1, i + 1))
    return r


def _eventually_positive_from(g: Polynomial) -> int:
    """Least integer n0 >= 0 such that g(n) > 0 for every integer n >= n0."""
    roots = isolate_real_roots(g) if g.degree > 0 else []
    n = max(0, floor(roots[-1].hi) + 1) if roots else 0
    while n > 0 and g(n - 1) > 0:
        n -= 1
    return n


def case3_certificate(inst: OrbitInstance, forms, lam, congruence: bool = True) -> list[Certificate]:
    """Certificates from a chain given as forms F_0..F_k (F_k is the top).

    Returns the one-sided or absolute-value certificate and, when the top
    form advances linearly, the congruence certificate.
    """
    lam = Fraction(lam)
    if abs(lam) != 1:
        raise InvalidEigenObject("chain certificates need |lambda| = 1")
    A = inst.A
    prev = None
    for F in forms:
        rhs = F * lam if prev is None else F * lam + prev
        if F.substitute(linear_images(A, F.nvars)) != rhs:
            raise InvalidEigenObject("chain relation fails")
        prev = F
    X, Y = list(inst.X), list(inst.Y)
    r = chain_polynomial([F.evaluate(X) for F in forms], lam)
    if r.degree < 1:
        return []
    top = forms[-1]
    fy = top.evaluate(Y)
    c = abs(fy)
    w = ChainWitness(tuple(forms), lam)
    prov = {"case": "case3", "eigenvalue": fraction_str(lam), "chain_length": len(forms),
            "polynomial": [fraction_str(x) for x in r.coeffs], "degree": max(F.degree for F in forms)}
    out = []
    if lam == 1 and r.lc > 0:
        P, g = PolyCmp(top, ">", c), r - c
    elif lam == 1:
        P, g = PolyCmp(top, "<", -c), Polynomial([-c]) - r
    else:
        P, g = AbsCmp(top, ">", MPoly.const(top.nvars, c)), r * r - Polynomial([c * c])
    out.append(Certificate(_eventually_positive_from(g), P, prov, w))
    if congruence and lam == 1 and r.degree == 1:
        alpha, beta = r.coeffs[1], r.coeffs[0]
        k = (fy - beta) / alpha
        N = k.numerator + 1 if k.denominator == 1 and k >= 0 else 0
        cprov = dict(prov, case="case3-congruence")
        out.append(Certificate(N, Congruence(top, alpha, beta, N), cprov, w))
    return out


def _chain_candidates(inst: OrbitInstance, chains: list[EigenChain], to_form) -> list[Certificate]:
    out = []
    for ch in chains:
        if ch.length < 2:
            continue
        forms = [to_form(e) for e in ch.vectors]
        for j in range(ch.length - 1, 0, -1):
            out.extend(case3_certificate(inst, forms[: j + 1], ch.lam))
    return out


def case3_candidates(inst: OrbitInstance, cap: int = DEFAULT_CAP, report=None) -> list[Certificate]:
    A, d = inst.A, inst.dim
    report = report or spectrum(A, cap)
    out = []
    for data in report.rational_eigen_data:
        if abs(data.lam) == 1:
            out.extend(_chain_candidates(inst, list(data.chains), _linear_form))
    unit_complex = any(not g.real and g.modulus.tag is Modulus.EQ1 for g in report.classes)
    if not out and unit_complex and not report.diagonalizable and comb(d + 2, 2) <= cap:
        E = elevate_matrix(A, 2)
        try:
            chains = jordan_chains(E.matrix, 1)
        except NotAnEigenvalue:
            chains = []
        basis = E.basis
        for c in _chain_candidates(inst, chains, basis.form):
            c.provenance["elevation"] = 2
            out.append(c)
    return out


# -- invariant forms -------------------------------------------------------------------

def invariant_forms(A: Matrix, k: int = 2) -> list[MPoly]:
    """Non-constant polynomial invariants of degree <= k (left 1-eigenvectors of the elevation)."""
    E = elevate_matrix(A, k)
    out = []
    for w in left_eigenvectors(E.matrix, 1):
        F = E.basis.form(w)
        if F.degree > 0:
            out.append(F)
    return out


def case4_certificate(inst: OrbitInstance, cap: int = DEFAULT_CAP):
    """Separate X and Y by an invariant of degree <= 2, else Inconclusive."""
    d = inst.dim
    if comb(d + 2, 2) > cap:
        return Inconclusive("elevation-too-large", {"size": comb(d + 2, 2), "cap": cap})
    X, Y = list(inst.X), list(inst.Y)
    invs = invariant_forms(inst.A, 2)
    for F in sorted(invs, key=lambda f: (f.degree, len(f.terms))):
        fx, fy = F.evaluate(X), F.evaluate(Y)
        if fx != fy:
            prov = {"case": "case4", "invariant": F.format(), "degree": F.degree,
                    "value_at_start": fraction_str(fx), "value_at_target": fraction_str(fy)}
            return Certificate(0, PolyCmp(F, "=", fx), prov, InvariantWitness(F))
    return Inconclusive("closure-inconclusive", {
        "invariants": [F.format() for F in invs],
        "note": "target agrees with the start on every invariant of degree <= 2",
    })


def _case4_hypotheses(report) -> bool:
    tags = {g.modulus.tag for g in report.classes}
    return tags == {Modulus.EQ1} and report.diagonalizable


# -- integer data: periodic split ------------------------------------------------------

def unity_period(report) -> int | None:
    """lcm of the orders of the unit-circle eigenvalues, or None if one is not a root of unity."""
    L = 1
    for g in report.classes:
        if g.modulus.tag is Modulus.EQ1:
            if g.modulus.unity_order is None:
                return None
            L = lcm(L, g.modulus.unity_order)
    return L


def integer_certificate(inst: OrbitInstance, config: CertifyConfig | None = None, report=None):
    """Split the orbit by n mod L, L the period of the unit-circle eigenvalues."""
    cfg = config or CertifyConfig()
    report = report or spectrum(inst.A, cfg.elevation_cap)
    L = unity_period(report)
    if L is None:
        return Inconclusive("no-certificate-found", {"note": "unit-circle eigenvalue that is not a root of unity"})
    if L == 1:
        return Inconclusive("no-certificate-found", {"note": "no periodic part"})
    AL = mat_pow(inst.A, L)
    parts, sets, idx = [], [], []
    Xr = inst.X
    sub_report = None
    for r in range(L):
        if Xr == inst.Y:
            return ReachableWitness(r)
        sub = OrbitInstance(AL, Xr, inst.Y, "Q")
        cert = _fixed_point_certificate(sub)
        if cert is None:
            sub_report = sub_report or spectrum(AL, cfg.elevation_cap)
            cert = _best_plain(sub, cfg, sub_report)
        if isinstance(cert, ReachableWitness):
            return ReachableWitness(L * cert.n + r)
        if not isinstance(cert, Certificate):
            return Inconclusive("no-certificate-found", {"period": L, "residue": r})
        parts.append(cert.witness)
        sets.append(cert.set)
        idx.append(cert.index)
        Xr = mat_vec(inst.A, Xr)
    prov = {"case": "integer-periodic", "period": L, "residue_indices": idx}
    cert = Certificate(L * max(idx), Or(tuple(sets)), prov, PeriodicWitness(L, tuple(parts)))
    return _tighten(inst, cert)


def _fixed_point_certificate(inst: OrbitInstance) -> Certificate | None:
    if mat_vec(inst.A, inst.X) != inst.X or inst.X == inst.Y:
        return None
    d = inst.dim
    P = And(tuple(PolyCmp(MPoly.var(d, i), "=", x) for i, x in enumerate(inst.X)))
    return Certificate(0, P, {"case": "fixed-point"}, FixedPointWitness())


def _best_plain(inst: OrbitInstance, cfg: CertifyConfig, report=None):
    """Best verified certificate for an invertible instance without the periodic split."""
    fp = _fixed_point_certificate(inst)
    if fp is not None and verify_certificate(inst, fp, cfg.horizon).passed:
        return fp
    report = report or spectrum(inst.A, cfg.elevation_cap)
    for _name, cands in _plain_stages(inst, cfg, report, {}, fixed=False):
        best = _pick(inst, cands, cfg, {})
        if isinstance(best, (Certificate, ReachableWitness)):
            return best
    return None


# -- dispatch --------------------------------------------------------------------------

def _plain_stages(inst, cfg, report, notes, fixed=True):
    fp = _fixed_point_certificate(inst) if fixed else None
    if fp is not None:
        yield "fixed-point", [fp]
    yield "case2", case2_candidates(inst, cfg.elevation_cap, report, elevated=False)
    yield "case2-elevated", case2_candidates(inst, cfg.elevation_cap, report, elevated=True)
    yield "case3", case3_candidates(inst, cfg.elevation_cap, report)
    c4 = case4_certificate(inst, cfg.elevation_cap)
    if isinstance(c4, Certificate):
        yield "case4", [c4]
    else:
        notes["case4"] = c4.reason if c4.reason != "closure-inconclusive" or _case4_hypotheses(report) \
            else "no-certificate-found"
        notes.setdefault("case4_detail", c4.detail)


def _stages(inst: OrbitInstance, cfg: CertifyConfig, notes: dict):
    report = spectrum(inst.A, cfg.elevation_cap)
    if report.limitation:
        notes["limitation"] = report.limitation
    if report.det == 0:
        res = case1_reduce(inst)
        if res.reached is not None:
            yield "case1", [ReachableWitness(res.reached)]
            return
        if res.certificate is not None:
            yield "case1", [res.certificate]
            return
        for name, cands in _stages(res.reduced, cfg, notes):
            yield name, [_lift_restricted(res, c) if isinstance(c, Certificate) else
                         ReachableWitness(c.n + res.steps) for c in cands]
        return
    L = unity_period(report)
    if L is not None and L > 1:
        c = integer_certificate(inst, cfg, report)
        if isinstance(c, (Certificate, ReachableWitness)):
            yield "integer", [c]
    yield from _plain_stages(inst, cfg, report, notes)


def _pick(inst, cands, cfg, notes, emit_all=False):
    """Verify candidates by increasing index; return the first that passes (or all of them)."""
    passed = []
    for c in sorted(cands, key=lambda c: c.index if isinstance(c, Certificate) else -1):
        if isinstance(c, ReachableWitness):
            return c
        c = _tighten(inst, c)
        rep = verify_certificate(inst, c, cfg.horizon)
        if rep.passed:
            if not emit_all:
                return c
            passed.append(c)
        elif not rep.condition1_ok and rep.first_violation and rep.first_violation.get("n") is not None:
            return ReachableWitness(rep.first_violation["n"])
        else:
            log.warning("discarding candidate rejected by the oracle: %s", rep.first_violation or rep.tail_detail)
            notes["rejected"] = notes.get("rejected", 0) + 1
    return passed


def certify(inst: OrbitInstance, config: CertifyConfig | None = None):
    """One outcome: a verified Certificate, a ReachableWitness or an Inconclusive."""
    cfg = config or CertifyConfig()
    n = bounded_reach_search(inst, cfg.probe_horizon)
    if n is not None:
        return ReachableWitness(n)
    notes: dict = {}
    for _name, cands in _stages(inst, cfg, notes):
        got = _pick(inst, cands, cfg, notes)
        if isinstance(got, (Certificate, ReachableWitness)):
            return got
    return _inconclusive(notes)


def certify_all(inst: OrbitInstance, config: CertifyConfig | None = None):
    """Every verified certificate from every stage, by increasing index (or the single non-certificate outcome)."""
    cfg = config or CertifyConfig()
    n = bounded_reach_search(inst, cfg.probe_horizon)
    if n is not None:
        return ReachableWitness(n)
    notes: dict = {}
    out = []
    for _name, cands in _stages(inst, cfg, notes):
        got = _pick(inst, cands, cfg, notes, emit_all=True)
        if isinstance(got, ReachableWitness):
            return got
        out.extend(got)
    if not out:
        return _inconclusive(notes)
    return sorted(out, key=lambda c: c.index)


def _inconclusive(notes: dict) -> Inconclusive:
    reason = notes.get("case4") or "no-certificate-found"
    if reason == "no-certificate-found" and notes.get("limitation") == "elevation-too-large":
        reason = "elevation-too-large"
    detail = {k: v for k, v in notes.items() if k != "case4"}
    return Inconclusive(reason, detail)
