"""Acceptance criteria, one test each.

Every test gathers all of its sub-checks before failing, so a red line
lists each unmet expectation rather than the first one.
"""
from __future__ import annotations

import random
import time
from fractions import Fraction

from conftest import (
    cyclotomic_instance, fixture, growth_instance, least_period, random_matrix, structured_matrix,
    unipotent_instance,
)
from orbitcert.certificate import Certificate, Inconclusive, ReachableWitness
from orbitcert.certify import (
    case2_candidates, case3_certificate, certify, chain_polynomial, invariant_forms, unity_period,
)
from orbitcert.elevate import elevate_block, elevate_matrix, elevate_vector, monomial_basis
from orbitcert.instance import OrbitInstance
from orbitcert.mpoly import MPoly, linear_images
from orbitcert.oracle import verify_certificate
from orbitcert.polyalg import Modulus, Polynomial, squarefree_rational_roots
from orbitcert.predicate import Congruence, Or, PolyCmp, And, eval_predicate
from orbitcert.ratmat import Matrix, Vector, char_poly, kernel, mat_pow, rank
from orbitcert.spectral import jordan_chains, matrix_poly_eval, spectrum

HORIZON = 200


def sig2(x: float) -> float:
    return float(f"{x:.2g}")


def proportional(u, v) -> bool:
    u, v = list(u), list(v)
    i = next((i for i, x in enumerate(v) if x), None)
    if i is None or not u[i]:
        return False
    s = u[i] / v[i]
    return all(a == s * b for a, b in zip(u, v))


def test_growth_example_4x4(checks):
    inst = fixture("growth-a4")
    t0 = time.perf_counter()
    rep = spectrum(inst.A)
    real = sorted(g.root.refine(Fraction(1, 1000)).approx() for g in rep.classes if g.real)
    cplx = [g for g in rep.classes if not g.real]
    checks("two real irrational eigenvalues", len(real) == 2 and not rep.rational_eigen_data,
           f"real={real}, rational={[e.lam for e in rep.rational_eigen_data]}")
    if len(real) == 2:
        checks("lambda1 ~ 0.642", abs(real[0] - 0.642) <= 0.005, real[0])
        checks("lambda2 ~ 2.48", abs(real[1] - 2.48) <= 0.005, real[1])
    checks("one complex pair", len(cplx) == 1 and cplx[0].count == 2, cplx)
    if cplx:
        lo, hi = cplx[0].modulus_bracket
        mod2 = float((lo + hi) / 2) ** 2
        checks("|lambda|^2 ~ 9.425", abs(mod2 - 9.425) <= 0.01 and float(hi - lo) < 1e-4, mod2)
    checks("det = 15", rep.det == 15, rep.det)

    direct = [c for c in case2_candidates(inst, report=rep, elevated=False) if "ratio" in c.provenance]
    by_lam = {round(c.provenance["eigenvalue"], 2): c for c in direct}
    phi1, phi2 = by_lam.get(0.64), by_lam.get(2.48)
    checks("eigenform candidates for both real eigenvalues", phi1 and phi2, sorted(by_lam))
    if phi1:
        r = phi1.provenance["ratio"]
        checks("phi1 ratio 0.302/0.015 to 2 s.f.", sig2(r) == sig2(0.302 / 0.015), f"exact ratio {r:.5g}")
        checks("phi1 threshold-at-|F(Y)| index 7", phi1.provenance["threshold_index"] == 7,
               phi1.provenance["threshold_index"])
    if phi2:
        r = phi2.provenance["ratio"]
        checks("phi2 ratio 1.384/24.073 to 2 s.f.", sig2(r) == sig2(1.384 / 24.073), f"exact ratio {r:.5g}")
        checks("phi2 threshold-at-|F(Y)| index 4", phi2.provenance["threshold_index"] == 4,
               phi2.provenance["threshold_index"])

    out = certify(inst)
    checks("certificate emitted", isinstance(out, Certificate), out)
    if isinstance(out, Certificate):
        v = verify_certificate(inst, out, HORIZON)
        checks("oracle accepts at horizon 200", v.passed, v.first_violation or v.tail_detail)
        checks("target outside the set", not eval_predicate(out.set, inst.Y))
    dt = time.perf_counter() - t0
    checks("runtime < 10 s", dt < 10, f"{dt:.2f}s")
    checks.finish()


def test_chain_example_cubic(checks):
    inst = fixture("chain-a3")
    t0 = time.perf_counter()
    chains = jordan_chains(inst.A, 1)
    want = [Vector([0, 0, 1]), Vector([0, 1, 0]), Vector([1, 0, 0])]
    ch = chains[0] if chains else None
    checks("single chain of length 3", len(chains) == 1 and ch.length == 3, chains)
    if ch is not None and ch.length == 3:
        checks("chain vectors match up to scaling", all(proportional(a, b) for a, b in zip(ch.vectors, want)),
               [list(map(str, v)) for v in ch.vectors])
        checks("chain relation", ch.holds_for(inst.A))
    forms = [MPoly.linear(list(v)) for v in want]
    q = chain_polynomial([F.evaluate(list(inst.X)) for F in forms], 1)
    printed = Polynomial([-1, Fraction(-5, 2), Fraction(1, 2)])
    checks("q(k) = k^2/2 - 5k/2 - 1", q == printed, f"derived q(k) = {q}")
    direct = [mat_pow(inst.A, k) @ inst.X for k in range(10)]
    checks("q matches the iterated first coordinate", all(q(k) == v[0] for k, v in enumerate(direct)),
           f"first coordinates {[str(v[0]) for v in direct]}")

    out = certify(inst)
    x_gt_2 = PolyCmp(MPoly.var(3, 0), ">", Fraction(2))
    checks("certificate emitted", isinstance(out, Certificate), out)
    if isinstance(out, Certificate):
        checks("set is x > 2", out.set == x_gt_2, out.set)
        checks("index 7", out.index == 7, f"emitted index {out.index}")
        v = verify_certificate(inst, out, HORIZON)
        checks("oracle accepts emitted certificate", v.passed, v.first_violation or v.tail_detail)
    printed_cert = Certificate(7, x_gt_2, {}, case3_certificate(inst, forms, 1, congruence=False)[0].witness)
    v7 = verify_certificate(inst, printed_cert, HORIZON)
    checks("oracle accepts (7, x > 2)", v7.passed, v7.first_violation or v7.tail_detail)
    checks("target not reached for k in 0..6", all(v != inst.Y for v in direct[:7]))
    dt = time.perf_counter() - t0
    checks("runtime < 1 s", dt < 1, f"{dt:.2f}s")
    checks.finish()


def test_lattice_congruence_example(checks):
    inst = fixture("lattice-step")
    t0 = time.perf_counter()
    checks("affine embedding", inst.A == Matrix([[1, 2], [0, 1]]) and inst.X == Vector([0, 1]), inst)
    chains = jordan_chains(inst.A, 1)
    ch = chains[0]
    checks("eigenvector (0, 1)", proportional(ch.vectors[0], [0, 1]), ch.vectors[0])
    mu = Vector([Fraction(1, 2), 1])
    checks("mu = (1/2, 1) satisfies the chain relation",
           inst.A.T @ mu == mu + ch.vectors[0] * (mu.dot(Vector([0, 1])) and 1))
    if ch.length == 2:
        diff = mu - ch.vectors[1]
        checks("recovered chain top agrees with mu up to the eigenvector",
               diff.is_zero() or proportional(diff, ch.vectors[0]), ch.vectors[1])
    out = certify(inst)
    checks("congruence certificate", isinstance(out, Certificate) and isinstance(out.set, Congruence), out)
    if isinstance(out, Certificate):
        checks("target excluded", not eval_predicate(out.set, inst.Y))
        checks("target first coordinate odd", inst.Y[0] % 2 == 1)
        v = verify_certificate(inst, out, HORIZON)
        checks("oracle accepts", v.passed, v.first_violation or v.tail_detail)
    dt = time.perf_counter() - t0
    checks("runtime < 1 s", dt < 1, f"{dt:.2f}s")
    checks.finish()


def test_rotation_invariant_example(checks):
    inst = fixture("rotation-y")
    t0 = time.perf_counter()
    x2y2 = MPoly(2, {(2, 0): 1, (0, 2): 1})
    invs = invariant_forms(inst.A, 2)
    hit = [F for F in invs if proportional(list(F.terms.values()), [1, 1]) and set(F.terms) == set(x2y2.terms)]
    checks("x^2 + y^2 among degree-2 invariants", hit, [F.format() for F in invs])
    for F in invs:
        checks(f"{F.format()} is invariant", F.substitute(linear_images(inst.A)) == F)
    out = certify(inst)
    want = PolyCmp(x2y2, "=", Fraction(1))
    checks("certificate (0, x^2 + y^2 = 1)",
           isinstance(out, Certificate) and out.index == 0 and out.set == want, out)
    if isinstance(out, Certificate):
        v = verify_certificate(inst, out, HORIZON)
        checks("oracle accepts", v.passed, v.first_violation or v.tail_detail)
    out_z = certify(fixture("rotation-z"))
    checks("target (-1, 0) is inconclusive with a reason",
           isinstance(out_z, Inconclusive) and out_z.reason == "closure-inconclusive", out_z)
    dt = time.perf_counter() - t0
    checks("runtime < 2 s", dt < 2, f"{dt:.2f}s")
    checks.finish()


def test_elevation_identities(checks):
    step = fixture("unit-step").A
    blk2 = elevate_block(step, 2)
    blk1 = elevate_block(step, 1)
    # degree-2 basis is x^2, x*one, one^2; degree 1 is x, one
    checks("x^2 maps to x^2 + 2x + 1", list(blk2.row(0)) == [1, 2, 1], blk2.row(0))
    checks("x maps to x + 1", list(blk1.row(0)) == [1, 1], blk1.row(0))
    rng = random.Random(5)
    bad_mul = bad_vec = 0
    for _ in range(100):
        d, k = rng.randint(1, 3), rng.randint(1, 3)
        A = random_matrix(rng, d, 2)
        B = random_matrix(rng, d, 2)
        v = Vector(Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(d))
        EA, EB = elevate_matrix(A, k).matrix, elevate_matrix(B, k).matrix
        bad_mul += elevate_matrix(A @ B, k).matrix != EA @ EB
        bad_vec += EA @ elevate_vector(v, k) != elevate_vector(A @ v, k)
        checks(f"basis size d={d} k={k}", monomial_basis(d, k).size == len(elevate_vector(v, k)))
    checks("Psi_k(AB) = Psi_k(A) Psi_k(B) on 100 cases", bad_mul == 0, f"{bad_mul} mismatches")
    checks("Psi_k(A) Psi_k(v) = Psi_k(Av) on 100 cases", bad_vec == 0, f"{bad_vec} mismatches")
    checks.finish()


def _audit(checks, label, inst, out):
    if isinstance(out, Certificate):
        v = verify_certificate(inst, out, HORIZON)
        checks(f"{label}: oracle accepts", v.passed, (inst, out.index, v.first_violation or v.tail_detail))
        checks(f"{label}: target outside the set", not eval_predicate(out.set, inst.Y), inst)
    elif isinstance(out, ReachableWitness):
        checks(f"{label}: reachability witness", mat_pow(inst.A, out.n) @ inst.X == inst.Y, (inst, out))


def test_property_suite(checks):
    rng = random.Random(20261016)
    tally = {}
    for label, gen in (("rational growth", growth_instance), ("unipotent", unipotent_instance)):
        for _ in range(200):
            inst = gen(rng)
            out = certify(inst)
            tally[(label, type(out).__name__)] = tally.get((label, type(out).__name__), 0) + 1
            _audit(checks, label, inst, out)
    for _ in range(200):
        inst, m = cyclotomic_instance(rng)
        rep = spectrum(inst.A)
        orders = [g.modulus.unity_order for g in rep.classes]
        L = least_period(inst.A)
        checks("cyclotomic: unity order", orders == [m] and unity_period(rep) == L == m, (m, orders, L))
        out = certify(inst)
        tally[("cyclotomic", type(out).__name__)] = tally.get(("cyclotomic", type(out).__name__), 0) + 1
        _audit(checks, "cyclotomic", inst, out)
    print(sorted(tally.items()))
    checks.finish()


def test_algebra_invariants(checks):
    rng = random.Random(77)
    for i in range(100):
        d = rng.randint(1, 5)
        A = random_matrix(rng, d) if i % 2 else structured_matrix(rng, d)
        cp = char_poly(A)
        checks("char poly monic of degree d", cp.degree == d and cp.lc == 1, (A, cp))
        checks("Cayley-Hamilton", all(x == 0 for x in matrix_poly_eval(cp, A).entries), A)
        K = kernel(A)
        checks("kernel dimension", len(K) == d - rank(A), A)
        checks("kernel vectors annihilated", all((A @ v).is_zero() for v in K), A)
        rats, _ = squarefree_rational_roots(cp)
        for lam, mult in rats:
            chains = jordan_chains(A, lam)
            checks("chain relation", all(c.holds_for(A) for c in chains), (A, lam))
            checks("chains cover the algebraic multiplicity", sum(c.length for c in chains) == mult,
                   (A, lam, mult, [c.length for c in chains]))
    checks.finish()


def test_negative_controls(checks):
    for name in ("growth-a4", "chain-a3", "lattice-step", "rotation-y", "quarter-turn", "nilpotent-image"):
        inst = fixture(name)
        out = certify(inst)
        if not checks(f"{name}: certificate", isinstance(out, Certificate), out):
            continue
        neg = Certificate(-1, out.set, out.provenance, out.witness)
        v = verify_certificate(inst, neg, HORIZON)
        checks(f"{name}: index -1 rejected", not v.passed and v.first_violation, v)
        point = And(tuple(PolyCmp(MPoly.var(inst.dim, i), "=", y) for i, y in enumerate(inst.Y)))
        wide = Certificate(out.index, Or((out.set, point)), out.provenance, out.witness)
        v = verify_certificate(inst, wide, HORIZON)
        checks(f"{name}: inflated set rejected", not v.passed and v.first_violation
               and v.first_violation["condition"] == 3, v)
    checks.finish()
