from dataclasses import replace
from fractions import Fraction

import pytest

from conftest import fixture
from orbitcert.certificate import (
    Certificate, ChainWitness, EigenformWitness, FixedPointWitness, InvariantWitness, PeriodicWitness,
)
from orbitcert.certify import certify
from orbitcert.mpoly import MPoly
from orbitcert.oracle import TailFailure, VerificationReport, check_tail, orbit_prefix, verify_certificate
from orbitcert.polyalg import Polynomial
from orbitcert.predicate import AbsCmp, And, Or, PolyCmp
from orbitcert.ratmat import Matrix, Vector

A3 = Matrix([[1, 1, 0], [0, 1, 1], [0, 0, 1]])
X_GT_2 = PolyCmp(MPoly.var(3, 0), ">", Fraction(2))
A3_CHAIN = ChainWitness((MPoly.linear([0, 0, 1]), MPoly.linear([0, 1, 0]), MPoly.linear([1, 0, 0])), Fraction(1))


def test_orbit_prefix_examples():
    X = Vector([-2, -1, 1])
    assert orbit_prefix(A3, X, 0) == [X]
    pts = orbit_prefix(A3, X, 7)
    assert len(pts) == 8
    for n, v in enumerate(pts):
        assert v[2] == 1 and v[1] == -1 + n
        assert v[0] == Fraction(n * n, 2) - Fraction(3 * n, 2) - 2


def test_published_chain_certificate_passes():
    i = fixture("chain-a3")
    rep = verify_certificate(i, Certificate(7, X_GT_2, {}, A3_CHAIN), 200)
    assert rep.passed and rep.condition2_tail == "proved_symbolically"
    assert all(v != i.Y for v in orbit_prefix(i.A, i.X, 6))


def test_emitted_certificates_pass_for_every_fixture():
    for name in ("growth-a4", "chain-a3", "lattice-step", "rotation-y", "quarter-turn", "nilpotent-image",
                 "scalar-growth", "unit-step"):
        i = fixture(name)
        out = certify(i)
        rep = verify_certificate(i, out, 200)
        assert rep.passed, (name, rep)
        assert rep.first_violation is None and rep.condition2_checked_to >= 200


def test_index_below_the_true_one_is_caught():
    i = fixture("chain-a3")
    rep = verify_certificate(i, Certificate(4, X_GT_2, {}, A3_CHAIN), 200)
    assert not rep.passed and rep.first_violation == {"condition": 2, "n": 4, "detail": "A^4 X is outside the set"}


def test_negative_index():
    i = fixture("chain-a3")
    rep = verify_certificate(i, Certificate(-1, X_GT_2, {}, A3_CHAIN))
    assert not rep.passed and not rep.condition1_ok and rep.first_violation["condition"] == 1


def test_target_inside_the_set():
    i = fixture("chain-a3")
    wide = PolyCmp(MPoly.var(3, 0), ">", Fraction(1))
    rep = verify_certificate(i, Certificate(5, wide, {}, A3_CHAIN))
    assert not rep.condition3_ok and rep.first_violation["condition"] == 3


def test_index_past_a_hit_is_caught():
    i = fixture("chain-a3-reached")
    rep = verify_certificate(i, Certificate(9, X_GT_2, {}, A3_CHAIN))
    assert not rep.condition1_ok and rep.first_violation["n"] == 5


def test_insufficient_horizon_flag():
    i = fixture("chain-a3")
    rep = verify_certificate(i, Certificate(7, X_GT_2, {}, A3_CHAIN), horizon=3)
    assert rep.insufficient_horizon and rep.passed and rep.condition2_checked_to >= 7


def test_no_witness_means_horizon_only():
    i = fixture("chain-a3")
    rep = verify_certificate(i, Certificate(7, X_GT_2), 50)
    assert rep.condition2_ok and rep.condition2_tail == "horizon_only" and not rep.passed


def test_forged_witnesses_are_rejected():
    A = Matrix([[2, 0], [0, 3]])
    X = Vector([1, 1])
    x0 = MPoly.linear([1, 0])
    big = AbsCmp(x0, ">=", MPoly.const(2, 4))
    check_tail(EigenformWitness(x0, Polynomial([2]), 2, None), A, X, big)
    with pytest.raises(TailFailure, match="lambda"):
        check_tail(EigenformWitness(x0, Polynomial([3]), 2, None), A, X, big)
    with pytest.raises(TailFailure, match="base case"):
        check_tail(EigenformWitness(x0, Polynomial([2]), 1, None), A, X, big)
    shrink = AbsCmp(x0, "<=", MPoly.const(2, 4))
    with pytest.raises(TailFailure):
        check_tail(EigenformWitness(x0, Polynomial([2]), 0, None), A, X, shrink)
    with pytest.raises(TailFailure):
        check_tail(InvariantWitness(x0), A, X, PolyCmp(x0, "=", Fraction(1)))
    with pytest.raises(TailFailure):
        check_tail(FixedPointWitness(), A, X, And(()))
    bad_chain = ChainWitness((MPoly.linear([0, 1, 0]), MPoly.linear([1, 0, 0])), Fraction(1))
    with pytest.raises(TailFailure, match="chain relation"):
        check_tail(bad_chain, A3, Vector([-2, -1, 1]), X_GT_2)
    with pytest.raises(TailFailure):
        check_tail(PeriodicWitness(2, (FixedPointWitness(),)), A, X, Or((And(()),)))


def test_forged_witness_fails_the_report():
    i = fixture("scalar-growth")
    out = certify(i)
    forged = replace(out, witness=replace(out.witness, lam=Polynomial([3])))
    rep = verify_certificate(i, forged)
    assert not rep.passed and rep.condition2_tail == "horizon_only" and "rejected" in rep.tail_detail


def test_report_json_round_trip():
    i = fixture("growth-a4")
    rep = verify_certificate(i, certify(i), 60)
    d = rep.to_json()
    assert d["passed"] is True
    assert VerificationReport.from_json(d) == rep


def test_verification_is_deterministic():
    i = fixture("lattice-step")
    c = certify(i)
    assert verify_certificate(i, c) == verify_certificate(i, c)
