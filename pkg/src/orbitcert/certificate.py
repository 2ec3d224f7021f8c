"""Certificates, their tail witnesses, and the three possible outcomes.

A certificate (N, P) claims that A^n X != Y for n < N, that A^n X lies in
P for every n >= N, and that Y is outside P.  The witness attached to a
certificate says *why* the orbit stays in P forever; the oracle re-checks
it from scratch.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from . import predicate as pred
from .mpoly import MPoly
from .polyalg import Polynomial, RealRoot
from .ratmat import Matrix, Vector, fraction_str

SCHEMA = "orbitcert/1"


@dataclass(frozen=True)
class EigenformWitness:
    """form(A v) = lam * form(v); |form| then moves geometrically along the orbit.

    ``form`` and ``lam`` may mention an algebraic number (variable d of the
    form, variable of ``lam``) which is the unique root of ``root.poly`` in
    ``(root.lo, root.hi)``.  ``start`` is the index from which the set holds.
    """

    form: MPoly
    lam: Polynomial
    start: int
    root: RealRoot | None = None
    kind = "eigenform"


@dataclass(frozen=True)
class ChainWitness:
    """forms[0] o A = lam forms[0], forms[i] o A = lam forms[i] + forms[i-1], |lam| = 1."""

    forms: tuple
    lam: Fraction
    kind = "chain"


@dataclass(frozen=True)
class InvariantWitness:
    """form o A = form."""

    form: MPoly
    kind = "invariant"


@dataclass(frozen=True)
class SubspaceWitness:
    """Every form vanishes on A^start, so the orbit is inside their zero set from ``start`` on."""

    forms: tuple
    start: int
    kind = "subspace"


@dataclass(frozen=True)
class FixedPointWitness:
    """A X = X, so the orbit is the single point X."""

    kind = "fixed-point"


@dataclass(frozen=True)
class PeriodicWitness:
    """Split the orbit by n mod L; part r certifies the orbit of A^r X under A^L.

    The certificate set is ``Or`` of the part sets in residue order.
    """

    period: int
    parts: tuple
    kind = "periodic"


@dataclass(frozen=True)
class RestrictedWitness:
    """After ``steps`` iterations the orbit lives in the image of ``embed``.

    There A acts as ``reduced`` (A embed = embed reduced) and ``project``
    recovers coordinates.  The set is the conjunction of ``equations`` = 0
    and ``sub_set`` read through ``project``.
    """

    steps: int
    embed: Matrix
    project: Matrix
    reduced: Matrix
    equations: tuple
    sub_set: object
    sub_witness: object
    kind = "restricted"


Witness = Union[EigenformWitness, ChainWitness, InvariantWitness, SubspaceWitness,
                FixedPointWitness, PeriodicWitness, RestrictedWitness]


def witness_to_json(w) -> dict:
    if isinstance(w, EigenformWitness):
        return {"kind": w.kind, "form": w.form.to_json(), "lambda": w.lam.to_json(), "start": w.start,
                "root": w.root.to_json() if w.root is not None else None}
    if isinstance(w, ChainWitness):
        return {"kind": w.kind, "forms": [f.to_json() for f in w.forms], "lambda": fraction_str(w.lam)}
    if isinstance(w, InvariantWitness):
        return {"kind": w.kind, "form": w.form.to_json()}
    if isinstance(w, SubspaceWitness):
        return {"kind": w.kind, "forms": [f.to_json() for f in w.forms], "start": w.start}
    if isinstance(w, FixedPointWitness):
        return {"kind": w.kind}
    if isinstance(w, PeriodicWitness):
        return {"kind": w.kind, "period": w.period, "parts": [witness_to_json(p) for p in w.parts]}
    if isinstance(w, RestrictedWitness):
        return {
            "kind": w.kind, "steps": w.steps, "embed": w.embed.to_json(), "project": w.project.to_json(),
            "reduced": w.reduced.to_json(), "equations": [f.to_json() for f in w.equations],
            "sub_set": pred.to_json(w.sub_set), "sub_witness": witness_to_json(w.sub_witness),
        }
    raise TypeError(f"unknown witness {w!r}")


def _matrix(data, ncols_hint=None) -> Matrix:
    m = Matrix.from_json(data)
    return m


def witness_from_json(d: dict):
    k = d["kind"]
    if k == "eigenform":
        root = RealRoot.from_json(d["root"]) if d.get("root") else None
        return EigenformWitness(MPoly.from_json(d["form"]), Polynomial.from_json(d["lambda"]),
                                int(d["start"]), root)
    if k == "chain":
        return ChainWitness(tuple(MPoly.from_json(f) for f in d["forms"]), Fraction(d["lambda"]))
    if k == "invariant":
        return InvariantWitness(MPoly.from_json(d["form"]))
    if k == "subspace":
        return SubspaceWitness(tuple(MPoly.from_json(f) for f in d["forms"]), int(d["start"]))
    if k == "fixed-point":
        return FixedPointWitness()
    if k == "periodic":
        return PeriodicWitness(int(d["period"]), tuple(witness_from_json(p) for p in d["parts"]))
    if k == "restricted":
        return RestrictedWitness(
            int(d["steps"]), _matrix(d["embed"]), _matrix(d["project"]), _matrix(d["reduced"]),
            tuple(MPoly.from_json(f) for f in d["equations"]), pred.from_json(d["sub_set"]),
            witness_from_json(d["sub_witness"]),
        )
    raise ValueError(f"unknown witness kind {k!r}")


@dataclass(frozen=True)
class Certificate:
    index: int
    set: object
    provenance: dict = field(default_factory=dict, compare=False)
    witness: object = None

    def to_json(self) -> dict:
        prov = dict(self.provenance)
        if self.witness is not None:
            prov["witness"] = witness_to_json(self.witness)
        return {"schema": SCHEMA, "outcome": "certificate", "index": self.index,
                "set": pred.to_json(self.set), "provenance": prov}

    @classmethod
    def from_json(cls, d: dict) -> "Certificate":
        prov = dict(d.get("provenance", {}))
        w = prov.pop("witness", None)
        return cls(int(d["index"]), pred.from_json(d["set"]), prov,
                   witness_from_json(w) if w is not None else None)

    def __eq__(self, other):
        return (isinstance(other, Certificate) and self.index == other.index and self.set == other.set
                and self.witness == other.witness and self.provenance == other.provenance)

    __hash__ = None


@dataclass(frozen=True)
class ReachableWitness:
    n: int

    def to_json(self) -> dict:
        return {"schema": SCHEMA, "outcome": "reachable", "n": self.n}


@dataclass(frozen=True)
class Inconclusive:
    reason: str
    detail: dict = field(default_factory=dict, compare=False)

    def to_json(self) -> dict:
        return {"schema": SCHEMA, "outcome": "inconclusive", "reason": self.reason, "detail": self.detail}


Outcome = Union[Certificate, ReachableWitness, Inconclusive]


def outcome_from_json(d: dict):
    kind = d.get("outcome", "certificate")
    if kind == "certificate":
        return Certificate.from_json(d)
    if kind == "reachable":
        return ReachableWitness(int(d["n"]))
    if kind == "inconclusive":
        return Inconclusive(d["reason"], d.get("detail", {}))
    raise ValueError(f"unknown outcome {kind!r}")
