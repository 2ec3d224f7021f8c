"""Orbit problem instances and their JSON form."""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .ratmat import DimensionError, Matrix, Vector

SCHEMA = "orbitcert/1"


class InstanceError(ValueError):
    """Schema or shape problem in an instance description; ``field`` names the culprit."""

    def __init__(self, msg: str, field: str | None = None):
        super().__init__(f"{field}: {msg}" if field else msg)
        self.field = field


@dataclass(frozen=True)
class OrbitInstance:
    """Does A^n X = Y for some natural n?"""

    A: Matrix
    X: Vector
    Y: Vector
    ring: str = "Q"

    def __post_init__(self):
        if not self.A.is_square():
            raise DimensionError(f"matrix must be square, got {self.A.shape}")
        d = self.A.nrows
        if self.X.dim != d or self.Y.dim != d:
            raise DimensionError(f"matrix is {d}x{d} but start has {self.X.dim} and target {self.Y.dim} entries")
        if self.ring not in ("Q", "Z"):
            raise ValueError(f"ring must be 'Q' or 'Z', got {self.ring!r}")
        if self.ring == "Z":
            vals = list(self.A.entries) + list(self.X) + list(self.Y)
            if any(x.denominator != 1 for x in vals):
                raise ValueError("ring Z requires integer matrix, start and target")

    @property
    def dim(self) -> int:
        return self.A.nrows

    def with_target(self, Y) -> "OrbitInstance":
        return OrbitInstance(self.A, self.X, Vector(Y), self.ring)

    def integral(self) -> bool:
        vals = list(self.A.entries) + list(self.X) + list(self.Y)
        return all(x.denominator == 1 for x in vals)

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA, "matrix": self.A.to_json(), "start": self.X.to_json(),
            "target": self.Y.to_json(), "ring": self.ring,
        }

    @classmethod
    def from_json(cls, data: dict, affine: bool | None = None) -> "OrbitInstance":
        if not isinstance(data, dict):
            raise InstanceError("instance must be a JSON object")
        schema = data.get("schema", SCHEMA)
        if schema != SCHEMA:
            raise InstanceError(f"unsupported schema {schema!r}, expected {SCHEMA!r}", "schema")
        for key in ("matrix", "start", "target"):
            if key not in data:
                raise InstanceError("missing required field", key)
        ring = data.get("ring", "Q")
        if ring not in ("Q", "Z"):
            raise InstanceError(f"must be 'Q' or 'Z', got {ring!r}", "ring")
        affine = bool(data.get("affine", False)) if affine is None else affine
        try:
            rows = [[_entry(x, f"matrix[{i}][{j}]") for j, x in enumerate(r)] for i, r in enumerate(data["matrix"])]
            X = [_entry(x, f"start[{i}]") for i, x in enumerate(data["start"])]
            Y = [_entry(x, f"target[{i}]") for i, x in enumerate(data["target"])]
        except TypeError as exc:
            raise InstanceError(f"expected arrays: {exc}") from exc
        if affine:
            rows, X, Y = _embed_affine(rows, X, Y)
        widths = {len(r) for r in rows}
        if not rows or len(widths) != 1:
            raise InstanceError("rows must be non-empty and of equal length", "matrix")
        if widths.pop() != len(rows):
            raise InstanceError(f"matrix must be square, got {len(rows)} rows of {len(rows[0])}", "matrix")
        if len(X) != len(rows):
            raise InstanceError(f"has {len(X)} entries, matrix dimension is {len(rows)}", "start")
        if len(Y) != len(rows):
            raise InstanceError(f"has {len(Y)} entries, matrix dimension is {len(rows)}", "target")
        try:
            return cls(Matrix(rows), Vector(X), Vector(Y), ring)
        except ValueError as exc:
            raise InstanceError(str(exc), "ring") from exc


def _entry(x, where: str):
    from fractions import Fraction

    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise InstanceError(f"expected an integer or a rational string like \"3/5\", got {x!r}", where)
    try:
        return Fraction(x.strip()) if isinstance(x, str) else Fraction(x)
    except (ValueError, ZeroDivisionError) as exc:
        raise InstanceError(f"not a rational: {x!r}", where) from exc


def _embed_affine(rows, X, Y):
    """v -> M v + b given as d x (d+1) rows becomes a linear map on (v, 1)."""
    d = len(rows)
    if any(len(r) != d + 1 for r in rows):
        raise InstanceError("affine matrix must have d rows of d+1 entries", "matrix")
    if len(X) != d or len(Y) != d:
        raise InstanceError(f"affine start and target need {d} entries", "start")
    return [list(r) for r in rows] + [[0] * d + [1]], list(X) + [1], list(Y) + [1]


def load_instance(path, affine: bool | None = None) -> OrbitInstance:
    p = Path(path)
    try:
        data = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise InstanceError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return OrbitInstance.from_json(data, affine)
