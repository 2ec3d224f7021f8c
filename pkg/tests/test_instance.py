import json
from fractions import Fraction

import pytest

from conftest import fixture
from orbitcert.instance import InstanceError, OrbitInstance, load_instance
from orbitcert.mpoly import MPoly, linear_images
from orbitcert.ratmat import DimensionError, Matrix, Vector


def test_affine_embedding():
    i = fixture("lattice-step")
    assert i.A == Matrix([[1, 2], [0, 1]]) and i.X == Vector([0, 1]) and i.Y == Vector([5, 1])
    assert fixture("unit-step").Y == Vector([Fraction(1, 2), 1])


def test_json_round_trip():
    for name in ("growth-a4", "rotation-y", "unit-step"):
        i = fixture(name)
        assert OrbitInstance.from_json(i.to_json()) == i


def test_schema_errors_name_the_field():
    base = {"matrix": [[1, 0], [0, 1]], "start": [1, 2], "target": [3, 4]}
    with pytest.raises(InstanceError) as exc:
        OrbitInstance.from_json({k: v for k, v in base.items() if k != "target"})
    assert exc.value.field == "target"
    with pytest.raises(InstanceError) as exc:
        OrbitInstance.from_json(dict(base, start=[1, 2, 3]))
    assert exc.value.field == "start"
    with pytest.raises(InstanceError) as exc:
        OrbitInstance.from_json(dict(base, matrix=[[1, 0], [0, 1.5]]))
    assert exc.value.field == "matrix[1][1]"
    with pytest.raises(InstanceError) as exc:
        OrbitInstance.from_json(dict(base, ring="R"))
    assert exc.value.field == "ring"
    with pytest.raises(InstanceError) as exc:
        OrbitInstance.from_json(dict(base, target=["1/2", 1], ring="Z"))
    assert exc.value.field == "ring"
    with pytest.raises(InstanceError):
        OrbitInstance.from_json(dict(base, schema="other/2"))
    with pytest.raises(InstanceError):
        OrbitInstance.from_json(dict(base, matrix=[[1, 0, 0], [0, 1, 0]]))


def test_bad_json_reports_position(tmp_path):
    p = tmp_path / "broken.json"
    p.write_text('{"matrix": [[1]],\n "start": [1,]\n}')
    with pytest.raises(InstanceError, match="line 2"):
        load_instance(p)


def test_direct_construction_checks_dims():
    with pytest.raises(DimensionError):
        OrbitInstance(Matrix([[1, 0], [0, 1]]), Vector([1]), Vector([1, 2]))


def test_mpoly_basics():
    x, y = MPoly.var(2, 0), MPoly.var(2, 1)
    p = (x + y) ** 2 - x * y * 2
    assert p == x * x + y * y
    assert p.format() == "x0^2 + x1^2" and p.degree == 2
    assert p.evaluate([3, 4]) == 25
    M = Matrix([[0, -1], [1, 0]])
    assert p.substitute(linear_images(M)) == p
    assert MPoly.from_json(p.to_json()) == p
    q = MPoly(3, {(1, 0, 2): 2, (0, 0, 1): -1})
    assert q.specialize([5, 0, 0], 2)(Fraction(2)) == q.evaluate([5, 0, 2])
    assert q.uses_var(2) and not q.uses_var(1)
