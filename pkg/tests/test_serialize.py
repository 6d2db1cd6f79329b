import csv
import io
import json

import pytest
from hypothesis import given

from conftest import table, unitaries
from q2diag.cantor import LevelCapExceeded, Residue
from q2diag.diagonal import DiagonalUnitary, uz_phi_build
from q2diag.extend import decide_extendible
from q2diag.phases import MINUS_ONE, NonUnitPhase, Phase
from q2diag.serialize import (
    CSV_COLUMNS,
    BadLevel,
    DuplicateCylinder,
    SpecError,
    certificate_from_json,
    certificate_to_json,
    load_json,
    obstruction_to_json,
    parse_unitary_spec,
    residue_from_json,
    residue_to_json,
    unitary_to_csv,
    unitary_to_json,
)


def test_parse_examples():
    assert parse_unitary_spec('{"level":0,"phases":[{"dyadic":[0,0]}]}') == DiagonalUnitary.identity()
    spec = {"level": 2, "phases": [{"dyadic": [0, 0]}, {"dyadic": [1, 1]}, {"dyadic": [1, 1]}, {"dyadic": [0, 0]}]}
    assert parse_unitary_spec(spec) == uz_phi_build(MINUS_ONE).unitary
    with pytest.raises(BadLevel):
        parse_unitary_spec('{"level":1,"phases":[1]}')


def test_parse_errors():
    with pytest.raises(SpecError):
        parse_unitary_spec("[1]")
    with pytest.raises(SpecError):
        parse_unitary_spec("{not json")
    with pytest.raises(BadLevel):
        parse_unitary_spec('{"level":-1,"phases":[]}')
    with pytest.raises(BadLevel):
        parse_unitary_spec('{"level":true,"phases":[1, 1]}')
    with pytest.raises(NonUnitPhase):
        parse_unitary_spec('{"level":0,"phases":[{"re":2,"im":0}]}')
    with pytest.raises(LevelCapExceeded):
        parse_unitary_spec('{"level":31,"phases":[]}')
    with pytest.raises(DuplicateCylinder):
        parse_unitary_spec('{"cylinders":{"1":1,"1":-1}}')
    with pytest.raises(DuplicateCylinder):
        load_json('{"a":1,"a":2}')
    with pytest.raises(BadLevel):
        parse_unitary_spec('{"cylinders":{"1":1,"22":-1}}')
    with pytest.raises(BadLevel):
        parse_unitary_spec('{"cylinders":{"11":1,"22":-1}}')
    with pytest.raises(SpecError):
        parse_unitary_spec('{"cylinders":{"13":1}}')


def test_cylinder_form():
    spec = {"cylinders": {"22": 1, "12": {"dyadic": [1, 2]}, "21": -1, "11": 1}}
    assert parse_unitary_spec(spec) == table(1, "i", -1, 1)


def test_canonicalized_on_parse():
    d = parse_unitary_spec({"level": 2, "phases": [1, -1, 1, -1]})
    assert d.level == 1


@given(unitaries(max_level=6))
def test_roundtrip(d):
    text = json.dumps(unitary_to_json(d))
    assert parse_unitary_spec(text) == d


def test_float_roundtrip():
    d = DiagonalUnitary(1, angles=[0.1, 2.0])
    back = parse_unitary_spec(json.loads(json.dumps(unitary_to_json(d))))
    assert not back.is_exact and back == d


def test_certificate_roundtrip():
    cert = decide_extendible(table(1, -1, -1, 1)).certificate
    obj = certificate_to_json(cert)
    assert list(obj) == ["gauge", "inner", "check", "source"]
    assert obj["gauge"] == {"dyadic": [0, 0]}
    assert certificate_from_json(json.loads(json.dumps(obj))) == cert
    with pytest.raises(SpecError):
        certificate_from_json({"gauge": 1})


def test_obstruction_json():
    res = decide_extendible(table(1, "i", 1, 1))
    assert obstruction_to_json(res.obstruction) == {
        "kind": "cocycle_obstruction", "cycle": [1, 2], "product": {"dyadic": [1, 2]},
    }
    res = decide_extendible(table(1, "i"))
    assert obstruction_to_json(res.obstruction)["kind"] == "point_spectrum_mismatch"


def test_residue_json():
    assert residue_to_json(Residue(3, 2)) == {"r": 3, "k": 2}
    assert residue_from_json({"r": 3, "k": 2}) == Residue(3, 2)
    for bad in ({"r": 4, "k": 2}, {"r": 1}, {"r": "1", "k": 2}, [1, 2]):
        with pytest.raises(SpecError):
            residue_from_json(bad)


def test_csv():
    d = DiagonalUnitary.from_phases([Phase.dyadic(0, 0), Phase.rational(1, 3)])
    rows = list(csv.reader(io.StringIO(unitary_to_csv(d))))
    assert rows[0] == CSV_COLUMNS
    assert rows[1] == ["0", "2", "0", "1", ""]
    assert rows[2] == ["1", "1", "1", "3", ""]
    f = DiagonalUnitary(0, angles=[0.5])
    rows = list(csv.reader(io.StringIO(unitary_to_csv(f))))
    assert rows[1][:4] == ["0", "", "", ""] and float(rows[1][4]) == 0.5
