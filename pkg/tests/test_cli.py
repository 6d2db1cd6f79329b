import json
import os
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import table, unitaries
from q2diag.cantor import Word
from q2diag.cli import EXIT_BUDGET, EXIT_INPUT, EXIT_OK, UnsupportedFormat, dynamics_stats, emit_report, main
from q2diag.serialize import parse_unitary_spec, unitary_to_json

WORKED = '{"level":2,"phases":[1,-1,-1,1]}'
OBSTRUCTED = json.dumps(unitary_to_json(table(1, "i", 1, 1)))


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_decide_identity_json(capsys):
    code, out, _ = run(capsys, "decide", '{"level":0,"phases":[{"dyadic":[0,0]}]}')
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["certificate"]["gauge"] == {"dyadic": [0, 0]}
    assert report["verdict"] == "extendible"
    assert all(v["passed"] for v in report["oracle"].values())


def test_decide_worked(capsys):
    code, out, _ = run(capsys, "decide", WORKED)
    cert = json.loads(out)["certificate"]
    assert cert["check"] == {"level": 0, "phases": [{"dyadic": [1, 1]}]}
    assert cert["inner"] == {"level": 1, "phases": [{"dyadic": [0, 0]}, {"dyadic": [1, 1]}]}


def test_obstruction_text_lists_cycle(capsys):
    code, out, _ = run(capsys, "--format", "text", "decide", OBSTRUCTED)
    assert code == EXIT_OK
    assert "verdict: not_extendible" in out
    assert "cycle: [1, 2]" in out


def test_format_after_command(capsys):
    code, out, _ = run(capsys, "decide", OBSTRUCTED, "--format", "text")
    assert "cycle: [1, 2]" in out


def test_checkmap(capsys):
    code, out, _ = run(capsys, "checkmap", WORKED)
    rep = json.loads(out)
    assert rep["agree"] is True
    assert rep["check"] == rep["check_by_product_formula"]


def test_invert(capsys):
    code, out, _ = run(capsys, "invert", '{"level":0,"phases":[-1]}')
    rep = json.loads(out)
    assert rep["verdict"] == "in_image" and rep["roundtrip"] is True
    assert parse_unitary_spec(rep["preimage"]) == parse_unitary_spec(WORKED)
    code, out, _ = run(capsys, "invert", '{"level":0,"phases":[{"rational":[1,3]}]}')
    assert code == EXIT_OK and json.loads(out)["verdict"] == "not_in_image"


def test_verify_and_genword(tmp_path, capsys):
    main(["decide", WORKED, "--output", str(tmp_path / "rep.json")])
    cert = json.loads((tmp_path / "rep.json").read_text())["certificate"]
    (tmp_path / "cert.json").write_text(json.dumps(cert))
    (tmp_path / "tables.json").write_text(json.dumps({"d": cert["source"], "c": cert["check"]}))
    code, out, _ = run(capsys, "verify", str(tmp_path / "cert.json"), "--window", "32")
    assert code == EXIT_OK and json.loads(out)["verdict"] == "pass"
    t = tmp_path / "tables.json"
    code, out, _ = run(
        capsys, "verify", str(tmp_path / "cert.json"),
        "--lhs", f"D:{t}#c U D:{t}#d S2", "--rhs", f"D:{t}#d S1",
    )
    rep = json.loads(out)
    assert rep["identity"]["passed"] and rep["verdict"] == "pass"
    code, out, _ = run(capsys, "verify", str(tmp_path / "cert.json"), "--lhs", "S2 U", "--rhs", "S2")
    assert code == EXIT_OK and json.loads(out)["verdict"] == "fail"
    code, _, err = run(capsys, "verify", str(tmp_path / "cert.json"), "--lhs", "S2 U")
    assert code == EXIT_INPUT
    code, _, err = run(capsys, "verify", str(tmp_path / "cert.json"), "--lhs", f"D:{t}#zz", "--rhs", "U")
    assert code == EXIT_INPUT


def test_verify_rejects_bad_certificate(capsys):
    cert = {"gauge": 1, "inner": {"level": 0, "phases": [1]}, "check": {"level": 0, "phases": [-1]},
            "source": {"level": 0, "phases": [1]}}
    code, out, _ = run(capsys, "verify", json.dumps(cert))
    rep = json.loads(out)
    assert code == EXIT_OK and rep["verdict"] == "fail" and not rep["invariants"]["passed"]


def test_dynamics_examples():
    assert dynamics_stats(3, Word.parse("2")) == {
        "command": "dynamics", "level": 3, "cylinder": "2", "period": 8, "average": [1, 2],
    }
    assert dynamics_stats(4, Word.parse("11"))["average"] == [1, 4]
    assert dynamics_stats(1, Word.parse("1"))["period"] == 2


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 12).flatmap(lambda k: st.tuples(st.just(k), st.integers(0, k).flatmap(
    lambda j: st.integers(0, (1 << j) - 1).map(lambda b: Word(b, j))))))
def test_dynamics_average_is_cylinder_mass(kw):
    k, cyl = kw
    stats = dynamics_stats(k, cyl)
    assert stats["period"] == 1 << k
    assert Fraction(*stats["average"]) == Fraction(1, 1 << cyl.length)


def test_dynamics_cli(capsys):
    code, out, _ = run(capsys, "dynamics", "--level", "3", "--cylinder", "2", "--steps", "3")
    rep = json.loads(out)
    assert rep["average_over_steps"] == [2, 3]
    assert run(capsys, "dynamics", "--level", "3", "--cylinder", "3")[0] == EXIT_INPUT
    assert run(capsys, "dynamics", "--level", "2", "--cylinder", "111")[0] == EXIT_INPUT
    assert run(capsys, "dynamics", "--level", "2", "--cylinder", "1", "--steps", "0")[0] == EXIT_INPUT


def test_sweep_cli(capsys):
    code, out, _ = run(capsys, "sweep", "--level", "3", "--grid", "roots:2^3", "--predicate", "S2FIXED")
    rep = json.loads(out)
    assert rep["survivors"] == [{"level": 0, "phases": [{"dyadic": [0, 0]}]}]
    code, out, _ = run(capsys, "sweep", "--level", "4", "--grid", "roots:2^2",
                       "--predicate", "S2_AND_S1SQ_FIXED", "--budget", "5")
    assert code == EXIT_BUDGET
    assert run(capsys, "sweep", "--level", "2", "--grid", "roots:3", "--predicate", "S2FIXED")[0] == EXIT_INPUT
    assert run(capsys, "sweep", "--level", "2", "--grid", "roots:4", "--predicate", "X")[0] == EXIT_INPUT
    assert run(capsys, "sweep", "--level", "40", "--grid", "roots:4", "--predicate", "S2FIXED")[0] == EXIT_BUDGET


def test_input_errors(capsys, tmp_path):
    assert run(capsys, "decide", '{"level":1,"phases":[1]}')[0] == EXIT_INPUT
    assert run(capsys, "decide", str(tmp_path / "missing.json"))[0] == EXIT_INPUT
    assert run(capsys, "decide", "{oops")[0] == EXIT_INPUT
    assert run(capsys, "--format", "xml", "decide", WORKED)[0] == EXIT_INPUT
    assert run(capsys, "frobnicate")[0] == EXIT_INPUT
    assert run(capsys)[0] == EXIT_INPUT
    assert run(capsys, "decide", WORKED, "--window", "0")[0] == EXIT_INPUT
    assert run(capsys, "decide", '{"level":31,"phases":[]}')[0] == EXIT_BUDGET


def test_csv_output(capsys):
    code, out, _ = run(capsys, "--format", "csv", "checkmap", WORKED)
    lines = out.splitlines()
    assert lines[0].startswith("table,residue,word")
    assert "input,3,11,0,1," in lines
    assert "check,0,,1,2," in lines


def test_emit_is_deterministic(capsys):
    code, out, _ = run(capsys, "decide", WORKED)
    rep = json.loads(out)
    for fmt in ("json", "csv", "text"):
        assert emit_report(rep, fmt) == emit_report(json.loads(out), fmt)
    with pytest.raises(UnsupportedFormat):
        emit_report(rep, "yaml")


def test_timing_flag(capsys):
    _, out, _ = run(capsys, "--timing", "dynamics", "--level", "2", "--cylinder", "1")
    assert "timing_s" in json.loads(out)


@given(unitaries(max_level=5))
def test_emit_parse_roundtrip(d):
    out = emit_report({"t": unitary_to_json(d)}, "json")
    assert parse_unitary_spec(json.loads(out)["t"]) == d


def test_module_entry_point_and_level_cap_env(tmp_path):
    env = dict(os.environ, Q2DIAG_LEVEL_CAP="2")
    proc = subprocess.run([sys.executable, "-m", "q2diag", "decide", WORKED], capture_output=True, env=env)
    assert proc.returncode == EXIT_OK
    big = json.dumps({"level": 3, "phases": [1] * 8})
    proc = subprocess.run([sys.executable, "-m", "q2diag", "decide", big], capture_output=True, env=env)
    assert proc.returncode == EXIT_BUDGET
    assert b"exceeds cap 2" in proc.stderr
