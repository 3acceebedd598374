import io
import json
import math

import pytest

from wparc.cli import SCHEMA, run

SYM = math.acosh(2.0)


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def sym_lengths(tmp_path):
    path = tmp_path / "a.json"
    path.write_text(json.dumps({"0": SYM, "1": SYM, "2": SYM}))
    return str(path)


def test_validate_pants():
    code, out, _ = call("validate", "--surface", "pair_of_pants")
    doc = json.loads(out)
    assert code == 0
    assert (doc["genus"], doc["boundary_components"]) == (0, 3)
    assert doc["schema"] == SCHEMA and doc["seed"] == 0


def test_validate_surface_file(tmp_path):
    from wparc.surface import dump_surface, one_holed_torus
    path = tmp_path / "t.json"
    dump_surface(one_holed_torus(), path)
    code, out, _ = call("validate", "--surface", str(path))
    assert code == 0 and json.loads(out)["genus"] == 1


def test_poisson_symmetric_torus(sym_lengths):
    code, out, _ = call("poisson", "--surface", "one_holed_torus", "--lengths", sym_lengths)
    H = json.loads(out)["H"]
    assert code == 0
    assert H[0][1] == pytest.approx(0.2, abs=1e-12)
    assert H[0][2] == pytest.approx(-0.2, abs=1e-12)


def test_casimir_unreachable_tolerance_exits_1():
    code, out, err = call("casimir", "--surface", "one_holed_torus", "--tol", "1e-12",
                          "--seed", "3")
    doc = json.loads(out)
    assert code == 1
    assert doc["residual"] > 1e-12 and doc["tolerance"] == 1e-12
    assert "exceeds tolerance" in err


@pytest.mark.parametrize("cmd", ["casimir", "jacobi", "limit-kontsevich", "penner-duality"])
def test_verification_commands_pass(cmd):
    code, out, _ = call(cmd, "--surface", "one_holed_torus", "--seed", "1")
    doc = json.loads(out)
    assert code == 0 and doc["passed"]
    assert "residual" in doc and "tolerance" in doc


def test_deterministic_output():
    a = call("geom", "--surface", "one_holed_torus", "--seed", "7")
    b = call("geom", "--surface", "one_holed_torus", "--seed", "7")
    c = call("geom", "--surface", "one_holed_torus", "--seed", "8")
    assert a == b and a[1] != c[1]


def test_csv_and_out(tmp_path):
    path = tmp_path / "delta.csv"
    code, out, _ = call("limit-kontsevich", "--surface", "one_holed_torus", "--t-list",
                        "1,0.1,0.01", "--format", "csv", "--out", str(path))
    lines = path.read_text().splitlines()
    assert code == 0 and out == ""
    assert lines[0].startswith(f"# schema={SCHEMA}")
    assert lines[1] == "t,delta" and len(lines) == 5


def test_twist_scenario(tmp_path):
    path = tmp_path / "s.json"
    path.write_text(json.dumps({"h": 1.0, "items": [{"target": 1, "nu": math.pi / 2, "d": 1e-12}]}))
    code, out, _ = call("twist", "--scenario", str(path))
    assert code == 0
    assert json.loads(out)["derivative"] == pytest.approx(0.5, abs=1e-9)


def test_flip_and_spine():
    code, out, _ = call("flip", "--surface", "one_holed_torus", "--arc", "1")
    assert code == 0 and json.loads(out)["passed"]
    code, out, _ = call("spine", "--surface", "pair_of_pants", "--seed", "2")
    assert code == 0 and min(json.loads(out)["widths"].values()) >= -1e-12


@pytest.mark.parametrize("argv, msg", [
    (["bogus"], "invalid choice"),
    (["geom"], "--surface is required"),
    (["geom", "--surface", "/no/such/file.json"], "no bundled surface"),
    (["geom", "--surface", "one_holed_torus", "--lengths", "/no/such.json"], "cannot read"),
    (["casimir", "--surface", "one_holed_torus", "--tol", "-1"], "--tol"),
    (["limit-kontsevich", "--surface", "one_holed_torus", "--t-list", "0.1,1"], "decreasing"),
    (["twist"], "--scenario"),
    (["flip", "--surface", "one_holed_torus"], "--arc"),
    (["flip", "--surface", "one_holed_torus", "--arc", "9"], "arc"),
])
def test_input_errors_exit_2(argv, msg):
    code, _, err = call(*argv)
    assert code == 2
    assert msg in err


def test_bad_lengths_file(tmp_path):
    path = tmp_path / "a.json"
    path.write_text(json.dumps({"0": 1.0, "2": 1.0}))
    code, _, err = call("geom", "--surface", "one_holed_torus", "--lengths", str(path))
    assert code == 2 and "missing arc id 1" in err
    path.write_text("{oops")
    code, _, err = call("geom", "--surface", "one_holed_torus", "--lengths", str(path))
    assert code == 2 and "line 1" in err


def test_bad_scenario(tmp_path):
    path = tmp_path / "s.json"
    path.write_text(json.dumps({"h": 1.0, "items": [{"target": 5, "nu": 1.0, "d": 0.2}]}))
    code, _, err = call("twist", "--scenario", str(path))
    assert code == 2 and "target" in err
