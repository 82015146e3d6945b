import json
import subprocess
import sys
from pathlib import Path

import jsonschema

from eisq.cli import main

SCHEMAS = Path(__file__).resolve().parent.parent / "docs" / "schemas"


def schema(name):
    return json.loads((SCHEMAS / f"{name}.v1.json").read_text())


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_info(capsys):
    code, out, _ = run(capsys, "info", "--disc", "5")
    data = json.loads(out)
    jsonschema.validate(data, schema("info"))
    assert code == 0 and data["h_wide"] == 1 and data["eps0"] == "(1+1*sqrt(5))/2"
    code, out, _ = run(capsys, "info", "--disc", "105")
    assert json.loads(out)["num_genera"] == 4


def test_info_error(capsys):
    code, out, err = run(capsys, "info", "--disc", "4")
    assert code == 3 and out == ""
    data = json.loads(err)
    jsonschema.validate(data, schema("error"))
    assert data["error"]["code"] == "invalid_discriminant"


def test_expand_json(capsys):
    code, out, _ = run(capsys, "expand", "--disc", "5", "--weight", "2", "--terms", "10")
    data = json.loads(out)
    jsonschema.validate(data, schema("expand"))
    coeffs = {c["m"]: (c["num"], c["den"]) for c in data["coeffs"]}
    assert coeffs[0] == (1, 1) and coeffs[2] == (0, 1) and coeffs[1] == (-10, 1)
    assert "Hirzebruch-Zagier" in data["label"]


def test_expand_csv_and_stability(capsys):
    _, a, _ = run(capsys, "expand", "--disc", "65", "--genus", "1", "--weight", "4", "--terms", "12", "--format", "csv")
    _, b, _ = run(capsys, "expand", "--disc", "65", "--genus", "1", "--weight", "4", "--terms", "12", "--format", "csv", "--workers", "2")
    assert a == b
    lines = a.strip().splitlines()
    assert lines[0] == "m,num,den" and lines[1] == "0,1,1" and len(lines) == 14


def test_expand_with_explicit_ideal(capsys):
    _, a, _ = run(capsys, "expand", "--disc", "65", "--ideal", "1:2:1", "--terms", "8")
    _, b, _ = run(capsys, "expand", "--disc", "65", "--genus", "1", "--terms", "8")
    assert json.loads(a)["coeffs"] == json.loads(b)["coeffs"]


def test_derivative(capsys):
    code, out, _ = run(capsys, "derivative", "--disc", "5", "--terms", "3", "--v", "1")
    data = json.loads(out)
    jsonschema.validate(data, schema("derivative"))
    assert [c["m"] for c in data["coeffs"]] == [-3, -2, -1, 0, 1, 2, 3]
    code, _, err = run(capsys, "derivative", "--disc", "5", "--terms", "3")
    assert code == 3 and "--v" in json.loads(err)["error"]["message"]


def test_sigma(capsys):
    code, out, _ = run(capsys, "sigma", "--disc", "5", "--m", "4")
    data = json.loads(out)
    jsonschema.validate(data, schema("sigma"))
    assert data["value_at_w"] == "6/1"
    code, _, err = run(capsys, "sigma", "--disc", "5", "--m", "0")
    assert code == 3


def test_repnum(capsys):
    code, out, _ = run(capsys, "repnum", "--disc", "5", "--m", "1:2", "--b-max", "3")
    assert out.splitlines() == ["m,b,count", "1,1,2", "1,2,6", "1,3,8", "2,1,0", "2,2,0", "2,3,0"]


def test_l_value(capsys):
    _, out, _ = run(capsys, "l-value", "--disc", "5", "--n", "2")
    data = json.loads(out)
    jsonschema.validate(data, schema("l-value"))
    assert data["exact"] == "-2/5"
    _, out, _ = run(capsys, "l-value", "--disc", "5", "--s", "2")
    jsonschema.validate(json.loads(out), schema("l-value"))
    code, _, _ = run(capsys, "l-value", "--disc", "5")
    assert code == 3


def test_verify_json(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "class-number", "--json")
    data = json.loads(out)
    jsonschema.validate(data, schema("verify"))
    assert code == 0 and data["status"] == 0 and len(data["reports"]) == 4


def test_verify_text_single_disc(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "derivative", "--disc", "13", "--weight", "4")
    assert code == 0
    assert out.strip().splitlines()[-1] == "12 checks, exit 0"


def test_usage_errors(capsys):
    code, _, err = run(capsys, "bogus")
    assert code == 3 and json.loads(err)["error"]["code"] == "usage"
    code, _, err = run(capsys, "verify", "--weight", "3")
    assert code == 3


def test_precision_env(capsys, monkeypatch):
    monkeypatch.setenv("EISQ_PRECISION", "64")
    _, out, _ = run(capsys, "derivative", "--disc", "5", "--terms", "0", "--v", "1")
    assert json.loads(out)["precision"] == 64
    monkeypatch.setenv("EISQ_PRECISION", "lots")
    code, _, err = run(capsys, "info", "--disc", "5")
    assert code == 3


def test_console_script_verify_all_d5():
    proc = subprocess.run(
        [sys.executable, "-m", "eisq.cli", "verify", "--suite", "all", "--disc", "5"],
        capture_output=True, text=True, timeout=600,
    )
    assert proc.returncode == 0, proc.stdout + proc.stderr
