"""Command-line front end: exit codes, report schema and determinism."""

from __future__ import annotations

import json
import subprocess
import sys

import pytest

from foliation_lab.cli import SCHEMA, main, run
from foliation_lab.families import OMEGA_TILDE
from foliation_lab.foliation import LocalFoliation, ProjFoliation


def call(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def as_json(capsys, *argv):
    code, out, _ = call(capsys, *argv, "--format", "json", "--no-timing")
    return code, json.loads(out)


def test_milnor_echo_and_value(capsys):
    code, rep = as_json(capsys, "milnor", "--form", "z*dy - y*dz", "--at", "0,0")
    assert code == 0
    assert rep["schema"] == SCHEMA and rep["command"] == "milnor"
    assert rep["results"]["milnor"] == 1
    # the echoed form parses back to the input
    assert LocalFoliation.parse(rep["inputs"]["form"]) == LocalFoliation.parse("z*dy - y*dz")
    assert rep["timing"] is None


def test_singularities_of_omega_tilde(capsys):
    code, rep = as_json(capsys, "singularities", "--form", OMEGA_TILDE)
    assert code == 0
    res = rep["results"]
    assert res["degree"] == 7 and res["complete"]
    [p] = res["points"]
    assert p["point"] == ["0", "0", "1"]
    assert (p["multiplicity"], p["milnor"]) == (4, 57)
    assert ProjFoliation.parse(rep["inputs"]["form"]) == ProjFoliation.parse(OMEGA_TILDE)


def test_domain_error_exit_code(capsys):
    code, rep = as_json(capsys, "family", "S12", "--beta1", "0")
    assert code == 2
    assert rep["error"] == "InvalidParameters" and rep["command"] == "family"
    code, rep = as_json(capsys, "milnor", "--form", "2x*dy")
    assert code == 2 and rep["error"] == "ParseError"


@pytest.mark.parametrize("argv", [
    ["frobnicate"],
    ["milnor", "--form", "z*dy - y*dz", "--bogus"],
    ["milnor", "--form", "z*dy - y*dz", "--format", "csv"],
    ["reduce", "--form", "z*dy - y*dz", "--max-depth", "-1"],
])
def test_usage_error_exit_code(capsys, argv):
    code, out, err = call(capsys, *argv)
    assert code == 1
    assert out == "" and "error" in err


def test_input_file(tmp_path, capsys):
    f = tmp_path / "forms.txt"
    f.write_text("z*dy - y*dz\nz*dy + y*dz\n")
    code, rep = as_json(capsys, "milnor", "--input", str(f), "--at", "0,0")
    assert code == 0
    assert [r["milnor"] for r in rep["results"]] == [1, 1]


def test_max_depth_from_environment(monkeypatch, capsys):
    omega3 = "y*z*dz + (y^2 + z^2)*(z*dy - y*dz)"
    monkeypatch.setenv("FOLIATION_LAB_MAX_DEPTH", "1")
    code, rep = as_json(capsys, "reduce", "--form", omega3)
    assert code == 0 and rep["results"]["unresolved"]
    monkeypatch.delenv("FOLIATION_LAB_MAX_DEPTH")
    code, rep = as_json(capsys, "reduce", "--form", omega3)
    assert code == 0 and not rep["results"]["unresolved"]


def test_separatrix_csv(capsys):
    code, out, _ = call(capsys, "separatrix", "--form", "z^3*dy - y*(1 + 5*z^2)*dz", "--jet", "0,0",
                        "--order", "5", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "n,coefficient" and len(lines) == 7


def test_gevrey_w_ode(capsys):
    code, rep = as_json(capsys, "gevrey", "--w-ode", "3", "1", "1", "50")
    assert code == 0
    assert rep["results"]["coefficients"][:3] == ["1", "1", "2"]


def test_pencil_command(capsys):
    code, rep = as_json(capsys, "pencil", "--G", "2*x*z + y^2", "--H", "z^2")
    assert code == 0
    led = rep["results"]["degree_ledger"]
    assert led == {"s": 2, "deg_R": 1, "degree": 1, "holds": True}
    assert ProjFoliation.parse(rep["results"]["foliation"]).degree == 1


def test_corpus_is_deterministic(capsys):
    _, a = as_json(capsys, "corpus", "--only", "1,2")
    _, b = as_json(capsys, "corpus", "--only", "1,2")
    assert a == b
    assert [c["passed"] for c in a["results"]["criteria"]] == [True, True]


def test_text_format(capsys):
    code, out, _ = call(capsys, "milnor", "--form", "z*dy - y*dz", "--at", "0,0", "--no-timing")
    assert code == 0 and out.startswith("milnor")


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "foliation_lab.cli", "milnor", "--form", "z*dy - y*dz",
                           "--at", "0,0", "--format", "json", "--no-timing"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["results"]["milnor"] == 1


def test_run_returns_report():
    code, rep = run(["milnor", "--form", "z*dy - y*dz", "--at", "0,0", "--no-timing"])
    assert code == 0 and rep["results"]["milnor"] == 1
