import json
import subprocess
import sys

import pytest

from hgc_verify import cli
from hgc_verify.coefficient_tower import SymbolicTower
from hgc_verify.errors import ConfigurationError
from hgc_verify.function_field import HypergeometricCurve
from hgc_verify.local_series import Point


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_point_and_divisor():
    assert cli.parse_point("c1:0") == Point("c1", 0)
    assert cli.parse_point("b_2") == Point("b", 2)
    assert cli.parse_point("P") == Point("P")
    with pytest.raises(ConfigurationError):
        cli.parse_point("z:1")
    X = HypergeometricCurve(SymbolicTower(3))
    D = cli.parse_divisor("3*b:0 - 3*c2:0", X)
    assert D.to_dict() == {"b_0": 3, "c2_0": -3}
    assert cli.parse_divisor("P + Q - 2*c1:0", X).degree() == 0
    with pytest.raises(ConfigurationError):
        cli.parse_divisor("b:7", X)


def test_verify_json(capsys, tmp_path):
    path = tmp_path / "b.json"
    code, out, _ = run(capsys, "verify", "--n", "3", "--backend", "finite", "--seed", "1",
                       "--suite", "canonical", "--suite", "genus", "--json", str(path), "--no-timing")
    assert code == 0
    data = json.loads(path.read_text())
    assert set(data["suites"]) == {"canonical", "genus"}
    assert "wall_time_s" not in data
    assert "0 fail" in out


def test_verify_json_stdout(capsys):
    code, out, err = run(capsys, "verify", "--n", "3", "--suite", "canonical", "--json", "-")
    assert code == 0
    assert json.loads(out)["summary"]["pass"] == 1
    assert "1 pass" in err


def test_exit_code_usage(capsys):
    code, _, err = run(capsys, "verify", "--n", "4", "--suite", "nontrivial")
    assert code == 2 and "odd N" in err
    code, _, _ = run(capsys, "verify", "--backend", "finite", "--q", "13")
    assert code == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["verify", "--backend", "nope"])
    assert exc.value.code == 2


def test_exit_code_internal(capsys, monkeypatch):
    from hgc_verify.errors import InvariantViolation

    def boom(args):
        raise InvariantViolation("broken")
    monkeypatch.setattr(cli, "cmd_genus_table", boom)
    code, _, err = run(capsys, "genus-table")
    assert code == 3 and "broken" in err


def test_lspace_and_pi_z(capsys):
    code, out, _ = run(capsys, "lspace", "--n", "3", "--d", "2", "--family", "b")
    assert code == 0 and "PASS" in out and "y^(-2)" in out
    code, out, _ = run(capsys, "pi-z", "--n", "3", "--base", "b:1", "--json")
    assert code == 0 and json.loads(out)["verdict"] == "PASS"
    code, out, _ = run(capsys, "pi-z", "--n", "3", "--base", "P")
    assert code == 0 and "UNSUPPORTED" in out


def test_nontrivial_and_tables(capsys):
    code, out, _ = run(capsys, "nontrivial", "--p", "3", "--backend", "finite", "--seed", "2")
    assert code == 0 and out.count("PASS") == 4
    code, out, _ = run(capsys, "invariants", "--n-max", "4")
    assert code == 0 and "40" in out
    code, out, _ = run(capsys, "genus-table", "--n", "4", "--json")
    rows = json.loads(out)
    assert code == 0 and len(rows) == 9
    code, _, _ = run(capsys, "nontrivial", "--p", "4")
    assert code == 2


def test_witness_search(capsys):
    code, out, _ = run(capsys, "witness-search", "--n", "3", "--divisor", "3*b:0 - 3*c2:0", "--json")
    data = json.loads(out)
    assert code == 0 and data["details"]["found"] is True
    code, out, _ = run(capsys, "witness-search", "--n", "3", "--divisor", "b:0 - c2:0", "--json")
    details = json.loads(out)["details"]
    assert code == 0 and details["complete"] and not details["found"] and details["kernel_dim"] == 0


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hgc_verify.cli", "genus-table", "--n", "3"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "(1,2)" in proc.stdout
