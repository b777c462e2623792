import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from artifact.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_fold_a3_order2(capsys):
    code, out = run(capsys, "fold", "--type", "A", "--rank", "3", "--order", "2", "--no-timing")
    rep = json.loads(out.out)
    assert code == 0 and rep["passed"]
    assert rep["result"]["folded_type"] == "C2" and rep["result"]["r1"] == "B2"
    assert set(rep) == {"command", "version", "seed", "tolerances", "wall_time", "passed", "result"}


def test_char_value_is_finite(capsys):
    code, out = run(capsys, "char", "--algebra", "A2", "--weight", "1,1", "--point", "0.1,0.2", "--no-timing")
    res = json.loads(out.out)["result"]
    assert code == 0 and res["dimension"] == 8
    assert np.isfinite(res["value"]["re"]) and abs(res["value"]["im"]) < 1e-12


def test_failed_check_exits_one(capsys):
    code, out = run(capsys, "denominator-check", "--algebra", "A2^2", "--points", "20", "--tol", "1e-30")
    assert code == 1 and json.loads(out.out)["passed"] is False


@pytest.mark.parametrize("argv", [
    ["char", "--algebra", "Z9", "--weight", "1", "--point", "0"],
    ["char", "--algebra", "A2", "--weight", "1,1,1,1", "--point", "0.1,0.2"],
    ["orbit", "construct", "--loop", "x.json", "--n", "3", "--alcove", "0.1,0.2"],
    ["nonsense"],
])
def test_bad_input_exits_two(capsys, argv, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    with pytest.raises(SystemExit) as e:
        sys.exit(main(argv))
    assert e.value.code == 2
    assert "error" in capsys.readouterr().err


def test_byte_identical_with_fixed_seed(capsys):
    argv = ["wiener-check", "--test", "quasi", "--n-paths", "400", "--depth", "5", "--seed", "11", "--no-timing"]
    _, a = run(capsys, *argv)
    _, b = run(capsys, *argv)
    assert a.out == b.out


def test_csv_output(capsys):
    code, out = run(capsys, "fold", "--type", "D", "--rank", "4", "--order", "3", "--csv", "--no-timing")
    rows = list(csv.DictReader(io.StringIO(out.out)))
    assert code == 0 and rows[0]["command"] == "fold" and rows[0]["folded_type"] == "G2"


def test_out_file(capsys, tmp_path):
    dest = tmp_path / "r.json"
    code, out = run(capsys, "fold", "--type", "E", "--rank", "6", "--order", "2", "--out", str(dest))
    assert code == 0 and out.out == ""
    assert json.loads(dest.read_text())["result"]["folded_type"] == "F4"


def test_orbit_round_trip(capsys, tmp_path):
    loop = tmp_path / "loop.json"
    code, out = run(capsys, "orbit", "construct", "--loop", str(loop), "--n", "4", "--grid", "64", "--gauge",
                    "--seed", "5")
    assert code == 0
    mu = json.loads(out.out)["result"]["alcove"]
    code, out = run(capsys, "orbit", "classify", "--loop", str(loop))
    res = json.loads(out.out)["result"]
    assert code == 0
    assert np.allclose(res["alcove"], mu, atol=1e-8)
    assert all(c["abs_diff"] < 1e-8 for c in res["character_checks"])


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "artifact", "--version"], capture_output=True, text=True)
    assert p.returncode == 0 and p.stdout.strip()
