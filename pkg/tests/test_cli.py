import csv
import io
import json
import pathlib
import subprocess
import sys

import pytest

from autopoietic.cli import main

ROOT = pathlib.Path(__file__).resolve().parents[1]
Z2_CHAIN = str(ROOT / "inputs" / "z2_chain.json")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_ap_table_for_z2(capsys):
    code, out, _ = run(capsys, "hochschild", "--group", "cyclic:2", "--ring", "Z", "--variant", "ap",
                       "--max-degree", "4")
    assert code == 0
    assert out.splitlines()[1:] == ["H^0 = Z", "H^1 = 0", "H^2 = Z/2", "H^3 = 0"]


def test_amalgam_report_passes(capsys):
    code, out, _ = run(capsys, "amalgam", "--input", Z2_CHAIN, "--ring", "Z", "--max-degree", "3")
    assert code == 0
    assert out.startswith("amalgam_theorem: PASS")


def test_modulus_one_is_an_input_error(capsys):
    code, _, err = run(capsys, "hochschild", "--group", "cyclic:2", "--ring", "Z/1")
    assert code == 2
    assert "modulus" in err


def test_malformed_json_reports_line_and_column(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{\n  "cyclic": ,\n}\n')
    code, _, err = run(capsys, "hochschild", "--input", str(bad))
    assert code == 2
    assert f"{bad}:2:" in err


def test_degree_cap_violation(capsys):
    code, _, err = run(capsys, "hochschild", "--group", "cyclic:2", "--max-degree", "9")
    assert code == 2
    assert "cap is 4" in err


def test_missing_input(capsys):
    code, _, err = run(capsys, "split")
    assert code == 2 and "input" in err


def test_unknown_group_flag(capsys):
    code, _, _ = run(capsys, "split", "--group", "dihedral:4")
    assert code == 2


def test_np_on_poset_is_an_input_error(tmp_path, capsys):
    spec = tmp_path / "p.json"
    spec.write_text(json.dumps({"poset": {"size": 2, "relations": [[0, 1]]}}))
    code, _, err = run(capsys, "hochschild", "--input", str(spec), "--variant", "np", "--max-degree", "2")
    assert code == 2 and "error" in err


def test_json_and_csv_formats(capsys):
    code, out, _ = run(capsys, "hochschild", "--group", "cyclic:3", "--variant", "ap", "--max-degree", "3",
                       "--format", "json")
    data = json.loads(out)
    assert [d["torsion"] for d in data["degrees"]] == [[], [], [3]]
    code, out, _ = run(capsys, "hochschild", "--group", "cyclic:3", "--variant", "ap", "--max-degree", "3",
                       "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["degree", "free_rank", "torsion"]
    assert rows[1:] == [["0", "1", ""], ["1", "0", ""], ["2", "0", "3"]]


def test_simplicial_models(capsys):
    code, out, _ = run(capsys, "simplicial", "--group", "cyclic:2", "--model", "bar", "--max-degree", "3")
    assert code == 0 and out.splitlines()[-1] == "H^2 = Z/2"
    code, out, _ = run(capsys, "simplicial", "--input", Z2_CHAIN, "--model", "nerve", "--max-degree", "3")
    assert code == 0 and out.splitlines()[1:] == ["H^0 = Z", "H^1 = 0", "H^2 = 0"]
    code, _, _ = run(capsys, "simplicial", "--input", Z2_CHAIN, "--model", "cyclic")
    assert code == 2


def test_split_and_check(capsys):
    code, out, _ = run(capsys, "split", "--group", "product:2,2", "--ring", "Z/2", "--max-degree", "3")
    assert code == 0 and "PASS" in out
    code, out, _ = run(capsys, "check", "--group", "cyclic:2", "--trials", "5", "--seed", "3")
    assert code == 0 and "einfty_identities: PASS" in out


def test_output_file(tmp_path, capsys):
    target = tmp_path / "out.txt"
    code, out, _ = run(capsys, "hochschild", "--group", "cyclic:2", "--max-degree", "2", "--output", str(target))
    assert code == 0 and out == ""
    assert target.read_text().startswith("HH^*")


def test_identical_invocations_give_identical_bytes():
    cmd = [sys.executable, "-m", "autopoietic", "check", "--group", "cyclic:2", "--ring", "Z/3",
           "--trials", "5", "--seed", "42", "--format", "json"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second and json.loads(first)["pass"]
