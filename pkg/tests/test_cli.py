import json
import subprocess
import sys

import pytest

from tropical_holonomic.cli import main
from tropical_holonomic.tropical import HolonomicSystem, check_sequence, sequence_from_json


@pytest.fixture
def files(tmp_path):
    def write(name, data):
        p = tmp_path / name
        p.write_text(data if isinstance(data, str) else json.dumps(data))
        return str(p)
    return write


@pytest.fixture
def s000(files):
    return files("s000.json", {"order": 2, "coeffs": [[], [], []]})


@pytest.fixture
def s010(files):
    return files("s010.json", {"order": 2, "coeffs": [[], ["1"], []]})


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_classify(capsys, s000):
    code, out, _ = run(capsys, "classify", "--system", s000)
    data = json.loads(out)
    assert code == 0
    assert {k: data[k] for k in ("case", "entropy", "D", "E")} == {
        "case": "Case1", "entropy": "1/3", "D": [], "E": []}


def test_scan_csv(capsys, s010):
    code, out, _ = run(capsys, "scan", "--system", s010, "--n-min", "3", "--n-max", "9", "--format", "csv")
    lines = out.strip().splitlines()
    assert code == 0
    assert len(lines) == 8
    assert all(line.endswith(",1/4") for line in lines[1:])


def test_check_failure_names_window(capsys, s000, files):
    seq = files("seq.json", ["0", "1", "2"])
    code, out, _ = run(capsys, "check", "--system", s000, "--sequence", seq)
    assert code == 1
    assert json.loads(out)["failing_window"] == 0


def test_check_success(capsys, s000, files):
    seq = files("seq.json", ["0", "0", "7", "0", "0", "3"])
    code, out, _ = run(capsys, "check", "--system", s000, "--sequence", seq)
    assert code == 0 and json.loads(out)["ok"] is True


def test_witness_is_valid_and_reproducible(capsys, s000, s010):
    for path in (s000, s010):
        code, first, _ = run(capsys, "witness", "--system", path, "--n", "17", "--seed", "4")
        _, second, _ = run(capsys, "witness", "--system", path, "--n", "17", "--seed", "4")
        assert code == 0 and first == second
        data = json.loads(first)
        sys_ = HolonomicSystem.from_json(json.loads(open(path).read()))
        assert data["ok"] and check_sequence(sys_, sequence_from_json(data["sequence"]))


def test_witness_with_slack_file(capsys, s000, files):
    slacks = files("slacks.json", ["7", "3"])
    code, out, _ = run(capsys, "witness", "--system", s000, "--n", "6", "--slacks", slacks)
    assert code == 0
    assert json.loads(out)["sequence"] == ["0", "0", "7", "0", "0", "3"]


def test_witness_case3_rejected(capsys, files):
    s = files("s101.json", {"order": 2, "coeffs": [["1"], [], ["1"]]})
    code, _, err = run(capsys, "witness", "--system", s, "--n", "5")
    assert code == 2 and "Case3" in err


def test_dim_json_and_csv(capsys, s000):
    code, out, _ = run(capsys, "dim", "--system", s000, "--n", "6")
    data = json.loads(out)
    assert code == 0 and data["dim"] == 3 and data["N"] == 6
    code, out, _ = run(capsys, "dim", "--system", s000, "--n", "6", "--format", "csv")
    assert out.splitlines() == ["N,dim,ratio_num,ratio_den", "6,3,1,2"]


def test_lemmas(capsys, s010):
    code, out, _ = run(capsys, "lemmas", "--system", s010, "--n", "8")
    assert code == 0 and json.loads(out)["violations"] == []


@pytest.mark.parametrize("argv", [
    ["scan", "--n-min", "5", "--n-max", "4"],
    ["scan", "--n-min", "1", "--n-max", "4"],
    ["dim", "--n", "-1"],
    ["dim"],
    ["classify", "--format", "csv"],
    ["dim", "--n", "4", "--jobs", "0"],
    ["check"],
])
def test_input_errors(capsys, s000, argv):
    code, _, err = run(capsys, argv[0], "--system", s000, *argv[1:])
    assert code == 2 and err.startswith("error:")


def test_malformed_and_wrong_order(capsys, files):
    bad = files("bad.json", "{not json")
    assert run(capsys, "classify", "--system", bad)[0] == 2
    assert run(capsys, "classify", "--system", files("x.json", {"order": 2, "coeffs": [[]]}))[0] == 2
    assert run(capsys, "classify", "--system", files("r.json", {"order": 2, "coeffs": [["0.5"], [], []]}))[0] == 2
    third = files("o3.json", {"order": 3, "coeffs": [[], [], [], []]})
    assert run(capsys, "classify", "--system", third)[0] == 2
    assert run(capsys, "lemmas", "--system", third, "--n", "5")[0] == 2
    # order-agnostic commands accept it
    assert run(capsys, "dim", "--system", third, "--n", "5")[0] == 0
    assert run(capsys, "classify", "--system", "/nonexistent/s.json")[0] == 2
    assert run(capsys, "nope", "--system", third)[0] == 2


def test_json_reports_round_trip(capsys, s010):
    for argv in (["classify"], ["scan", "--n-min", "3", "--n-max", "5"], ["dim", "--n", "5"], ["lemmas", "--n", "6"]):
        _, out, _ = run(capsys, argv[0], "--system", s010, *argv[1:])
        assert json.loads(json.dumps(json.loads(out))) == json.loads(out)


def test_module_entry_point(s010):
    proc = subprocess.run(
        [sys.executable, "-m", "tropical_holonomic", "classify", "--system", s010],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["case"] == "Case2"
