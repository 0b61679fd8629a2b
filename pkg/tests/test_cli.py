import json

import numpy as np
import pytest

from balred import StateSpace, random_stable_system
from balred.cli import main


def _write_sys(tmp_path, name="sys.json", n=4, seed=3):
    path = str(tmp_path / name)
    random_stable_system(n, 1, 1, np.random.default_rng(seed)).save(path)
    return path


def test_random_and_balance(tmp_path, capsys):
    out = str(tmp_path / "rand.json")
    assert main(["random", "--n", "4", "--seed", "11", "-o", out]) == 0
    sys_in = StateSpace.load(out)
    assert sys_in.n == 4
    capsys.readouterr()  # drop the "wrote ..." line from cmd_random
    bal_out = str(tmp_path / "bal.json")
    assert main(["balance", out, "-o", bal_out]) == 0
    captured = capsys.readouterr().out
    assert captured.startswith("hsv:")
    payload = json.load(open(bal_out))
    hsv = payload["hsv"]
    assert all(hsv[i] >= hsv[i + 1] > 0 for i in range(len(hsv) - 1))
    assert "T" in payload and "convention" in payload


def test_reduce_methods(tmp_path, capsys):
    path = _write_sys(tmp_path)
    for method in ("bt", "bspa"):
        out = str(tmp_path / f"red_{method}.json")
        code = main(["reduce", path, "--method", method, "--k", "2", "--verify", "-o", out])
        assert code == 0
        text = capsys.readouterr().out
        assert "satisfied: True" in text
        payload = json.load(open(out))
        assert len(payload["reduced"]["A"]) == 2
        assert payload["achieved_error"] <= payload["a_priori_bound"] * (1 + 1e-3) + 1e-12
    out = str(tmp_path / "red_interp.json")
    assert main(["reduce", path, "--method", "interp", "--k", "1", "--eta", "0.0", "-o", out]) == 0
    assert main(["reduce", path, "--method", "interp", "--k", "1"]) == 2  # missing --eta


def test_geodesic_command(tmp_path, capsys):
    out = str(tmp_path / "trace.csv")
    code = main(["geodesic", "mmr", "--p0", "1,1", "--direction", "-1", "-o", out])
    assert code == 0
    text = capsys.readouterr().out
    assert "termination:" in text
    header = open(out).readline().strip().split(",")
    assert header == ["tau", "p_1", "p_2", "v_1", "v_2", "y_1", "y_2", "y_3"]
    sidecar = json.load(open(str(tmp_path / "trace.classification.json")))
    assert sidecar["classification"]["tags"] == ["Finite", "ToZero"]


def test_sample_command(tmp_path, capsys):
    out = str(tmp_path / "sample.csv")
    code = main(["sample", "two-exp", "--grid", "0.5:2:3,1:10:3:log", "-o", out])
    assert code == 0
    assert "sampled 9 points" in capsys.readouterr().out
    rows = open(out).read().strip().splitlines()
    assert len(rows) == 10


def test_nearest_command(tmp_path, capsys):
    path = _write_sys(tmp_path, n=3)
    out = str(tmp_path / "nearest.json")
    assert main(["nearest", path, "-o", out]) == 0
    text = capsys.readouterr().out
    assert "eta*" in text
    payload = json.load(open(out))
    assert payload["distance"] <= payload["bt_distance"] + 1e-15
    assert payload["distance"] <= payload["bspa_distance"] + 1e-15


def test_census_command(capsys):
    assert main(["census", "balanced_state_space", "3", "2", "2"]) == 0
    text = capsys.readouterr().out
    assert "identifiable: 16" in text  # 3*2 + 3*2 + 2*2
    assert "structural: 9" in text
    assert "total: 25" in text


def test_hinf_command(tmp_path, capsys):
    path = str(tmp_path / "first.json")
    StateSpace([[-2.0]], [[1.0]], [[3.0]], [[0.0]]).save(path)
    assert main(["hinf", path]) == 0
    out = capsys.readouterr().out
    assert out.startswith("1.5 @ 0")


def test_twelve_digit_output(tmp_path, capsys):
    path = str(tmp_path / "g.json")
    StateSpace([[-3.0]], [[1.0]], [[1.0]], [[0.0]]).save(path)
    assert main(["hinf", path]) == 0
    out = capsys.readouterr().out
    assert out.split(" @ ")[0] == "0.333333333333"  # 12 significant digits


def test_error_exit_codes(tmp_path, capsys):
    assert main(["balance", str(tmp_path / "missing.json")]) == 2
    capsys.readouterr()
    # unstable input is a user error for balance
    path = str(tmp_path / "unstable.json")
    StateSpace([[1.0]], [[1.0]], [[1.0]], [[0.0]]).save(path)
    assert main(["balance", path]) == 2
    capsys.readouterr()
    # bad grid spec
    assert main(["sample", "two-exp", "--grid", "oops", "-o", str(tmp_path / "s.csv")]) == 2
    capsys.readouterr()
    # unknown subcommand / bad flag -> argparse -> 2
    assert main(["not-a-command"]) == 2
