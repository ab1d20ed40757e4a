import json

import numpy as np
import pytest

from jelsym import cli
from jelsym.exceptions import ConvergenceError
from jelsym.symmetry import jel_symmetry_test

SIX = [1.0, -1.0, 2.0, -2.0, 3.0, -3.0]


@pytest.fixture
def six_csv(tmp_path):
    path = tmp_path / "six.csv"
    path.write_text("\n".join(str(v) for v in SIX) + "\n")
    return path


def test_statistic_bit_exact(six_csv, capsys):
    assert cli.main(["test", str(six_csv)]) == 0
    out = capsys.readouterr().out
    expected = jel_symmetry_test(np.array(SIX)).statistic
    assert f"statistic: {expected!r}" in out


def test_json_output(six_csv, tmp_path):
    out = tmp_path / "r.json"
    assert cli.main(["test", str(six_csv), "--json", str(out), "--alpha", "0.1"]) == 0
    data = json.loads(out.read_text())
    res = jel_symmetry_test(np.array(SIX), cli.TestConfig(alpha=0.1))
    assert data["statistic"] == res.statistic
    assert data["p_value"] == res.p_value
    assert data["outcome_flag"] == "OK"


def test_header_and_center(tmp_path, capsys):
    X = np.random.default_rng(3).normal(size=(30, 2)) + [1.0, 2.0]
    path = tmp_path / "h.csv"
    path.write_text("a,b\n" + "\n".join(f"{float(r[0])!r},{float(r[1])!r}" for r in X) + "\n")
    assert cli.main(["test", str(path), "--header", "--center", "1,2"]) == 0
    out = capsys.readouterr().out
    expected = jel_symmetry_test(X, cli.TestConfig(center=(1.0, 2.0))).statistic
    assert f"statistic: {expected!r}" in out
    # without --header the text row is an error
    assert cli.main(["test", str(path)]) == 2


def test_random_split(six_csv, capsys):
    assert cli.main(["test", str(six_csv), "--split", "random:4"]) == 0
    assert "split=random:4" in capsys.readouterr().out


@pytest.mark.parametrize("content, msg", [
    ("", "no data rows"),
    ("1,2\n3\n", "row 2 has 1 columns"),
    ("1\nx\n", "row 2, column 1"),
    ("1\n2\n", "at least 6"),
])
def test_bad_csv(tmp_path, capsys, content, msg):
    path = tmp_path / "bad.csv"
    path.write_text(content)
    assert cli.main(["test", str(path)]) == 2
    assert msg in capsys.readouterr().err


def test_missing_file(tmp_path):
    assert cli.main(["test", str(tmp_path / "nope.csv")]) == 2


def test_bad_arguments(six_csv):
    assert cli.main(["test", str(six_csv), "--alpha", "abc"]) == 2
    assert cli.main(["test", str(six_csv), "--alpha", "1.5"]) == 2
    assert cli.main(["test", str(six_csv), "--split", "sideways"]) == 2
    assert cli.main(["frobnicate"]) == 2


def test_convergence_exit_code(six_csv, monkeypatch):
    def boom(*a, **k):
        raise ConvergenceError("stuck", iterations=200)
    monkeypatch.setattr(cli, "jel_symmetry_test", boom)
    assert cli.main(["test", str(six_csv)]) == 3


@pytest.fixture
def study_json(tmp_path):
    path = tmp_path / "study.json"
    path.write_text(json.dumps({
        "distribution": {"kind": "normal", "d": 2},
        "n1": 15, "n2": 15, "replications": 100,
        "methods": ["JEL", "ET"], "et_replicates": 19, "master_seed": 42,
    }))
    return path


def test_simulate_reproducible(study_json, tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert cli.main(["simulate", str(study_json), "--out", str(a)]) == 0
    assert cli.main(["simulate", str(study_json), "--out", str(b), "--workers", "2"]) == 0
    assert a.read_bytes() == b.read_bytes()
    out = capsys.readouterr().out
    assert "JEL" in out and "ET" in out
    data = json.loads(a.read_text())
    assert data["config"]["master_seed"] == 42


def test_simulate_dump_statistics(study_json, tmp_path):
    out = tmp_path / "s.json"
    assert cli.main(["simulate", str(study_json), "--out", str(out), "--dump-statistics"]) == 0
    assert len(json.loads(out.read_text())["methods"]["JEL"]["statistics"]) == 100


def test_simulate_bad_config(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"distribution": {"kind": "normal"}, "n1": 15, "n2": 15,
                                "replications": 2}))
    assert cli.main(["simulate", str(path)]) == 2


def test_calibrate(study_json, tmp_path, capsys):
    out = tmp_path / "cal.json"
    assert cli.main(["calibrate", str(study_json), "--covariance", "--out", str(out)]) == 0
    text = capsys.readouterr().out
    assert "KS distance" in text and "corr(U1, U2)" in text
    assert json.loads(out.read_text())["replications"] == 100
