import json

import numpy as np
import pytest

from varthresh import cli, demo, harness
from varthresh.core import write_patterns
from varthresh.vthreshold import read_thresholds, write_thresholds


@pytest.fixture
def mems_file(tmp_path):
    path = tmp_path / "mems.txt"
    write_patterns(path, demo.MEMORIES)
    return path


@pytest.fixture
def th_file(tmp_path):
    path = tmp_path / "th.txt"
    write_thresholds(path, demo.THRESHOLDS)
    return path


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_demo(capsys):
    code, out, _ = run(capsys, "demo")
    assert code == 0
    assert "stored with fixed threshold: {X3}" in out
    assert "stored with learned thresholds: {X1, X2, X3, X4}" in out
    assert "all checks passed" in out
    code2, out2, _ = run(capsys, "demo")
    assert out == out2


def test_demo_step_02(capsys):
    code, out, _ = run(capsys, "demo", "--step", "0.2")
    assert code == 0
    assert "stored with learned thresholds: {X1, X2, X3, X4}" in out


def test_demo_reports_golden_mismatch(capsys, monkeypatch):
    monkeypatch.setattr(demo, "FIXED_STORED", [0])
    code, out, _ = run(capsys, "demo")
    assert code == 1
    assert "FAILED" in out and "fixed-threshold stored set" in out


def test_store(capsys, mems_file, th_file):
    code, out, _ = run(capsys, "store", "--memories", mems_file)
    assert code == 0 and out == "fixed: 1 of 5\n"
    code, out, _ = run(capsys, "store", "--memories", mems_file, "--thresholds", th_file)
    assert out == "fixed: 1 of 5\nvariable: 4 of 5\n"


def test_tmatrix(capsys, mems_file):
    code, out, _ = run(capsys, "tmatrix", "--memories", mems_file)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "7" and lines[1] == "0 -3 1 3 1 1 -1"


def test_thresholds(capsys, mems_file, tmp_path):
    out_path = tmp_path / "learned.txt"
    code, _, err = run(capsys, "thresholds", "--memories", mems_file, "--output", out_path)
    assert code == 0
    assert "stored 4 of 5 (memories 1, 2, 3, 4)" in err
    assert read_thresholds(out_path).tolist() == [0.0, 0.1, -6.0, 0.0, 4.1, 0.0, 0.0]
    code, out, err = run(capsys, "thresholds", "--memories", mems_file, "--learner", "widrow", "--eta", "0.05")
    assert code == 0 and "stored 4 of 5" in err


def test_retrieve(capsys, mems_file, th_file):
    code, out, _ = run(capsys, "retrieve", "--memories", mems_file, "--fragment", "1 1", "--thresholds", th_file)
    assert code == 0 and out == "1 1 1 1 -1 1 -1\n"
    code, out, _ = run(capsys, "retrieve", "--memories", mems_file, "--fragment", "1 -1 1 -1", "--thresholds", th_file)
    assert out == "1 -1 1 -1 1 -1 1\n"


def test_retrieve_report(capsys, mems_file, th_file):
    code, out, _ = run(capsys, "retrieve", "--memories", mems_file, "--thresholds", th_file, "--report", "--max-fragment-fraction", "1")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "memory,stored,min_fragment_fixed,min_fragment_variable"
    assert lines[4] == "4,1,1,6"
    assert lines[5].startswith("5,0,")


def test_retrieve_with_order(capsys, mems_file):
    code, out, _ = run(capsys, "retrieve", "--memories", mems_file, "--fragment", "1", "--order", "2,5,3,1,4,6,7")
    assert code == 0 and len(out.split()) == 7


def test_retrieve_flag_conflicts(capsys, mems_file, th_file):
    code, _, err = run(capsys, "retrieve", "--memories", mems_file)
    assert code == 2
    code, _, err = run(capsys, "retrieve", "--memories", mems_file, "--fragment", "1", "--report")
    assert code == 2


def test_dimension_mismatch_prints_both(capsys, mems_file, tmp_path):
    th = tmp_path / "short.txt"
    write_thresholds(th, [0.0, 1.0])
    code, _, err = run(capsys, "store", "--memories", mems_file, "--thresholds", th)
    assert code == 2 and "2" in err and "7" in err
    code, _, err = run(capsys, "retrieve", "--memories", mems_file, "--fragment", "1 1 1 1 1 1 1 1")
    assert code == 2 and "8" in err and "7" in err


def test_malformed_file_names_line(capsys, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("1 1 1\n# ok\n1 2 1\n")
    code, _, err = run(capsys, "store", "--memories", bad)
    assert code == 2 and "bad.txt:3" in err


def test_missing_file_is_usage_error(capsys, tmp_path):
    code, _, err = run(capsys, "store", "--memories", tmp_path / "nope.txt")
    assert code == 2


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        cli.main(["sweep", "bogus"])
    assert exc.value.code == 2


def test_sweep_storage_matches_library(capsys):
    code, out, _ = run(capsys, "sweep", "storage", "--neurons", "10:100:10", "--memories", "10", "--trials", "5", "--seed", "42", "--format", "csv")
    assert code == 0
    rows = harness.run_storage_sweep(harness.SweepSpec("storage", list(range(10, 101, 10)), 10, trials=5, seed=42))
    import io

    assert out == harness.emit(rows, "csv", io.StringIO())
    assert out.splitlines()[0] == "n,m,trials,stored_fixed,stored_variable"
    assert len(out.splitlines()) == 11


def test_sweep_retrieval_and_output(capsys, tmp_path):
    dest = tmp_path / "r.csv"
    code, out, _ = run(capsys, "sweep", "retrieval", "--neurons", "20,30", "--memories", "5", "--trials", "2", "--output", dest)
    assert code == 0 and out == ""
    assert dest.read_text().splitlines()[0] == "n,m,trials,stored,retrieved_fixed,retrieved_variable"


def test_sweep_quaternary(capsys):
    code, out, _ = run(capsys, "sweep", "quaternary", "--neurons", "5", "--memories", "1:2", "--t-over-c", "16,32", "--trials", "3", "--levels", "2,1", "--format", "table")
    assert code == 0
    assert "success_percent" in out.splitlines()[0]
    assert len(out.splitlines()) == 2 + 4


def test_sweep_validation(capsys):
    assert run(capsys, "sweep", "storage", "--neurons", "10", "--levels", "2,1")[0] == 2
    assert run(capsys, "sweep", "storage")[0] == 2
    assert run(capsys, "sweep", "storage", "--neurons", "10:5")[0] == 2
    assert run(capsys, "sweep", "storage", "--neurons", "abc")[0] == 2
    assert run(capsys, "sweep", "storage", "--neurons", "10", "--trials", "0")[0] == 2


def test_seed_determines_output(capsys):
    a = run(capsys, "sweep", "storage", "--neurons", "20", "--trials", "3", "--seed", "7")[1]
    b = run(capsys, "sweep", "storage", "--neurons", "20", "--trials", "3", "--seed", "7")[1]
    c = run(capsys, "sweep", "storage", "--neurons", "20,30,40", "--trials", "3", "--seed", "8")[1]
    assert a == b and a != c


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "cfg.yaml"
    cfg.write_text("neurons: 10:30:10\nmemories: 10\ntrials: 2\nseed: 5\n")
    code, out, _ = run(capsys, "--config", cfg, "sweep", "storage")
    assert code == 0 and len(out.splitlines()) == 4
    # explicit flags override config values
    code, out2, _ = run(capsys, "--config", cfg, "sweep", "storage", "--neurons", "10")
    assert len(out2.splitlines()) == 2
    jcfg = tmp_path / "cfg.json"
    jcfg.write_text(json.dumps({"bogus": 1}))
    assert run(capsys, "--config", jcfg, "sweep", "storage")[0] == 2


def test_random_command(capsys, tmp_path):
    code, out, _ = run(capsys, "random", "--neurons", "6", "--memories", "3", "--seed", "1")
    assert code == 0
    rows = [list(map(int, line.split())) for line in out.splitlines()]
    assert np.array(rows).shape == (3, 6)


def test_parse_range():
    assert cli.parse_range("10:100:10") == list(range(10, 101, 10))
    assert cli.parse_range("96:336:48", float) == [96.0, 144.0, 192.0, 240.0, 288.0, 336.0]
    assert cli.parse_range("1:3") == [1, 2, 3]
    assert cli.parse_range("7") == [7]
