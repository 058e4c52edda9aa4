import csv
import io
import json
import subprocess
import sys

import pytest

from locgame.cli import EXIT_CHECK, EXIT_CONFIG, EXIT_OK, EXIT_RESOURCE, main
from locgame.graph import read_edgelist

VERIFY_SMALL = ["--n", "60", "--p", "0.5", "--cert-k", "3", "--collision-samples", "5000"]


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_gen_stdout_roundtrip(tmp_path, capsys):
    code, out, _ = run(["gen", "--n", "30", "--p", "0.3", "--seed", "4"], capsys)
    assert code == EXIT_OK
    path = tmp_path / "g.txt"
    path.write_text(out)
    assert read_edgelist(path).n == 30


def test_gen_file(tmp_path, capsys):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    for path in (a, b):
        assert run(["gen", "--n", "25", "--seed", "9", "--out", str(path)], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_play_csv(capsys):
    code, out, _ = run(["play", "--graph", "complete:4", "--k", "3"], capsys)
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "round,probe,observed,filtered_size,expanded_size"
    assert lines[-1].startswith("# winner=cop rounds_used=1")


def test_play_json_embodied(capsys):
    code, out, _ = run(["play", "--n", "40", "--k", "10", "--mode", "embodied",
                        "--format", "json", "--seed", "2"], capsys)
    assert code == EXIT_OK
    records = [json.loads(line) for line in out.splitlines()]
    assert records[-1]["winner"] in ("cop", "robber")
    assert all("robber_position" in r for r in records[:-1])


def test_estimate(tmp_path, capsys):
    out = tmp_path / "est.csv"
    code, _, err = run(["estimate", "--graph", "complete:5", "--trials", "5",
                        "--out", str(out)], capsys)
    assert code == EXIT_OK
    assert "zeta_hat=4" in err
    rows = list(csv.DictReader(io.StringIO(out.read_text())))
    assert {r["k"] for r in rows} >= {"3", "4"}


def test_estimate_json(capsys):
    code, out, _ = run(["estimate", "--graph", "path:6", "--trials", "3", "--format", "json",
                        "--cop", "greedy-split"], capsys)
    assert code == EXIT_OK
    assert json.loads(out)["zeta_hat"] == 1


def test_exact(capsys):
    code, out, _ = run(["exact", "--graph", "complete:4", "--format", "json"], capsys)
    assert code == EXIT_OK
    body = json.loads(out)
    assert body["zeta"] == 3 and body["beta"] == 3 and body["zeta_leq_beta"]


def test_exact_csv_default(capsys):
    code, out, _ = run(["exact", "--seed", "1"], capsys)
    assert code == EXIT_OK
    table = dict(csv.reader(io.StringIO(out)))
    assert table["n"] == "8"
    assert int(table["zeta"]) <= int(table["beta"])


def test_exact_too_large(capsys):
    code, _, err = run(["exact", "--n", "40"], capsys)
    assert code == EXIT_RESOURCE
    assert "error" in err


def test_theory(capsys):
    code, out, _ = run(["theory", "--n", "1024", "--p", "0.5", "--c", "1",
                        "--format", "json"], capsys)
    assert code == EXIT_OK
    assert json.loads(out)["k_upper"] == pytest.approx(18)


def test_theory_csv(capsys):
    code, out, _ = run(["theory"], capsys)
    assert code == EXIT_OK and out.startswith("key,value\n")


def test_verify_pass(capsys):
    code, out, _ = run(["verify", *VERIFY_SMALL, "--format", "json"], capsys)
    body = json.loads(out)
    assert code == EXIT_OK and body["passed"], out


def test_verify_failure_exit(capsys):
    code, out, _ = run(["verify", "--n", "20", "--p", "0.05", "--cert-k", "2",
                        "--collision-samples", "1000"], capsys)
    assert code == EXIT_CHECK
    assert "diameter,False" in out


@pytest.mark.parametrize("argv", [
    ["estimate", "--n", "0"],
    ["estimate", "--cop", "nobody"],
    ["play", "--graph", "missing-file.txt"],
    ["theory", "--p", "1.5"],
    ["verify", "--config", "missing.cfg"],
])
def test_config_errors(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == EXIT_CONFIG and err.startswith("error:")


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("graph = complete:5\ntrials = 4\nk = 4\n")
    code, out, _ = run(["play", "--config", str(cfg)], capsys)
    assert code == EXIT_OK and "winner=cop" in out
    code, out, _ = run(["play", "--config", str(cfg), "--k", "2"], capsys)
    assert "winner=robber" in out


def test_estimate_bytes_stable_under_workers(tmp_path, capsys):
    paths = []
    for i, workers in enumerate(("1", "2", "2")):
        path = tmp_path / f"e{i}.csv"
        argv = ["estimate", "--n", "40", "--trials", "8", "--k-max", "12", "--seed", "5",
                "--workers", workers, "--out", str(path)]
        assert run(argv, capsys)[0] == EXIT_OK
        paths.append(path)
    data = [p.read_bytes() for p in paths]
    assert data[0] == data[1] == data[2]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "locgame", "theory", "--n", "100"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "c_max" in proc.stdout


def test_missing_subcommand(capsys):
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2
