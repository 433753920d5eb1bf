from __future__ import annotations

import io
import json
import subprocess
import sys

import pytest

from blocksched.cli import main
from blocksched.greedy import hard_instance
from blocksched.graph import BlockCutTree
from blocksched.model import Instance, unit_instance


def run(capsys, *argv):
    """Exit code, stdout and stderr of one in-process CLI call."""
    try:
        code = main(list(argv))
    except SystemExit as exc:
        code = exc.code
    out, err = capsys.readouterr()
    return code, out, err


def test_gen_block_count(capsys):
    code, out, _ = run(capsys, "gen", "--n", "9", "--m", "3", "--b", "min", "--seed", "1")
    assert code == 0
    inst = Instance.from_json(json.loads(out))
    assert inst.n == 9 and inst.graph.num_blocks == 4


def test_seed_before_subcommand(capsys):
    a = run(capsys, "--seed", "3", "gen", "--n", "12", "--m", "3")[1]
    b = run(capsys, "gen", "--n", "12", "--m", "3", "--seed", "3")[1]
    assert a == b


def test_hard_instance_makespan(tmp_path, capsys):
    path = tmp_path / "hard.json"
    path.write_text(hard_instance(3).dumps())
    code, out, _ = run(capsys, "solve", "--alg", "greedy", "--in", str(path))
    assert code == 0
    doc = json.loads(out)
    assert sorted(doc) == ["alg", "assign", "makespan"]
    assert doc["alg"] == "greedy" and doc["makespan"] == "5"
    code, out, _ = run(capsys, "oracle", "--in", str(path))
    assert json.loads(out)["makespan"] == "3"


def test_round_trip(tmp_path, capsys):
    inst_path, sched_path = tmp_path / "i.json", tmp_path / "s.json"
    assert run(capsys, "gen", "--n", "15", "--m", "3", "--b", "avg", "--out", str(inst_path))[0] == 0
    for alg in ("greedy", "exact-cmax", "ptas-unit", "flow", "k-approx", "tw-fptas"):
        assert run(capsys, "solve", "--alg", alg, "--eps", "1/2", "--in", str(inst_path), "--out", str(sched_path))[0] == 0
        code, out, _ = run(capsys, "validate", "--in", str(inst_path), "--schedule", str(sched_path))
        assert code == 0 and json.loads(out)["feasible"] is True


def test_validate_reports_conflict(tmp_path, capsys):
    inst_path, sched_path = tmp_path / "i.json", tmp_path / "s.json"
    inst_path.write_text(hard_instance(3).dumps())
    sched_path.write_text(json.dumps({"assign": [0] * hard_instance(3).n}))
    code, out, _ = run(capsys, "validate", "--in", str(inst_path), "--schedule", str(sched_path))
    assert code == 1 and json.loads(out) == {"feasible": False, "makespan": None}


def test_stdin_input(capsys, monkeypatch):
    monkeypatch.setattr(sys, "stdin", io.StringIO(hard_instance(4).dumps()))
    code, out, _ = run(capsys, "solve", "--alg", "greedy")
    assert code == 0 and json.loads(out)["makespan"] == "7"


def test_exit_infeasible(tmp_path, capsys):
    path = tmp_path / "k4.json"
    path.write_text(unit_instance(BlockCutTree.from_blocks(4, [[0, 1, 2, 3]]), 3).dumps())
    assert run(capsys, "solve", "--alg", "exact-cmax", "--k", "2", "--in", str(path))[0] == 1
    assert run(capsys, "solve", "--alg", "flow", "--in", str(path))[0] == 1


def test_exit_budget(tmp_path, capsys):
    path = tmp_path / "big.json"
    assert run(capsys, "gen", "--n", "40", "--m", "3", "--b", "max", "--proc", "p2", "--out", str(path))[0] == 0
    code, _, err = run(capsys, "solve", "--alg", "tw-fptas", "--eps", "1/10", "--timeout-ms", "1", "--in", str(path))
    assert code == 2 and "budget" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["solve", "--alg", "simplex"],
        ["gen", "--n", "x", "--m", "3"],
        ["gen", "--n", "2", "--m", "3"],
        [],
    ],
)
def test_exit_bad_input(argv, capsys):
    assert run(capsys, *argv)[0] == 3


def test_exit_bad_files(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "solve", "--alg", "greedy", "--in", str(bad))[0] == 3
    assert run(capsys, "solve", "--alg", "greedy", "--in", str(tmp_path / "missing.json"))[0] == 3
    assert run(capsys, "solve", "--alg", "greedy", "--eps", "-1", "--in", str(bad))[0] == 3


def test_bench_csv(tmp_path, capsys):
    cfg = tmp_path / "exp.json"
    cfg.write_text(json.dumps({"n": [10], "m": [3], "alg": "greedy", "proc": "p0", "instances": 4}))
    code, out, _ = run(capsys, "bench", "--config", str(cfg), "--seed", "2")
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "m,n,b,proc,alg,eps,mean_ratio,mean_us,status,participation"
    assert lines[1].startswith("3,10,min,p0,greedy,,") and ",OK," in lines[1]


def test_console_script_module():
    proc = subprocess.run(
        [sys.executable, "-m", "blocksched.cli", "gen", "--n", "5", "--m", "2"], capture_output=True, text=True
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["env"]
