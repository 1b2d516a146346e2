from __future__ import annotations

import json
import subprocess
import sys

import pytest

from prefrep.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def data(fixtures_dir, name, *extra):
    d = fixtures_dir / name
    return ["--data", str(d), "--priority", str(d / "prio.txt"), *extra]


def test_preferred_l(capsys, fixtures_dir):
    d = fixtures_dir / "ex1"
    code, out, _ = run(capsys, "preferred", "--mode", "l", "--data", str(d), "--fds", str(d / "fds.txt"),
                       "--priority", str(d / "prio.txt"))
    assert code == 0
    doc = json.loads(out)
    assert doc["repairs"] == [["Emp#0", "Mgr#0", "Mgr#2"], ["Emp#1", "Mgr#0", "Mgr#2"]]


def test_repairs_and_determinism(capsys, fixtures_dir):
    _, out1, _ = run(capsys, "repairs", "--data", str(fixtures_dir / "ex1"))
    _, out2, _ = run(capsys, "repairs", "--data", str(fixtures_dir / "ex1"))
    assert out1 == out2
    assert json.loads(out1)["count"] == 4


def test_cqa(capsys, fixtures_dir):
    code, out, _ = run(capsys, "cqa", "--mode", "all", "--query", 'exists t. Mgr("A","Mary",t)',
                       "--data", str(fixtures_dir / "ex1"))
    assert code == 0 and json.loads(out)["answer"] is True
    q = 'exists x. exists t. Emp("Alice",x) & Mgr(x,"Mary",t)'
    _, out, _ = run(capsys, "cqa", "--query", q, "--data", str(fixtures_dir / "ex1"))
    assert json.loads(out)["answer"] is False
    _, out, _ = run(capsys, "cqa", "--mode", "g", "--query", q, *data(fixtures_dir, "ex1"))
    assert json.loads(out)["answer"] is True


def test_cyclic_priority_exit_code(capsys, fixtures_dir):
    code, out, err = run(capsys, "preferred", "--mode", "g", *data(fixtures_dir, "cyclic"))
    assert code == 3 and out == ""
    assert json.loads(err)["error"] == "CyclicPriority"


def test_validation_exit_code(capsys, fixtures_dir, tmp_path):
    code, _, err = run(capsys, "cqa", "--query", 'Emp("Alice")', "--data", str(fixtures_dir / "ex1"))
    assert code == 1 and json.loads(err)["error"] == "ArityMismatch"
    code, _, err = run(capsys, "repairs", "--data", str(tmp_path))
    assert code == 1 and "cannot read" in json.loads(err)["message"]


def test_budget_exit_code(capsys, fixtures_dir):
    code, _, err = run(capsys, "repairs", "--data", str(fixtures_dir / "ex1"), "--budget", "3")
    assert code == 2 and json.loads(err)["error"] == "InstanceTooLarge"


def test_check(capsys, fixtures_dir, tmp_path):
    args = data(fixtures_dir, "proc_diff_decl")
    _, out, _ = run(capsys, "check", "--mode", "l", "--repair", "R#2 R#3", *args)
    assert json.loads(out) == {"mode": "l", "candidate": ["R#2", "R#3"], "is_repair": True, "preferred": False}
    _, out, _ = run(capsys, "check", "--mode", "g", "--repair", "R#2,R#3", *args)
    assert json.loads(out)["preferred"] is True
    (tmp_path / "cand.txt").write_text("R#2\n")
    code, out, _ = run(capsys, "check", "--mode", "g", "--repair", f"@{tmp_path / 'cand.txt'}", *args)
    assert code == 0 and json.loads(out)["is_repair"] is False


def test_clean(capsys, fixtures_dir, tmp_path):
    d = fixtures_dir / "ex1"
    prio = tmp_path / "total.txt"
    prio.write_text("Emp#1 < Emp#0\nprefer Mgr max T\n")
    out_dir = tmp_path / "out"
    code, out, _ = run(capsys, "clean", "--data", str(d), "--priority", str(prio), "--out", str(out_dir))
    assert code == 0
    assert json.loads(out)["removed"] == ["Emp#1", "Mgr#1"]
    assert (out_dir / "Emp.csv").read_text() == "Name,Dept\nAlice,A\n"
    assert (out_dir / "Mgr.csv").read_text() == "Dept,Name,T\nA,Mary,2\nB,Mary,3\n"
    code, _, err = run(capsys, "clean", *data(fixtures_dir, "ex1"), "--out", str(out_dir))
    assert code == 1 and json.loads(err)["error"] == "PriorityNotTotal"


@pytest.mark.parametrize("name", ["ex1", "proc_diff_decl", "cyclic_ext", "nontransitive"])
def test_postulates_on_fixtures(capsys, fixtures_dir, name):
    code, out, _ = run(capsys, "postulates", *data(fixtures_dir, name))
    doc = json.loads(out)
    assert code == 0 and doc["passed"]
    assert [f["family"] for f in doc["families"]] == ["l", "g"]


def test_info_and_dot(capsys, fixtures_dir):
    _, out, _ = run(capsys, "info", *data(fixtures_dir, "cyclic_ext"))
    doc = json.loads(out)
    assert doc["acyclic"] and not doc["total"] and doc["only_acyclic_extensions"] is False
    _, out, _ = run(capsys, "info", *data(fixtures_dir, "cyclic"))
    assert json.loads(out)["only_acyclic_extensions"] is None
    _, out, _ = run(capsys, "dot", *data(fixtures_dir, "ex1"))
    assert '"Mgr#1" -> "Mgr#2";' in out


def test_reduce_writes_usable_fixture(capsys, tmp_path):
    cnf = tmp_path / "f.cnf"
    cnf.write_text("p cnf 1 2\n1 0\n-1 0\n")
    out_dir = tmp_path / "red"
    code, out, _ = run(capsys, "reduce", "3sat-g", str(cnf), "--out", str(out_dir))
    assert code == 0
    assert "candidate.txt" in json.loads(out)["files"]
    code, out, _ = run(capsys, "check", "--mode", "g", "--data", str(out_dir),
                       "--priority", str(out_dir / "prio.txt"), "--repair", f"@{out_dir / 'candidate.txt'}")
    # unsatisfiable formula: the candidate is a g-repair
    assert json.loads(out)["preferred"] is True

    code, out, _ = run(capsys, "reduce", "3sat-l", str(cnf), "--out", str(out_dir))
    code, out, _ = run(capsys, "cqa", "--mode", "l", "--data", str(out_dir),
                       "--priority", str(out_dir / "prio.txt"), "--query", f"@{out_dir / 'query.txt'}")
    assert json.loads(out)["answer"] is True

    qbf = tmp_path / "f.qdimacs"
    qbf.write_text("p cnf 2 2\na 1 0\ne 2 0\n1 2 0\n-1 -2 0\n")
    run(capsys, "reduce", "qbf-g", str(qbf), "--out", str(out_dir))
    labels = json.loads((out_dir / "labels.json").read_text())
    assert set(labels) >= {"X", "Y", "p1", "pbar1", "q1", "qbar1", "d1", "d2"}
    code, out, _ = run(capsys, "cqa", "--mode", "g", "--data", str(out_dir),
                       "--priority", str(out_dir / "prio.txt"), "--query", f"@{out_dir / 'query.txt'}")
    assert json.loads(out)["answer"] is True


def test_malformed_formula(capsys, tmp_path):
    cnf = tmp_path / "f.cnf"
    cnf.write_text("p cnf 4 1\n1 2 3 4 0\n")
    code, _, err = run(capsys, "reduce", "3sat-l", str(cnf), "--out", str(tmp_path / "o"))
    assert code == 1 and json.loads(err)["error"] == "MalformedFormula"


def test_console_script(fixtures_dir):
    proc = subprocess.run(
        [sys.executable, "-m", "prefrep.cli", "repairs", "--data", str(fixtures_dir / "ex1")],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["count"] == 4


def test_usage_error_exits_one(capsys):
    with pytest.raises(SystemExit) as info:
        main(["preferred", "--data", "x"])
    assert info.value.code == 1
    assert json.loads(capsys.readouterr().err.splitlines()[-1])["error"] == "UsageError"
