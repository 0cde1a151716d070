import io
import json
import subprocess
import sys

import pytest

from helpers import MACHINES
from msou import reduction as R
from msou.cli import dispatch
from msou.logic import render_formula
from msou.minsky import parse_machine

SAMPLE = str(MACHINES / "sample.mm")
EMPTY = str(MACHINES / "empty.mm")


def run(argv, capsys, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = dispatch(argv)
    out = capsys.readouterr().out
    return code, out


def test_compile_matches_library(capsys):
    code, out = run(["compile", SAMPLE], capsys)
    assert code == 0
    expected = render_formula(R.machine_to_formula(parse_machine(open(SAMPLE).read())))
    assert out.strip() == expected


def test_witness_then_check(capsys, monkeypatch):
    code, word = run(["witness", SAMPLE, "--trees", "5"], capsys)
    assert code == 0
    code, out = run(["check-witness", SAMPLE, "-"], capsys, stdin=word, monkeypatch=monkeypatch)
    assert code == 0
    assert out.splitlines()[:4] == ["(a) true", "(b) true", "(c) true", "(d) true"]


def test_witness_without_run(capsys):
    code, _ = run(["witness", EMPTY, "--trees", "5"], capsys)
    assert code == 1


def test_check_witness_json_and_failure(capsys, tmp_path):
    word = tmp_path / "w.txt"
    word.write_text("1 4 2 4 1 4 4 2 4 4")
    code, out = run(["--json", "check-witness", SAMPLE, str(word)], capsys)
    data = json.loads(out)
    assert code == 1 and data["d"] is False


def test_decode_and_encode(capsys, tmp_path, monkeypatch):
    w = tmp_path / "w.txt"
    w.write_text("1 2 3 3 2 3\n")
    code, text = run(["decode", str(w)], capsys)
    assert code == 0 and text.startswith("treeseq depth=3")
    code, out = run(["encode", "-"], capsys, stdin=text, monkeypatch=monkeypatch)
    assert out.strip() == "1 3 3 2 3"
    code, out = run(["decode", str(w), "--json"], capsys)
    assert json.loads(out)["degrees"] == {"1": [2], "2": [2, 1]}
    code, out = run(["decode", str(w), "--dot"], capsys)
    assert out.startswith("digraph")


def test_simulate(capsys):
    code, out = run(["--json", "simulate", SAMPLE, "--max-len", "10", "--max-counter", "6"],
                    capsys)
    assert code == 0 and json.loads(out)["description"] == [0, 0, 1, 0, 2, 0, 2, 0]
    code, _ = run(["simulate", SAMPLE, "--max-len", "3", "--max-counter", "6"], capsys)
    assert code == 1
    code, _ = run(["simulate", SAMPLE, "--max-len", "100", "--budget", "10"], capsys)
    assert code == 3


def test_eval(capsys, tmp_path):
    f = tmp_path / "f.txt"
    w = tmp_path / "w.txt"
    f.write_text("(U X (forall x (implies (in x X) (label 3 x))))")
    w.write_text("1 2 3 3")
    assert run(["eval", str(f), str(w), "--u-threshold", "2"], capsys)[0] == 0
    assert run(["eval", str(f), str(w), "--u-threshold", "3"], capsys)[0] == 1
    g = tmp_path / "g.txt"
    g.write_text("(in x X)")
    assert run(["eval", str(g), str(w), "--assign", "x=1", "--assign", "X=1,2"], capsys)[0] == 0
    w.write_text("1 3 " * 10)
    assert run(["eval", str(f), str(w)], capsys)[0] == 3


def test_vecseq_commands(capsys, tmp_path):
    F = tmp_path / "F.json"
    G = tmp_path / "G.json"
    F.write_text("[[0, 9], [9, 0], [0, 9]]")
    G.write_text("[[0], [9], [0]]")
    code, out = run(["--json", "vecseq", "mix", str(F), str(G), "--B", "3", "--B-prime", "8"],
                    capsys)
    assert code == 1 and json.loads(out)["counterexample"] == [0, 0, 1]
    code, _ = run(["vecseq", "mix", str(F), str(F)], capsys)
    assert code == 0
    f = tmp_path / "f.json"
    g = tmp_path / "g.json"
    f.write_text("[0, 5, 0, 7]")
    g.write_text("[1, 9, 2, 8]")
    assert run(["vecseq", "equiv", str(f), str(g), "--B", "3", "--B-prime", "9"], capsys)[0] == 0
    code, out = run(["--json", "vecseq", "identity", "--side", "3"], capsys)
    assert code == 0 and json.loads(out)["refuted"] == 512
    assert run(["vecseq", "mix", str(F), str(G), "--budget", "2"], capsys)[0] == 3


@pytest.mark.parametrize("argv", [
    ["compile", "/nonexistent/machine.mm"],
    ["decode", "/nonexistent/word"],
])
def test_missing_files(argv, capsys):
    assert run(argv, capsys)[0] == 2


def test_usage_errors(capsys, tmp_path):
    with pytest.raises(SystemExit) as exc:
        dispatch(["frobnicate"])
    assert exc.value.code == 2
    bad = tmp_path / "bad.mm"
    bad.write_text("states: q\ninit: nowhere\nfinal: q\n")
    assert run(["compile", str(bad)], capsys)[0] == 2
    f = tmp_path / "f.txt"
    f.write_text("(label 9 x)")
    w = tmp_path / "w.txt"
    w.write_text("1 2")
    assert run(["eval", str(f), str(w), "--assign", "x=0"], capsys)[0] == 2


def test_console_pipeline():
    """The documented shell pipeline, through real processes."""
    exe = [sys.executable, "-m", "msou.cli"]
    word = subprocess.run(exe + ["witness", SAMPLE, "--trees", "5"], capture_output=True,
                          text=True, check=True).stdout
    res = subprocess.run(exe + ["--json", "check-witness", SAMPLE, "-"], input=word,
                         capture_output=True, text=True)
    assert res.returncode == 0
    data = json.loads(res.stdout)
    assert all(data[k] for k in "abcd")
