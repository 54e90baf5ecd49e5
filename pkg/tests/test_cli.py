import io
import json
import subprocess
import sys

import pytest

from treequot.cli import main

L1 = "comp(cstar(h(@1)); star[b](h(a)+f(b,b)))"
L3 = "cstar(f(@1, b) + f(b, @1))"
L2N = "star[b](f(b, b) + h(a))"

L1_TEXT = f"""\
states: 3 (2 final)
  0  {{ comp(cstar(h(@1)); prod[b](comp({L3}; h(@1)), {L2N})) }}
  1* {{ comp(cstar(h(@1)); prod[b]({L3}, {L2N})) }}
  2* {{ cstar(h(@1)) }}
transitions:
  a -> 0
  b -> 1
  f(1, 1) -> 1
  h(0) -> 1
  h(1) -> 2
  h(2) -> 2
"""


def run(capsys, *argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_quotient_example1(capsys):
    code, out, _ = run(capsys, "quotient", "--by", "g(@3,b)", "--of", "f(g(@3,b),@1,h(g(@3,b)))")
    assert code == 0
    assert out == "{ f(@1, @2, h(g(@4, b))) ; f(g(@4, b), @2, h(@1)) }\n"


def test_quotient_of_expression(capsys):
    code, out, _ = run(capsys, "quotient", "--by", "b", "--of-expr", "star[b](h(a)+f(b,b))")
    assert code == 0 and out == f"{{ prod[b]({L3}, {L2N}) }}\n"


def test_quotient_by_itself_json(capsys):
    code, out, _ = run(capsys, "quotient", "--by", "h(a)", "--of", "h(a)", "--format", "json")
    assert code == 0 and json.loads(out) == {"indices": [1], "members": ["@1"]}


def test_quotient_with_explicit_alphabet(capsys):
    code, out, _ = run(capsys, "quotient", "--alphabet", "a:0, h:1", "--by", "a", "--of", "h(a)")
    assert code == 0 and out == "{ h(@1) }\n"
    code, _, err = run(capsys, "quotient", "--alphabet", "a:0", "--by", "a", "--of", "h(a)")
    assert code == 2 and "undeclared symbol 'h'" in err


@pytest.mark.parametrize("tree, code", [("h(b)", 0), ("a", 1), ("f(b, h(a))", 0)])
def test_member(capsys, tree, code):
    got, out, _ = run(capsys, "member", tree, L1)
    assert got == code
    verdict = "true" if code == 0 else "false"
    assert out.startswith(f"enumeration: {verdict}\nquotient test: {verdict}")


def test_member_reads_stdin(capsys, monkeypatch):
    code, out, _ = run(capsys, "member", "-", L1, stdin="h(b)\n", monkeypatch=monkeypatch)
    assert code == 0 and "(h(b))^-1 = { cstar(h(@1)) }" in out


def test_build_text_golden(capsys):
    code, out, _ = run(capsys, "build", L1)
    assert code == 0 and out == L1_TEXT


def test_build_then_minimize(capsys, monkeypatch, tmp_path):
    _, built, _ = run(capsys, "build", L1, "--format", "json")
    code, out, _ = run(capsys, "minimize", stdin=built, monkeypatch=monkeypatch)
    assert code == 0 and out == L1_TEXT
    path = tmp_path / "l1.json"
    path.write_text(built)
    code, out, _ = run(capsys, "minimize", str(path))
    assert code == 0 and out == L1_TEXT


def test_build_subset_and_dot(capsys):
    code, out, _ = run(capsys, "build", "--via", "subset", L1)
    assert code == 0 and out.startswith("states:")
    code, out, _ = run(capsys, "build", L1, "--format", "dot")
    assert code == 0 and out.startswith("digraph A {") and "doublecircle" in out


def test_build_budget_exhausted(capsys):
    code, _, err = run(capsys, "build", L1, "--budget", "2")
    assert code == 3
    assert err.startswith("error: more than 2 distinct quotient states")
    assert err.count("frontier:") == 3


def test_equiv(capsys, tmp_path):
    assert run(capsys, "equiv", L1)[:2] == (0, "isomorphic: quotient 3 states, subset 3 states\n")
    assert run(capsys, "equiv", "h(a)+b", "b+h(a)")[0] == 0
    assert run(capsys, "equiv", "h(a)", "h(b)")[0] == 1
    _, built, _ = run(capsys, "build", L1, "--format", "json")
    path = tmp_path / "a.json"
    path.write_text(built)
    code, out, _ = run(capsys, "equiv", str(path), L1, "--format", "json")
    assert code == 0 and json.loads(out) == {"equivalent": True, "left": 3, "right": 3}


def test_enumerate(capsys):
    code, out, _ = run(capsys, "enumerate", "cstar(h(@1))", "--max-size", "3")
    assert code == 0 and out == "@1\nh(@1)\nh(h(@1))\n"
    code, out, _ = run(capsys, "enumerate", "star[b](h(a)+f(b,b))", "--max-size", "3", "--format", "json")
    assert json.loads(out) == {"indices": [], "members": ["b", "f(b, b)", "h(a)"]}


@pytest.mark.parametrize("argv, message", [
    (["enumerate", "h(a"], "error: 1:4: expected ')'"),
    (["enumerate", "f(@1,@1)"], "hole index 1 used twice"),
    (["member", "h(@1)", "h(@1)"], "error:"),
    (["minimize", "/nonexistent.json"], "cannot read automaton"),
])
def test_input_errors(capsys, argv, message):
    code, _, err = run(capsys, *argv)
    assert code == 2 and message in err


@pytest.mark.parametrize("argv", [["frobnicate"], ["build", "a", "--format", "svg"], ["enumerate", "a", "--max-size", "0"]])
def test_bad_arguments(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_check_passes(capsys):
    code, out, _ = run(capsys, "check", "--max-size", "5")
    assert code == 0
    assert all(line.startswith("PASS") for line in out.splitlines())


def test_output_is_deterministic():
    cmd = [sys.executable, "-m", "treequot", "build", L1, "--format", "json"]
    first = subprocess.run(cmd, capture_output=True, text=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, text=True, check=True,
                            env={"PYTHONHASHSEED": "123"}).stdout
    assert first == second and json.loads(first)["final"] == ["1", "2"]
