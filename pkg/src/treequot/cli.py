"""Command-line front end.

Exit codes: 0 success, 1 negative verdict or failed property, 2 bad input,
3 state budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from collections.abc import Sequence

from . import automata as au
from .checks import run_all
from .errors import BudgetExhausted, TreeQuotError
from .expressions import enumerate_expr, indices, infer_alphabet, member, parse_expr
from .symbolic import d_symbol, d_tree, state_of
from .tree_quotients import quotient_tree_by_tree
from .trees import Alphabet, parse_alphabet, parse_tree

EXIT_OK, EXIT_FALSE, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


class InputError(Exception):
    pass


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--alphabet", help="inline 'f:2, h:1, a:0' or a file holding one (inferred when omitted)")
    p.add_argument("--max-size", type=_positive, default=8, help="size bound for enumeration (default 8)")
    p.add_argument("--budget", type=_positive, default=512, help="state budget for quotient automata (default 512)")
    p.add_argument("--format", choices=("text", "json", "dot"), default="text")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized suites")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="treequot", description="Bottom-up quotients of regular tree languages.")
    sub = parser.add_subparsers(dest="command", required=True)

    q = sub.add_parser("quotient", parents=[common], help="quotient a tree or an expression by a tree")
    q.add_argument("--by", required=True, help="tree to remove, or a bare symbol name")
    target = q.add_mutually_exclusive_group(required=True)
    target.add_argument("--of", help="target tree")
    target.add_argument("--of-expr", help="target expression")

    m = sub.add_parser("member", parents=[common], help="membership by enumeration and by the quotient test")
    m.add_argument("tree")
    m.add_argument("expr")

    b = sub.add_parser("build", parents=[common], help="build an automaton for an expression")
    b.add_argument("expr")
    b.add_argument("--via", choices=("quotient", "subset"), default="quotient")

    mn = sub.add_parser("minimize", parents=[common], help="minimize an automaton given as JSON")
    mn.add_argument("automaton", nargs="?", default="-", help="JSON file, or - for stdin")

    eq = sub.add_parser("equiv", parents=[common], help="compare languages through minimal automata")
    eq.add_argument("left", help="expression or automaton JSON file")
    eq.add_argument("right", nargs="?", help="expression or automaton JSON file; omitted: compare both pipelines")

    en = sub.add_parser("enumerate", parents=[common], help="list the trees of an expression up to --max-size")
    en.add_argument("expr")

    sub.add_parser("check", parents=[common], help="run the property suites on the built-in corpus")
    return parser


# ---------------------------------------------------------------------------
# Input helpers

def _read(text: str) -> str:
    if text == "-":
        return sys.stdin.read().strip()
    return text


def _alphabet(args, *texts: str) -> Alphabet:
    if args.alphabet:
        src = args.alphabet
        if os.path.isfile(src):
            with open(src, encoding="utf-8") as fh:
                src = fh.read()
        return parse_alphabet(src)
    return infer_alphabet(*texts)


def _load_automaton(path: str) -> au.TreeAutomaton:
    try:
        if path == "-":
            data = json.load(sys.stdin)
        else:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
        return au.from_json(data)
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise InputError(f"cannot read automaton from {path}: {exc}") from None


def _is_automaton_file(text: str) -> bool:
    return text.endswith(".json") and os.path.isfile(text)


def _widen(A: au.TreeAutomaton, alphabet: dict) -> au.TreeAutomaton:
    return au.TreeAutomaton(alphabet, A.states, A.final, A.delta, A.labels)


# ---------------------------------------------------------------------------
# Output helpers

def _emit_automaton(A: au.TreeAutomaton, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(au.to_json(A), indent=2, ensure_ascii=False)
    if fmt == "dot":
        return au.to_dot(A).rstrip("\n")
    lines = [f"states: {len(A.states)} ({len(A.final)} final)"]
    for q in A.states:
        mark = "*" if q in A.final else " "
        lines.append(f"  {q}{mark} {A.label(q)}")
    lines.append("transitions:")
    for sym, args, q in A.transitions():
        src = f"{sym}({', '.join(map(str, args))})" if args else sym
        lines.append(f"  {src} -> {q}")
    return "\n".join(lines)


def _emit_set(members, idx, fmt: str, text: str) -> str:
    if fmt == "json":
        return json.dumps({"indices": list(idx), "members": [str(m) for m in members]}, ensure_ascii=False)
    return text


# ---------------------------------------------------------------------------
# Commands

def cmd_quotient(args) -> int:
    by = _read(args.by)
    if args.of is not None:
        of = _read(args.of)
        alphabet = _alphabet(args, by, of)
        u = parse_tree(of, alphabet)
        t = _by_tree(by, alphabet)
        result = quotient_tree_by_tree(t, u)
        print(_emit_set(list(result), result.indices, args.format, str(result)))
        return EXIT_OK
    of = _read(args.of_expr)
    alphabet = _alphabet(args, by, of)
    e = parse_expr(of, alphabet)
    start = state_of(e)
    if by in alphabet:
        s = d_symbol(by, start, alphabet)
    else:
        s = d_tree(_by_tree(by, alphabet), start)
    print(_emit_set(s.members, s.indices, args.format, str(s)))
    return EXIT_OK


def _by_tree(text: str, alphabet: Alphabet):
    if text in alphabet:
        k = alphabet[text]
        return parse_tree(text if k == 0 else f"{text}({', '.join(f'@{i}' for i in range(1, k + 1))})", alphabet)
    return parse_tree(text, alphabet)


def cmd_member(args) -> int:
    tree_text, expr_text = _read(args.tree), _read(args.expr)
    alphabet = _alphabet(args, tree_text, expr_text)
    t = parse_tree(tree_text, alphabet)
    e = parse_expr(expr_text, alphabet)
    by_enum = member(t, e)
    q = d_tree(t, state_of(e))
    by_quot = q.nullable
    if args.format == "json":
        print(json.dumps({"member": by_enum, "enumeration": by_enum, "quotient_test": by_quot, "quotient": str(q)},
                         ensure_ascii=False))
    else:
        print(f"enumeration: {str(by_enum).lower()}")
        print(f"quotient test: {str(by_quot).lower()}  ({t})^-1 = {q}")
    if by_enum != by_quot:
        print("error: the two membership answers disagree", file=sys.stderr)
        return EXIT_FALSE
    return EXIT_OK if by_enum else EXIT_FALSE


def cmd_build(args) -> int:
    text = _read(args.expr)
    alphabet = _alphabet(args, text)
    e = parse_expr(text, alphabet)
    if args.via == "quotient":
        A = au.build_quotient_automaton(e, alphabet, args.budget)
    else:
        if indices(e):
            raise InputError("build needs an expression without holes")
        A = au.trim(au.determinize(au.expr_to_nfa(e, alphabet)))
    print(_emit_automaton(A, args.format))
    return EXIT_OK


def cmd_minimize(args) -> int:
    A = _load_automaton(args.automaton)
    if not A.deterministic:
        A = au.determinize(A)
    print(_emit_automaton(au.minimize(A), args.format))
    return EXIT_OK


def _minimal_for(text: str, args) -> au.TreeAutomaton:
    if _is_automaton_file(text):
        A = _load_automaton(text)
        return au.minimize(A if A.deterministic else au.determinize(A))
    alphabet = _alphabet(args, text)
    return au.minimize(au.build_quotient_automaton(parse_expr(text, alphabet), alphabet, args.budget))


def cmd_equiv(args) -> int:
    left = _read(args.left)
    if args.right is None:
        alphabet = _alphabet(args, left)
        e = parse_expr(left, alphabet)
        A = au.minimize(au.build_quotient_automaton(e, alphabet, args.budget))
        B = au.minimize(au.determinize(au.expr_to_nfa(e, alphabet)))
        names = ("quotient", "subset")
    else:
        right = _read(args.right)
        if not args.alphabet and not _is_automaton_file(left) and not _is_automaton_file(right):
            args.alphabet = str(infer_alphabet(left, right))
        A, B = _minimal_for(left, args), _minimal_for(right, args)
        names = ("left", "right")
    table = {**dict(A.alphabet), **dict(B.alphabet)}
    same = au.isomorphic(_widen(A, table), _widen(B, table))
    if args.format == "json":
        print(json.dumps({"equivalent": same, names[0]: len(A.states), names[1]: len(B.states)}))
    else:
        verdict = "isomorphic" if same else "not isomorphic"
        print(f"{verdict}: {names[0]} {len(A.states)} states, {names[1]} {len(B.states)} states")
    return EXIT_OK if same else EXIT_FALSE


def cmd_enumerate(args) -> int:
    text = _read(args.expr)
    alphabet = _alphabet(args, text)
    e = parse_expr(text, alphabet)
    result = enumerate_expr(e, args.max_size)
    if args.format == "json":
        print(json.dumps({"indices": list(result.indices), "members": [str(t) for t in result]}))
    else:
        for t in result:
            print(t)
    return EXIT_OK


def cmd_check(args) -> int:
    failed = 0
    report = []
    for name, violations in run_all(seed=args.seed, max_size=args.max_size, budget=args.budget):
        status = "PASS" if not violations else "FAIL"
        failed += bool(violations)
        smallest = min(violations, key=lambda v: (len(v.case), v.case)) if violations else None
        report.append((name, status, len(violations), smallest))
    if args.format == "json":
        print(json.dumps([{"suite": n, "status": s, "violations": c, "counterexample": str(v) if v else None}
                          for n, s, c, v in report]))
    else:
        for name, status, count, smallest in report:
            print(f"{status} {name}" + (f" ({count} violations)" if count else ""))
            if smallest:
                print(f"  counterexample: {smallest}")
    return EXIT_FALSE if failed else EXIT_OK


COMMANDS = {
    "quotient": cmd_quotient, "member": cmd_member, "build": cmd_build, "minimize": cmd_minimize,
    "equiv": cmd_equiv, "enumerate": cmd_enumerate, "check": cmd_check,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except BudgetExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        for s in exc.frontier:
            print(f"  frontier: {s}", file=sys.stderr)
        return EXIT_BUDGET
    except (TreeQuotError, InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
