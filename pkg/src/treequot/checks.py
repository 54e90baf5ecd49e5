"""Property suites comparing every symbolic computation with an independent oracle.

Each suite returns a list of :class:`Violation`; an empty list means the
property held on every case tried.  The CLI ``check`` command and the test
suite both run them.
"""

from __future__ import annotations

import itertools
import random
from collections.abc import Mapping, Sequence
from typing import NamedTuple

from .automata import (
    accepts, build_quotient_automaton, check_morphism, compute_phi, determinize, expr_to_nfa,
    isomorphic, minimize, quotient_via_automaton, run_delta, split_states, trim,
)
from .corpus import ALPHABET, ENTRIES, Entry, closed_entries
from .expressions import enumerate_expr
from .symbolic import d_symbol, d_tree, normalize, state_of
from .tree_quotients import brute_force_quotient, quotient_finite, quotient_tree_by_tree
from .trees import Alphabet, Hole, Node, Tree, subtrees

__all__ = [
    "Violation", "random_tree", "all_trees", "check_tree_quotients", "check_symbolic",
    "check_normalize", "check_expr_tree_quotients", "check_invariants", "check_minimality", "check_morphisms",
    "run_all",
]


class Violation(NamedTuple):
    prop: str
    case: str
    detail: str

    def __str__(self):
        return f"[{self.prop}] {self.case}: {self.detail}"


# ---------------------------------------------------------------------------
# Tree generators

def random_tree(rng: random.Random, alphabet: Mapping[str, int], size: int, hole_pool: list[int] | None = None,
                hole_rate: float = 0.2) -> Tree:
    """Random tree with at most ``size`` nodes; holes are drawn without repetition from ``hole_pool``."""
    by_arity: dict[int, list[str]] = {}
    for s, k in sorted(alphabet.items()):
        by_arity.setdefault(k, []).append(s)

    def leaf() -> Tree:
        if hole_pool and rng.random() < hole_rate:
            return Hole(hole_pool.pop(rng.randrange(len(hole_pool))))
        return Node(rng.choice(by_arity[0]), ())

    def go(budget: int) -> Tree:
        choices = [k for k in by_arity if 0 < k <= budget - 1]
        if not choices or budget <= 1 or rng.random() < 0.08:
            return leaf()
        k = rng.choice(choices)
        rest = budget - 1
        cuts = sorted(rng.sample(range(1, rest), k - 1))
        parts = [b - a for a, b in zip([0, *cuts], [*cuts, rest])]
        return Node(rng.choice(by_arity[k]), tuple(go(p) for p in parts))

    return go(size)


def all_trees(alphabet: Mapping[str, int], max_size: int) -> list[Tree]:
    """Every hole-free tree over ``alphabet`` with at most ``max_size`` nodes."""
    levels: list[list[Tree]] = [[] for _ in range(max_size + 1)]
    items = sorted(alphabet.items())
    for size in range(1, max_size + 1):
        for sym, k in items:
            if k == 0:
                if size == 1:
                    levels[1].append(Node(sym, ()))
                continue
            for split in _splits(size - 1, k):
                for kids in itertools.product(*(levels[s] for s in split)):
                    levels[size].append(Node(sym, kids))
    return [t for level in levels for t in level]


def _splits(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(1, total - parts + 2):
        for rest in _splits(total - first, parts - 1):
            yield (first, *rest)


# ---------------------------------------------------------------------------
# Suites

TREE_ALPHABET = Alphabet({"a": 0, "b": 0, "h": 1, "g": 2, "k": 3})


def check_tree_quotients(seed: int = 0, pairs: int = 1000, max_size: int = 12) -> list[Violation]:
    """Inductive tree quotient against the position-by-position search."""
    rng = random.Random(seed)
    out = []
    for i in range(pairs):
        pool = rng.sample(range(1, 8), rng.randint(0, 4))
        u = random_tree(rng, TREE_ALPHABET, rng.randint(1, max_size), pool)
        roll = rng.random()
        if roll < 0.7:
            t = rng.choice([s for _, s in subtrees(u)])
        else:
            t = random_tree(rng, TREE_ALPHABET, rng.randint(1, 4), rng.sample(range(1, 8), 2))
        got, want = quotient_tree_by_tree(t, u), brute_force_quotient(t, u)
        if got != want or got.indices != want.indices:
            out.append(Violation("tree-quotient", f"#{i} ({t})^-1 {u}", f"{got} != {want}"))
    return out


def check_symbolic(entries: Sequence[Entry] = ENTRIES, max_size: int = 10,
                   alphabet: Mapping[str, int] = ALPHABET) -> list[Violation]:
    """Symbol quotients of every entry, slice by slice, against quotients of the enumerated slice."""
    out = []
    pattern = {s: Node(s, tuple(Hole(i) for i in range(1, k + 1))) for s, k in alphabet.items()}
    for en in entries:
        e = en.expr
        full = enumerate_expr(e, max_size)
        state = state_of(e)
        for sym, k in sorted(alphabet.items()):
            want = quotient_finite(pattern[sym], full)
            # removing k-ary sym shrinks a tree by k: one node lost, k holes gained minus the new @1
            got = enumerate_expr(d_symbol(sym, state, alphabet).expr, max_size - k)
            if set(got) != set(want):
                extra = sorted(map(str, set(got) - set(want)))[:3]
                missing = sorted(map(str, set(want) - set(got)))[:3]
                out.append(Violation("symbolic", f"{en.name} / {sym}", f"extra {extra} missing {missing}"))
    return out


def check_normalize(entries: Sequence[Entry] = ENTRIES, max_size: int = 8) -> list[Violation]:
    out = []
    for en in entries:
        e = en.expr
        n = normalize(e)
        if normalize(n) != n:
            out.append(Violation("normalize", en.name, "not idempotent"))
        if enumerate_expr(e, max_size) != enumerate_expr(n, max_size):
            out.append(Violation("normalize", en.name, "changes the language"))
    return out


def check_expr_tree_quotients(entries: Sequence[Entry] = ENTRIES, max_size: int = 8, seed: int = 0,
               per_entry: int = 12) -> list[Violation]:
    """Tree quotients of expressions against quotients of their slices."""
    rng = random.Random(seed)
    out = []
    for en in entries:
        e = en.expr
        full = enumerate_expr(e, max_size)
        state = state_of(e)
        probes: set[Tree] = set(all_trees(ALPHABET, 2))
        members = list(full)
        for _ in range(per_entry):
            if not members:
                break
            u = rng.choice(members)
            probes.add(rng.choice([s for _, s in subtrees(u)]))
        for t in sorted(probes, key=lambda x: x.key):
            if not t.linear:
                continue
            got = enumerate_expr(d_tree(t, state).expr, max_size - t.size + 1)
            want = quotient_finite(t, full)
            if set(got) != set(want):
                out.append(Violation("expr-tree-quotient", f"{en.name} / {t}", f"{len(got)} trees vs {len(want)}"))
    return out


def check_invariants(entries: Sequence[Entry] | None = None, max_size: int = 8, budget: int = 512,
                     context_size: int = 5, context_trees: int = 4) -> list[Violation]:
    """Membership, nullability and acceptance agree; runs land on the quotient state."""
    entries = closed_entries() if entries is None else entries
    out = []
    trees = all_trees(ALPHABET, max_size)
    for en in entries:
        e = en.expr
        slice_ = set(enumerate_expr(e, max_size))
        start = state_of(e)
        Q = build_quotient_automaton(e, ALPHABET, budget)
        by_label = {Q.labels[q]: q for q in Q.states}
        for t in trees:
            q = d_tree(t, start)
            m, nl, acc = t in slice_, q.nullable, accepts(Q, t)
            if not (m == nl == acc):
                out.append(Violation("membership", f"{en.name} / {t}", f"member={m} nullable={nl} accepted={acc}"))
            reached = run_delta(Q, t)
            if q.is_empty:
                if reached:
                    out.append(Violation("run-state", f"{en.name} / {t}", "empty quotient but a state is reached"))
                continue
            if len(reached) != 1:
                out.append(Violation("run-state", f"{en.name} / {t}", f"reaches {len(reached)} states"))
                continue
            (r,) = reached
            if by_label.get(q) != r:
                # same language under a different spelling is still the same quotient
                k = context_size
                if enumerate_expr(q.expr, k) != enumerate_expr(Q.labels[r].expr, k):
                    out.append(Violation("run-state", f"{en.name} / {t}", f"lands on {Q.labels[r]} not {q}"))
        for t in [t for t in trees if t.size <= context_trees]:
            got = quotient_via_automaton(Q, t, context_size)
            want = enumerate_expr(d_tree(t, start).expr, context_size)
            if set(got) != set(want):
                out.append(Violation("top-language", f"{en.name} / {t}", f"{len(got)} contexts vs {len(want)}"))
    return out


def check_minimality(entries: Sequence[Entry] | None = None, budget: int = 512) -> list[Violation]:
    """Minimal quotient automaton is no larger than other DFAs and matches the subset pipeline."""
    entries = closed_entries() if entries is None else entries
    out = []
    for en in entries:
        e = en.expr
        M = minimize(build_quotient_automaton(e, ALPHABET, budget))
        dfa = trim(determinize(expr_to_nfa(e, ALPHABET)))
        D = minimize(dfa)
        for name, other in (("subset", dfa), ("split", split_states(dfa, 2))):
            if len(M.states) > len(other.states):
                out.append(Violation("minimal-size", en.name, f"{len(M.states)} states vs {len(other.states)} in {name}"))
        if not isomorphic(M, D):
            out.append(Violation("pipelines", en.name, "minimal automata differ"))
    return out


def check_morphisms(entries: Sequence[Entry] | None = None, budget: int = 512) -> list[Violation]:
    entries = closed_entries() if entries is None else entries
    out = []
    for en in entries:
        e = en.expr
        Q = build_quotient_automaton(e, ALPHABET, budget)
        if not Q.states:
            continue
        big = split_states(Q, 3)
        phi = compute_phi(big, e, ALPHABET, budget=budget)
        if not check_morphism(big, phi.target, phi):
            out.append(Violation("morphism", en.name, "computed map is not a morphism"))
    return out


def run_all(seed: int = 0, max_size: int = 8, budget: int = 512) -> list[tuple[str, list[Violation]]]:
    """Every suite with bounds scaled from ``max_size``; results in a fixed order."""
    return [
        ("tree quotients", check_tree_quotients(seed, pairs=300, max_size=max(4, max_size + 4))),
        ("normalization", check_normalize(max_size=max_size)),
        ("symbol quotients", check_symbolic(max_size=max_size)),
        ("tree quotients of expressions", check_expr_tree_quotients(max_size=max_size, seed=seed)),
        ("membership and runs", check_invariants(max_size=min(max_size, 6), budget=budget)),
        ("minimality", check_minimality(budget=budget)),
        ("morphisms", check_morphisms(budget=budget)),
    ]
