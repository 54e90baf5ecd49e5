"""Bottom-up tree automata and the quotient automaton of an expression.

An automaton maps ``(symbol, state tuple)`` to a set of target states;
nullary symbols use the empty tuple.  Transition functions may be partial.
State ids are arbitrary hashable values; everything built here uses ints.
"""

from __future__ import annotations

import itertools
import json
from collections import defaultdict
from collections.abc import Hashable, Iterable, Mapping
from dataclasses import dataclass, field

from .errors import ArityError, BudgetExhausted, NotDeterministic, UnknownSymbol
from .expressions import (
    Apply, Empty, Expr, Product, Star, Union, analyze, children_of, indices, reify_holes,
)
from .symbolic import QuotientState, d_symbol, d_tree, state_of
from .trees import Alphabet, Hole, Node, Tree, TreeSet

__all__ = [
    "TreeAutomaton", "Morphism", "run_delta", "run_context", "accepts", "trim", "determinize",
    "minimize", "expr_to_nfa", "build_quotient_automaton", "top_language_slice",
    "quotient_via_automaton", "language_slice", "check_morphism", "compute_phi", "isomorphic",
    "to_json", "from_json", "to_dot", "split_states",
]

State = Hashable


class TreeAutomaton:
    """``(alphabet, states, final, delta)`` with optional per-state labels."""

    def __init__(self, alphabet: Mapping[str, int], states: Iterable[State], final: Iterable[State],
                 delta: Mapping[tuple[str, tuple], Iterable[State]], labels: Mapping[State, object] | None = None):
        self.alphabet = alphabet if isinstance(alphabet, Alphabet) else Alphabet(alphabet)
        self.states = tuple(dict.fromkeys(states))
        known = set(self.states)
        self.final = frozenset(final)
        table: dict[tuple[str, tuple], frozenset] = {}
        for (sym, args), targets in delta.items():
            args = tuple(args)
            if sym not in self.alphabet:
                raise UnknownSymbol(sym)
            if self.alphabet[sym] != len(args):
                raise ArityError(f"transition on {sym!r} with {len(args)} arguments")
            targets = frozenset(targets)
            if not targets:
                continue
            if not known.issuperset(args) or not known.issuperset(targets):
                raise ValueError(f"transition {sym}{args} uses an unknown state")
            table[(sym, args)] = targets
        if not known.issuperset(self.final):
            raise ValueError("final states must be states")
        self.delta = table
        self.labels = dict(labels or {})

    @property
    def deterministic(self) -> bool:
        return all(len(t) <= 1 for t in self.delta.values())

    def target(self, symbol: str, args: tuple) -> State | None:
        """The unique target of a deterministic transition, or None."""
        ts = self.delta.get((symbol, args))
        if not ts:
            return None
        if len(ts) > 1:
            raise NotDeterministic(f"{symbol}{args} has {len(ts)} targets")
        return next(iter(ts))

    def transitions(self):
        """``(symbol, args, target)`` triples in a stable order."""
        order = {q: i for i, q in enumerate(self.states)}
        rows = []
        for (sym, args), targets in self.delta.items():
            for q in targets:
                rows.append((sym, args, q))
        rows.sort(key=lambda r: (r[0], [order[a] for a in r[1]], order[r[2]]))
        return rows

    def label(self, q: State) -> str:
        return str(self.labels.get(q, q))

    def __repr__(self):
        return f"<TreeAutomaton {len(self.states)} states, {len(self.final)} final, {len(self.delta)} transitions>"


@dataclass
class Morphism:
    mapping: dict
    source: TreeAutomaton
    target: TreeAutomaton
    labels: dict = field(default_factory=dict)

    def __call__(self, q):
        return self.mapping[q]


# ---------------------------------------------------------------------------
# Evaluation

def _run(A: TreeAutomaton, t: Tree, hole_state: State | None, memo: dict) -> frozenset:
    hit = memo.get(t)
    if hit is not None:
        return hit
    if isinstance(t, Hole):
        if hole_state is None or t.index != 1:
            raise ArityError(f"unexpected hole {t} while running the automaton")
        out = frozenset({hole_state})
    else:
        if t.symbol not in A.alphabet:
            raise UnknownSymbol(t.symbol)
        kids = [_run(A, c, hole_state, memo) for c in t.children]
        found = set()
        if all(kids):
            for args in itertools.product(*kids):
                found |= A.delta.get((t.symbol, args), frozenset())
        out = frozenset(found)
    memo[t] = out
    return out


def run_delta(A: TreeAutomaton, t: Tree) -> frozenset:
    """States reached by the hole-free tree ``t``."""
    return _run(A, t, None, {})


def run_context(A: TreeAutomaton, c: Tree, q: State) -> frozenset:
    """States reached by the one-hole context ``c`` when ``@1`` is in state ``q``."""
    return _run(A, c, q, {})


def accepts(A: TreeAutomaton, t: Tree) -> bool:
    return bool(run_delta(A, t) & A.final)


# ---------------------------------------------------------------------------
# Slices

def _size_splits(total: int, parts: int, low: int = 1):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(low, total - low * (parts - 1) + 1):
        for rest in _size_splits(total - first, parts - 1, low):
            yield (first, *rest)


def _down_levels(A: TreeAutomaton, max_size: int) -> list[list[tuple[Tree, frozenset]]]:
    """Hole-free trees of each exact size that reach at least one state."""
    levels: list[list[tuple[Tree, frozenset]]] = [[] for _ in range(max_size + 1)]
    by_symbol = defaultdict(list)
    for (sym, args), targets in A.delta.items():
        by_symbol[(sym, len(args))].append((args, targets))
    symbols = sorted(A.alphabet.items())
    for size in range(1, max_size + 1):
        for sym, k in symbols:
            rows = by_symbol.get((sym, k))
            if not rows:
                continue
            if k == 0:
                if size == 1:
                    levels[1].append((Node(sym, ()), rows[0][1]))
                continue
            for split in _size_splits(size - 1, k):
                for combo in itertools.product(*(levels[s] for s in split)):
                    sets = [qs for _, qs in combo]
                    reached = set()
                    for args, targets in rows:
                        if all(a in qs for a, qs in zip(args, sets)):
                            reached |= targets
                    if reached:
                        levels[size].append((Node(sym, tuple(t for t, _ in combo)), frozenset(reached)))
    return levels


def language_slice(A: TreeAutomaton, max_size: int) -> TreeSet:
    """Accepted hole-free trees with at most ``max_size`` nodes."""
    levels = _down_levels(A, max_size)
    return TreeSet((t for level in levels for t, qs in level if qs & A.final), ())


def top_language_slice(A: TreeAutomaton, q: State, max_size: int) -> TreeSet:
    """One-hole contexts ``c`` of size at most ``max_size`` with ``Δ(c, q) ∩ F ≠ ∅``."""
    ground = _down_levels(A, max_size)
    ctx: list[list[tuple[Tree, frozenset]]] = [[] for _ in range(max_size + 1)]
    if max_size >= 1:
        ctx[1].append((Hole(1), frozenset({q})))
    by_symbol = defaultdict(list)
    for (sym, args), targets in A.delta.items():
        if args:
            by_symbol[sym].append((args, targets))
    for size in range(2, max_size + 1):
        for sym, rows in sorted(by_symbol.items()):
            k = A.alphabet[sym]
            for pos in range(k):
                for split in _size_splits(size - 1, k):
                    pools = [ctx[s] if i == pos else ground[s] for i, s in enumerate(split)]
                    for combo in itertools.product(*pools):
                        sets = [qs for _, qs in combo]
                        reached = set()
                        for args, targets in rows:
                            if all(a in qs for a, qs in zip(args, sets)):
                                reached |= targets
                        if reached:
                            ctx[size].append((Node(sym, tuple(t for t, _ in combo)), frozenset(reached)))
    return TreeSet((c for level in ctx for c, qs in level if qs & A.final), (1,))


def quotient_via_automaton(A: TreeAutomaton, t: Tree, max_size: int) -> TreeSet:
    """``t⁻¹(L(A))`` up to ``max_size``, as the union of top languages of ``Δ(t)``."""
    out: set[Tree] = set()
    for q in run_delta(A, t):
        out |= set(top_language_slice(A, q, max_size))
    return TreeSet(out, (1,))


# ---------------------------------------------------------------------------
# Standard constructions

def trim(A: TreeAutomaton) -> TreeAutomaton:
    """Drop states that no hole-free tree reaches."""
    reached: set[State] = set()
    changed = True
    while changed:
        changed = False
        for (sym, args), targets in A.delta.items():
            if reached.issuperset(args) and not reached.issuperset(targets):
                reached |= targets
                changed = True
    states = [q for q in A.states if q in reached]
    delta = {key: ts for key, ts in A.delta.items() if reached.issuperset(key[1])}
    labels = {q: A.labels[q] for q in states if q in A.labels}
    return TreeAutomaton(A.alphabet, states, A.final & reached, delta, labels)


def determinize(A: TreeAutomaton) -> TreeAutomaton:
    """Subset construction restricted to subsets reached by some tree."""
    rows = defaultdict(list)
    for (sym, args), targets in A.delta.items():
        rows[sym].append((args, targets))
    symbols = sorted(A.alphabet.items(), key=lambda p: (p[1], p[0]))
    ids: dict[frozenset, int] = {}
    order: list[frozenset] = []
    delta: dict[tuple[str, tuple], set] = {}

    def intern(subset: frozenset) -> int:
        if subset not in ids:
            ids[subset] = len(order)
            order.append(subset)
        return ids[subset]

    for sym, k in symbols:
        if k == 0:
            target = frozenset().union(*(ts for _, ts in rows.get(sym, ())))
            if target:
                delta[(sym, ())] = {intern(target)}
    done: set[tuple[str, tuple]] = set()
    while True:
        before = len(order)
        for sym, k in symbols:
            if k == 0:
                continue
            for combo in itertools.product(range(len(order)), repeat=k):
                if (sym, combo) in done:
                    continue
                done.add((sym, combo))
                subsets = [order[i] for i in combo]
                target = set()
                for args, ts in rows.get(sym, ()):
                    if all(a in s for a, s in zip(args, subsets)):
                        target |= ts
                if target:
                    delta[(sym, combo)] = {intern(frozenset(target))}
        if len(order) == before:
            break
    final = [i for i, s in enumerate(order) if s & A.final]
    labels = {i: "{" + ", ".join(sorted(A.label(q) for q in s)) + "}" for i, s in enumerate(order)}
    return TreeAutomaton(A.alphabet, range(len(order)), final, delta, labels)


_SINK = object()


def minimize(A: TreeAutomaton) -> TreeAutomaton:
    """Minimal deterministic automaton for ``L(A)``; partial, without a dead state."""
    if not A.deterministic:
        raise NotDeterministic("minimize needs a deterministic automaton")
    A = trim(A)
    states = list(A.states) + [_SINK]
    symbols = sorted((s, k) for s, k in A.alphabet.items() if k > 0)

    def step(sym, args):
        ts = A.delta.get((sym, tuple(args)))
        return next(iter(ts)) if ts else _SINK

    block = {q: int(q in A.final) for q in states}
    while True:
        sigs = {}
        for q in states:
            sig = [block[q]]
            for sym, k in symbols:
                for pos in range(k):
                    for rest in itertools.product(states, repeat=k - 1):
                        args = (*rest[:pos], q, *rest[pos:])
                        sig.append(block[step(sym, args)])
            sigs[q] = tuple(sig)
        numbering: dict[tuple, int] = {}
        new_block = {q: numbering.setdefault(sigs[q], len(numbering)) for q in states}
        if len(numbering) == len(set(block.values())):
            block = new_block
            break
        block = new_block
    dead = block[_SINK]
    # number surviving blocks by first appearance among the original states
    rename: dict[int, int] = {}
    reps: dict[int, State] = {}
    for q in A.states:
        b = block[q]
        if b != dead and b not in rename:
            rename[b] = len(rename)
            reps[rename[b]] = q
    delta = {}
    for (sym, args), ts in A.delta.items():
        (q,) = ts
        if block[q] == dead or any(block[a] == dead for a in args):
            continue
        delta[(sym, tuple(rename[block[a]] for a in args))] = {rename[block[q]]}
    final = {rename[block[q]] for q in A.final if block[q] != dead}
    labels = {i: A.labels[q] for i, q in reps.items() if q in A.labels}
    return _canonical_order(TreeAutomaton(A.alphabet, range(len(rename)), final, delta, labels))


def _canonical_order(A: TreeAutomaton) -> TreeAutomaton:
    """Renumber states by a breadth-first sweep from nullary symbols in symbol order."""
    order: list[State] = []
    seen: set[State] = set()
    rows = sorted(A.delta.items(), key=lambda kv: (len(kv[0][1]), kv[0][0]))
    changed = True
    while changed:
        changed = False
        for (sym, args), ts in rows:
            if all(a in seen for a in args):
                for q in sorted(ts, key=lambda s: A.states.index(s)):
                    if q not in seen:
                        seen.add(q)
                        order.append(q)
                        changed = True
    order += [q for q in A.states if q not in seen]
    new = {q: i for i, q in enumerate(order)}
    delta = {(sym, tuple(new[a] for a in args)): {new[q] for q in ts} for (sym, args), ts in A.delta.items()}
    labels = {new[q]: v for q, v in A.labels.items()}
    return TreeAutomaton(A.alphabet, range(len(order)), {new[q] for q in A.final}, delta, labels)


# ---------------------------------------------------------------------------
# Compilation of expressions

class _Builder:
    def __init__(self):
        self.count = 0
        self.delta: dict[tuple[str, tuple], set] = defaultdict(set)
        self.eps: dict[int, set] = defaultdict(set)

    def new(self) -> int:
        self.count += 1
        return self.count - 1

    def build(self, e: Expr, arity_of) -> tuple[set, set]:
        """Compile ``e``; returns (states, finals).  ``b``-leaf transitions mark ``b`` leaves."""
        if isinstance(e, Empty):
            return set(), set()
        if isinstance(e, Union):
            states, finals = set(), set()
            for m in e.members:
                s, f = self.build(m, arity_of)
                states |= s
                finals |= f
            return states, finals
        if isinstance(e, Apply):
            states = set()
            slots = []
            for c in e.children:
                s, f = self.build(c, arity_of)
                states |= s
                if not f:
                    return states, set()
                slot = self.new()
                states.add(slot)
                for q in f:
                    self.eps[q].add(slot)
                slots.append(slot)
            root = self.new()
            states.add(root)
            self.delta[(e.symbol, tuple(slots))].add(root)
            return states, {root}
        if isinstance(e, Product):
            s1, f1 = self.build(e.left, arity_of)
            s2, f2 = self.build(e.right, arity_of)
            holes = self._take_leaves(e.anchor, s1)
            for q in f2:
                self.eps[q] |= holes
            return s1 | s2, f1
        if isinstance(e, Star):
            s, f = self.build(e.body, arity_of)
            holes = self._take_leaves(e.anchor, s)
            base = self.new()
            self.delta[(e.anchor, ())].add(base)
            finals = f | {base}
            for q in finals:
                self.eps[q] |= holes
            return s | {base}, finals
        raise TypeError(f"cannot compile {type(e).__name__} directly")

    def _take_leaves(self, anchor: str, states: set) -> set:
        key = (anchor, ())
        hit = self.delta.get(key, set())
        mine = hit & states
        if mine:
            hit -= mine
        return mine

    def closure(self, q: int) -> frozenset:
        seen = {q}
        todo = [q]
        while todo:
            for r in self.eps.get(todo.pop(), ()):
                if r not in seen:
                    seen.add(r)
                    todo.append(r)
        return frozenset(seen)


def expr_to_nfa(e: Expr, alphabet: Mapping[str, int] | None = None) -> TreeAutomaton:
    """Nondeterministic automaton for ``e``; holes ``@j`` become nullary symbols ``⟨εj⟩``."""
    indices(e)
    reified, holes_map = reify_holes(e)
    table = dict(alphabet or {})
    table.update(_arities(e))
    for name in holes_map.values():
        table[name] = 0
    builder = _Builder()
    states, finals = builder.build(reified, table.__getitem__)
    delta = {}
    for key, targets in builder.delta.items():
        closed = set()
        for r in targets:
            closed |= builder.closure(r)
        if closed:
            delta[key] = closed
    A = TreeAutomaton(Alphabet(table), range(builder.count), finals, delta)
    return trim(A)


def _arities(e: Expr) -> dict[str, int]:
    out: dict[str, int] = {}

    def walk(x: Expr):
        if isinstance(x, Apply):
            out[x.symbol] = len(x.children)
        elif isinstance(x, (Product, Star)):
            out.setdefault(x.anchor, 0)
        for c in children_of(x):
            walk(c)

    walk(e)
    return out


# ---------------------------------------------------------------------------
# The quotient automaton

def build_quotient_automaton(e: Expr, alphabet: Mapping[str, int], budget: int = 512) -> TreeAutomaton:
    """Deterministic automaton whose states are the quotients ``t⁻¹(⟦e⟧)``.

    Each state keeps the first tree found that reaches it; a transition
    ``f(q1, ..., qk)`` goes to the quotient by ``f`` applied to those
    witnesses.  The empty quotient is left out, so ``δ`` is partial.  Labels
    are the canonical quotient states.
    """
    report = analyze(e, alphabet)
    if report.arity != 0:
        raise ArityError(f"the quotient automaton needs a language without holes, got arity {report.arity}")
    start = state_of(e)
    ids: dict[QuotientState, int] = {}
    witness: list[Tree] = []
    labels: dict[int, QuotientState] = {}
    delta: dict[tuple[str, tuple], set] = {}

    def visit(t: Tree, s: QuotientState) -> int | None:
        if s.is_empty:
            return None
        if s not in ids:
            if len(ids) >= budget:
                raise BudgetExhausted(budget, [str(x) for x in list(labels.values())[-5:]] + [str(s)])
            ids[s] = len(witness)
            witness.append(t)
            labels[ids[s]] = s
        return ids[s]

    symbols = sorted(alphabet.items(), key=lambda p: (p[1], p[0]))
    for sym, k in symbols:
        if k == 0:
            leaf = Node(sym, ())
            q = visit(leaf, d_symbol(sym, start, alphabet))
            if q is not None:
                delta[(sym, ())] = {q}
    done: set[tuple[str, tuple]] = set()
    while True:
        before = len(witness)
        for sym, k in symbols:
            if k == 0:
                continue
            for combo in itertools.product(range(len(witness)), repeat=k):
                if (sym, combo) in done:
                    continue
                done.add((sym, combo))
                t = Node(sym, tuple(witness[i] for i in combo))
                q = visit(t, d_tree(t, start))
                if q is not None:
                    delta[(sym, combo)] = {q}
        if len(witness) == before:
            break
    final = [i for s, i in ids.items() if s.nullable]
    A = TreeAutomaton(alphabet, range(len(witness)), final, delta, labels)
    A.witness = dict(enumerate(witness))
    return A


# ---------------------------------------------------------------------------
# Morphisms

def check_morphism(A1: TreeAutomaton, A2: TreeAutomaton, phi: Morphism | Mapping) -> bool:
    """Conditions (1) and (2): finals map into finals and transitions onto transitions."""
    m = phi.mapping if isinstance(phi, Morphism) else phi
    if any(q not in m for q in A1.states):
        return False
    if any(m[q] not in A2.final for q in A1.final):
        return False
    for (sym, args), targets in A1.delta.items():
        image = A2.delta.get((sym, tuple(m[a] for a in args)), frozenset())
        if any(m[q] not in image for q in targets):
            return False
    return True


def _shortest_witnesses(A: TreeAutomaton) -> dict[State, Tree]:
    """Smallest tree reaching each state; ties go to the least tree in canonical order."""
    best: dict[State, Tree] = {}
    changed = True
    while changed:
        changed = False
        for (sym, args), targets in A.delta.items():
            if not all(a in best for a in args):
                continue
            t = Node(sym, tuple(best[a] for a in args))
            for q in targets:
                cur = best.get(q)
                if cur is None or (t.size, t.key) < (cur.size, cur.key):
                    best[q] = t
                    changed = True
    return best


def compute_phi(A: TreeAutomaton, e: Expr, alphabet: Mapping[str, int], target: TreeAutomaton | None = None,
                budget: int = 512) -> Morphism:
    """Map each state of the accessible DFA ``A`` to the quotient of ``⟦e⟧`` by its shortest witness.

    The target is the minimized quotient automaton of ``e`` unless given.
    """
    if not A.deterministic:
        raise NotDeterministic("compute_phi needs a deterministic automaton")
    if target is None:
        target = minimize(build_quotient_automaton(e, alphabet, budget))
    start = state_of(e)
    best = _shortest_witnesses(A)
    mapping, labels = {}, {}
    for q in A.states:
        if q not in best:
            raise ValueError(f"state {A.label(q)} is not accessible")
        w = best[q]
        reached = run_delta(target, w)
        labels[q] = d_tree(w, start)
        if len(reached) != 1:
            raise ValueError(f"witness {w} of state {A.label(q)} has an empty quotient")
        mapping[q] = next(iter(reached))
    return Morphism(mapping, A, target, labels)


def isomorphic(A1: TreeAutomaton, A2: TreeAutomaton) -> bool:
    """Whether two accessible deterministic automata differ only by state names."""
    if not (A1.deterministic and A2.deterministic):
        raise NotDeterministic("isomorphism is checked on deterministic automata")
    if len(A1.states) != len(A2.states) or len(A1.delta) != len(A2.delta):
        return False
    if dict(A1.alphabet) != dict(A2.alphabet):
        return False
    m: dict[State, State] = {}
    back: dict[State, State] = {}
    changed = True
    while changed:
        changed = False
        for (sym, args), ts in A1.delta.items():
            if not all(a in m for a in args):
                continue
            (q1,) = ts
            q2 = A2.target(sym, tuple(m[a] for a in args))
            if q2 is None:
                return False
            if q1 in m:
                if m[q1] != q2:
                    return False
                continue
            if q2 in back:
                return False
            m[q1] = q2
            back[q2] = q1
            changed = True
    if len(m) != len(A1.states):
        return False
    if {m[q] for q in A1.final} != set(A2.final):
        return False
    return all(A1.target(sym, tuple(back[a] for a in args)) == back[next(iter(ts))]
               for (sym, args), ts in A2.delta.items() if all(a in back for a in args))


# ---------------------------------------------------------------------------
# Serialization

def to_json(A: TreeAutomaton) -> dict:
    names = {q: str(q) for q in A.states}
    return {
        "alphabet": dict(sorted(A.alphabet.items())),
        "states": [names[q] for q in A.states],
        "final": [names[q] for q in A.states if q in A.final],
        "delta": [{"symbol": s, "args": [names[a] for a in args], "to": names[q]} for s, args, q in A.transitions()],
        "labels": {names[q]: str(A.labels[q]) for q in A.states if q in A.labels},
    }


def from_json(data: dict | str) -> TreeAutomaton:
    if isinstance(data, str):
        data = json.loads(data)
    delta: dict[tuple[str, tuple], set] = defaultdict(set)
    for row in data["delta"]:
        delta[(row["symbol"], tuple(row["args"]))].add(row["to"])
    return TreeAutomaton(Alphabet(data["alphabet"]), data["states"], data["final"], delta,
                         data.get("labels", {}))


def _dot_id(q) -> str:
    return '"' + str(q).replace('"', '\\"') + '"'


def to_dot(A: TreeAutomaton, name: str = "A") -> str:
    """Graphviz text: finals drawn as double circles, arity >= 2 through a junction point."""
    lines = [f"digraph {name} {{", "  rankdir=BT;", '  node [shape=circle];']
    for q in A.states:
        shape = "doublecircle" if q in A.final else "circle"
        label = A.label(q).replace('"', '\\"')
        lines.append(f'  {_dot_id(q)} [shape={shape}, label="{label}"];')
    for n, (sym, args, q) in enumerate(A.transitions()):
        if not args:
            src = f'"in{n}"'
            lines.append(f'  {src} [shape=none, label=""];')
            lines.append(f'  {src} -> {_dot_id(q)} [label="{sym}"];')
        elif len(args) == 1:
            lines.append(f'  {_dot_id(args[0])} -> {_dot_id(q)} [label="{sym}"];')
        else:
            hub = f'"j{n}"'
            lines.append(f'  {hub} [shape=point];')
            for i, a in enumerate(args, 1):
                lines.append(f'  {_dot_id(a)} -> {hub} [arrowhead=none, label="{i}"];')
            lines.append(f'  {hub} -> {_dot_id(q)} [label="{sym}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def split_states(A: TreeAutomaton, copies: int = 2) -> TreeAutomaton:
    """A larger deterministic automaton for ``L(A)``: every state gets ``copies`` twins.

    Which twin a transition enters depends on the twins of its arguments, so
    every twin stays reachable whenever the original state has a transition
    of positive arity or more than one nullary way in.
    """
    if not A.deterministic:
        raise NotDeterministic("split_states needs a deterministic automaton")
    delta: dict[tuple[str, tuple], set] = {}
    for (sym, args), ts in A.delta.items():
        (q,) = ts
        for picks in itertools.product(range(copies), repeat=len(args)):
            src = tuple((a, c) for a, c in zip(args, picks))
            which = (sum(picks) + (1 if args else 0)) % copies
            delta[(sym, src)] = {(q, which)}
    states = [(q, c) for q in A.states for c in range(copies)]
    final = [(q, c) for q in A.final for c in range(copies)]
    labels = {(q, c): f"{A.label(q)}#{c}" for q in A.states for c in range(copies)}
    return trim(TreeAutomaton(A.alphabet, states, final, delta, labels))
