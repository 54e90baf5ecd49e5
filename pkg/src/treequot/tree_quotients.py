"""Bottom-up quotients of concrete trees and finite tree sets.

``quotient_tree_by_tree(t, u)`` is the set of trees ``v`` with a fresh hole
``@1`` such that grafting ``t`` on ``@1`` (and mapping every other hole
``@(x+1)`` back to ``@x``) rebuilds ``u``.  Holes of ``u`` that are not holes of
``t`` therefore come out shifted by one.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping

from .errors import UnknownSymbol
from .trees import Hole, Node, Tree, TreeSet, compose, holes, inc_eps, replace_at, subtrees

__all__ = [
    "quotient_by_symbol", "quotient_by_eps", "quotient_tree_by_tree",
    "quotient_finite", "brute_force_quotient", "result_indices",
]


def result_indices(t_indices: Iterable[int], u_indices: Iterable[int]) -> tuple[int, ...]:
    """Index set of ``t^{-1}(u)``: ``{1}`` plus every leftover hole of ``u`` shifted by one."""
    own = set(t_indices)
    return (1, *(x + 1 for x in sorted(u_indices) if x not in own))


def _by_symbol(symbol: str, arity: int, t: Tree) -> list[Tree]:
    if isinstance(t, Hole):
        return []
    if len(t.indices) < arity or t.indices[:arity] != tuple(range(1, arity + 1)):
        # the pattern symbol(@1..@k) needs holes 1..k somewhere below
        return []
    if t.symbol == symbol and t.children == holes(*range(1, arity + 1)):
        return [Hole(1)]
    out = []
    shifted = [inc_eps(1, c) for c in t.children]
    for j, child in enumerate(t.children):
        for v in _by_symbol(symbol, arity, child):
            out.append(Node(t.symbol, (*shifted[:j], v, *shifted[j + 1:])))
    return out


def quotient_by_symbol(symbol: str, t: Tree, alphabet: Mapping[str, int]) -> TreeSet:
    """Remove one occurrence of ``symbol(@1, ..., @k)`` from ``t``."""
    if symbol not in alphabet:
        raise UnknownSymbol(symbol)
    k = alphabet[symbol]
    return _as_set(_by_symbol(symbol, k, t), range(1, k + 1), t.indices)


def _as_set(members, t_indices, u_indices) -> TreeSet:
    # non-linear inputs can leave extra holes behind, so trust the members when present
    members = set(members)
    if members:
        return TreeSet(members)
    return TreeSet((), result_indices(t_indices, u_indices))


def _by_eps(j: int, t: Tree) -> Tree | None:
    idx = t.indices
    if j not in idx:
        return None
    return compose(t, [Hole(1) if x == j else Hole(x + 1) for x in idx])


def quotient_by_eps(j: int, s: TreeSet) -> TreeSet:
    out = [v for v in (_by_eps(j, t) for t in s) if v is not None]
    return TreeSet(out, result_indices((j,), s.indices))


def _positional(t: Tree, u: Tree) -> set[Tree]:
    """Structural recursion for trees with repeated hole indices."""
    if u == t:
        return {Hole(1)}
    if isinstance(u, Hole):
        return set()
    out = set()
    shifted = [inc_eps(1, c) for c in u.children]
    for j, child in enumerate(u.children):
        for v in _positional(t, child):
            out.add(Node(u.symbol, (*shifted[:j], v, *shifted[j + 1:])))
    return out


def _tree_by_tree(t: Tree, u: Tree) -> set[Tree]:
    if not (t.linear and u.linear):
        # outside the linear setting the child-peeling chain is unsound
        return _positional(t, u)
    if isinstance(t, Hole):
        v = _by_eps(t.index, u)
        return set() if v is None else {v}
    k = len(t.children)
    if t.children == holes(*range(1, k + 1)):
        return set(_by_symbol(t.symbol, k, u))
    t_idx = t.indices
    u_idx = u.indices
    if not set(t_idx) <= set(u_idx):
        return set()
    # peel the children right to left; each earlier peel shifts later holes by one
    current = {u}
    for j in range(k, 0, -1):
        shifted = inc_eps(k - j, t.children[j - 1])
        current = {v for w in current for v in _tree_by_tree(shifted, w)}
        if not current:
            return set()
    current = {v for w in current for v in _by_symbol(t.symbol, k, w)}
    leftovers = [x for x in u_idx if x not in set(t_idx)]
    tail = (Hole(1), *holes(*(y + 1 for y in leftovers)))
    return {compose(v, tail) for v in current}


def quotient_tree_by_tree(t: Tree, u: Tree) -> TreeSet:
    """Bottom-up quotient of the single tree ``u`` by the tree ``t``."""
    return _as_set(_tree_by_tree(t, u), t.indices, u.indices)


def quotient_finite(t: Tree, s: TreeSet) -> TreeSet:
    """Quotient of a finite homogeneous set: the union of member quotients."""
    out: set[Tree] = set()
    for u in s:
        out |= _tree_by_tree(t, u)
    return _as_set(out, t.indices, s.indices)


def brute_force_quotient(t: Tree, u: Tree) -> TreeSet:
    """Reference quotient: try every position of ``u`` for an exact copy of ``t``.

    Shares no code with the inductive computation above beyond tree plumbing.
    """
    found = set()
    bumped = inc_eps(1, u)
    for path, sub in subtrees(u):
        if sub == t:
            found.add(replace_at(bumped, path, Hole(1)))
    return _as_set(found, t.indices, u.indices)
