"""Hypothesis strategies for trees and corpus expressions."""

from hypothesis import strategies as st

from treequot.trees import Hole, Node

SMALL = {"a": 0, "b": 0, "h": 1, "g": 2, "k": 3}

_MARK = Node("_hole", ())


def _shapes(with_holes: bool):
    leaves = st.sampled_from([Node("a", ()), Node("b", ())] + ([_MARK] if with_holes else []))
    return st.recursive(
        leaves,
        lambda kids: st.one_of(
            st.builds(lambda c: Node("h", (c,)), kids),
            st.builds(lambda x, y: Node("g", (x, y)), kids, kids),
            st.builds(lambda x, y, z: Node("k", (x, y, z)), kids, kids, kids),
        ),
        max_leaves=6,
    )


def _count(t):
    return 1 if t is _MARK else sum(_count(c) for c in t.children)


def _number(t, names):
    if t is _MARK:
        return Hole(next(names))
    if not t.children:
        return t
    return Node(t.symbol, tuple(_number(c, names) for c in t.children))


closed_trees = _shapes(False)


@st.composite
def linear_trees(draw, max_index: int = 8):
    """Trees whose holes carry distinct indices in arbitrary order."""
    shape = draw(_shapes(True))
    n = _count(shape)
    pool = draw(st.permutations(range(1, max(n, max_index) + 1)))
    return _number(shape, iter(pool[:n]))
