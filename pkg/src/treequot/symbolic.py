"""Bottom-up quotients computed on expressions.

A quotient state is a finite set of normalized expressions read as their
union.  ``d_symbol`` removes one occurrence of ``α(@1, ..., @n)`` from every
tree of the language, rule by rule over the operators; ``d_tree`` chains
those removals to quotient by an arbitrary tree.  Normalization is ACI on
unions plus the local rewrites listed on ``normalize``, and nothing else: two
states are the same state exactly when their canonical prints agree.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from functools import lru_cache

from .errors import AnalysisError, UnknownSymbol
from .expressions import (
    Apply, Comp, Comp1, CStar, Empty, Eps, Expr, IncEps, Product, Star, Union,
    indices, symbols_of, union_of,
)
from .tree_quotients import result_indices
from .trees import Hole, Node, Tree

__all__ = [
    "QuotientState", "state_of", "normalize", "shift", "compose_norm",
    "has_hole", "nullable", "d_symbol", "d_eps", "d_tree", "quotient_expr",
]


# ---------------------------------------------------------------------------
# Normalization

@lru_cache(maxsize=None)
def normalize(e: Expr) -> Expr:
    """Canonical representative of ``e`` under ACI and a few local rewrites.

    Unions are flattened, sorted and deduplicated; ``empty`` is the unit of
    union and absorbs application, composition and the left side of a
    product, and an empty right side removes the left trees that need it.
    Shifts are pushed to the leaves and disappear; compositions are
    flattened, pushed into symbol applications and unions, and dropped when
    they only rename holes identically.
    """
    if isinstance(e, (Eps, Empty)):
        return e
    if isinstance(e, Apply):
        kids = tuple(normalize(c) for c in e.children)
        if any(isinstance(c, Empty) for c in kids):
            return Empty(indices(e))
        return Apply(e.symbol, kids)
    if isinstance(e, Union):
        return _union(map(normalize, e.members), indices(e))
    if isinstance(e, Product):
        return _product(e.anchor, normalize(e.left), normalize(e.right))
    if isinstance(e, Star):
        body = normalize(e.body)
        if isinstance(body, Empty):
            return Apply(e.anchor, ())
        return Star(e.anchor, body)
    if isinstance(e, CStar):
        return _cstar(normalize(e.body))
    if isinstance(e, IncEps):
        return shift(e.shift, normalize(e.body))
    if isinstance(e, Comp):
        indices(e)
        return compose_norm(normalize(e.head), tuple(normalize(a) for a in e.args))
    if isinstance(e, Comp1):
        left = normalize(e.left)
        rest = tuple(Eps(j) for j in indices(left)[1:])
        indices(e)
        return compose_norm(left, (normalize(e.right), *rest))
    raise TypeError(f"not an expression: {e!r}")


def _union(members: Iterable[Expr], idx) -> Expr:
    flat = []
    for m in members:
        if isinstance(m, Union):
            flat.extend(m.members)
        elif not isinstance(m, Empty):
            flat.append(m)
    return union_of(flat, idx)


def _product(b: str, left: Expr, right: Expr) -> Expr:
    if isinstance(left, Empty):
        return left
    if b not in symbols_of(left):
        return left
    if isinstance(right, Empty):
        # the product distributes over the left union; trees holding b have nothing to take
        parts = left.members if isinstance(left, Union) else (left,)
        kept = [m if b not in symbols_of(m) else Product(b, m, right) for m in parts if not _always_has(b, m)]
        return _union(kept, indices(left))
    return Product(b, left, right)


def _always_has(b: str, e: Expr) -> bool:
    """Conservative test that every tree of ``e`` contains the leaf ``b``."""
    if isinstance(e, Apply):
        return e.symbol == b or any(_always_has(b, c) for c in e.children)
    if isinstance(e, Union):
        return all(_always_has(b, m) for m in e.members)
    return False


def _cstar(body: Expr) -> Expr:
    (x,) = indices(body)
    hole = Eps(x)
    if isinstance(body, Empty) or body == hole:
        return hole
    if isinstance(body, Union) and hole in body.members:
        body = _union([m for m in body.members if m != hole], (x,))
        if body == hole:
            return hole
    return CStar(body)


@lru_cache(maxsize=None)
def shift(z: int, e: Expr) -> Expr:
    """``inc[z](e)`` for a normalized ``e``, with the shift pushed to the leaves."""
    if z == 0 or not indices(e):
        return e
    if isinstance(e, Eps):
        return Eps(e.index + z)
    if isinstance(e, Empty):
        return Empty(tuple(x + z for x in e.indices))
    if isinstance(e, Apply):
        return Apply(e.symbol, tuple(shift(z, c) for c in e.children))
    if isinstance(e, Union):
        return union_of((shift(z, m) for m in e.members), ())
    if isinstance(e, Product):
        return Product(e.anchor, shift(z, e.left), e.right)
    if isinstance(e, Comp):
        return Comp(e.head, tuple(shift(z, a) for a in e.args))
    if isinstance(e, Comp1):
        return Comp1(shift(z, e.left), shift(z, e.right))
    if isinstance(e, CStar):
        return CStar(shift(z, e.body))
    raise TypeError(f"unexpected node in normal form: {e!r}")


def compose_norm(head: Expr, args: tuple[Expr, ...]) -> Expr:
    """Normal form of ``comp(head; args)`` for normalized operands."""
    return _compose(head, tuple(args))


@lru_cache(maxsize=None)
def _compose(head: Expr, args: tuple[Expr, ...]) -> Expr:
    idx = indices(head)
    if len(idx) != len(args):
        raise AnalysisError(f"head has {len(idx)} holes but {len(args)} arguments", Comp(head, args))
    if not args:
        return head
    out_idx = indices(Comp(head, args))
    if isinstance(head, Empty) or any(isinstance(a, Empty) for a in args):
        return Empty(out_idx)
    if all(a == Eps(j) for a, j in zip(args, idx)):
        return head
    table = dict(zip(idx, args))
    if isinstance(head, Eps):
        return args[0]
    if isinstance(head, Apply):
        return Apply(head.symbol, tuple(_compose(c, tuple(table[j] for j in indices(c))) for c in head.children))
    if isinstance(head, Union):
        return _union((_compose(m, args) for m in head.members), out_idx)
    if isinstance(head, (Comp, Comp1)):
        if isinstance(head, Comp1):
            inner_head = head.left
            inner = (head.right, *(Eps(j) for j in indices(head.left)[1:]))
        else:
            inner_head, inner = head.head, head.args
        regrouped = tuple(_compose(a, tuple(table[j] for j in indices(a))) for a in inner)
        return _compose(inner_head, regrouped)
    if isinstance(head, Product):
        if not any(head.anchor in symbols_of(a) for a in args):
            return _product(head.anchor, _compose(head.left, args), head.right)
    if isinstance(head, CStar):
        (a,) = args
        if isinstance(a, Eps):
            return _cstar(_compose(head.body, args))
        if a == head:
            return head
        if isinstance(a, Comp) and a.head == head:
            # the closure absorbs itself
            return a
    if len(args) >= 2 and all(a == Eps(j) for a, j in zip(args[1:], idx[1:])):
        return Comp1(head, args[0])
    return Comp(head, args)


# ---------------------------------------------------------------------------
# Hole membership

@lru_cache(maxsize=None)
def has_hole(e: Expr, x: int) -> bool:
    """Whether the bare hole ``@x`` belongs to the language of ``e``."""
    if isinstance(e, Eps):
        return e.index == x
    if isinstance(e, (Apply, Star, Empty)):
        return False
    if isinstance(e, Union):
        return any(has_hole(m, x) for m in e.members)
    if isinstance(e, Product):
        return has_hole(e.left, x)
    if isinstance(e, CStar):
        return indices(e.body) == (x,)
    if isinstance(e, IncEps):
        return x > e.shift and has_hole(e.body, x - e.shift)
    if isinstance(e, (Comp, Comp1)):
        head, first = (e.head, e.args[0]) if isinstance(e, Comp) else (e.left, e.right)
        idx = indices(head)
        return len(idx) == 1 and has_hole(head, idx[0]) and has_hole(first, x)
    raise TypeError(f"not an expression: {e!r}")


# ---------------------------------------------------------------------------
# Quotient states

class QuotientState:
    """A finite union of normalized expressions, kept in canonical order."""

    __slots__ = ("members", "indices", "_text", "_hash", "_nullable")

    def __init__(self, members: Iterable[Expr], idx: Iterable[int]):
        ms = set()
        for m in members:
            if isinstance(m, Union):
                ms.update(m.members)
            elif not isinstance(m, Empty):
                ms.add(m)
        self.indices = tuple(idx)
        for m in ms:
            if indices(m) != self.indices:
                raise AnalysisError(f"state member has indices {list(indices(m))}, expected {list(self.indices)}", m)
        self.members = tuple(sorted(ms, key=str))
        self._text = None
        self._hash = hash((self.members, self.indices))
        self._nullable = None

    @property
    def expr(self) -> Expr:
        return union_of(self.members, self.indices)

    @property
    def is_empty(self) -> bool:
        return not self.members

    @property
    def nullable(self) -> bool:
        if self._nullable is None:
            self._nullable = any(has_hole(m, 1) for m in self.members)
        return self._nullable

    def __eq__(self, other):
        return isinstance(other, QuotientState) and self.members == other.members and self.indices == other.indices

    def __hash__(self):
        return self._hash

    def __lt__(self, other: QuotientState) -> bool:
        return str(self) < str(other)

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def __str__(self):
        if self._text is None:
            self._text = "{ " + " ; ".join(map(str, self.members)) + (" }" if self.members else "}")
        return self._text

    def __repr__(self):
        return f"QuotientState({self})"


def state_of(exprs: Expr | Iterable[Expr], idx: Iterable[int] | None = None) -> QuotientState:
    """Normalize and collect ``exprs`` into a state; ``idx`` is needed only when all are empty."""
    if isinstance(exprs, Expr):
        exprs = [exprs]
    normed = [normalize(e) for e in exprs]
    if idx is None:
        if not normed:
            raise ValueError("an empty state needs an explicit index set")
        idx = indices(normed[0])
    return QuotientState(normed, idx)


def nullable(s: QuotientState | Expr) -> bool:
    """Whether ``@1`` belongs to the state's language."""
    if isinstance(s, Expr):
        return has_hole(normalize(s), 1)
    return s.nullable


# ---------------------------------------------------------------------------
# Quotient rules

def _empty(n: int, e: Expr) -> Empty:
    return Empty(result_indices(range(1, n + 1), indices(e)))


def _has_pattern_holes(n: int, e: Expr) -> bool:
    return set(range(1, n + 1)) <= set(indices(e))


@lru_cache(maxsize=None)
def _d(alpha: str, n: int, e: Expr) -> Expr:
    """Normalized expression for the quotient of normalized ``e`` by ``alpha(@1..@n)``."""
    if not _has_pattern_holes(n, e):
        return _empty(n, e)
    out_idx = result_indices(range(1, n + 1), indices(e))
    if isinstance(e, (Eps, Empty)):
        return Empty(out_idx)
    if isinstance(e, Union):
        return _union((_d(alpha, n, m) for m in e.members), out_idx)
    if isinstance(e, Apply):
        terms = []
        kids = e.children
        if e.symbol == alpha and len(kids) == n and all(has_hole(c, i + 1) for i, c in enumerate(kids)):
            terms.append(Eps(1))
        bumped = [shift(1, c) for c in kids]
        for j, c in enumerate(kids):
            if _has_pattern_holes(n, c):
                terms.append(normalize(Apply(e.symbol, (*bumped[:j], _d(alpha, n, c), *bumped[j + 1:]))))
        return _union(terms, out_idx)
    if isinstance(e, Product):
        b, left, right = e.anchor, e.left, e.right
        if alpha == b:
            return _comp1(_product(b, _d(b, 0, left), right), _d(b, 0, right))
        own = _product(b, _d(alpha, n, left), right)
        if n > 0:
            return own
        inside = _comp1(_product(b, _d(b, 0, left), right), _d(alpha, 0, right))
        return _union([own, inside], out_idx)
    if isinstance(e, Star):
        b, body = e.anchor, e.body
        chain = _cstar(_d(b, 0, body))
        if alpha == b:
            return _product(b, chain, e)
        return _product(b, compose_norm(chain, (_d(alpha, n, body),)), e)
    if isinstance(e, CStar):
        inner = compose_norm(e, (_d(alpha, n, e.body),))
        if n > 0:
            return inner
        return compose_norm(inner, (Eps(1), shift(1, e)))
    if isinstance(e, Comp1):
        rest = tuple(Eps(j) for j in indices(e.left)[1:])
        return _d(alpha, n, Comp(e.left, (e.right, *rest)))
    if isinstance(e, Comp):
        head, args = e.head, e.args
        head_idx = indices(head)
        bumped = [shift(1, a) for a in args]
        terms = []
        for j, a in enumerate(args):
            if _has_pattern_holes(n, a):
                terms.append(compose_norm(head, (*bumped[:j], _d(alpha, n, a), *bumped[j + 1:])))
        # the removed occurrence may sit in the head, with holes carrying @1..@n
        picks = []
        for l in range(1, n + 1):
            p = next((i for i, a in enumerate(args) if has_hole(a, l)), None)
            if p is None:
                break
            picks.append(p)
        else:
            pattern = Node(alpha, tuple(Hole(head_idx[p]) for p in picks))
            top = _d_tree(pattern, head)
            rest = tuple(bumped[i] for i in range(len(args)) if i not in picks)
            terms.append(compose_norm(top, (Eps(1), *rest)))
        return _union(terms, out_idx)
    if isinstance(e, IncEps):
        return _d(alpha, n, normalize(e))
    raise TypeError(f"not an expression: {e!r}")


def _comp1(left: Expr, right: Expr) -> Expr:
    rest = tuple(Eps(j) for j in indices(left)[1:])
    return compose_norm(left, (right, *rest))


def _d_eps(j: int, e: Expr) -> Expr:
    idx = indices(e)
    if j not in idx:
        return Empty(result_indices((j,), idx))
    return compose_norm(e, tuple(Eps(1) if x == j else Eps(x + 1) for x in idx))


@lru_cache(maxsize=None)
def _d_tree(t: Tree, e: Expr) -> Expr:
    e_idx = indices(e)
    if not set(t.indices) <= set(e_idx):
        return Empty(result_indices(t.indices, e_idx))
    if isinstance(t, Hole):
        return _d_eps(t.index, e)
    k = len(t.children)
    if t.children == tuple(Hole(i) for i in range(1, k + 1)):
        return _d(t.symbol, k, e)
    current = e
    for j in range(k, 0, -1):
        current = _d_tree(_inc_tree(k - j, t.children[j - 1]), current)
    current = _d(t.symbol, k, current)
    own = set(t.indices)
    leftovers = [y for y in e_idx if y not in own]
    if isinstance(current, Empty):
        return Empty(result_indices(t.indices, e_idx))
    return compose_norm(current, (Eps(1), *(Eps(y + 1) for y in leftovers)))


def _inc_tree(z: int, t: Tree) -> Tree:
    if isinstance(t, Hole):
        return Hole(t.index + z)
    if not t.hole_list or z == 0:
        return t
    return Node(t.symbol, tuple(_inc_tree(z, c) for c in t.children))


def _arity(symbol: str, alphabet: Mapping[str, int] | None, default: int | None = None) -> int:
    if alphabet is None:
        if default is None:
            raise UnknownSymbol(symbol)
        return default
    if symbol not in alphabet:
        raise UnknownSymbol(symbol)
    return alphabet[symbol]


def d_symbol(alpha: str, s: QuotientState, alphabet: Mapping[str, int]) -> QuotientState:
    """Quotient of the state's language by ``alpha(@1, ..., @n)``."""
    n = _arity(alpha, alphabet)
    out = result_indices(range(1, n + 1), s.indices)
    return QuotientState((_d(alpha, n, m) for m in s.members), out)


def d_eps(j: int, s: QuotientState) -> QuotientState:
    out = result_indices((j,), s.indices)
    return QuotientState((_d_eps(j, m) for m in s.members), out)


def d_tree(t: Tree, s: QuotientState) -> QuotientState:
    """Quotient of the state's language by an arbitrary linear tree ``t``."""
    out = result_indices(t.indices, s.indices)
    return QuotientState((_d_tree(t, m) for m in s.members), out)


def quotient_expr(t: Tree, e: Expr) -> QuotientState:
    """Shorthand for ``d_tree(t, state_of(e))``."""
    return d_tree(t, state_of(e))
