"""Extended regular tree expressions.

Besides union and symbol application the language has the b-product
``prod[b](L, M)`` (substitute M for every leaf b of L), its closure
``star[b](L)``, composition ``comp(H; A1, ..., Ak)`` (graft the Ai on the
holes of H in ascending index order), partial composition ``comp1(L, M)``
(graft M on the least hole only), the composition closure ``cstar(L)`` of a
one-hole language, the hole shift ``inc[z](L)`` and the empty language
``empty[...]``.

``enumerate`` gives the exact finite slice of a language up to a size bound
and is the reference semantics every symbolic computation is tested against.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

from .errors import AnalysisError, ArityError
from .trees import RESERVED, Alphabet, Hole, Node, Scanner, Tree, TreeSet, inc_eps

__all__ = [
    "Expr", "Eps", "Apply", "Union", "Product", "Star", "Comp", "Comp1", "CStar", "IncEps", "Empty",
    "parse_expr", "infer_alphabet", "indices", "analyze", "HomogeneityReport", "enumerate_expr",
    "member", "reify_holes", "unreify", "symbols_of", "tree_to_expr", "union_of",
]


# ---------------------------------------------------------------------------
# AST

class Expr:
    """Base class.  Nodes are immutable, hash in O(1) and print canonically."""

    __slots__ = ()

    def __str__(self) -> str:
        text = self._text
        if text is None:
            text = self._render()
            object.__setattr__(self, "_text", text)
        return text

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self}>"

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: Expr) -> bool:
        return str(self) < str(other)

    def _render(self) -> str:
        raise NotImplementedError


def _node(cls):
    """Frozen slotted dataclass with a cached structural hash and lazy text."""
    cls.__annotations__["_hash"] = int
    cls.__annotations__["_text"] = "str | None"
    cls._hash = field(init=False, repr=False, compare=False)
    cls._text = field(init=False, repr=False, compare=False, default=None)
    cls = dataclass(frozen=True, slots=True, repr=False)(cls)
    cls.__hash__ = Expr.__hash__
    cls.__str__ = Expr.__str__
    cls.__repr__ = Expr.__repr__
    cls.__lt__ = Expr.__lt__
    return cls


@_node
class Eps(Expr):
    index: int

    def __post_init__(self):
        if not isinstance(self.index, int) or self.index < 1:
            raise AnalysisError(f"hole index must be >= 1, got {self.index!r}")
        object.__setattr__(self, "_hash", hash((Eps, self.index)))

    def _render(self):
        return f"@{self.index}"


@_node
class Apply(Expr):
    symbol: str
    children: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        object.__setattr__(self, "_hash", hash((Apply, self.symbol, self.children)))

    def _render(self):
        if not self.children:
            return self.symbol
        return f"{self.symbol}({', '.join(map(str, self.children))})"


@_node
class Union(Expr):
    members: tuple

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))
        if len(self.members) < 2:
            raise ValueError("a union needs at least two members")
        object.__setattr__(self, "_hash", hash((Union, self.members)))

    def _render(self):
        return " + ".join(map(str, self.members))


@_node
class Product(Expr):
    anchor: str
    left: Expr
    right: Expr

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((Product, self.anchor, self.left, self.right)))

    def _render(self):
        return f"prod[{self.anchor}]({self.left}, {self.right})"


@_node
class Star(Expr):
    anchor: str
    body: Expr

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((Star, self.anchor, self.body)))

    def _render(self):
        return f"star[{self.anchor}]({self.body})"


@_node
class Comp(Expr):
    head: Expr
    args: tuple

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        object.__setattr__(self, "_hash", hash((Comp, self.head, self.args)))

    def _render(self):
        if not self.args:
            return f"comp({self.head};)"
        return f"comp({self.head}; {', '.join(map(str, self.args))})"


@_node
class Comp1(Expr):
    left: Expr
    right: Expr

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((Comp1, self.left, self.right)))

    def _render(self):
        return f"comp1({self.left}, {self.right})"


@_node
class CStar(Expr):
    body: Expr

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((CStar, self.body)))

    def _render(self):
        return f"cstar({self.body})"


@_node
class IncEps(Expr):
    shift: int
    body: Expr

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((IncEps, self.shift, self.body)))

    def _render(self):
        return f"inc[{self.shift}]({self.body})"


@_node
class Empty(Expr):
    indices: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(sorted(self.indices)))
        object.__setattr__(self, "_hash", hash((Empty, self.indices)))

    def _render(self):
        if not self.indices:
            return "empty"
        return f"empty[{', '.join(map(str, self.indices))}]"


def tree_to_expr(t: Tree) -> Expr:
    if isinstance(t, Hole):
        return Eps(t.index)
    return Apply(t.symbol, tuple(tree_to_expr(c) for c in t.children))


def union_of(members: Iterable[Expr], idx: Iterable[int] = ()) -> Expr:
    """Union of ``members`` in canonical order; ``empty[idx]`` when there are none."""
    ms = sorted(set(members), key=str)
    if not ms:
        return Empty(tuple(idx))
    if len(ms) == 1:
        return ms[0]
    return Union(tuple(ms))


# ---------------------------------------------------------------------------
# Parsing

def _parse_union(sc: Scanner, alphabet) -> Expr:
    terms = [_parse_term(sc, alphabet)]
    while sc.accept("+"):
        terms.append(_parse_term(sc, alphabet))
    if len(terms) == 1:
        return terms[0]
    flat = []
    for t in terms:
        flat.extend(t.members if isinstance(t, Union) else (t,))
    return Union(tuple(flat))


def _anchor(sc: Scanner, alphabet) -> str:
    sc.expect("[")
    tok = sc.expect("name")
    sc.expect("]")
    if alphabet is not None:
        if tok.value not in alphabet:
            raise sc.error(f"undeclared symbol {tok.value!r}", tok)
        if alphabet[tok.value] != 0:
            raise sc.error(f"product anchor {tok.value!r} must be nullary", tok)
    return tok.value


def _parse_term(sc: Scanner, alphabet) -> Expr:
    tok = sc.peek
    if tok.kind == "hole":
        sc.next()
        j = int(tok.value[1:])
        if j < 1:
            raise sc.error("hole index 0 is not allowed", tok)
        return Eps(j)
    if sc.accept("("):
        e = _parse_union(sc, alphabet)
        sc.expect(")")
        return e
    name = sc.expect("name")
    kw = name.value
    if kw in RESERVED:
        if kw == "prod":
            b = _anchor(sc, alphabet)
            sc.expect("(")
            left = _parse_union(sc, alphabet)
            sc.expect(",")
            right = _parse_union(sc, alphabet)
            sc.expect(")")
            return Product(b, left, right)
        if kw == "star":
            b = _anchor(sc, alphabet)
            sc.expect("(")
            body = _parse_union(sc, alphabet)
            sc.expect(")")
            return Star(b, body)
        if kw == "comp":
            sc.expect("(")
            head = _parse_union(sc, alphabet)
            sc.expect(";")
            args = [_parse_union(sc, alphabet)]
            while sc.accept(","):
                args.append(_parse_union(sc, alphabet))
            sc.expect(")")
            return Comp(head, tuple(args))
        if kw == "comp1":
            sc.expect("(")
            left = _parse_union(sc, alphabet)
            sc.expect(",")
            right = _parse_union(sc, alphabet)
            sc.expect(")")
            return Comp1(left, right)
        if kw == "cstar":
            sc.expect("(")
            body = _parse_union(sc, alphabet)
            sc.expect(")")
            return CStar(body)
        if kw == "inc":
            sc.expect("[")
            z = int(sc.expect("int").value)
            sc.expect("]")
            sc.expect("(")
            body = _parse_union(sc, alphabet)
            sc.expect(")")
            return IncEps(z, body)
        if kw == "empty":
            idx = []
            if sc.accept("["):
                idx.append(int(sc.expect("int").value))
                while sc.accept(","):
                    idx.append(int(sc.expect("int").value))
                sc.expect("]")
            if len(set(idx)) != len(idx) or any(i < 1 for i in idx):
                raise sc.error("bad index list for empty", name)
            return Empty(tuple(idx))
        raise sc.error(f"{kw!r} is a reserved word", name)
    children = []
    if sc.accept("("):
        children.append(_parse_union(sc, alphabet))
        while sc.accept(","):
            children.append(_parse_union(sc, alphabet))
        sc.expect(")")
    if alphabet is not None:
        if kw not in alphabet:
            raise sc.error(f"undeclared symbol {kw!r}", name)
        if alphabet[kw] != len(children):
            raise sc.error(f"{kw!r} has arity {alphabet[kw]} but is applied to {len(children)}", name)
    return Apply(kw, tuple(children))


def parse_expr(text: str, alphabet: Mapping[str, int] | None = None) -> Expr:
    """Parse an expression; symbols are checked against ``alphabet`` when given."""
    sc = Scanner(text)
    e = _parse_union(sc, alphabet)
    sc.finish()
    return e


def infer_alphabet(*texts: str) -> Alphabet:
    """Read arities off symbol uses in expression/tree texts (anchors are nullary)."""
    table: dict[str, int] = {}

    def note(name: str, arity: int, tok, sc):
        if table.setdefault(name, arity) != arity:
            raise sc.error(f"{name!r} used with arities {table[name]} and {arity}", tok)

    for text in texts:
        sc = Scanner(text)
        toks = sc.tokens
        for i, tok in enumerate(toks):
            if tok.kind != "name" or tok.value in RESERVED:
                continue
            prev = toks[i - 1].kind if i else ""
            if prev == "[" and toks[i - 2].value in ("prod", "star"):
                note(tok.value, 0, tok, sc)
                continue
            if toks[i + 1].kind != "(":
                note(tok.value, 0, tok, sc)
                continue
            # count top-level commas inside the argument list
            depth, arity = 0, 1
            for t in toks[i + 1:]:
                if t.kind in ("(", "["):
                    depth += 1
                elif t.kind in (")", "]"):
                    depth -= 1
                    if depth == 0:
                        break
                elif t.kind == "," and depth == 1:
                    arity += 1
            note(tok.value, arity, tok, sc)
    return Alphabet(table)


# ---------------------------------------------------------------------------
# Static analysis

def _disjoint_union(parts, node) -> tuple[int, ...]:
    seen: set[int] = set()
    for p in parts:
        clash = seen.intersection(p)
        if clash:
            raise AnalysisError(f"hole index {min(clash)} used twice", node)
        seen.update(p)
    return tuple(sorted(seen))


@lru_cache(maxsize=None)
def indices(e: Expr) -> tuple[int, ...]:
    """Common hole-index set of every tree denoted by ``e``; raises if inhomogeneous."""
    if isinstance(e, Eps):
        return (e.index,)
    if isinstance(e, Apply):
        return _disjoint_union([indices(c) for c in e.children], e)
    if isinstance(e, Union):
        first = indices(e.members[0])
        for m in e.members[1:]:
            if indices(m) != first:
                raise AnalysisError(f"union of index sets {list(first)} and {list(indices(m))}", e)
        return first
    if isinstance(e, Product):
        if indices(e.right):
            raise AnalysisError("right operand of a product must have no holes", e)
        return indices(e.left)
    if isinstance(e, Star):
        if indices(e.body):
            raise AnalysisError("body of star must have no holes", e)
        return ()
    if isinstance(e, Comp):
        head = indices(e.head)
        if len(head) != len(e.args):
            raise AnalysisError(f"head has {len(head)} holes but {len(e.args)} arguments", e)
        return _disjoint_union([indices(a) for a in e.args], e)
    if isinstance(e, Comp1):
        left = indices(e.left)
        if not left:
            raise AnalysisError("partial composition needs a head with a hole", e)
        return _disjoint_union([indices(e.right), left[1:]], e)
    if isinstance(e, CStar):
        body = indices(e.body)
        if len(body) != 1:
            raise AnalysisError(f"cstar body must have exactly one hole, has {list(body)}", e)
        return body
    if isinstance(e, IncEps):
        if e.shift < 0:
            raise AnalysisError("negative shift", e)
        return tuple(x + e.shift for x in indices(e.body))
    if isinstance(e, Empty):
        return e.indices
    raise TypeError(f"not an expression: {e!r}")


def children_of(e: Expr) -> tuple[Expr, ...]:
    if isinstance(e, Apply):
        return e.children
    if isinstance(e, Union):
        return e.members
    if isinstance(e, Product):
        return (e.left, e.right)
    if isinstance(e, (Star, CStar, IncEps)):
        return (e.body,)
    if isinstance(e, Comp):
        return (e.head, *e.args)
    if isinstance(e, Comp1):
        return (e.left, e.right)
    return ()


class HomogeneityReport(NamedTuple):
    arity: int
    indices: tuple[int, ...]
    annotations: dict  # path -> index tuple


def analyze(e: Expr, alphabet: Mapping[str, int] | None = None) -> HomogeneityReport:
    """Check homogeneity rules everywhere in ``e`` and annotate every node."""
    notes: dict[tuple[int, ...], tuple[int, ...]] = {}

    def walk(node: Expr, path: tuple[int, ...]):
        for i, c in enumerate(children_of(node)):
            walk(c, path + (i,))
        if alphabet is not None:
            if isinstance(node, Apply):
                if node.symbol not in alphabet:
                    raise AnalysisError(f"undeclared symbol {node.symbol!r}", node)
                if alphabet[node.symbol] != len(node.children):
                    raise AnalysisError(f"arity mismatch for {node.symbol!r}", node)
            if isinstance(node, (Product, Star)):
                if alphabet.get(node.anchor) != 0:
                    raise AnalysisError(f"anchor {node.anchor!r} must be a declared nullary symbol", node)
        notes[path] = indices(node)

    walk(e, ())
    idx = notes[()]
    return HomogeneityReport(len(idx), idx, notes)


@lru_cache(maxsize=None)
def symbols_of(e: Expr) -> frozenset[str]:
    """Every symbol name mentioned in ``e``, anchors included."""
    own: set[str] = set()
    if isinstance(e, Apply):
        own.add(e.symbol)
    elif isinstance(e, (Product, Star)):
        own.add(e.anchor)
    for c in children_of(e):
        own |= symbols_of(c)
    return frozenset(own)


# ---------------------------------------------------------------------------
# Bounded enumeration

def _by_size(trees: Iterable[Tree]) -> dict[int, list[Tree]]:
    out: dict[int, list[Tree]] = defaultdict(list)
    for t in trees:
        out[t.size].append(t)
    return out


def _combine(choices: list[dict[int, list[Tree]]], budget: int):
    """All tuples picking one tree per slot with total size <= budget."""
    mins = [min(c) if c else None for c in choices]
    if any(m is None for m in mins):
        return
    suffix = [0] * (len(choices) + 1)
    for i in range(len(choices) - 1, -1, -1):
        suffix[i] = suffix[i + 1] + mins[i]
    if suffix[0] > budget:
        return

    def go(i: int, used: int, acc: tuple):
        if i == len(choices):
            yield acc
            return
        room = budget - used - suffix[i + 1]
        for size, trees in choices[i].items():
            if size <= room:
                for t in trees:
                    yield from go(i + 1, used + size, acc + (t,))

    yield from go(0, 0, ())


class _Enumerator:
    def __init__(self):
        self.memo: dict[tuple[Expr, int], frozenset[Tree]] = {}

    def run(self, e: Expr, n: int) -> frozenset[Tree]:
        if n < 1:
            return frozenset()
        key = (e, n)
        hit = self.memo.get(key)
        if hit is None:
            hit = frozenset(self._compute(e, n))
            self.memo[key] = hit
        return hit

    def _compute(self, e: Expr, n: int) -> set[Tree]:
        if isinstance(e, Eps):
            return {Hole(e.index)}
        if isinstance(e, Empty):
            return set()
        if isinstance(e, Apply):
            k = len(e.children)
            if k == 0:
                return {Node(e.symbol, ())}
            slots = [_by_size(self.run(c, n - k)) for c in e.children]
            return {Node(e.symbol, kids) for kids in _combine(slots, n - 1)}
        if isinstance(e, Union):
            out: set[Tree] = set()
            for m in e.members:
                out |= self.run(m, n)
            return out
        if isinstance(e, IncEps):
            return {inc_eps(e.shift, t) for t in self.run(e.body, n)}
        if isinstance(e, Product):
            fill = _by_size(self.run(e.right, n))
            out = set()
            for t in self.run(e.left, n):
                out |= _substitute_leaf(t, e.anchor, fill, n)
            return out
        if isinstance(e, Star):
            body = self.run(e.body, n)
            level = {Node(e.anchor, ())}
            while True:
                fill = _by_size(level)
                grown = set(level)
                for t in body:
                    grown |= _substitute_leaf(t, e.anchor, fill, n)
                if len(grown) == len(level):
                    return level
                level = grown
        if isinstance(e, Comp):
            return self._compose(self.run(e.head, n), [self.run(a, n) for a in e.args], n)
        if isinstance(e, Comp1):
            left = indices(e.left)
            args = [self.run(e.right, n)] + [frozenset({Hole(j)}) for j in left[1:]]
            return self._compose(self.run(e.left, n), args, n)
        if isinstance(e, CStar):
            (x,) = indices(e.body)
            body = self.run(e.body, n)
            level = {Hole(x)}
            frontier = set(level)
            while frontier:
                new = set()
                for s in frontier:
                    for l in body:
                        if s.size + l.size - 1 <= n:
                            c = _graft(s, {x: l})
                            if c not in level:
                                new.add(c)
                level |= new
                frontier = new
            return level
        raise TypeError(f"not an expression: {e!r}")

    def _compose(self, heads, arg_sets, n) -> set[Tree]:
        if not heads:
            return set()
        slots = [_by_size(a) for a in arg_sets]
        out = set()
        for h in heads:
            idx = h.indices
            budget = n - h.size + len(idx)
            for args in _combine(slots, budget):
                out.add(_graft(h, dict(zip(idx, args))))
        return out


def _graft(t: Tree, table: Mapping[int, Tree]) -> Tree:
    if isinstance(t, Hole):
        return table.get(t.index, t)
    if not t.hole_list:
        return t
    return Node(t.symbol, tuple(_graft(c, table) for c in t.children))


def _substitute_leaf(t: Tree, anchor: str, fill: dict[int, list[Tree]], budget: int) -> set[Tree]:
    """Every way to replace each ``anchor`` leaf of ``t`` by a tree from ``fill``."""
    memo: dict[tuple[Tree, int], set[Tree]] = {}

    def count(u: Tree) -> int:
        if isinstance(u, Hole):
            return 0
        if not u.children:
            return int(u.symbol == anchor)
        return sum(count(c) for c in u.children)

    def go(u: Tree, room: int) -> set[Tree]:
        key = (u, room)
        if key in memo:
            return memo[key]
        if isinstance(u, Hole) or count(u) == 0:
            res = {u} if u.size <= room else set()
        elif not u.children:
            res = {s for size, ts in fill.items() if size <= room for s in ts}
        else:
            slots = []
            for c in u.children:
                # each child grows from its own size at least, since fillers have size >= 1
                opts = go(c, room - 1 - (u.size - 1 - c.size))
                slots.append(_by_size(opts))
            res = {Node(u.symbol, kids) for kids in _combine(slots, room - 1)}
        memo[key] = res
        return res

    return go(t, budget)


def enumerate_expr(e: Expr, max_size: int) -> TreeSet:
    """Exactly the trees of the language of ``e`` with at most ``max_size`` nodes."""
    idx = indices(e)
    return TreeSet(_Enumerator().run(e, max_size), idx)


def member(t: Tree, e: Expr) -> bool:
    if t.indices:
        raise ArityError(f"membership is defined for trees without holes, got {t}")
    if indices(e):
        raise ArityError(f"membership needs a language without holes, got {e}")
    return t in _Enumerator().run(e, t.size)


# ---------------------------------------------------------------------------
# Hole reification

def hole_symbol(j: int) -> str:
    return f"⟨ε{j}⟩"


class _Reifier:
    def __init__(self):
        self.fresh = itertools.count(1)

    def run(self, e: Expr, name) -> Expr:
        if isinstance(e, Eps):
            return Apply(name(e.index), ())
        if isinstance(e, Apply):
            return Apply(e.symbol, tuple(self.run(c, name) for c in e.children))
        if isinstance(e, Union):
            return Union(tuple(self.run(m, name) for m in e.members))
        if isinstance(e, Product):
            return Product(e.anchor, self.run(e.left, name), self.run(e.right, name))
        if isinstance(e, Star):
            return Star(e.anchor, self.run(e.body, name))
        if isinstance(e, IncEps):
            return self.run(e.body, lambda j: name(j + e.shift))
        if isinstance(e, Empty):
            return Empty(())
        if isinstance(e, Comp1):
            left = indices(e.left)
            return self.run(Comp(e.left, (e.right, *(Eps(j) for j in left[1:]))), name)
        if isinstance(e, CStar):
            (x,) = indices(e.body)
            return Star(name(x), self.run(e.body, name))
        if isinstance(e, Comp):
            head_idx = indices(e.head)
            # hole arguments are plain renamings; everything else is anchored by a product
            renamed: dict[int, str] = {}
            anchored: list[tuple[int, Expr]] = []
            for j, a in zip(head_idx, e.args):
                if isinstance(a, Eps):
                    renamed[j] = name(a.index)
                else:
                    anchored.append((j, a))
            arg_holes = {x for _, a in anchored for x in indices(a)}
            arg_names = {name(x) for x in arg_holes} | set(renamed.values())
            for j, _ in anchored:
                anchor = name(j)
                if anchor in arg_names:
                    anchor = f"⟨φ{next(self.fresh)}⟩"
                renamed[j] = anchor
            body = self.run(e.head, lambda j: renamed[j])
            for j, a in sorted(anchored, key=lambda p: -p[0]):
                body = Product(renamed[j], body, self.run(a, name))
            return body
        raise TypeError(f"not an expression: {e!r}")


def reify_holes(e: Expr) -> tuple[Expr, dict[int, str]]:
    """Rewrite ``e`` with only union, application, product and star.

    Holes become fresh nullary symbols; the returned map sends each free hole
    index to its symbol.
    """
    indices(e)
    out = _Reifier().run(e, hole_symbol)
    return out, {j: hole_symbol(j) for j in indices(e)}


def unreify(t: Tree, mapping: Mapping[int, str]) -> Tree:
    back = {name: j for j, name in mapping.items()}

    def go(u: Tree) -> Tree:
        if isinstance(u, Node):
            if not u.children and u.symbol in back:
                return Hole(back[u.symbol])
            return Node(u.symbol, tuple(go(c) for c in u.children))
        return u

    return go(t)
