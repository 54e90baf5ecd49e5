"""Graded alphabets and ranked trees whose missing leaves are indexed holes.

A hole is written ``@j`` (j >= 1).  A tree with k holes is a k-ary tree; its
hole indices need not appear in left-to-right order, so ``f(@2, g(@1, @3))``
is a perfectly good ternary tree.  Composition always matches arguments to
holes in ascending index order.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from typing import NamedTuple, Union

from .errors import ArityError, MalformedTree, ParseError, UnknownSymbol

__all__ = [
    "Alphabet", "Hole", "Node", "Tree", "TreeSet", "Diagnostic",
    "leaf", "holes", "eps_indices", "compose", "compose1", "inc_eps",
    "validate", "parse_tree", "parse_alphabet", "subtrees", "replace_at",
]


# ---------------------------------------------------------------------------
# Alphabets

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

RESERVED = frozenset({"prod", "star", "comp", "comp1", "cstar", "inc", "empty", "alphabet"})


class Alphabet(Mapping):
    """Immutable mapping from symbol name to arity."""

    __slots__ = ("_arities",)

    def __init__(self, arities: Mapping[str, int] | Iterable[tuple[str, int]] = ()):
        table = dict(arities)
        for name, arity in table.items():
            if not isinstance(name, str) or not name:
                raise ValueError(f"bad symbol name {name!r}")
            if not isinstance(arity, int) or arity < 0:
                raise ValueError(f"bad arity {arity!r} for {name!r}")
        self._arities = table

    def arity(self, name: str) -> int:
        try:
            return self._arities[name]
        except KeyError:
            raise UnknownSymbol(name) from None

    def symbols(self, arity: int | None = None) -> list[str]:
        names = sorted(self._arities)
        if arity is None:
            return names
        return [n for n in names if self._arities[n] == arity]

    def nullary(self) -> list[str]:
        return self.symbols(0)

    @property
    def max_arity(self) -> int:
        return max(self._arities.values(), default=0)

    def extend(self, extra: Mapping[str, int]) -> Alphabet:
        table = dict(self._arities)
        for name, arity in extra.items():
            if table.get(name, arity) != arity:
                raise ArityError(f"symbol {name!r} redeclared with arity {arity}")
            table[name] = arity
        return Alphabet(table)

    def __getitem__(self, name: str) -> int:
        return self.arity(name)

    def __iter__(self) -> Iterator[str]:
        return iter(sorted(self._arities))

    def __len__(self) -> int:
        return len(self._arities)

    def __eq__(self, other) -> bool:
        if isinstance(other, Alphabet):
            return self._arities == other._arities
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self._arities.items()))

    def __repr__(self) -> str:
        return f"Alphabet({dict(sorted(self._arities.items()))!r})"

    def __str__(self) -> str:
        body = ", ".join(f"{n}:{self._arities[n]}" for n in self)
        return f"alphabet {{ {body} }}"


# ---------------------------------------------------------------------------
# Trees

@dataclass(frozen=True, slots=True)
class Hole:
    index: int
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not isinstance(self.index, int) or self.index < 1:
            raise MalformedTree(f"hole index must be >= 1, got {self.index!r}")
        object.__setattr__(self, "_hash", hash(("@", self.index)))

    def __hash__(self) -> int:
        return self._hash

    @property
    def size(self) -> int:
        return 1

    @property
    def hole_list(self) -> tuple[int, ...]:
        return (self.index,)

    @property
    def indices(self) -> tuple[int, ...]:
        return (self.index,)

    @property
    def linear(self) -> bool:
        return True

    @property
    def key(self) -> tuple:
        return (0, self.index)

    def __str__(self) -> str:
        return f"@{self.index}"

    def __lt__(self, other: Tree) -> bool:
        return self.key < other.key


@dataclass(frozen=True, slots=True)
class Node:
    symbol: str
    children: tuple = ()
    _hash: int = field(init=False, repr=False, compare=False)
    size: int = field(init=False, repr=False, compare=False)
    hole_list: tuple = field(init=False, repr=False, compare=False)
    indices: tuple = field(init=False, repr=False, compare=False)
    key: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        children = tuple(self.children)
        object.__setattr__(self, "children", children)
        object.__setattr__(self, "_hash", hash((self.symbol, children)))
        object.__setattr__(self, "size", 1 + sum(c.size for c in children))
        if children:
            hl = tuple(sorted(i for c in children for i in c.hole_list))
        else:
            hl = ()
        object.__setattr__(self, "hole_list", hl)
        object.__setattr__(self, "indices", tuple(sorted(set(hl))) if len(hl) > 1 else hl)
        object.__setattr__(self, "key", (1, self.symbol, tuple(c.key for c in children)))

    def __hash__(self) -> int:
        return self._hash

    @property
    def linear(self) -> bool:
        return len(self.hole_list) == len(self.indices)

    def __str__(self) -> str:
        if not self.children:
            return self.symbol
        return f"{self.symbol}({', '.join(map(str, self.children))})"

    def __lt__(self, other: Tree) -> bool:
        return self.key < other.key


Tree = Union[Hole, Node]


def leaf(symbol: str) -> Node:
    return Node(symbol, ())


def holes(*indices: int) -> tuple[Hole, ...]:
    return tuple(Hole(i) for i in indices)


def eps_indices(t: Tree, strict: bool = True) -> tuple[int, ...]:
    """Sorted hole indices of ``t``.

    A repeated index makes the tree non-linear; that raises unless
    ``strict=False``, in which case the distinct indices are returned.
    """
    if strict and not t.linear:
        hl = t.hole_list
        dup = next(a for a, b in zip(hl, hl[1:]) if a == b)
        raise MalformedTree(f"hole @{dup} occurs twice in {t}")
    return t.indices


def arity_of(t: Tree) -> int:
    return len(t.indices)


def _substitute(t: Tree, table: Mapping[int, Tree]) -> Tree:
    if isinstance(t, Hole):
        return table.get(t.index, t)
    if not t.hole_list:
        return t
    return Node(t.symbol, tuple(_substitute(c, table) for c in t.children))


def compose(t: Tree, args: Sequence[Tree], allow_shared: bool = False) -> Tree:
    """Graft ``args[l]`` onto the l-th smallest hole index of ``t``.

    Every occurrence of a repeated index receives the same argument.  Arguments
    must have disjoint hole indices unless ``allow_shared`` is set, in which
    case the result may be non-linear.
    """
    idx = t.indices
    args = tuple(args)
    if len(args) != len(idx):
        raise ArityError(f"{t} has {len(idx)} holes but {len(args)} arguments were given")
    seen: set[int] = set()
    for a in args:
        own = a.indices
        if not allow_shared and seen.intersection(own):
            raise MalformedTree(f"composition arguments share hole indices {sorted(seen.intersection(own))}")
        seen.update(own)
    return _substitute(t, dict(zip(idx, args)))


def compose1(t: Tree, u: Tree) -> Tree:
    """Partial composition: graft ``u`` on the least hole, keep the others."""
    idx = t.indices
    if not idx:
        raise ArityError(f"partial composition needs a hole, {t} has none")
    return compose(t, (u, *holes(*idx[1:])))


def inc_eps(z: int, t: Tree) -> Tree:
    """Shift every hole index of ``t`` by ``z``."""
    if z == 0 or not t.hole_list:
        return t
    if isinstance(t, Hole):
        return Hole(t.index + z)
    return Node(t.symbol, tuple(inc_eps(z, c) for c in t.children))


def subtrees(t: Tree, path: tuple[int, ...] = ()) -> Iterator[tuple[tuple[int, ...], Tree]]:
    """Yield ``(path, subtree)`` for every position in preorder."""
    yield path, t
    if isinstance(t, Node):
        for i, c in enumerate(t.children):
            yield from subtrees(c, path + (i,))


def replace_at(t: Tree, path: Sequence[int], new: Tree) -> Tree:
    if not path:
        return new
    head, *rest = path
    kids = list(t.children)
    kids[head] = replace_at(kids[head], rest, new)
    return Node(t.symbol, tuple(kids))


class Diagnostic(NamedTuple):
    path: tuple[int, ...]
    message: str

    def __str__(self) -> str:
        where = "/".join(map(str, self.path)) or "root"
        return f"at {where}: {self.message}"


def validate(t: Tree, alphabet: Mapping[str, int]) -> list[Diagnostic]:
    """Check ``t`` against ``alphabet``; an empty list means the tree is valid."""
    out: list[Diagnostic] = []
    seen: dict[int, tuple[int, ...]] = {}
    for path, node in subtrees(t):
        if isinstance(node, Hole):
            if node.index in seen:
                out.append(Diagnostic(path, f"duplicate hole @{node.index} (first at {seen[node.index]})"))
            else:
                seen[node.index] = path
            continue
        if node.symbol not in alphabet:
            out.append(Diagnostic(path, f"undeclared symbol {node.symbol!r}"))
        elif alphabet[node.symbol] != len(node.children):
            out.append(Diagnostic(
                path, f"{node.symbol!r} has arity {alphabet[node.symbol]} but {len(node.children)} children"))
    return out


# ---------------------------------------------------------------------------
# Finite homogeneous tree sets

class TreeSet:
    """A finite homogeneous set of trees with an explicit hole-index set.

    Iteration follows the canonical tree order.
    """

    __slots__ = ("trees", "indices", "_sorted")

    def __init__(self, trees: Iterable[Tree] = (), indices: Iterable[int] | None = None):
        members = frozenset(trees)
        found = {t.indices for t in members}
        if len(found) > 1:
            raise MalformedTree(f"inhomogeneous tree set: index sets {sorted(found)}")
        if indices is None:
            if not members:
                raise MalformedTree("an empty TreeSet needs an explicit index set")
            idx = next(iter(found))
        else:
            idx = tuple(sorted(indices))
            if found and next(iter(found)) != idx:
                raise MalformedTree(f"members have indices {next(iter(found))}, declared {idx}")
        self.trees = members
        self.indices = idx
        self._sorted = None

    @property
    def arity(self) -> int:
        return len(self.indices)

    def sorted(self) -> list[Tree]:
        if self._sorted is None:
            self._sorted = sorted(self.trees, key=lambda t: t.key)
        return self._sorted

    def __iter__(self) -> Iterator[Tree]:
        return iter(self.sorted())

    def __len__(self) -> int:
        return len(self.trees)

    def __contains__(self, t) -> bool:
        return t in self.trees

    def __bool__(self) -> bool:
        return bool(self.trees)

    def __eq__(self, other) -> bool:
        if isinstance(other, TreeSet):
            return self.trees == other.trees and self.indices == other.indices
        if isinstance(other, (set, frozenset)):
            return self.trees == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.trees, self.indices))

    def __or__(self, other: TreeSet) -> TreeSet:
        if self.indices != other.indices:
            raise MalformedTree(f"union of index sets {self.indices} and {other.indices}")
        return TreeSet(self.trees | other.trees, self.indices)

    def filter(self, pred) -> TreeSet:
        return TreeSet((t for t in self.trees if pred(t)), self.indices)

    def up_to(self, max_size: int) -> TreeSet:
        return self.filter(lambda t: t.size <= max_size)

    def __str__(self) -> str:
        if not self.trees:
            return "{ }"
        return "{ " + " ; ".join(map(str, self)) + " }"

    def __repr__(self) -> str:
        return f"TreeSet({self}, indices={self.indices})"


# ---------------------------------------------------------------------------
# Text syntax

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<hole>@[0-9]+)
  | (?P<int>[0-9]+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[(),;\[\]+{}:])
""", re.VERBOSE)


class Token(NamedTuple):
    kind: str
    value: str
    pos: int


def tokenize(text: str) -> list[Token]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        if kind != "ws":
            out.append(Token(kind if kind != "punct" else m.group(), m.group(), pos))
        pos = m.end()
    out.append(Token("eof", "", len(text)))
    return out


class Scanner:
    """Cursor over a token list with positioned error reporting."""

    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def peek(self) -> Token:
        return self.tokens[self.i]

    def peek_at(self, k: int) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def accept(self, kind: str) -> Token | None:
        if self.peek.kind == kind:
            return self.next()
        return None

    def expect(self, kind: str) -> Token:
        tok = self.peek
        if tok.kind != kind:
            shown = tok.value or "end of input"
            raise ParseError(f"expected {kind!r}, found {shown!r}", self.text, tok.pos)
        return self.next()

    def error(self, message: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.peek
        return ParseError(message, self.text, tok.pos)

    def finish(self) -> None:
        if self.peek.kind != "eof":
            raise self.error(f"unexpected trailing input {self.peek.value!r}")


def _hole_index(sc: Scanner, tok: Token) -> int:
    j = int(tok.value[1:])
    if j < 1:
        raise sc.error("hole index 0 is not allowed", tok)
    return j


def _parse_tree(sc: Scanner, alphabet: Mapping[str, int] | None) -> Tree:
    tok = sc.peek
    if tok.kind == "hole":
        sc.next()
        return Hole(_hole_index(sc, tok))
    name = sc.expect("name")
    children: list[Tree] = []
    if sc.accept("("):
        children.append(_parse_tree(sc, alphabet))
        while sc.accept(","):
            children.append(_parse_tree(sc, alphabet))
        sc.expect(")")
    if alphabet is not None:
        if name.value not in alphabet:
            raise sc.error(f"undeclared symbol {name.value!r}", name)
        if alphabet[name.value] != len(children):
            raise sc.error(
                f"{name.value!r} has arity {alphabet[name.value]} but {len(children)} children", name)
    return Node(name.value, tuple(children))


def parse_tree(text: str, alphabet: Mapping[str, int] | None = None) -> Tree:
    """Parse ``f(@1, g(a, @2))``-style syntax; checks arities when given an alphabet.

    Repeated hole indices are accepted here; ``validate`` reports them.
    """
    sc = Scanner(text)
    t = _parse_tree(sc, alphabet)
    sc.finish()
    return t


def parse_alphabet(text: str) -> Alphabet:
    """Parse ``alphabet { a:0, f:2 }``; the ``alphabet`` keyword and braces are optional."""
    sc = Scanner(text)
    braced = False
    if sc.peek.kind == "name" and sc.peek.value == "alphabet":
        sc.next()
    if sc.accept("{"):
        braced = True
    table: dict[str, int] = {}
    while sc.peek.kind == "name":
        name = sc.next()
        sc.expect(":")
        arity = int(sc.expect("int").value)
        if name.value in table:
            raise sc.error(f"symbol {name.value!r} declared twice", name)
        if name.value in RESERVED:
            raise sc.error(f"{name.value!r} is a reserved word", name)
        table[name.value] = arity
        if not sc.accept(","):
            break
    if braced:
        sc.expect("}")
    sc.finish()
    return Alphabet(table)
