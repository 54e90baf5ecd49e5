"""A fixed set of expressions used by the property suites and the CLI ``check`` command.

Entries cover every operator, the worked example languages (``L1`` to ``L4``
and the three quotient states ``X1`` to ``X3``) and a few expressions with
free holes.  All of them are over :data:`ALPHABET`.
"""

from __future__ import annotations

from typing import NamedTuple

from .expressions import Expr, indices, parse_expr
from .trees import parse_alphabet

ALPHABET = parse_alphabet("f:2, g:2, h:1, a:0, b:0")

_L2 = "star[b](h(a) + f(b, b))"
_L3 = "cstar(f(@1, b) + f(b, @1))"
_L3p = "cstar(f(@2, b) + f(b, @2))"


class Entry(NamedTuple):
    name: str
    text: str

    @property
    def expr(self) -> Expr:
        return parse_expr(self.text, ALPHABET)

    @property
    def arity(self) -> int:
        return len(indices(self.expr))


ENTRIES: tuple[Entry, ...] = (
    Entry("L1", f"comp(cstar(h(@1)); {_L2})"),
    Entry("L2", _L2),
    Entry("L3", _L3),
    Entry("L4", f"comp({_L3}; f(@1, {_L3p}) + f({_L3p}, @1))"),
    Entry("X1", f"comp(cstar(h(@1)); prod[b](comp({_L3}; h(@1)), {_L2}))"),
    Entry("X2", f"comp(cstar(h(@1)); prod[b]({_L3}, {_L2}))"),
    Entry("X3", "cstar(h(@1))"),
    Entry("leaf", "a"),
    Entry("finite", "f(a, b) + h(h(a)) + g(b, b)"),
    Entry("apply_union", "f(a + b, h(a) + b)"),
    Entry("product", "prod[b](f(b, h(b)), a + h(a))"),
    Entry("product_self", "prod[b](g(b, a), b + h(b))"),
    Entry("star_g", "star[a](g(a, a) + h(b))"),
    Entry("star_nested", "star[b](h(star[a](f(a, b) + b)))"),
    Entry("star_product", "star[b](prod[a](h(a), b + f(a, a)))"),
    Entry("cstar_pair", "comp(cstar(h(@1) + g(@1, a)); b)"),
    Entry("cstar_nested", "comp(cstar(comp(cstar(h(@1)); f(@1, b))); a)"),
    Entry("comp_two", "comp(g(@1, @2); h(a) + b, star[a](h(a)))"),
    Entry("comp_swap", "comp(f(@2, @1); h(@1), @2)"),
    Entry("comp1_open", "comp1(f(@1, @2), h(@1) + g(@1, a))"),
    Entry("inc_open", "inc[1](g(@1, h(a)))"),
    Entry("cstar_shifted", "cstar(f(@2, a) + h(@2))"),
    Entry("holes_mixed", "f(@1, h(@2)) + g(@1, @2)"),
    Entry("empty_product", "prod[a](h(a), empty)"),
    Entry("cstar_sides", "comp(cstar(f(@1, a) + f(a, @1)); star[b](h(b) + a))"),
    Entry("product_of_star", "prod[a](star[b](g(b, a) + h(a)), b + g(a, a))"),
    Entry("cstar_star_arg", "comp(cstar(f(@1, star[b](h(b)))); a + b)"),
)


def entry(name: str) -> Entry:
    for e in ENTRIES:
        if e.name == name:
            return e
    raise KeyError(name)


def closed_entries() -> tuple[Entry, ...]:
    """Entries whose language has no holes (the ones automata are built for)."""
    return tuple(e for e in ENTRIES if e.arity == 0)
