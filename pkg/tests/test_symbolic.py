import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from treequot.checks import all_trees, check_expr_tree_quotients, check_normalize, check_symbolic
from treequot.corpus import ALPHABET, ENTRIES, closed_entries, entry
from treequot.expressions import enumerate_expr, parse_expr
from treequot.symbolic import d_eps, d_symbol, d_tree, has_hole, normalize, nullable, quotient_expr, state_of
from treequot.tree_quotients import quotient_finite
from treequot.trees import Hole, parse_tree

L2 = "star[b](f(b, b) + h(a))"
L3 = "cstar(f(@1, b) + f(b, @1))"
L3p = "cstar(f(@2, b) + f(b, @2))"
L4 = f"comp({L3}; f(@1, {L3p}) + f({L3p}, @1))"
X1 = f"{{ comp(cstar(h(@1)); prod[b](comp({L3}; h(@1)), {L2})) }}"
X2 = f"{{ comp(cstar(h(@1)); prod[b]({L3}, {L2})) }}"
X3 = "{ cstar(h(@1)) }"


def E(text):
    return parse_expr(text, ALPHABET)


def S(text):
    return state_of(E(text))


def test_symbol_quotients_of_l2():
    s = S(L2)
    assert str(d_symbol("b", s, ALPHABET)) == f"{{ prod[b]({L3}, {L2}) }}"
    assert str(d_symbol("a", s, ALPHABET)) == f"{{ prod[b](comp({L3}; h(@1)), {L2}) }}"


def test_double_b_quotient_of_l2():
    # (L4 .b L2) o1 (L3 .b L2) is one of the two members
    got = d_symbol("b", d_symbol("b", S(L2), ALPHABET), ALPHABET)
    assert f"comp1(prod[b]({L4}, {L2}), prod[b]({L3}, {L2}))" in map(str, got)


def test_l3_and_l4():
    b3 = d_symbol("b", S(L3), ALPHABET)
    assert str(b3) == f"{{ {L4} }}"
    assert str(d_symbol("f", b3, ALPHABET)) == f"{{ {L3} }}"


def test_cstar_rules():
    h = S("cstar(h(@1))")
    assert str(d_symbol("h", h, ALPHABET)) == X3
    assert d_symbol("a", h, ALPHABET).is_empty


@pytest.mark.parametrize("tree, want", [
    ("a", X1), ("b", X2), ("h(a)", X2), ("f(b, b)", X2), ("h(b)", X3), ("h(h(b))", X3),
])
def test_tree_quotients_of_l1(tree, want):
    assert str(d_tree(parse_tree(tree, ALPHABET), S(entry("L1").text))) == want


def test_quotient_expr_shortcut():
    assert quotient_expr(parse_tree("b"), E(L2)) == d_symbol("b", S(L2), ALPHABET)


def test_nullable():
    assert S(X2[2:-2]).nullable
    assert not S(X1[2:-2]).nullable
    assert nullable(E("cstar(f(@1, a))"))
    assert not nullable(E("cstar(f(@2, a))"))
    assert not nullable(E("h(@1)"))
    assert nullable(E("inc[0](@1)")) and not nullable(E("inc[1](@1)"))


@pytest.mark.parametrize("name", [e.name for e in ENTRIES])
def test_nullable_matches_enumeration(name):
    e = entry(name).expr
    assert nullable(e) == (Hole(1) in enumerate_expr(e, 1))
    for sym in ALPHABET:
        s = d_symbol(sym, state_of(e), ALPHABET)
        assert s.nullable == (Hole(1) in enumerate_expr(s.expr, 1))


def test_has_hole_on_composition():
    assert has_hole(E("comp(cstar(h(@1)); @2)"), 2)
    assert not has_hole(E("comp(h(@1); @1)"), 1)


def test_normalize_examples():
    e = E(L2)
    assert normalize(E(f"{L2} + (prod[a](h(a), empty) + {L2})")) == normalize(e)
    assert normalize(E(f"inc[1]({L2})")) == normalize(e)
    assert str(normalize(E("comp(g(@1, @2); @1, @2)"))) == "g(@1, @2)"
    assert str(normalize(E("comp(cstar(h(@1)); cstar(h(@1)))"))) == "cstar(h(@1))"


def test_normalize_corpus():
    assert check_normalize(max_size=7) == []


def test_eps_quotient():
    s = S("f(@1, h(@2))")
    assert str(d_eps(2, s)) == "{ f(@2, h(@1)) }"
    assert d_eps(3, s).is_empty


def test_state_identity_is_canonical():
    assert S("h(a) + b") == S("b + h(a)")
    assert hash(S("h(a) + b")) == hash(S("b + h(a) + b"))
    assert str(state_of([], (1,))) == "{ }"


@pytest.mark.parametrize("name", [e.name for e in ENTRIES])
def test_symbol_quotients_match_enumeration(name):
    assert check_symbolic([entry(name)], max_size=8) == []


def test_tree_quotients_match_enumeration():
    assert check_expr_tree_quotients(max_size=7, per_entry=6) == []


CLOSED = closed_entries()


@given(st.sampled_from(CLOSED), st.sampled_from(CLOSED), st.sampled_from(sorted(ALPHABET)))
@settings(max_examples=40, deadline=None)
def test_quotient_distributes_over_union(e1, e2, sym):
    s1, s2 = state_of(e1.expr), state_of(e2.expr)
    union = state_of([e1.expr, e2.expr])
    left = d_symbol(sym, union, ALPHABET)
    right = state_of([*d_symbol(sym, s1, ALPHABET), *d_symbol(sym, s2, ALPHABET)], left.indices)
    assert left == right


_SMALL_TREES = all_trees(ALPHABET, 4)


@given(st.sampled_from(ENTRIES), st.sampled_from(_SMALL_TREES))
@settings(max_examples=80, deadline=None)
def test_tree_quotient_slices(en, t):
    n = 7
    got = enumerate_expr(d_tree(t, state_of(en.expr)).expr, n - t.size + 1)
    assert set(got) == set(quotient_finite(t, enumerate_expr(en.expr, n)))
