import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from treequot import automata as au
from treequot.corpus import ALPHABET, closed_entries, entry
from treequot.errors import ArityError, BudgetExhausted, NotDeterministic
from treequot.expressions import enumerate_expr, parse_expr
from treequot.symbolic import d_tree, state_of
from treequot.trees import Alphabet, parse_tree

DRAWN = {
    ("a", ()): {"X1"}, ("b", ()): {"X2"}, ("h", ("X1",)): {"X2"}, ("h", ("X2",)): {"X3"},
    ("h", ("X3",)): {"X3"}, ("f", ("X2", "X2")): {"X2"},
}


@pytest.fixture
def drawn():
    return au.TreeAutomaton(ALPHABET, ["X1", "X2", "X3"], ["X2", "X3"], DRAWN)


def T(text):
    return parse_tree(text, ALPHABET)


def slice_of(A, n):
    return {str(t) for t in au.language_slice(A, n)}


def expr_slice(e, n):
    return {str(t) for t in enumerate_expr(e, n)}


def test_runs(drawn):
    assert au.run_delta(drawn, T("f(b, h(a))")) == {"X2"}
    assert au.run_delta(drawn, T("h(h(b))")) == {"X3"}
    assert au.run_delta(drawn, T("f(a, b)")) == frozenset()
    assert au.accepts(drawn, T("h(b)")) and not au.accepts(drawn, T("a"))
    assert au.run_context(drawn, T("h(@1)"), "X1") == {"X2"}
    assert au.run_context(drawn, T("f(@1, b)"), "X2") == {"X2"}


def test_constructor_checks():
    with pytest.raises(ValueError):
        au.TreeAutomaton(ALPHABET, ["p"], ["q"], {})
    with pytest.raises(ValueError):
        au.TreeAutomaton(ALPHABET, ["p"], [], {("h", ("q",)): {"p"}})


def test_trim_drops_unreachable(drawn):
    delta = dict(DRAWN)
    delta[("h", ("dead",))] = {"X1"}
    A = au.TreeAutomaton(ALPHABET, ["X1", "X2", "X3", "dead"], ["X2", "X3"], delta)
    assert set(au.trim(A).states) == {"X1", "X2", "X3"}


def test_determinize_toy_nfa():
    # a reaches both states; the subsets {p, q}, {p} and {q} are the only accessible ones
    al = Alphabet({"a": 0, "b": 0, "h": 1})
    nfa = au.TreeAutomaton(al, ["p", "q"], ["q"], {("a", ()): {"p", "q"}, ("b", ()): {"q"}, ("h", ("p",)): {"p"}})
    assert not nfa.deterministic
    D = au.determinize(nfa)
    assert D.deterministic and len(D.states) == 3 and len(D.final) == 2
    assert slice_of(D, 6) == slice_of(nfa, 6) == {"a", "b"}


def test_determinize_of_dfa_is_isomorphic(drawn):
    assert au.isomorphic(au.determinize(drawn), au.trim(drawn))


def test_minimize_examples(drawn):
    M = au.minimize(drawn)
    assert len(M.states) == 3 and au.isomorphic(M, drawn)
    big = au.split_states(drawn, 2)
    assert len(big.states) == 5
    assert au.isomorphic(au.minimize(big), drawn)
    one = au.TreeAutomaton(Alphabet({"a": 0, "h": 1}), ["q"], ["q"], {("a", ()): {"q"}, ("h", ("q",)): {"q"}})
    assert au.isomorphic(au.minimize(one), one)


def test_minimize_rejects_nfa():
    nfa = au.TreeAutomaton(Alphabet({"a": 0}), ["p", "q"], ["q"], {("a", ()): {"p", "q"}})
    with pytest.raises(NotDeterministic):
        au.minimize(nfa)


def test_expr_to_nfa_slices():
    assert slice_of(au.expr_to_nfa(parse_expr("h(a)", ALPHABET), ALPHABET), 4) == {"h(a)"}
    l2 = entry("L2").expr
    assert slice_of(au.expr_to_nfa(l2, ALPHABET), 6) == expr_slice(l2, 6)


def test_l1_subset_pipeline_has_three_states(l1):
    assert len(au.minimize(au.determinize(au.expr_to_nfa(l1, ALPHABET))).states) == 3


def test_quotient_automaton_of_l1(l1, drawn):
    Q = au.build_quotient_automaton(l1, ALPHABET, budget=50)
    assert Q.deterministic
    assert au.isomorphic(au.minimize(Q), drawn)
    for q in Q.states:
        assert Q.labels[q] == d_tree(Q.witness[q], state_of(l1))
        assert (q in Q.final) == Q.labels[q].nullable


def test_quotient_automaton_small_cases():
    A = au.build_quotient_automaton(parse_expr("a", ALPHABET), ALPHABET)
    assert len(A.states) == 1 and A.final == set(A.states)
    assert au.accepts(A, T("a")) and not au.accepts(A, T("b"))
    E = au.build_quotient_automaton(entry("empty_product").expr, ALPHABET)
    assert E.states == () and not au.accepts(E, T("h(a)"))


def test_budget_exhausted(l1):
    with pytest.raises(BudgetExhausted) as info:
        au.build_quotient_automaton(l1, ALPHABET, budget=2)
    assert info.value.budget == 2 and info.value.frontier


def test_quotient_automaton_needs_closed_expr():
    with pytest.raises(ArityError):
        au.build_quotient_automaton(parse_expr("h(@1)", ALPHABET), ALPHABET)


def test_top_language_slices(drawn):
    assert str(au.top_language_slice(drawn, "X3", 3)) == "{ @1 ; h(@1) ; h(h(@1)) }"
    assert not au.top_language_slice(drawn, "X1", 1)
    assert str(au.top_language_slice(drawn, "X2", 1)) == "{ @1 }"
    assert au.quotient_via_automaton(drawn, T("a"), 4) == au.top_language_slice(drawn, "X1", 4)
    assert str(au.quotient_via_automaton(drawn, T("b"), 1)) == "{ @1 }"


def test_top_language_matches_symbolic(l1, drawn):
    for t in ("a", "b", "h(a)", "f(b, b)"):
        want = expr_slice(d_tree(T(t), state_of(l1)).expr, 5)
        assert {str(c) for c in au.quotient_via_automaton(drawn, T(t), 5)} == want


def test_identity_morphism(drawn):
    assert au.check_morphism(drawn, drawn, {q: q for q in drawn.states})


def test_collapse_breaks_transition_condition(drawn):
    # two states where f leads back to the non-final state
    Y = au.TreeAutomaton(ALPHABET, ["Y1", "Y2"], ["Y2"], {
        ("a", ()): {"Y1"}, ("b", ()): {"Y2"}, ("h", ("Y1",)): {"Y2"}, ("h", ("Y2",)): {"Y2"},
        ("f", ("Y2", "Y2")): {"Y1"},
    })
    phi = {"X1": "Y1", "X2": "Y2", "X3": "Y2"}
    assert not au.check_morphism(drawn, Y, phi)
    assert not au.check_morphism(drawn, Y, {"X1": "Y1"})
    assert not au.isomorphic(drawn, Y)


def test_compute_phi_from_redundant_dfa(l1, drawn):
    big = au.split_states(drawn, 2)
    phi = au.compute_phi(big, l1, ALPHABET)
    assert au.check_morphism(big, phi.target, phi)
    assert len(set(phi.mapping.values())) == 3


def test_compute_phi_rejects_nfa(l1):
    nfa = au.expr_to_nfa(l1, ALPHABET)
    if not nfa.deterministic:
        with pytest.raises(NotDeterministic):
            au.compute_phi(nfa, l1, ALPHABET)


def test_isomorphic_under_renaming(drawn):
    names = {"X1": 10, "X2": 20, "X3": 30}
    renamed = au.TreeAutomaton(ALPHABET, [30, 10, 20], [20, 30],
                               {(s, tuple(names[a] for a in args)): {names[q] for q in t}
                                for (s, args), t in DRAWN.items()})
    assert au.isomorphic(drawn, renamed)


def test_json_round_trip(drawn):
    data = au.to_json(drawn)
    assert set(data) >= {"alphabet", "states", "final", "delta"}
    back = au.from_json(json.dumps(data))
    assert au.isomorphic(back, drawn)
    assert au.to_json(back) == data


def test_dot_output(drawn):
    dot = au.to_dot(drawn)
    assert dot.startswith("digraph A {")
    assert '"X2" [shape=doublecircle' in dot and '"X1" [shape=circle' in dot
    assert "shape=point" in dot and '[label="f"]' in dot


@given(st.sampled_from(closed_entries()))
@settings(max_examples=25, deadline=None)
def test_pipelines_preserve_slices(en):
    e = en.expr
    want = expr_slice(e, 6)
    nfa = au.expr_to_nfa(e, ALPHABET)
    dfa = au.trim(au.determinize(nfa))
    for A in (nfa, dfa, au.minimize(dfa), au.build_quotient_automaton(e, ALPHABET)):
        assert slice_of(A, 6) == want
