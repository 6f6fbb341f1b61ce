import random

import pytest

from ecta.automaton import denote_bounded, fvar, leaf, mk_edge, mk_node, mu
from ecta.enumeration import (
    AUDIT,
    SCHEDULES,
    BudgetExceeded,
    EnumStats,
    enumerate_states,
    enumerate_terms,
    expand,
    expand_bounded,
    format_state,
    initial_state,
    is_fully_enumerated,
    measure_decreased,
    multiset_greater,
    state_size,
    termination_measure,
)
from ecta.examples import equal_pair, perfect_tree, typed_applications
from ecta.generate import random_acyclic_ecta
from ecta.terms import parse_term
from collections import Counter


def polymorphic_application():
    """``g : a -> a`` over three base types next to ``h : Char -> Bool``."""
    ty = mk_node([mk_edge(s) for s in ("Int", "Char", "Bool")])
    unary = mk_node([mk_edge("g", [ty, ty], "{0=1}"), mk_edge("h", [leaf("Char"), leaf("Bool")])])
    scalar = mk_node([mk_edge("x", [leaf("Int")]), mk_edge("y", [leaf("Char")])])
    return mk_node([mk_edge("app", [unary, scalar], "{0.0=1.0}")])


def test_equal_pair_states_and_terms():
    states = list(enumerate_states(equal_pair()))
    terms = {t for s in states for t in expand(s)}
    assert terms == {parse_term(f"+(f({s}),f({s}))") for s in "abc"}


def test_typed_applications():
    got = {str(t) for t in enumerate_terms(typed_applications())}
    assert got == {"app(g(Int,Bool),x(Int))", "app(h(Char,Int),y(Char))"}


def test_shared_type_variable_is_enumerated_once():
    stats = EnumStats()
    states = list(enumerate_states(polymorphic_application(), stats=stats))
    got = sorted(str(t) for s in states for t in expand(s))
    assert got == ["app(g(Char,Char),y(Char))", "app(g(Int,Int),x(Int))", "app(h(Char,Bool),y(Char))"]
    assert len(states) == 3
    assert stats.yielded == 3 and stats.dead_branches >= 1
    assert "v⊤ ↦ app(g(" in format_state(states[0])


@pytest.mark.parametrize("depth", range(3, 9))
def test_perfect_tree_stays_compact(depth):
    states = list(enumerate_states(perfect_tree(depth)))
    assert len(states) == 1
    assert state_size(states[0]) == 3 * depth + 1
    terms = list(expand(states[0]))
    assert len(terms) == 2
    assert all(t.size == 2 ** (depth + 1) - 1 for t in terms)


def test_unconstrained_root_is_settled_immediately():
    n = mk_node([mk_edge(s) for s in "ab"])
    states = list(enumerate_states(n))
    assert len(states) == 1
    assert is_fully_enumerated(states[0])
    assert {str(t) for t in expand(states[0])} == {"a", "b"}


def test_recursive_node_expands_lazily():
    nat = mu("N", mk_node([mk_edge("z"), mk_edge("s", [fvar("N")])]))
    top = mk_node([mk_edge("p", [nat, nat], "{0=1}")])
    states = list(enumerate_states(top))
    terms = [t for s in states for t in expand(s, limit=5)]
    assert len(terms) == 5
    assert all(t.children[0] == t.children[1] for t in terms)
    bounded = set().union(*(expand_bounded(s, 4) for s in states))
    assert bounded == denote_bounded(top, 4)


def test_constraint_under_recursion_is_rejected():
    a = mk_node([mk_edge("a")])
    n = mu("N", mk_node([mk_edge("z"), mk_edge("h", [fvar("N"), a], "{0=1}")]))
    with pytest.raises(ValueError):
        list(enumerate_states(n))


@pytest.mark.parametrize("schedule", sorted(SCHEDULES))
def test_every_schedule_finds_the_same_terms(schedule):
    for seed in range(25):
        n = random_acyclic_ecta(random.Random(seed))
        got = set()
        for st in enumerate_states(n, schedule=schedule):
            got |= expand_bounded(st, 4)
        assert got == denote_bounded(n, 4), seed


def test_custom_schedule_callable():
    picks = []

    def last(state, candidates):
        picks.append(len(candidates))
        return candidates[-1]

    terms = {t for s in enumerate_states(equal_pair(), schedule=last) for t in expand(s)}
    assert len(terms) == 3 and picks


def test_unknown_schedule():
    with pytest.raises(ValueError):
        list(enumerate_states(equal_pair(), schedule="sideways"))


def test_limit_and_budget():
    assert len(list(enumerate_states(polymorphic_application(), limit=1))) == 1
    with pytest.raises(BudgetExceeded):
        list(enumerate_states(polymorphic_application(), max_states=2))


def test_multiset_order():
    assert multiset_greater(Counter({3: 1}), Counter({2: 5}))
    assert not multiset_greater(Counter({2: 1}), Counter({2: 1}))
    assert not multiset_greater(Counter({1: 1}), Counter({2: 1}))
    assert measure_decreased((Counter({3: 1}), Counter(), 0, 0), (Counter({2: 4}), Counter({9: 9}), 5, 5))
    assert measure_decreased((Counter(), Counter(), 2, 0), (Counter(), Counter(), 1, 7))


def test_measure_is_tracked_and_decreases():
    before = AUDIT.checks
    violations = AUDIT.violations
    states = list(enumerate_states(polymorphic_application()))
    assert AUDIT.checks > before
    assert AUDIT.violations == violations
    for st in states:
        assert tuple(st.measure) == termination_measure(st)
    heights, lengths, _, _ = termination_measure(initial_state(polymorphic_application()))
    assert sum(lengths.values()) == 0 and sum(heights.values()) == 1
