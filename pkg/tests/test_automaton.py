import random

import pytest

from ecta.automaton import (
    BOTTOM,
    count_edges,
    denote_bounded,
    fvar,
    inhabited,
    intersect,
    is_finitely_constrained,
    leaf,
    mk_edge,
    mk_node,
    mu,
    nodes_at,
    skeleton,
    union,
    unfold,
)
from ecta.generate import random_acyclic_ecta
from ecta.terms import parse_term


def abc():
    return mk_node([mk_edge(s) for s in "abc"])


def test_nodes_are_hash_consed():
    assert abc() is abc()
    assert mk_edge("f", [abc()]) is mk_edge("f", [abc()])
    assert mk_node([mk_edge("b"), mk_edge("a")]) is mk_node([mk_edge("a"), mk_edge("b")])


def test_inconsistent_or_out_of_range_constraints_give_no_edge():
    a = abc()
    assert mk_edge("h", [a, a], "{0=0.0}") is None
    assert mk_edge("h", [a, a], "{0=5}") is None
    assert mk_edge("h", [a, BOTTOM]) is None
    assert mk_node([None]).is_bottom


def test_edge_accepts_string_classes():
    a = abc()
    assert mk_edge("h", [a, a], ["0=1"]) is mk_edge("h", [a, a], "{0=1}")


def test_constrained_denotation():
    a = abc()
    pair = mk_node([mk_edge("h", [a, a], "{0=1}")])
    got = denote_bounded(pair, 3)
    assert got == {parse_term(f"h({s},{s})") for s in "abc"}
    assert len(denote_bounded(skeleton(pair), 3)) == 9


def test_union_and_intersection_on_leaves():
    ab = mk_node([mk_edge("a"), mk_edge("b")])
    bc = mk_node([mk_edge("b"), mk_edge("c")])
    assert denote_bounded(union(ab, bc), 2) == denote_bounded(abc(), 2)
    assert intersect(ab, bc) is leaf("b")
    assert intersect(ab, leaf("c")).is_bottom


def test_intersection_merges_constraints():
    a = abc()
    left = mk_node([mk_edge("h", [a, a], "{0=1}")])
    right = mk_node([mk_edge("h", [a, leaf("b")])])
    assert denote_bounded(intersect(left, right), 3) == {parse_term("h(b,b)")}


def test_recursive_node():
    nat = mu("N", mk_node([mk_edge("z"), mk_edge("s", [fvar("N")])]))
    terms = denote_bounded(nat, 4)
    assert parse_term("s(s(s(z)))") in terms and len(terms) == 4
    assert inhabited(nat)
    assert unfold(nat).kind != nat.kind
    assert is_finitely_constrained(nat)
    looping = mu("L", mk_node([mk_edge("s", [fvar("L")])]))
    assert not inhabited(looping)


def test_constraint_inside_recursion_is_not_finitely_constrained():
    a = abc()
    n = mu("N", mk_node([mk_edge("z"), mk_edge("h", [fvar("N"), a], "{0=1}")]))
    assert not is_finitely_constrained(n)


def test_nodes_at_path():
    a = abc()
    f = mk_node([mk_edge("f", [a])])
    top = mk_node([mk_edge("h", [f, a])])
    assert nodes_at(top, (0, 0)) == {a}
    assert nodes_at(top, (1, 0)) == frozenset()
    assert count_edges(top) == 5


@pytest.mark.parametrize("seed", range(40))
def test_union_and_intersection_match_set_operations(seed):
    rng = random.Random(seed)
    x, y = random_acyclic_ecta(rng), random_acyclic_ecta(rng)
    dx, dy = denote_bounded(x, 4), denote_bounded(y, 4)
    assert denote_bounded(union(x, y), 4) == dx | dy
    assert denote_bounded(intersect(x, y), 4) == dx & dy
