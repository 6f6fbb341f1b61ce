import random

import pytest

from ecta.sat import (
    CnfFormula,
    DimacsError,
    EncodeError,
    encode_cnf,
    format_dimacs,
    parse_dimacs,
    random_3cnf,
    solve,
    solve_detailed,
    truth_table,
)


def models(f, **kw):
    return {x for a in solve(f, all_models=True, **kw) for x in a.expansions()}


def test_exclusive_or_has_two_models():
    f = parse_dimacs("p cnf 2 2\n1 2 0\n-1 -2 0\n")
    found = solve(f, all_models=True)
    assert sorted(a.values for a in found) == [(False, True), (True, False)]
    assert models(f) == {(True, False), (False, True)}


def test_irrelevant_variables_are_left_open():
    f = CnfFormula(3, ((1,),))
    (a,) = solve(f, all_models=True)
    assert a[1] is True and a[2] is None and a[3] is None
    assert a.format() == "v 1 *2 *3 0"
    assert len(set(a.expansions())) == 4


def test_unsat():
    f = parse_dimacs("p cnf 1 2\n1 0\n-1 0\n")
    assert solve(f) == []
    assert not solve_detailed(f, all_models=True).satisfiable


def test_empty_formula_and_empty_clause():
    assert len(solve(CnfFormula(2, ()))) == 1
    assert solve(CnfFormula(2, ((),))) == []
    with pytest.raises(EncodeError):
        encode_cnf(CnfFormula(2, ()))


@pytest.mark.parametrize("text", [
    "1 2 0\n",
    "p cnf 2\n1 0\n",
    "p dnf 2 1\n1 0\n",
    "p cnf 2 1\n1 3 0\n",
    "p cnf 2 1\n1 x 0\n",
    "p cnf 2 1\n1 2\n",
    "p cnf 2 2\n1 2 0\n",
    "p cnf 2 1\np cnf 2 1\n1 0\n",
    "",
])
def test_dimacs_errors(text):
    with pytest.raises(DimacsError):
        parse_dimacs(text)


def test_dimacs_comments_and_roundtrip():
    f = parse_dimacs("c hello\np cnf 3 2\n1 -2\n 3 0 -1 0\n%\n0\n")
    assert f.clauses == ((1, -2, 3), (-1,))
    assert parse_dimacs(format_dimacs(f)) == f


@pytest.mark.parametrize("strategy, formulas, max_vars, max_clauses", [
    ("exclusive", 15, 6, 10),
    # re-solving the plain encoding is slow; keep its formulas small
    ("blocking", 6, 4, 4),
])
def test_strategies_agree_with_truth_table(strategy, formulas, max_vars, max_clauses):
    rng = random.Random(11)
    for _ in range(formulas):
        f = random_3cnf(rng, rng.randint(3, max_vars), rng.randint(1, max_clauses))
        assert models(f, strategy=strategy) == truth_table(f)


def test_exclusive_models_are_disjoint():
    rng = random.Random(5)
    for _ in range(10):
        f = random_3cnf(rng, 5, rng.randint(2, 8))
        expanded = [x for a in solve(f, all_models=True) for x in a.expansions()]
        assert len(expanded) == len(set(expanded))


def test_single_model_and_reduction():
    f = parse_dimacs("p cnf 3 3\n1 2 0\n-1 3 0\n-3 0\n")
    (a,) = solve(f)
    assert f.evaluate({i: bool(v) for i, v in enumerate(a.values, 1)})
    assert models(f, reduce_rounds=3) == truth_table(f)


def test_unknown_strategy():
    with pytest.raises(ValueError):
        solve_detailed(CnfFormula(1, ((1,),)), strategy="guess")
