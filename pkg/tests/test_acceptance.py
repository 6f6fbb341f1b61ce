"""Acceptance criteria, one test each.

Every test records a pass/fail line; the lines are printed in the terminal
summary (see conftest) and when this file is run directly.
"""

import random
import statistics
import time
from contextlib import contextmanager

import pytest

from ecta.automaton import count_edges, denote_bounded, intersect, skeleton, union
from ecta.enumeration import AUDIT, enumerate_states, expand, expand_bounded, state_size
from ecta.examples import equal_pair, perfect_tree, typed_applications, typed_query
from ecta.generate import random_acyclic_ecta
from ecta.reduction import reduce_fixpoint
from ecta.sat import parse_dimacs, random_3cnf, solve, truth_table
from ecta.synth import SynthesisProblem, SynthStats, check_program, parse_type, sample_library, synthesize
from ecta.synth.check import format_program
from ecta.synth.search import program_of_term
from ecta.terms import parse_pcs, parse_term, pcs_consistent
from ecta.terms import _closed as closure_cache

RESULTS: list[str] = []

TARGET = "fromMaybe def (listToMaybe (catMaybes mbs))"
SAT_SEED = 2024


@contextmanager
def criterion(number: int, title: str):
    started = time.perf_counter()
    notes: dict[str, str] = {}
    try:
        yield notes
    except BaseException:
        RESULTS.append(f"criterion {number:2d} FAIL  {title}")
        raise
    extra = "".join(f", {k}={v}" for k, v in notes.items())
    RESULTS.append(f"criterion {number:2d} pass  {title} ({time.perf_counter() - started:.2f}s{extra})")


def sat_suite():
    rng = random.Random(SAT_SEED)
    for _ in range(200):
        yield random_3cnf(rng, rng.randint(3, 12), rng.randint(1, 30))


def sat_mismatches() -> list[int]:
    bad = []
    for i, f in enumerate(sat_suite()):
        found = solve(f, all_models=True)
        expanded = [x for a in found for x in a.expansions()]
        want = truth_table(f)
        if bool(found) != bool(want) or len(expanded) != len(set(expanded)) or set(expanded) != want:
            bad.append(i)
    return bad


@pytest.fixture(scope="module")
def synthesis_runs():
    """States explored by each mode until the target shows up."""
    problem = SynthesisProblem(sample_library(), parse_type("a -> [Maybe a] -> a"), max_size=5,
                               arg_names=["def", "mbs"])
    runs = {}
    for mode in ("full", "dynamic"):
        stats, emitted, found = SynthStats(), [], False
        t0 = time.perf_counter()
        for cand in synthesize(problem, mode=mode, stats=stats):
            emitted.append(cand)
            if str(cand) == TARGET:
                found = True
                break
        runs[mode] = dict(stats=stats, emitted=emitted, found=found, seconds=time.perf_counter() - t0)
    # a budget well above the dynamic count; exhausting it without the target is already "strictly more"
    budget = 4 * runs["dynamic"]["stats"].states_explored
    stats, found = SynthStats(), False
    for cand in synthesize(problem, mode="naive", stats=stats, max_states=budget):
        if str(cand) == TARGET:
            found = True
            break
    runs["naive"] = dict(stats=stats, found=found, budget=budget)
    return problem, runs


def test_criterion_01_pcs_consistency():
    with criterion(1, "PCS consistency worked example"):
        bad, good = parse_pcs("{0=1.0},{0.0=1}"), parse_pcs("{0.0=1.0}")
        assert not pcs_consistent(bad)
        assert pcs_consistent(good)
        timings = []
        for _ in range(50):
            for c in (bad, good):
                closure_cache.cache_clear()
                t0 = time.perf_counter()
                pcs_consistent(c)
                timings.append(time.perf_counter() - t0)
        assert statistics.median(timings) < 1e-3


def test_criterion_02_equal_pair():
    with criterion(2, "equal-pair automaton: 9 skeleton terms, 3 constrained"):
        n = equal_pair()
        assert len(denote_bounded(skeleton(n), 5)) == 9
        want = {parse_term(f"+(f({s}),f({s}))") for s in "abc"}
        assert denote_bounded(n, 5) == want
        assert {t for st in enumerate_states(n) for t in expand(st)} == want


def test_criterion_03_size_two_applications():
    with criterion(3, "size-two applications: {g x, h y}; reduction drops f"):
        n = typed_applications()
        terms = {t for st in enumerate_states(n) for t in expand(st)}
        # here an application is app(fun, arg) and each leaf name carries its types
        assert {f"{t.children[0].symbol} {t.children[1].symbol}" for t in terms} == {"g x", "h y"}
        reduced, _ = reduce_fixpoint(n)
        assert count_edges(reduced) == count_edges(n) - 1
        assert "f" not in {e.symbol for e in reduced.edges[0].children[0].edges}
        assert denote_bounded(reduced, 5) == denote_bounded(n, 5)


def test_criterion_04_query_reduction():
    with criterion(4, "query reduction leaves only g x"):
        reduced, _ = reduce_fixpoint(typed_query())
        terms = denote_bounded(skeleton(reduced), 6)
        assert len(terms) == 1
        assert format_program(program_of_term(next(iter(terms)))) == "g x"


def test_criterion_05_perfect_trees():
    with criterion(5, "perfect trees: one compact state, linear vs exponential size"):
        states = list(enumerate_states(perfect_tree(3)))
        assert len(states) == 1
        terms = list(expand(states[0]))
        assert len(terms) == 2 and all(t.size == 15 for t in terms)
        sizes = []
        for d in range(3, 9):
            (st,) = list(enumerate_states(perfect_tree(d)))
            sizes.append(state_size(st))
            assert {t.size for t in expand(st)} == {2 ** (d + 1) - 1}
        assert sizes == [3 * d + 1 for d in range(3, 9)]


def test_criterion_06_property_suite():
    with criterion(6, "500 random ECTAs: union, intersection, reduction, enumeration"):
        rng = random.Random(1)
        t0 = time.perf_counter()
        failures = []
        for i in range(500):
            a = random_acyclic_ecta(rng, max_nodes=7, max_pecs=3)
            b = random_acyclic_ecta(rng, max_nodes=7, max_pecs=3)
            da, db = denote_bounded(a, 4), denote_bounded(b, 4)
            ok = denote_bounded(union(a, b), 4) == da | db
            ok &= denote_bounded(intersect(a, b), 4) == da & db
            ok &= denote_bounded(reduce_fixpoint(a, algo="basic")[0], 4) == da
            ok &= denote_bounded(reduce_fixpoint(a, algo="optimized")[0], 4) == da
            enumerated = set()
            for st in enumerate_states(a):
                enumerated |= expand_bounded(st, 4)
            ok &= enumerated == da
            if not ok:
                failures.append(i)
        elapsed = time.perf_counter() - t0
        assert failures == []
        assert elapsed < 60


def test_criterion_07_sat():
    with criterion(7, "SAT: xor has two models; 200 random 3-CNFs match truth tables") as notes:
        xor = parse_dimacs("p cnf 2 2\n1 2 0\n-1 -2 0\n")
        assert {x for a in solve(xor, all_models=True) for x in a.expansions()} == {(True, False), (False, True)}
        # the wall-clock bound is for the solver; the audit re-runs this suite under criterion 10
        was = AUDIT.enabled
        AUDIT.enabled = False
        try:
            t0 = time.perf_counter()
            bad = sat_mismatches()
            elapsed = time.perf_counter() - t0
        finally:
            AUDIT.enabled = was
        notes["suite_seconds"] = f"{elapsed:.1f}"
        assert bad == []
        assert elapsed < 120


def test_criterion_08_synthesis(synthesis_runs):
    with criterion(8, f"synthesis finds '{TARGET}' in time, all candidates well-typed") as notes:
        problem, runs = synthesis_runs
        full = runs["full"]
        notes["search_seconds"] = f"{full['seconds']:.1f}"
        notes["candidates"] = str(len(full["emitted"]))
        assert full["found"]
        assert full["seconds"] < 60
        assert len(problem.library) <= 40
        for cand in full["emitted"]:
            assert check_program(cand.program, problem.library, problem.inputs, problem.goal), str(cand)


def test_criterion_09_ablation_order(synthesis_runs):
    with criterion(9, "states explored: naive > dynamic >= full") as notes:
        _, runs = synthesis_runs
        naive = runs["naive"]["stats"].states_explored
        dynamic = runs["dynamic"]["stats"].states_explored
        full = runs["full"]["stats"].states_explored
        notes.update(naive=str(naive), dynamic=str(dynamic), full=str(full))
        assert runs["dynamic"]["found"]
        assert naive > dynamic >= full, (naive, dynamic, full)


def test_criterion_10_termination_audit():
    with criterion(10, "termination measure decreases on every rule application") as notes:
        assert AUDIT.enabled
        before = AUDIT.checks
        assert sat_mismatches() == []
        assert AUDIT.checks > before
        assert AUDIT.violations == 0, AUDIT.last_violation
        assert AUDIT.mismatches == 0
        notes.update(checks=str(AUDIT.checks), violations=str(AUDIT.violations))


if __name__ == "__main__":
    import sys

    AUDIT.enabled = True
    code = pytest.main([__file__, "-q", "-p", "no:cacheprovider"])
    sys.exit(code)
