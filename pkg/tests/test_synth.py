import random

import pytest

from ecta.automaton import MU, denote_bounded, edges_of, unfold
from ecta.synth import (
    Apply,
    Arrow,
    Component,
    Name,
    SynthesisProblem,
    SynthStats,
    TCon,
    TVar,
    TypeSyntaxError,
    UnsupportedType,
    brute_force,
    build_any_node,
    build_term_space,
    check_program,
    constructor_table,
    encode_component,
    format_program,
    format_type,
    parse_library,
    parse_type,
    sample_library,
    synthesize,
)
from ecta.synth.check import infer, program_names, program_size
from ecta.synth.encode import TAGGED, UNTAGGED
from ecta.synth.types import skolemize
from ecta.terms import PEC


# -- types ----------------------------------------------------------------------------

@pytest.mark.parametrize("text, shown", [
    ("a -> [Maybe a] -> a", "a -> [Maybe a] -> a"),
    ("(a -> b) -> [a] -> [b]", "(a -> b) -> [a] -> [b]"),
    ("forall a. Eq a => a -> Bool", "a -> Bool"),
    ("(Int, Bool)", "(Int, Bool)"),
    ("Either a (Maybe b)", "Either a (Maybe b)"),
])
def test_type_parse_and_format(text, shown):
    t = parse_type(text)
    assert format_type(t) == shown
    assert parse_type(format_type(t)) == t


def test_type_structure():
    t = parse_type("a -> [Int]")
    assert t == Arrow(TVar("a"), TCon("List", (TCon("Int", ()),)))


@pytest.mark.parametrize("text", ["a ->", "[Int", "Int Int)", "->"])
def test_type_syntax_errors(text):
    with pytest.raises(TypeSyntaxError):
        parse_type(text)


@pytest.mark.parametrize("text", ["m a -> m a", "(->) a b"])
def test_unsupported_types(text):
    with pytest.raises(UnsupportedType):
        parse_type(text)


def test_library_parser():
    lib = parse_library("-- comment\n(++) :: [a] -> [a] -> [a]\n\nx :: Int  # trailing\n")
    assert [c.name for c in lib] == ["++", "x"]
    with pytest.raises(ValueError):
        parse_library("x :: Int\nx :: Bool")
    with pytest.raises(ValueError):
        parse_library("no type here")


def test_sample_library():
    lib = sample_library()
    names = {c.name for c in lib}
    assert len(lib) <= 40
    assert {"fromMaybe", "listToMaybe", "catMaybes"} <= names


# -- encoding -------------------------------------------------------------------------

def test_any_node_has_one_transition_per_constructor_plus_arrow():
    cons = constructor_table([parse_type("Int -> [Maybe Int]")])
    assert cons == {"Int": 0, "List": 1, "Maybe": 1}
    any_node = build_any_node(cons)
    assert any_node.kind == MU
    assert sorted(e.symbol for e in edges_of(any_node)) == ["->", "Int", "List", "Maybe"]
    assert len(edges_of(unfold(any_node))) == 4


def test_any_node_over_nullary_constructors_alone():
    any_node = build_any_node({"Int": 0}, UNTAGGED)
    assert {str(t) for t in denote_bounded(any_node, 2)} == {"Int", "->(Int,Int)"}
    assert len(denote_bounded(any_node, 3)) == 5


def test_any_node_denotes_nested_types():
    any_node = build_any_node({"Int": 0, "List": 1, "Maybe": 1})
    got = {str(t) for t in denote_bounded(any_node, 3)}
    assert {"Int", "List(Int)", "Maybe(List(Int))"} <= got


def test_component_constraints_link_variable_occurrences():
    any_node = build_any_node({"Maybe": 1, "List": 1})
    e = encode_component(Component("listToMaybe", parse_type("[a] -> Maybe a")), any_node)
    assert list(e.constraints) == [PEC([(0, 1, 0), (0, 2, 0)])]
    m = encode_component(Component("map", parse_type("(a -> b) -> [a] -> [b]")), any_node)
    assert len(m.constraints) == 2
    plain = encode_component(Component("x", parse_type("Int")), build_any_node({"Int": 0}))
    assert not plain.constraints


def test_reserved_component_names():
    any_node = build_any_node({"Int": 0})
    with pytest.raises(ValueError):
        encode_component(Component("app", parse_type("Int")), any_node)


def test_relevancy_splits_nodes_by_input_subset():
    lib = parse_library("f :: Int -> Int -> Int")
    inputs = [Component("x", TCon("Int", ())), Component("y", TCon("Int", ()))]
    space = build_term_space(3, lib, inputs, relevancy=True)
    assert {s for (size, s) in space.nodes if size == 1} == {0, 1, 2}
    assert {s for (size, s) in space.nodes if size == 2} == {0, 1, 2, 3}
    flat = build_term_space(3, lib, inputs, relevancy=False)
    assert {s for (_, s) in flat.nodes} == {0}


# -- programs and the checking oracle ---------------------------------------------------

def test_program_helpers():
    p = Apply(Apply(Name("fromMaybe"), Name("def")), Name("x"))
    assert format_program(p) == "fromMaybe def x"
    assert format_program(Apply(Name("f"), Apply(Name("g"), Name("x")))) == "f (g x)"
    assert format_program(Apply(Name("++"), Name("xs"))) == "(++) xs"
    assert program_size(p) == 3
    assert program_names(p) == {"fromMaybe", "def", "x"}


def test_inference():
    env = {"fromMaybe": parse_type("a -> Maybe a -> a"), "x": TCon("Int", ())}
    assert infer(Apply(Name("fromMaybe"), Name("x")), env) == parse_type("Maybe Int -> Int")
    assert infer(Apply(Name("x"), Name("x")), env) is None
    loop = {"f": parse_type("a -> a"), "g": parse_type("(b -> b) -> b")}
    assert infer(Apply(Name("g"), Name("f")), loop) is not None


# -- synthesis --------------------------------------------------------------------------

def typed_application_library():
    return parse_library("f :: Bool -> Bool\ng :: Int -> Bool\nh :: Char -> Int\nx :: Int\ny :: Char")


def test_size_two_applications():
    problem = SynthesisProblem(typed_application_library(), parse_type("Bool"), max_size=2,
                               relevancy=False)
    got = {str(c) for c in synthesize(problem) if c.size == 2}
    assert got == {"g x"}
    problem = SynthesisProblem(typed_application_library(), parse_type("Int"), max_size=2,
                               relevancy=False)
    assert {str(c) for c in synthesize(problem) if c.size == 2} == {"h y"}


def test_argument_names_are_checked():
    lib = typed_application_library()
    with pytest.raises(ValueError):
        SynthesisProblem(lib, parse_type("Int -> Int"), arg_names=["a", "b"])
    with pytest.raises(ValueError):
        SynthesisProblem(lib, parse_type("Int -> Int"), arg_names=["x"])
    assert SynthesisProblem(lib, parse_type("Int -> Char -> Int")).arg_names == ["x1", "x2"]


def test_unknown_mode():
    problem = SynthesisProblem(typed_application_library(), parse_type("Bool"), max_size=2)
    with pytest.raises(ValueError):
        list(synthesize(problem, mode="psychic"))


def test_relevancy_requires_every_input():
    lib = parse_library("const :: a -> b -> a\nzero :: Int")
    problem = SynthesisProblem(lib, parse_type("Int -> Int"), max_size=3, arg_names=["n"])
    for c in synthesize(problem):
        assert "n" in program_names(c.program)
    loose = SynthesisProblem(lib, parse_type("Int -> Int"), max_size=3, arg_names=["n"], relevancy=False)
    assert "zero" in {str(c) for c in synthesize(loose)}


def test_tag_keeps_arrow_types_apart_from_data():
    lib = parse_library("Left :: a -> Either a b\nx :: Int\ny :: Int")
    goal = parse_type("Bool")
    tagged = SynthesisProblem(lib, goal, max_size=3, relevancy=False)
    untagged = SynthesisProblem(lib, goal, max_size=3, relevancy=False, tag=False)
    assert not list(synthesize(tagged))
    # without the tag an Either value can pose as a function type
    wrong = [str(c) for c in synthesize(untagged)]
    assert "Left x y" in wrong
    assert not check_program(parse_prog("Left x y"), lib, [], goal)


def parse_prog(text):
    words = text.split()
    p = Name(words[0])
    for w in words[1:]:
        p = Apply(p, Name(w))
    return p


def test_modes_find_the_same_programs():
    # naive generation is exponential in the unfolded types, so keep this tiny
    lib = parse_library("g :: Int -> Bool\nnot :: Bool -> Bool")
    problem = SynthesisProblem(lib, parse_type("Int -> Bool"), max_size=3, arg_names=["n"])
    results = {mode: {str(c) for c in synthesize(problem, mode=mode)} for mode in ("full", "dynamic", "naive")}
    assert results["full"] == results["dynamic"] == results["naive"] == {"g n", "not (g n)"}


def test_full_and_dynamic_agree_on_polymorphic_library():
    lib = parse_library("fromMaybe :: a -> Maybe a -> a\nJust :: a -> Maybe a\nhead :: [a] -> a")
    problem = SynthesisProblem(lib, parse_type("a -> [a] -> a"), max_size=5, arg_names=["d", "xs"])
    full = {str(c) for c in synthesize(problem)}
    assert full == {str(c) for c in synthesize(problem, mode="dynamic")}
    assert "fromMaybe (head xs) (Just d)" in full
    assert "fromMaybe d (Just (head xs))" in full


def test_stats_and_budget():
    problem = SynthesisProblem(sample_library(), parse_type("a -> [Maybe a] -> a"), max_size=5,
                               arg_names=["def", "mbs"])
    stats = SynthStats()
    out = list(synthesize(problem, mode="naive", stats=stats, max_states=2000))
    assert stats.budget_exhausted and not stats.timed_out
    assert stats.states_explored == 2001
    assert stats.as_dict()["budget_exhausted"] == 1
    assert all(check_program(c.program, problem.library, problem.inputs, problem.goal) for c in out)


def random_type(rng, depth=0):
    r = rng.random()
    if depth < 2 and r < 0.3:
        return f"({random_type(rng, depth + 1)} -> {random_type(rng, depth + 1)})"
    if depth < 2 and r < 0.45:
        return f"[{random_type(rng, depth + 1)}]"
    if depth < 2 and r < 0.55:
        return f"(Maybe {random_type(rng, depth + 1)})"
    return rng.choice(["Int", "Bool", "a", "b"])


@pytest.mark.parametrize("seed", range(8))
def test_random_polymorphic_libraries_are_sound_and_complete(seed):
    rng = random.Random(seed)
    pool = sample_library()
    lib = rng.sample(pool, rng.randint(3, 8))
    lib += parse_library("\n".join(f"c{i} :: {random_type(rng)}" for i in range(rng.randint(1, 7))))
    query = parse_type(rng.choice(["a -> a", "Int -> Bool", "[a] -> Maybe a", "a -> [a] -> a", "Int"]))
    problem = SynthesisProblem(lib, query, max_size=3)
    got = {}
    for c in synthesize(problem):
        assert check_program(c.program, lib, problem.inputs, problem.goal), str(c)
        got.setdefault(c.size, set()).add(c.program)
    for size in range(1, 4):
        assert got.get(size, set()) == brute_force(lib, problem.inputs, problem.goal, size), size


@pytest.mark.parametrize("seed", range(10))
def test_monomorphic_completeness(seed):
    rng = random.Random(100 + seed)

    def mono(d=0):
        r = rng.random()
        if d < 2 and r < 0.4:
            return f"({mono(d + 1)} -> {mono(d + 1)})"
        if d < 2 and r < 0.5:
            return f"[{mono(d + 1)}]"
        return rng.choice(["Int", "Bool", "Char"])

    lib = parse_library("\n".join(f"c{i} :: {mono()}" for i in range(rng.randint(1, 6))))
    query = parse_type(rng.choice(["Int", "Bool", "Int -> Bool", "Char -> Int"]))
    for relevancy in (True, False):
        problem = SynthesisProblem(lib, query, max_size=4, relevancy=relevancy)
        got = {}
        for c in synthesize(problem):
            got.setdefault(c.size, set()).add(c.program)
        for size in range(1, 5):
            want = brute_force(lib, problem.inputs, problem.goal, size, relevancy=relevancy)
            assert got.get(size, set()) == want


def test_goal_variables_are_rigid():
    lib = parse_library("zero :: Int")
    problem = SynthesisProblem(lib, parse_type("a -> a"), max_size=2)
    assert [str(c) for c in synthesize(problem)] == ["x1"]
    assert skolemize(parse_type("a")) != parse_type("a")
