"""Type-directed component synthesis on top of the automaton library."""

from importlib import resources

from ecta.synth.check import Apply, Name, Program, brute_force, check_program, format_program, infer
from ecta.synth.encode import (
    TAGGED,
    UNTAGGED,
    Encoding,
    TermSpace,
    app_edge,
    attach_query,
    build_any_node,
    build_term_space,
    constructor_table,
    encode_component,
    encode_type,
)
from ecta.synth.search import (
    MODES,
    Candidate,
    SynthesisProblem,
    SynthStats,
    programs_of_state,
    synthesize,
)
from ecta.synth.types import (
    Arrow,
    Component,
    TCon,
    TVar,
    TypeSyntaxError,
    UnsupportedType,
    format_type,
    parse_library,
    parse_type,
)


def sample_library_text() -> str:
    return resources.files("ecta.synth").joinpath("data/components.txt").read_text(encoding="utf-8")


def sample_library() -> list[Component]:
    return parse_library(sample_library_text())
