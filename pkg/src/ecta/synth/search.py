"""Size-iterating synthesis driver."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import product
from typing import Iterator, Optional, Sequence

from ecta.automaton import MU, Node, edges_of
from ecta.enumeration import (
    App,
    BudgetExceeded,
    EnumStats,
    EnumState,
    UNode,
    Var,
    ROOT,
    enumerate_states,
)
from ecta.reduction import ReductionReport, reduce_fixpoint
from ecta.terms import Term, pcs_satisfied
from ecta.synth.check import Apply, Name, Program, format_program
from ecta.synth.encode import (
    APP,
    QUERY,
    TAGGED,
    UNTAGGED,
    attach_query,
    build_term_space,
    encode_type,
)
from ecta.synth.types import Component, TypeExpr, arrow_spine, skolemize

MODES = ("full", "dynamic", "naive")
NAIVE_UNFOLD_DEPTH = 3
# reduction specializes term nodes per type context; past this edge growth it costs more than it saves
REDUCTION_GROWTH_LIMIT = 4.0


@dataclass
class SynthesisProblem:
    library: list[Component]
    query: TypeExpr
    max_size: int = 8
    arg_names: Optional[Sequence[str]] = None
    relevancy: bool = True
    tag: bool = True

    def __post_init__(self):
        if self.max_size < 1:
            raise ValueError("max_size must be at least 1")
        params, _ = arrow_spine(self.query)
        names = list(self.arg_names) if self.arg_names else [f"x{i + 1}" for i in range(len(params))]
        if len(names) != len(params):
            raise ValueError(f"query takes {len(params)} arguments but {len(names)} names were given")
        lib_names = {c.name for c in self.library}
        clash = [n for n in names if n in lib_names]
        if clash:
            raise ValueError(f"argument names clash with components: {', '.join(clash)}")
        self.arg_names = names

    @property
    def inputs(self) -> list[Component]:
        params, _ = arrow_spine(skolemize(self.query))
        return [Component(n, t) for n, t in zip(self.arg_names, params)]

    @property
    def goal(self) -> TypeExpr:
        return arrow_spine(skolemize(self.query))[1]


@dataclass(frozen=True)
class Candidate:
    program: Program
    size: int

    def __str__(self) -> str:
        return format_program(self.program)


@dataclass
class SynthStats:
    enum: EnumStats = field(default_factory=EnumStats)
    candidates: int = 0
    sizes_done: int = 0
    budget_exhausted: bool = False
    timed_out: bool = False
    reductions: list[ReductionReport] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def states_explored(self) -> int:
        return self.enum.states_explored

    @property
    def dead_branches(self) -> int:
        return self.enum.dead_branches

    def as_dict(self) -> dict[str, object]:
        return {
            "states_explored": self.states_explored,
            "dead_branches": self.dead_branches,
            "candidates": self.candidates,
            "sizes_done": self.sizes_done,
            "budget_exhausted": int(self.budget_exhausted),
            "timed_out": int(self.timed_out),
            "reduction_rounds": sum(r.rounds_run for r in self.reductions),
            "reduction_edges_removed": sum(r.edges_removed for r in self.reductions),
            "seconds": round(self.seconds, 3),
        }


def _programs_of_node(n: Node) -> Iterator[Program]:
    for e in edges_of(n):
        if e.symbol == APP:
            for f, a in product(list(_programs_of_node(e.children[1])),
                                list(_programs_of_node(e.children[2]))):
                yield Apply(f, a)
        else:
            yield Name(e.symbol)


def programs_of_state(state: EnumState) -> Iterator[Program]:
    """Programs described by a settled state; types are not expanded."""

    def go(t) -> list[Program]:
        while isinstance(t, Var):
            t = state.bindings[state.find(t.id)]
        if isinstance(t, UNode):
            return list(_programs_of_node(t.node))
        if t.symbol == APP:
            return [Apply(f, a) for f, a in product(go(t.children[1]), go(t.children[2]))]
        return [Name(t.symbol)]

    top = state.bindings[ROOT]
    if not (isinstance(top, App) and top.symbol == QUERY):
        raise ValueError("state is not rooted at a query")
    return iter(go(top.children[0]))


def program_of_term(t: Term) -> Program:
    if t.symbol == QUERY:
        return program_of_term(t.children[0])
    if t.symbol == APP:
        return Apply(program_of_term(t.children[1]), program_of_term(t.children[2]))
    return Name(t.symbol)


class _NaiveSearch:
    """Generate skeleton runs and throw away the ones that break a constraint."""

    def __init__(self, stats: SynthStats, max_states: Optional[int], deadline: Optional[float]):
        self.stats = stats
        self.max_states = max_states
        self.deadline = deadline

    def tick(self):
        es = self.stats.enum
        es.states_explored += 1
        if self.max_states is not None and es.states_explored > self.max_states:
            raise BudgetExceeded("state budget exhausted")
        if self.deadline is not None and es.states_explored % 1024 == 0 \
                and time.monotonic() > self.deadline:
            raise BudgetExceeded("deadline passed")

    def terms(self, n: Node, unfolds: int) -> Iterator[Term]:
        if n.kind == MU:
            if unfolds == 0:
                return
            unfolds -= 1
        for e in edges_of(n):
            for kids in self._tuples(e.children, 0, unfolds):
                self.tick()
                t = Term(e.symbol, kids)
                if not e.constraints or pcs_satisfied(e.constraints, t):
                    yield t
                else:
                    self.stats.enum.dead_branches += 1

    def _tuples(self, nodes, i: int, unfolds: int) -> Iterator[tuple]:
        if i == len(nodes):
            yield ()
            return
        for t in self.terms(nodes[i], unfolds):
            for rest in self._tuples(nodes, i + 1, unfolds):
                yield (t,) + rest


def synthesize(problem: SynthesisProblem, mode: str = "full", reduce_rounds: int = 30,
               schedule="fewest-live", growth_limit: Optional[float] = REDUCTION_GROWTH_LIMIT,
               stats: Optional[SynthStats] = None,
               max_states: Optional[int] = None, deadline: Optional[float] = None,
               min_size: int = 1) -> Iterator[Candidate]:
    """Yield well-typed programs of the query type, smallest sizes first.

    ``mode`` is ``full`` (static reduction, then enumeration), ``dynamic``
    (enumeration only) or ``naive`` (generate runs with recursive nodes
    unfolded at most three times, then filter).  Within a size, programs come
    in enumeration order and each is reported once.  Budget or deadline
    exhaustion ends the stream and is recorded in ``stats``.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; known: {', '.join(MODES)}")
    stats = stats if stats is not None else SynthStats()
    started = time.monotonic()
    enc = TAGGED if problem.tag else UNTAGGED
    inputs = problem.inputs
    space = build_term_space(problem.max_size, problem.library, inputs, problem.relevancy, enc,
                             extra_types=[problem.goal])
    goal = encode_type(problem.goal, space.any_node, enc)
    naive = _NaiveSearch(stats, max_states, deadline)
    try:
        for size in range(min_size, problem.max_size + 1):
            terms = space.full(size)
            if terms.is_bottom:
                stats.sizes_done += 1
                continue
            root = attach_query(terms, goal)
            seen: set[Program] = set()
            if mode == "naive":
                found = (program_of_term(t) for t in naive.terms(root, NAIVE_UNFOLD_DEPTH))
            else:
                if mode == "full" and reduce_rounds > 0:
                    root, report = reduce_fixpoint(root, reduce_rounds, growth_limit=growth_limit)
                    stats.reductions.append(report)
                found = _enumerate_programs(root, schedule, stats, max_states, deadline)
            for p in found:
                if p not in seen:
                    seen.add(p)
                    stats.candidates += 1
                    yield Candidate(p, size)
            stats.sizes_done += 1
    except BudgetExceeded as exc:
        if "deadline" in str(exc):
            stats.timed_out = True
        else:
            stats.budget_exhausted = True
    finally:
        stats.seconds += time.monotonic() - started


def _enumerate_programs(root: Node, schedule, stats: SynthStats, max_states, deadline) -> Iterator[Program]:
    if root.is_bottom:
        return
    for st in enumerate_states(root, schedule=schedule, stats=stats.enum, max_states=max_states,
                               deadline=deadline):
        yield from programs_of_state(st)
