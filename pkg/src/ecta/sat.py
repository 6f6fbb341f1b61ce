"""Boolean satisfiability through ECTA enumeration.

Each clause becomes a node with one transition per literal.  A literal
transition carries its own copy of the assignment and a value leaf, tied
together by a constraint.  The top ``and`` transition equates the copies one
variable at a time, so a conflicting literal choice dies at the first
intersection instead of after a full assignment is built.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Optional

from ecta.automaton import Node, edges_of, leaf, mk_edge, mk_node
from ecta.enumeration import (
    App,
    EnumStats,
    EnumState,
    UNode,
    Var,
    ROOT,
    enumerate_states,
)
from ecta.reduction import ReductionReport, reduce_fixpoint
from ecta.terms import PEC, PCS

TRUE, FALSE = "true", "false"


class DimacsError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class EncodeError(ValueError):
    pass


@dataclass(frozen=True)
class CnfFormula:
    num_vars: int
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))
        for c in self.clauses:
            for lit in c:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise ValueError(f"literal {lit} out of range 1..{self.num_vars}")

    def evaluate(self, values: dict[int, bool]) -> bool:
        return all(any(values[abs(l)] == (l > 0) for l in c) for c in self.clauses)


@dataclass(frozen=True)
class Assignment:
    """Value per variable (1-based); ``None`` marks an irrelevant variable."""

    values: tuple[Optional[bool], ...]

    def __getitem__(self, var: int) -> Optional[bool]:
        return self.values[var - 1]

    def literals(self) -> list[int]:
        return [i if v else -i for i, v in enumerate(self.values, 1) if v is not None]

    def expansions(self) -> Iterator[tuple[bool, ...]]:
        """Every total assignment obtained by setting irrelevant variables both ways."""
        free = [i for i, v in enumerate(self.values) if v is None]
        for bits in itertools.product((False, True), repeat=len(free)):
            vals = list(self.values)
            for i, b in zip(free, bits):
                vals[i] = b
            yield tuple(vals)

    def format(self) -> str:
        parts = [(str(i) if v else f"-{i}") if v is not None else f"*{i}"
                 for i, v in enumerate(self.values, 1)]
        return "v " + " ".join(parts + ["0"])


def parse_dimacs(text: str) -> CnfFormula:
    num_vars = num_clauses = None
    clauses: list[tuple[int, ...]] = []
    current: list[int] = []
    last_line = 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        last_line = lineno
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            parts = line.split()
            if num_vars is not None:
                raise DimacsError(lineno, "duplicate header")
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(lineno, "malformed header, expected 'p cnf <vars> <clauses>'")
            try:
                num_vars, num_clauses = int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsError(lineno, "header counts must be integers") from None
            if num_vars < 0 or num_clauses < 0:
                raise DimacsError(lineno, "header counts must be non-negative")
            continue
        if num_vars is None:
            raise DimacsError(lineno, "clause before header")
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise DimacsError(lineno, f"bad literal {tok!r}") from None
            if lit == 0:
                clauses.append(tuple(current))
                current = []
            elif abs(lit) > num_vars:
                raise DimacsError(lineno, f"variable {abs(lit)} exceeds declared {num_vars}")
            else:
                current.append(lit)
    if num_vars is None:
        raise DimacsError(max(last_line, 1), "missing header")
    if current:
        raise DimacsError(last_line, "last clause is not terminated by 0")
    if len(clauses) != num_clauses:
        raise DimacsError(last_line, f"header declares {num_clauses} clauses, found {len(clauses)}")
    return CnfFormula(num_vars, tuple(clauses))


def format_dimacs(f: CnfFormula) -> str:
    lines = [f"p cnf {f.num_vars} {len(f.clauses)}"]
    lines += [" ".join(map(str, c + (0,))) for c in f.clauses]
    return "\n".join(lines) + "\n"


def encode_cnf(f: CnfFormula, exclusive: bool = False) -> Node:
    """Build the formula's automaton.

    With ``exclusive`` the transition for a clause's k-th literal also pins the
    earlier literals of that clause to false, so different runs never describe
    the same total assignment.  Every model then shows up in exactly one
    settled state.
    """
    if not f.clauses:
        raise EncodeError("nothing to encode: the formula has no clauses")
    if any(not c for c in f.clauses):
        raise EncodeError("the formula contains an empty clause")
    both = mk_node([mk_edge(TRUE), mk_edge(FALSE)])
    assignment = mk_node([mk_edge("assignment", [both] * f.num_vars)])
    value = {True: leaf(TRUE), False: leaf(FALSE)}
    clause_nodes = []
    for c in f.clauses:
        lits = list(dict.fromkeys(c))
        edges = []
        for k, l in enumerate(lits):
            kids = [assignment, value[l > 0]]
            classes = [PEC([(0, abs(l) - 1), (1,)])]
            if exclusive:
                for i, earlier in enumerate(lits[:k]):
                    kids.append(value[earlier < 0])
                    classes.append(PEC([(0, abs(earlier) - 1), (i + 2,)]))
            edges.append(mk_edge("lit", kids, classes))
        clause_nodes.append(mk_node(edges))
    per_var = [PEC([(j, 0, i) for j in range(len(f.clauses))]) for i in range(f.num_vars)]
    # a single clause leaves singleton classes, which only say the path exists
    return mk_node([mk_edge("and", clause_nodes, PCS(per_var))])


def read_assignment(state: EnumState, num_vars: int) -> Assignment:
    """Values from the first clause's copy of the assignment."""
    top = state.bindings[ROOT]
    lit = top.children[0]
    if isinstance(lit, Var):
        lit = state.bindings[state.find(lit.id)]
    assn = lit.children[0]
    if isinstance(assn, Var):
        assn = state.bindings[state.find(assn.id)]
    values: list[Optional[bool]] = []
    for child in assn.children:
        while isinstance(child, Var):
            child = state.bindings[state.find(child.id)]
        if isinstance(child, App):
            values.append(child.symbol == TRUE)
            continue
        syms = {e.symbol for e in edges_of(child.node)}
        values.append(None if len(syms) > 1 else TRUE in syms)
    if len(values) != num_vars:
        raise AssertionError("assignment arity does not match the formula")
    return Assignment(tuple(values))


@dataclass
class SolveResult:
    models: list[Assignment]
    stats: EnumStats = field(default_factory=EnumStats)
    reduction: Optional[ReductionReport] = None
    solves: int = 0

    @property
    def satisfiable(self) -> bool:
        return bool(self.models)


def _states(f: CnfFormula, reduce_rounds: int, result: SolveResult, schedule,
            exclusive: bool = False, deadline: Optional[float] = None) -> Iterator[EnumState]:
    node = encode_cnf(f, exclusive)
    if reduce_rounds > 0:
        node, result.reduction = reduce_fixpoint(node, reduce_rounds)
    return enumerate_states(node, schedule=schedule, stats=result.stats, deadline=deadline)


STRATEGIES = ("exclusive", "states", "blocking")


def solve_detailed(f: CnfFormula, all_models: bool = False, reduce_rounds: int = 0,
                   strategy: str = "exclusive", schedule="fewest-live",
                   deadline: Optional[float] = None) -> SolveResult:
    """Find one model, or all of them.

    All-models strategies:

    * ``exclusive`` enumerates the exclusive-literal encoding once; its settled
      states are disjoint partial models.
    * ``states`` enumerates the plain encoding and drops repeated models.  A
      model recurs once per combination of satisfied literals, so this is only
      practical on tiny formulas.
    * ``blocking`` re-solves the plain encoding, each time adding a clause that
      excludes the partial model just found.

    ``deadline`` (a ``time.monotonic`` value) raises
    :class:`~ecta.enumeration.BudgetExceeded` when passed.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}; known: {', '.join(STRATEGIES)}")
    result = SolveResult([])
    if any(not c for c in f.clauses):
        return result
    if not f.clauses:
        result.models.append(Assignment((None,) * f.num_vars))
        return result
    if not all_models:
        result.solves = 1
        for st in _states(f, reduce_rounds, result, schedule, deadline=deadline):
            result.models.append(read_assignment(st, f.num_vars))
            break
        return result
    if strategy in ("exclusive", "states"):
        result.solves = 1
        seen = set()
        for st in _states(f, reduce_rounds, result, schedule,
                              exclusive=strategy == "exclusive", deadline=deadline):
            a = read_assignment(st, f.num_vars)
            if a not in seen:
                seen.add(a)
                result.models.append(a)
        return result
    clauses = list(f.clauses)
    while True:
        result.solves += 1
        found = None
        for st in _states(CnfFormula(f.num_vars, tuple(clauses)), reduce_rounds, result, schedule,
                              deadline=deadline):
            found = read_assignment(st, f.num_vars)
            break
        if found is None:
            return result
        result.models.append(found)
        block = tuple(-l for l in found.literals())
        if not block:
            return result
        clauses.append(block)


def solve(f: CnfFormula, all_models: bool = False, reduce_rounds: int = 0,
          strategy: str = "exclusive") -> list[Assignment]:
    return solve_detailed(f, all_models, reduce_rounds, strategy).models


def truth_table(f: CnfFormula) -> set[tuple[bool, ...]]:
    """All satisfying total assignments by brute force."""
    out = set()
    for bits in itertools.product((False, True), repeat=f.num_vars):
        if f.evaluate({i + 1: b for i, b in enumerate(bits)}):
            out.add(bits)
    return out


def random_3cnf(rng, num_vars: int, num_clauses: int) -> CnfFormula:
    clauses = []
    for _ in range(num_clauses):
        vs = rng.sample(range(1, num_vars + 1), min(3, num_vars))
        clauses.append(tuple(v if rng.random() < 0.5 else -v for v in vs))
    return CnfFormula(num_vars, tuple(clauses))
