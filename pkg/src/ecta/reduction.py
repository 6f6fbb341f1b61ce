"""Static reduction of path constraints by intersecting subautomata."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ecta.automaton import (
    MU,
    STORE,
    Edge,
    Node,
    count_edges,
    edges_of,
    intersect,
    intersect_all,
    mk_edge,
    mk_node,
    nodes_at,
    subautomaton_at,
)
from ecta.terms import PEC, Path


@dataclass(frozen=True)
class ReductionReport:
    rounds_run: int
    edges_removed: int
    converged: bool
    grew_too_large: bool = False


def intersect_at_path(n: Node, p: Path, m: Node) -> Node:
    """Replace every node reachable from ``n`` along ``p`` by its intersection with ``m``.

    Transitions too short for the next index are dropped.
    """
    p = tuple(p)
    if not p:
        return intersect(n, m)
    memo = STORE.table("intersect-at-path")
    key = (n.id, p, m.id)
    hit = memo.get(key)
    if hit is None:
        hit = memo[key] = mk_node(edge_intersect_at_path(e, p, m) for e in edges_of(n))
    return hit


def edge_intersect_at_path(e: Edge, p: Path, m: Node) -> Optional[Edge]:
    """Edge version of :func:`intersect_at_path`; ``None`` when the edge cannot survive."""
    p = tuple(p)
    if not p:
        raise ValueError("a transition has no node at the empty path")
    i = p[0]
    if i >= len(e.children):
        return None
    kid = intersect_at_path(e.children[i], p[1:], m)
    if kid is e.children[i]:
        return e
    kids = list(e.children)
    kids[i] = kid
    return mk_edge(e.symbol, kids, e.constraints)


def reduction_criterion_holds(e: Edge, c: PEC) -> bool:
    """Every node at one path of ``c`` meets the subautomaton at every other path."""
    subs = {p: subautomaton_at(e, p) for p in c.paths}
    for pi in c.paths:
        for n in nodes_at(e, pi):
            for pj in c.paths:
                if intersect(n, subs[pj]).is_bottom:
                    return False
    return True


def _apply(e: Optional[Edge], targets: list[tuple[Path, Node]]) -> Optional[Edge]:
    for p, m in targets:
        if e is None:
            return None
        e = edge_intersect_at_path(e, p, m)
    return e


def reduce_pec_basic(e: Edge, c: PEC) -> Optional[Edge]:
    """Intersect every path of ``c`` with the meet of all the subautomata at its paths."""
    meet = intersect_all(subautomaton_at(e, p) for p in c.paths)
    if meet.is_bottom:
        return None
    return _apply(e, [(p, meet) for p in c.paths])


def reduce_pec_optimized(e: Edge, c: PEC) -> Optional[Edge]:
    """Intersect each path only with the meet of the subautomata at the other paths.

    This avoids building the junk transitions the full meet would introduce.
    """
    paths = c.paths
    if len(paths) < 2:
        return e
    subs = [subautomaton_at(e, p) for p in paths]
    targets = []
    for i, p in enumerate(paths):
        m = intersect_all(s for j, s in enumerate(subs) if j != i)
        if m.is_bottom:
            return None
        targets.append((p, m))
    return _apply(e, targets)


REDUCERS = {"basic": reduce_pec_basic, "optimized": reduce_pec_optimized}


def reduce_edge(e: Edge, algo: str = "optimized") -> Optional[Edge]:
    """Reduce every constraint of ``e`` once, in canonical order."""
    reduce_pec = REDUCERS[algo]
    for c in e.constraints.classes:
        if e is None:
            break
        e = reduce_pec(e, c)
    return e


def reduce_round(n: Node, algo: str = "optimized") -> Node:
    """One bottom-up pass over the acyclic part of ``n``; recursive nodes are left alone."""
    memo: dict[int, Node] = {}

    def go(m: Node) -> Node:
        if m.kind == MU or not m.constrained:
            return m
        hit = memo.get(m.id)
        if hit is not None:
            return hit
        edges = []
        for e in m.edges:
            kids = [go(k) for k in e.children]
            if any(a is not b for a, b in zip(kids, e.children)):
                e = mk_edge(e.symbol, kids, e.constraints)
            if e is not None and e.constraints:
                e = reduce_edge(e, algo)
            edges.append(e)
        out = memo[m.id] = mk_node(edges)
        return out

    # an explicit stack would be needed only for very deep DAGs; the term spaces built here are shallow
    return go(n)


def reduce_fixpoint(n: Node, max_rounds: int = 30, algo: str = "optimized",
                    growth_limit: Optional[float] = None) -> tuple[Node, ReductionReport]:
    """Repeat reduction rounds until the node stops changing or ``max_rounds`` is hit.

    Reduction can specialize shared nodes per context and so grow the
    automaton.  With ``growth_limit`` the rounds also stop once the edge count
    exceeds that multiple of the starting count; every round preserves the
    denotation, so stopping early is safe.
    """
    if algo not in REDUCERS:
        raise ValueError(f"unknown reduction algorithm {algo!r}")
    before = count_edges(n)
    budget = None if growth_limit is None else growth_limit * max(before, 1)
    cur = n
    rounds = 0
    converged = grew = False
    while rounds < max_rounds:
        rounds += 1
        nxt = reduce_round(cur, algo)
        if nxt is cur:
            converged = True
            break
        cur = nxt
        if budget is not None and count_edges(cur) > budget:
            grew = True
            break
    return cur, ReductionReport(rounds, before - count_edges(cur), converged, grew)
