"""Hash-consed equality-constrained tree automata.

Nodes are interned in a process-wide :class:`NodeStore`; structurally equal
nodes are the same Python object, so ``is`` is node equality.

Recursive nodes use a locally-nameless encoding.  ``Mu(body)`` binds de Bruijn
index 0 inside ``body``; ``BVar(k)`` refers to the k-th enclosing ``Mu``.
Named ``FVar`` nodes exist only transiently while cyclic intersection builds a
result and are closed into ``Mu`` binders before anything escapes.  Every node
handed to callers is closed, and traversals step through recursive nodes with
:func:`unfold`.
"""

from __future__ import annotations

import itertools
import threading
from typing import Callable, Hashable, Iterable, Iterator, Optional, Sequence, Union

from ecta.terms import (
    EMPTY_PCS,
    PCS,
    PEC,
    Path,
    Symbol,
    Term,
    parse_pcs,
    parse_pec,
    pcs_close,
    pcs_normalize,
    pcs_satisfied,
    pcs_union,
)

PLAIN, MU, BVAR, FVAR = "plain", "mu", "bvar", "fvar"


class Node:
    __slots__ = ("id", "kind", "edges", "body", "index", "name", "nbound", "fvars",
                 "constrained", "has_mu", "__weakref__")

    def __repr__(self) -> str:
        if self.kind == PLAIN:
            if not self.edges:
                return "Node(⊥)"
            return f"Node#{self.id}{{{', '.join(e.symbol for e in self.edges)}}}"
        if self.kind == MU:
            return f"Mu#{self.id}"
        if self.kind == BVAR:
            return f"BVar({self.index})"
        return f"FVar({self.name!r})"

    @property
    def is_bottom(self) -> bool:
        return self.kind == PLAIN and not self.edges

    @property
    def closed(self) -> bool:
        return self.nbound == 0 and not self.fvars


class Edge:
    __slots__ = ("id", "symbol", "children", "constraints", "sort_key", "__weakref__")

    @property
    def arity(self) -> int:
        return len(self.children)

    def __repr__(self) -> str:
        kids = ",".join(str(c.id) for c in self.children)
        where = f" where {self.constraints}" if self.constraints else ""
        return f"Edge({self.symbol}({kids}){where})"


class _EmptyEdge:
    """The empty transition; only appears in explicitly unnormalized nodes."""

    def __repr__(self) -> str:
        return "e⊥"


EMPTY_EDGE = _EmptyEdge()


class NodeStore:
    """Intern tables for nodes and edges.  Append-only."""

    def __init__(self):
        self._lock = threading.RLock()
        self._nodes: dict[Hashable, Node] = {}
        self._edges: dict[Hashable, Edge] = {}
        self._ids = itertools.count()
        self._edge_ids = itertools.count()
        self.memo: dict[str, dict] = {}

    def __len__(self) -> int:
        return len(self._nodes)

    def table(self, name: str) -> dict:
        t = self.memo.get(name)
        if t is None:
            t = self.memo[name] = {}
        return t

    def intern_node(self, key: Hashable, build: Callable[[Node], None]) -> Node:
        node = self._nodes.get(key)
        if node is not None:
            return node
        with self._lock:
            node = self._nodes.get(key)
            if node is None:
                node = Node()
                node.id = next(self._ids)
                build(node)
                self._nodes[key] = node
            return node

    def intern_edge(self, symbol: str, children: tuple[Node, ...], constraints: PCS) -> Edge:
        key = (symbol, tuple(c.id for c in children), constraints)
        edge = self._edges.get(key)
        if edge is not None:
            return edge
        with self._lock:
            edge = self._edges.get(key)
            if edge is None:
                edge = Edge()
                edge.id = next(self._edge_ids)
                edge.symbol = symbol
                edge.children = children
                edge.constraints = constraints
                edge.sort_key = key
                self._edges[key] = edge
            return edge


STORE = NodeStore()


# -- construction ---------------------------------------------------------------

def _plain(edges: tuple) -> Node:
    key = (PLAIN, tuple(e.id if isinstance(e, Edge) else -1 for e in edges))

    def build(node: Node) -> None:
        node.kind = PLAIN
        node.edges = edges
        node.body = node.index = node.name = None
        real = [e for e in edges if isinstance(e, Edge)]
        kids = [c for e in real for c in e.children]
        node.nbound = max((c.nbound for c in kids), default=0)
        node.fvars = frozenset().union(*(c.fvars for c in kids)) if kids else frozenset()
        node.constrained = any(e.constraints for e in real) or any(c.constrained for c in kids)
        node.has_mu = any(c.has_mu for c in kids)

    return STORE.intern_node(key, build)


BOTTOM = _plain(())


def _edge_order(e) -> tuple:
    if e is EMPTY_EDGE:
        return ("",)
    return e.sort_key


def mk_edge(symbol: Union[str, Symbol], children: Sequence[Node] = (),
            constraints: Union[PCS, Iterable, str] = EMPTY_PCS, *,
            normalize: bool = True) -> Optional[Edge]:
    """Build a transition; returns None (the empty transition) when it cannot fire.

    That happens when a child is the empty node or the constraints are
    inconsistent.  With ``normalize=False`` empty children are kept so that
    :func:`normalize` has something to do.
    """
    children = tuple(children)
    if isinstance(symbol, Symbol):
        if symbol.arity != len(children):
            raise ValueError(f"{symbol.name} has arity {symbol.arity}, got {len(children)} children")
        symbol = symbol.name
    for c in children:
        if not isinstance(c, Node):
            raise TypeError(f"edge children must be nodes, got {c!r}")
    if isinstance(constraints, str):
        constraints = parse_pcs(constraints)
    elif not isinstance(constraints, PCS):
        constraints = pcs_normalize(c if isinstance(c, PEC) else parse_pec(c) if isinstance(c, str)
                                    else PEC(c) for c in constraints)
    if constraints:
        if any(p and p[0] >= len(children) for p in constraints.paths()):
            return None
        closed = pcs_close(constraints)
        if closed is None:
            return None
        # {ε} alone says nothing; any larger class holding ε was already inconsistent
        constraints = PCS(c for c in closed.classes if c.paths != ((),))
    if normalize and any(c.is_bottom for c in children):
        return None
    return STORE.intern_edge(symbol, children, constraints)


def mk_node(edges: Iterable[Optional[Edge]], *, normalize: bool = True) -> Node:
    """Build a plain node; empty transitions are dropped unless ``normalize`` is off."""
    seen = {}
    for e in edges:
        if e is None or e is EMPTY_EDGE:
            if normalize:
                continue
            e = EMPTY_EDGE
        seen[id(e)] = e
    return _plain(tuple(sorted(seen.values(), key=_edge_order)))


def leaf(symbol: str) -> Node:
    """Node with a single nullary transition."""
    return mk_node([mk_edge(symbol)])


def bvar(index: int) -> Node:
    def build(node: Node) -> None:
        node.kind = BVAR
        node.edges = ()
        node.index = index
        node.body = node.name = None
        node.nbound = index + 1
        node.fvars = frozenset()
        node.constrained = False
        node.has_mu = False

    return STORE.intern_node((BVAR, index), build)


def fvar(name: Hashable) -> Node:
    def build(node: Node) -> None:
        node.kind = FVAR
        node.edges = ()
        node.name = name
        node.body = node.index = None
        node.nbound = 0
        node.fvars = frozenset([name])
        node.constrained = False
        node.has_mu = False

    return STORE.intern_node((FVAR, name), build)


def mk_mu(body: Node) -> Node:
    """Bind index 0 of ``body``.  Degenerate binders collapse."""
    if body.kind == BVAR and body.index == 0:
        return BOTTOM  # μx.x has empty least-fixpoint denotation
    if body.kind == MU:
        raise ValueError("a recursive node's body must be a plain node")
    if body.nbound == 0:
        return body
    if body.is_bottom:
        return BOTTOM

    def build(node: Node) -> None:
        node.kind = MU
        node.edges = ()
        node.body = body
        node.index = node.name = None
        node.nbound = max(body.nbound - 1, 0)
        node.fvars = body.fvars
        node.constrained = body.constrained
        node.has_mu = True

    return STORE.intern_node((MU, body.id), build)


def close_var(n: Node, name: Hashable, depth: int = 0) -> Node:
    """Replace the free variable ``name`` with the bound index at ``depth``."""
    if name not in n.fvars:
        return n
    memo = STORE.table("close")
    key = (n.id, name, depth)
    hit = memo.get(key)
    if hit is not None:
        return hit
    if n.kind == FVAR:
        out = bvar(depth)
    elif n.kind == MU:
        out = mk_mu(close_var(n.body, name, depth + 1))
    else:
        out = mk_node(_rebuild_edge(e, lambda c: close_var(c, name, depth)) for e in n.edges)
    memo[key] = out
    return out


def mu(name: Hashable, body: Node) -> Node:
    """Recursive node from a body that refers to itself through ``fvar(name)``."""
    return mk_mu(close_var(body, name))


def _rebuild_edge(e, f: Callable[[Node], Node], normalize: bool = True):
    if e is EMPTY_EDGE:
        return None
    return mk_edge(e.symbol, [f(c) for c in e.children], e.constraints, normalize=normalize)


def substitute(n: Node, env: tuple[Node, ...], depth: int = 0) -> Node:
    """Instantiate dangling indices: ``BVar(depth + k)`` becomes ``env[k]``.

    ``env`` holds closed nodes, so no shifting is needed.
    """
    if n.nbound <= depth:
        return n
    memo = STORE.table("subst")
    key = (n.id, tuple(m.id for m in env), depth)
    hit = memo.get(key)
    if hit is not None:
        return hit
    if n.kind == BVAR:
        out = env[n.index - depth]
    elif n.kind == MU:
        out = mk_mu(substitute(n.body, env, depth + 1))
    else:
        out = mk_node(_rebuild_edge(e, lambda c: substitute(c, env, depth)) for e in n.edges)
    memo[key] = out
    return out


def unfold(n: Node) -> Node:
    """One layer of a recursive node; identity on everything else."""
    if n.kind != MU:
        return n
    if n.nbound:
        raise ValueError("cannot unfold a recursive node with dangling indices")
    memo = STORE.table("unfold")
    out = memo.get(n.id)
    if out is None:
        out = memo[n.id] = substitute(n.body, (n,))
    return out


def edges_of(n: Node) -> tuple[Edge, ...]:
    """Transitions of a closed node, unfolding a recursive node first."""
    if n.kind == MU:
        n = unfold(n)
    if n.kind != PLAIN:
        raise ValueError(f"{n!r} has no transitions of its own")
    return tuple(e for e in n.edges if isinstance(e, Edge))


# -- normalization, union, intersection ---------------------------------------------

def normalize(n: Node) -> Node:
    """Drop empty transitions and transitions over empty nodes, recursively.

    Recursive nodes whose least fixpoint is empty (``μx.{S(x)}``) are pruned too.
    """
    memo = STORE.table("normalize")
    hit = memo.get(n.id)
    if hit is not None:
        return hit
    out = _normalize_syntactic(n)
    if out.has_mu:
        out = prune_uninhabited(out)
    memo[n.id] = out
    return out


def _normalize_syntactic(n: Node) -> Node:
    memo = STORE.table("normalize-syn")
    hit = memo.get(n.id)
    if hit is not None:
        return hit
    if n.kind in (BVAR, FVAR):
        out = n
    elif n.kind == MU:
        out = mk_mu(_normalize_syntactic(n.body))
    else:
        out = mk_node(_rebuild_edge(e, _normalize_syntactic) for e in n.edges)
    memo[n.id] = out
    return out


def inhabited(n: Node) -> bool:
    """Whether the skeleton of a closed node accepts at least one term."""
    cache = STORE.table("inhabited")
    if n.id in cache:
        return cache[n.id]
    # least fixpoint over the finite graph of closed nodes reachable from n
    order: list[Node] = []
    seen = {n.id}
    stack = [n]
    while stack:
        m = stack.pop()
        order.append(m)
        if m.id in cache:
            continue
        for e in edges_of(m):
            for c in e.children:
                if c.id not in seen:
                    seen.add(c.id)
                    stack.append(c)
    live = {m.id for m in order if cache.get(m.id)}
    pending = [m for m in order if m.id not in cache]
    changed = True
    while changed:
        changed = False
        for m in pending:
            if m.id in live:
                continue
            if any(all(c.id in live for c in e.children) for e in edges_of(m)):
                live.add(m.id)
                changed = True
    for m in pending:
        cache[m.id] = m.id in live
    return cache[n.id]


def prune_uninhabited(n: Node, env: tuple[Node, ...] = ()) -> Node:
    """Rebuild ``n`` without transitions into uninhabited nodes."""
    if n.kind == BVAR:
        return n
    closed = substitute(n, env) if env else n
    if not inhabited(closed):
        return BOTTOM
    if not n.has_mu:
        return n
    memo = STORE.table("prune")
    key = (n.id, tuple(m.id for m in env))
    hit = memo.get(key)
    if hit is not None:
        return hit
    if n.kind == MU:
        out = mk_mu(prune_uninhabited(n.body, (closed,) + env))
    else:
        out = mk_node(_rebuild_edge(e, lambda c: prune_uninhabited(c, env)) for e in n.edges)
    memo[key] = out
    return out


def union(n1: Node, n2: Node) -> Node:
    if n1 is n2 or n2.is_bottom:
        return n1
    if n1.is_bottom:
        return n2
    return mk_node(edges_of(n1) + edges_of(n2))


def union_all(nodes: Iterable[Node]) -> Node:
    nodes = list(nodes)
    if not nodes:
        return BOTTOM
    if len(nodes) == 1:
        return nodes[0]
    edges: list[Edge] = []
    for n in nodes:
        if not n.is_bottom:
            edges.extend(edges_of(n))
    return mk_node(edges)


def intersect(n1: Node, n2: Node) -> Node:
    """Intersection; recursive inputs yield recursive results keyed by node pairs."""
    if n1 is n2:
        return n1
    if n1.is_bottom or n2.is_bottom:
        return BOTTOM
    memo = STORE.table("intersect")
    key = (n1.id, n2.id) if n1.id < n2.id else (n2.id, n1.id)
    hit = memo.get(key)
    if hit is not None:
        return hit
    out = _Intersector().run(n1, n2)
    if out.has_mu:
        out = prune_uninhabited(out)
    memo[key] = out
    return out


def intersect_all(nodes: Iterable[Node]) -> Node:
    it = iter(nodes)
    acc = next(it)
    for n in it:
        acc = intersect(acc, n)
        if acc.is_bottom:
            break
    return acc


class _Intersector:
    """One top-level intersection: tracks node pairs on the current DFS path."""

    def __init__(self):
        self.active: set[tuple[int, int]] = set()
        self.local: dict[tuple[int, int], Node] = {}

    def run(self, n1: Node, n2: Node) -> Node:
        if n1 is n2:
            return n1
        if n1.is_bottom or n2.is_bottom:
            return BOTTOM
        key = (n1.id, n2.id) if n1.id < n2.id else (n2.id, n1.id)
        memo = STORE.table("intersect-raw")
        hit = memo.get(key)
        if hit is not None:
            return hit
        name = ("∩",) + key
        if key in self.active:
            return fvar(name)
        hit = self.local.get(key)
        if hit is not None and all(v[1:] in self.active for v in hit.fvars):
            return hit
        self.active.add(key)
        try:
            edges = self._edges(edges_of(n1), edges_of(n2))
        finally:
            self.active.discard(key)
        body = mk_node(edges)
        out = mk_mu(close_var(body, name)) if name in body.fvars else body
        if out.fvars:
            self.local[key] = out
        else:
            memo[key] = out
        return out

    def _edges(self, es1: Sequence[Edge], es2: Sequence[Edge]) -> list[Optional[Edge]]:
        # simple hash join on (symbol, arity)
        by_sym: dict[tuple[str, int], list[Edge]] = {}
        for e in es2:
            by_sym.setdefault((e.symbol, len(e.children)), []).append(e)
        out: list[Optional[Edge]] = []
        for e1 in es1:
            for e2 in by_sym.get((e1.symbol, len(e1.children)), ()):
                if e1 is e2:
                    out.append(e1)
                    continue
                constraints = pcs_union(e1.constraints, e2.constraints)
                if constraints and pcs_close(constraints) is None:
                    continue
                kids = []
                for c1, c2 in zip(e1.children, e2.children):
                    k = self.run(c1, c2)
                    if k.is_bottom:
                        break
                    kids.append(k)
                else:
                    out.append(mk_edge(e1.symbol, kids, constraints))
        return out


# -- structural queries -------------------------------------------------------------

def skeleton(n: Node) -> Node:
    """Erase every path constraint."""
    if not n.constrained:
        return n
    memo = STORE.table("skeleton")
    hit = memo.get(n.id)
    if hit is not None:
        return hit
    if n.kind == MU:
        out = mk_mu(skeleton(n.body))
    else:
        out = mk_node((mk_edge(e.symbol, [skeleton(c) for c in e.children], EMPTY_PCS, normalize=False)
                       if isinstance(e, Edge) else None) for e in n.edges)
    memo[n.id] = out
    return out


def is_finitely_constrained(n: Node) -> bool:
    """No path constraint sits inside a recursive node reachable from ``n``."""
    for m in reachable(n, through_mu=False):
        if m.kind == MU and m.constrained:
            return False
    return True


def reachable(n: Node, through_mu: bool = True) -> list[Node]:
    """Distinct nodes reachable from ``n``.

    With ``through_mu`` the walk unfolds recursive nodes and only meets closed
    nodes; otherwise it follows the stored structure, descending into binder
    bodies.
    """
    seen = {n.id}
    order = [n]
    stack = [n]
    while stack:
        m = stack.pop()
        if through_mu:
            kids = [c for e in edges_of(m) for c in e.children]
        elif m.kind == MU:
            kids = [m.body]
        else:
            kids = [c for e in m.edges if isinstance(e, Edge) for c in e.children]
        for c in kids:
            if c.id not in seen:
                seen.add(c.id)
                order.append(c)
                stack.append(c)
    return order


def count_edges(n: Node) -> int:
    """Number of distinct transitions in the stored structure under ``n``."""
    ids = set()
    for m in reachable(n, through_mu=False):
        if m.kind == PLAIN:
            ids.update(e.id for e in m.edges if isinstance(e, Edge))
    return len(ids)


def count_nodes(n: Node) -> int:
    return len(reachable(n, through_mu=False))


NodeOrEdge = Union[Node, Edge]


def nodes_at(x: NodeOrEdge, p: Path) -> frozenset[Node]:
    """Nodes reachable from a node or transition via ``p``; short transitions contribute nothing."""
    p = tuple(p)
    if isinstance(x, Edge):
        if not p:
            raise ValueError("a transition has no node at the empty path")
        if p[0] >= len(x.children):
            return frozenset()
        return nodes_at(x.children[p[0]], p[1:])
    if not p:
        return frozenset([x])
    memo = STORE.table("nodes_at")
    key = (x.id, p)
    hit = memo.get(key)
    if hit is not None:
        return hit
    out: set[Node] = set()
    for e in edges_of(x):
        if p[0] < len(e.children):
            out |= nodes_at(e.children[p[0]], p[1:])
    res = memo[key] = frozenset(out)
    return res


def subautomaton_at(x: NodeOrEdge, p: Path) -> Node:
    return union_all(sorted(nodes_at(x, p), key=lambda m: m.id))


# -- denotation oracle -------------------------------------------------------------------

def denote_bounded(n: Node, max_depth: int) -> frozenset[Term]:
    """All terms of depth at most ``max_depth`` accepted by ``n``, by brute force.

    Candidate terms are built bottom-up from each transition's children and kept
    only when they satisfy the transition's constraints.
    """
    if max_depth < 1:
        raise ValueError("max_depth must be at least 1")
    cache: dict[tuple[int, int], frozenset[Term]] = {}

    def terms(m: Node, d: int) -> frozenset[Term]:
        if d <= 0 or m.is_bottom:
            return frozenset()
        key = (m.id, d)
        hit = cache.get(key)
        if hit is not None:
            return hit
        out: set[Term] = set()
        for e in edges_of(m):
            kid_sets = [terms(c, d - 1) for c in e.children]
            if any(not s for s in kid_sets):
                continue
            for combo in itertools.product(*(sorted(s) for s in kid_sets)):
                t = Term(e.symbol, combo)
                if not e.constraints or pcs_satisfied(e.constraints, t):
                    out.add(t)
        res = cache[key] = frozenset(out)
        return res

    return terms(n, max_depth)


def iter_skeleton_terms(n: Node, max_depth: int) -> Iterator[Term]:
    """Terms of the skeleton up to ``max_depth``, ignoring constraints."""
    return iter(denote_bounded(skeleton(n), max_depth))
