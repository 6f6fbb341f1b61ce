"""Enumeration of ECTA terms with suspended, incrementally refined choices.

A state maps variables to partially enumerated terms.  Unenumerated nodes carry
constraint fragments; a fragment ``(pec, v)`` says that every path in ``pec``
below the node must equal whatever ``v`` ends up being.  The driver makes
choices only under solved variables and suspends every node that a fragment
pins to a variable, intersecting as it goes.  Choice points are explored
depth-first with copy-on-branch states.
"""

from __future__ import annotations

import itertools
import os
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional, Union

from ecta.automaton import (
    MU,
    STORE,
    Edge,
    Node,
    denote_bounded,
    edges_of,
    intersect,
    is_finitely_constrained,
    reachable,
    subautomaton_at,
    unfold,
)
from ecta.terms import PEC, Path, Term, format_path, format_symbol

ROOT = 0


@dataclass(frozen=True, order=True, slots=True)
class Fragment:
    pec: PEC
    var: int

    @property
    def at_root(self) -> bool:
        return self.pec.paths == ((),)


@dataclass(frozen=True, slots=True)
class Var:
    id: int


@dataclass(frozen=True, slots=True)
class App:
    symbol: str
    children: tuple = ()


@dataclass(frozen=True, slots=True)
class UNode:
    node: Node
    fragments: tuple[Fragment, ...] = ()

    @property
    def restricted(self) -> bool:
        return bool(self.fragments)


PTerm = Union[Var, App, UNode]
Location = tuple[int, Path]


class DeadBranch(Exception):
    """The current state has no completions."""


class RuleNotApplicable(Exception):
    pass


class BudgetExceeded(Exception):
    pass


_SPLITS: dict[PEC, tuple[tuple[int, PEC], ...]] = {}


def _split_pec(pec: PEC) -> tuple[tuple[int, PEC], ...]:
    """The class grouped by first step, each group with that step removed."""
    hit = _SPLITS.get(pec)
    if hit is None:
        groups: dict[int, list[Path]] = {}
        for p in pec.paths:
            if not p:
                raise ValueError("cannot project a fragment that sits at the empty path")
            groups.setdefault(p[0], []).append(p[1:])
        hit = _SPLITS[pec] = tuple((i, PEC(ps)) for i, ps in sorted(groups.items()))
    return hit


def project_all(fragments, arity: int) -> list[tuple[Fragment, ...]]:
    """:func:`project` for every child index at once."""
    out: list[set] = [set() for _ in range(arity)]
    for f in fragments:
        for i, pec in _split_pec(f.pec):
            if i < arity:
                out[i].add(Fragment(pec, f.var))
    return [tuple(sorted(s)) if s else () for s in out]


def project(fragments, i: int) -> tuple[Fragment, ...]:
    """Keep the paths that go through child ``i``, with that first step removed."""
    return project_all(fragments, i + 1)[i]


# -- states -------------------------------------------------------------------------

@dataclass
class EnumStats:
    states_explored: int = 0
    choices: int = 0
    suspends: int = 0
    substs: int = 0
    unfolds: int = 0
    dead_branches: int = 0
    bottom_prunes: int = 0
    yielded: int = 0

    def as_dict(self) -> dict[str, int]:
        return dict(self.__dict__)


@dataclass
class MeasureAudit:
    """Checks that every rule application shrinks the termination measure."""

    enabled: bool = field(default_factory=lambda: os.environ.get("ECTA_AUDIT", "") not in ("", "0"))
    strict: bool = False
    checks: int = 0
    violations: int = 0
    mismatches: int = 0
    last_violation: Optional[str] = None

    def reset(self) -> None:
        self.checks = self.violations = self.mismatches = 0
        self.last_violation = None


AUDIT = MeasureAudit()


class EnumState:
    """Variable bindings plus bookkeeping that keeps rule selection cheap.

    ``open`` holds locations of u-nodes that still need a choice; ``pending``
    holds u-nodes carrying a root fragment, waiting to be suspended.
    ``mentions`` counts fragments per canonical variable, so a variable is
    solved exactly when its count is zero.
    """

    __slots__ = ("bindings", "parent", "mentions", "open", "pending", "next_var", "measure")

    def __init__(self):
        self.bindings: dict[int, PTerm] = {}
        self.parent: dict[int, int] = {}
        self.mentions: Counter = Counter()
        self.open: set[Location] = set()
        self.pending: set[Location] = set()
        self.next_var = ROOT + 1
        self.measure = None

    def copy(self) -> "EnumState":
        st = EnumState.__new__(EnumState)
        st.bindings = dict(self.bindings)
        st.parent = dict(self.parent)
        st.mentions = Counter(self.mentions)
        st.open = set(self.open)
        st.pending = set(self.pending)
        st.next_var = self.next_var
        m = self.measure
        st.measure = None if m is None else [Counter(m[0]), Counter(m[1]), m[2], m[3]]
        return st

    def find(self, v: int) -> int:
        parent = self.parent
        root = v
        while root in parent:
            root = parent[root]
        while v in parent and parent[v] != root:
            parent[v], v = root, parent[v]
        return root

    def fresh(self) -> int:
        v = self.next_var
        self.next_var += 1
        return v

    def solved(self, v: int) -> bool:
        return self.mentions.get(self.find(v), 0) == 0

    def get(self, loc: Location) -> PTerm:
        t = self.bindings[loc[0]]
        for i in loc[1]:
            t = t.children[i]
        return t

    def put(self, loc: Location, new: PTerm) -> None:
        v, path = loc
        self.bindings[v] = _replace(self.bindings[v], path, new)

    def canon(self, fragments) -> tuple[Fragment, ...]:
        return tuple(sorted({Fragment(f.pec, self.find(f.var)) for f in fragments}))

    def _count(self, fragments, delta: int) -> None:
        for f in fragments:
            v = self.find(f.var)
            c = self.mentions[v] + delta
            if c:
                self.mentions[v] = c
            else:
                del self.mentions[v]

    def _track(self, loc: Location, u: UNode) -> None:
        if any(f.at_root for f in u.fragments):
            self.pending.add(loc)
        elif u.fragments or u.node.constrained:
            self.open.add(loc)

    def _untrack(self, loc: Location) -> None:
        self.open.discard(loc)
        self.pending.discard(loc)

    # Running audit measure: each rule reports the u-nodes it adds and removes.
    def _measure_unode(self, u: "UNode", sign: int) -> None:
        m = self.measure
        if m is None:
            return
        longest = 0
        for f in u.fragments:
            for p in f.pec.paths:
                m[1][len(p)] += sign
                longest = max(longest, len(p))
        m[0][max(node_height(u.node), longest)] += sign
        if u.fragments and u.node.kind == MU:
            m[3] += sign

    def _measure_link(self, sign: int) -> None:
        if self.measure is not None:
            self.measure[2] += sign

    @property
    def settled(self) -> bool:
        return not self.open and not self.pending

    def resolve(self, t: PTerm) -> PTerm:
        """``t`` with variable references and fragments canonicalized."""
        if isinstance(t, Var):
            return Var(self.find(t.id))
        if isinstance(t, App):
            return App(t.symbol, tuple(self.resolve(c) for c in t.children))
        return UNode(t.node, self.canon(t.fragments))

    def canonical_bindings(self) -> dict[int, PTerm]:
        return {v: self.resolve(t) for v, t in sorted(self.bindings.items())}


def _replace(t: PTerm, path: Path, new: PTerm) -> PTerm:
    if not path:
        return new
    kids = list(t.children)
    kids[path[0]] = _replace(kids[path[0]], path[1:], new)
    return App(t.symbol, tuple(kids))


def initial_state(n: Node) -> EnumState:
    st = EnumState()
    u = UNode(n)
    st.bindings[ROOT] = u
    st._track((ROOT, ()), u)
    if AUDIT.enabled:
        st.measure = list(termination_measure(st))
    return st


def iter_unodes(t: PTerm, path: Path = ()) -> Iterator[tuple[Path, UNode]]:
    stack = [(path, t)]
    while stack:
        p, x = stack.pop()
        if isinstance(x, UNode):
            yield p, x
        elif isinstance(x, App):
            for i in range(len(x.children) - 1, -1, -1):
                stack.append((p + (i,), x.children[i]))


def is_fully_enumerated(state: EnumState) -> bool:
    """No u-node anywhere carries a constraint fragment."""
    return all(not u.fragments for t in state.bindings.values() for _, u in iter_unodes(t))


def state_size(state: EnumState) -> int:
    """Number of p-term nodes across all bindings."""
    total = 0
    for t in state.bindings.values():
        stack = [t]
        while stack:
            x = stack.pop()
            total += 1
            if isinstance(x, App):
                stack.extend(x.children)
    return total


# -- termination measure --------------------------------------------------------------

def node_height(n: Node) -> int:
    """Longest constraint or transition chain below a constrained node; 0 if unconstrained."""
    if not n.constrained:
        return 0
    if n.kind == MU:
        raise ValueError("constraints inside a recursive node are not supported")
    memo = STORE.table("enum-height")
    h = memo.get(n.id)
    if h is None:
        h = 0
        for e in n.edges:
            h = max(h, e.constraints.max_length if e.constraints else 0,
                    *(1 + node_height(c) for c in e.children))
        memo[n.id] = h
    return h


def termination_measure(state: EnumState) -> tuple[Counter, Counter, int, int]:
    """(u-node heights, fragment path lengths, var-to-var bindings, restricted recursive u-nodes)."""
    heights: Counter = Counter()
    lengths: Counter = Counter()
    var_links = 0
    restricted_mu = 0
    for t in state.bindings.values():
        if isinstance(t, Var):
            var_links += 1
        for _, u in iter_unodes(t):
            longest = 0
            for f in u.fragments:
                for p in f.pec.paths:
                    lengths[len(p)] += 1
                    longest = max(longest, len(p))
            heights[max(node_height(u.node), longest)] += 1
            if u.fragments and u.node.kind == MU:
                restricted_mu += 1
    return heights, lengths, var_links, restricted_mu


def multiset_greater(m: Counter, n: Counter) -> bool:
    """Multiset extension of ``>`` on integers."""
    over = m - n
    under = n - m
    if not over:
        return False
    return not under or max(over) > max(under)


def measure_decreased(before, after) -> bool:
    for i, (a, b) in enumerate(zip(before, after)):
        if i < 2:
            if a == b:
                continue
            return multiset_greater(a, b)
        if a != b:
            return a > b
    return False


def _audited(state: EnumState, rule: str, apply: Callable[[], object]):
    if not AUDIT.enabled:
        return apply()
    m = state.measure
    if m is None:
        m = state.measure = list(termination_measure(state))
    before = (+m[0], +m[1], m[2], m[3])
    out = apply()
    AUDIT.checks += 1
    if not measure_decreased(before, (+m[0], +m[1], m[2], m[3])):
        AUDIT.violations += 1
        AUDIT.last_violation = rule
        if AUDIT.strict:
            raise AssertionError(f"termination measure did not decrease on {rule}")
    return out


def audit_crosscheck(state: EnumState) -> bool:
    """Compare the running measure against a full recomputation."""
    if state.measure is None:
        return True
    m = state.measure
    full = termination_measure(state)
    ok = (+m[0], +m[1], m[2], m[3]) == full
    if not ok:
        AUDIT.mismatches += 1
        if AUDIT.strict:
            raise AssertionError("running termination measure drifted from the recomputed one")
    return ok


# -- rules ----------------------------------------------------------------------------

def _choose(st: EnumState, loc: Location, e: Edge) -> None:
    u = st.get(loc)
    if not isinstance(u, UNode):
        raise RuleNotApplicable("choice target is not an unenumerated node")
    if not st.solved(loc[0]):
        raise RuleNotApplicable("cannot choose under an unsolved variable")
    frags = st.canon(u.fragments)
    if any(f.at_root for f in frags):
        raise RuleNotApplicable("node must be suspended first")
    k = len(e.children)
    if any(p[0] >= k for f in frags for p in f.pec.paths):
        raise DeadBranch("constrained path missing from the chosen transition")
    allf = list(frags) + [Fragment(c, st.fresh()) for c in e.constraints.classes]
    kids = tuple(UNode(c, fs) for c, fs in zip(e.children, project_all(allf, k)))
    st._untrack(loc)
    st._count(u.fragments, -1)
    st._measure_unode(u, -1)
    st.put(loc, App(e.symbol, kids))
    v, path = loc
    for i, kid in enumerate(kids):
        st._count(kid.fragments, +1)
        st._track((v, path + (i,)), kid)
        st._measure_unode(kid, +1)


def _choose_mu(st: EnumState, loc: Location) -> None:
    u = st.get(loc)
    if not (isinstance(u, UNode) and u.node.kind == MU and u.fragments):
        raise RuleNotApplicable("only restricted recursive nodes are unfolded")
    if not st.solved(loc[0]):
        raise RuleNotApplicable("cannot unfold under an unsolved variable")
    nu = UNode(unfold(u.node), u.fragments)
    st._measure_unode(u, -1)
    st._measure_unode(nu, +1)
    st.put(loc, nu)
    st._untrack(loc)
    st._track(loc, nu)


def _suspend(st: EnumState, loc: Location) -> Optional[int]:
    """Move the node at ``loc`` into the variable its root fragment names.

    Returns the binding variable when it now just points at another variable
    and must be substituted away.
    """
    u = st.get(loc)
    frags = st.canon(u.fragments)
    roots = [f for f in frags if f.at_root]
    if not roots:
        raise RuleNotApplicable("no root fragment to suspend on")
    target = roots[0]
    w = target.var
    rest = tuple(f for f in frags if f is not target)
    v = st.find(loc[0])
    st._untrack(loc)
    st._count(u.fragments, -1)
    st._measure_unode(u, -1)
    if w == v:
        if loc[1]:
            raise DeadBranch("a term cannot contain itself")
        nu = UNode(u.node, rest)
        st.put(loc, nu)
        st._count(rest, +1)
        st._track(loc, nu)
        st._measure_unode(nu, +1)
        return None
    cur = st.bindings.get(w)
    if cur is None:
        nu = UNode(u.node, rest)
    else:
        if not isinstance(cur, UNode):
            raise AssertionError("suspending into a variable that was already enumerated")
        m = intersect(cur.node, u.node)
        if m.is_bottom:
            raise DeadBranch("empty intersection")
        st._untrack((w, ()))
        st._count(cur.fragments, -1)
        st._measure_unode(cur, -1)
        nu = UNode(m, st.canon(cur.fragments + rest))
    st.bindings[w] = nu
    st._count(nu.fragments, +1)
    st._track((w, ()), nu)
    st._measure_unode(nu, +1)
    st.put(loc, Var(w))
    if not loc[1]:
        st._measure_link(+1)
        return v
    return None


def _subst(st: EnumState, v: int) -> None:
    """Drop the binding ``v -> w`` and merge ``v`` into ``w``."""
    t = st.bindings.get(v)
    if not isinstance(t, Var):
        raise RuleNotApplicable(f"v{v} is not bound to a variable")
    w = st.find(t.id)
    del st.bindings[v]
    st._measure_link(-1)
    st.parent[v] = w
    moved = st.mentions.pop(v, 0)
    if moved:
        st.mentions[w] += moved


def _saturate(st: EnumState, stats: EnumStats) -> None:
    """Apply suspensions (and the substitutions they trigger) until none is left."""
    while st.pending:
        loc = min(st.pending)
        try:
            link = _audited(st, "suspend", lambda: _suspend(st, loc))
        except DeadBranch as exc:
            if str(exc) == "empty intersection":
                stats.bottom_prunes += 1
            raise
        stats.suspends += 1
        if link is not None:
            _audited(st, "subst", lambda: _subst(st, link))
            stats.substs += 1


# -- public single-step API -----------------------------------------------------------------

def step_choose(state: EnumState, location: Location, edge_index: int) -> EnumState:
    st = state.copy()
    u = st.get(location)
    _choose(st, location, edges_of(u.node)[edge_index])
    return st


def step_choose_mu(state: EnumState, location: Location) -> EnumState:
    st = state.copy()
    _choose_mu(st, location)
    return st


def step_suspend(state: EnumState, location: Location) -> EnumState:
    """One suspension; the follow-up substitution, if any, is left to :func:`step_subst`."""
    st = state.copy()
    _suspend(st, location)
    return st


def step_subst(state: EnumState) -> EnumState:
    st = state.copy()
    for v, t in sorted(st.bindings.items()):
        if isinstance(t, Var):
            _subst(st, v)
            break
    return st


# -- schedules ------------------------------------------------------------------------

Schedule = Callable[[EnumState, list[Location]], Location]


def schedule_dfs_lr(state: EnumState, candidates: list[Location]) -> Location:
    return min(candidates)


def schedule_dfs_rl(state: EnumState, candidates: list[Location]) -> Location:
    return min(candidates, key=lambda loc: (loc[0], tuple(-i for i in loc[1])))


def schedule_fewest_edges(state: EnumState, candidates: list[Location]) -> Location:
    return min(candidates, key=lambda loc: (len(edges_of(state.get(loc).node)), loc))


def _fragment_live(e: Edge, pec: PEC, bound: Node) -> bool:
    memo = STORE.table("fragment-live")
    key = (e.id, pec, bound.id)
    hit = memo.get(key)
    if hit is not None:
        return hit
    ok = True
    k = len(e.children)
    for p in pec.paths:
        if not p or p[0] >= k:
            ok = False
            break
        pinned = bound
        for c in e.constraints.classes:
            if p in c.paths:
                for q in c.paths:
                    pinned = intersect(pinned, subautomaton_at(e, q))
                break
        else:
            pinned = intersect(pinned, subautomaton_at(e, p))
        if pinned.is_bottom:
            ok = False
            break
    memo[key] = ok
    return ok


def edge_live(state: EnumState, e: Edge, fragments) -> bool:
    """One-step lookahead: can ``e`` still agree with the variables its fragments name?

    Each fragment path is checked against the variable's current node, and
    against the whole constraint class of ``e`` that mentions the path
    verbatim.  A False answer is exact; True may still die later.
    """
    for f in fragments:
        bound = state.bindings.get(state.find(f.var))
        if isinstance(bound, UNode) and not _fragment_live(e, f.pec, bound.node):
            return False
    return True


def schedule_fewest_live(state: EnumState, candidates: list[Location]) -> Location:
    """Target the u-node with the fewest transitions that survive :func:`edge_live`.

    Scanning stops at the first node with at most one live transition: a dead
    end or a forced move is as good as it gets.
    """
    best, best_score = None, None
    for loc in sorted(candidates):
        u = state.get(loc)
        if u.node.kind == MU:
            return loc
        score = 0
        for e in edges_of(u.node):
            if edge_live(state, e, u.fragments):
                score += 1
                if best_score is not None and score >= best_score:
                    break
        if score <= 1:
            return loc
        if best_score is None or score < best_score:
            best, best_score = loc, score
    return best


SCHEDULES: dict[str, Schedule] = {
    "dfs-lr": schedule_dfs_lr,
    "dfs-rl": schedule_dfs_rl,
    "fewest-edges": schedule_fewest_edges,
    "fewest-live": schedule_fewest_live,
}


def resolve_schedule(schedule: Union[str, Schedule]) -> Schedule:
    if callable(schedule):
        return schedule
    try:
        return SCHEDULES[schedule]
    except KeyError:
        raise ValueError(f"unknown schedule {schedule!r}; known: {', '.join(SCHEDULES)}") from None


# -- driver -------------------------------------------------------------------------

@dataclass
class ChoicePoint:
    state: EnumState
    location: Location
    alternatives: tuple[Edge, ...]
    next: int = 0


def enumerate_states(n: Node, schedule: Union[str, Schedule] = "dfs-lr",
                     limit: Optional[int] = None, stats: Optional[EnumStats] = None,
                     max_states: Optional[int] = None,
                     deadline: Optional[float] = None) -> Iterator[EnumState]:
    """Yield settled states: every remaining u-node is unrestricted and unconstrained.

    ``max_states`` and ``deadline`` (a ``time.monotonic`` value) bound the
    search by raising :class:`BudgetExceeded`.
    """
    if limit is not None and limit <= 0:
        return
    if n.is_bottom:
        return
    if not is_finitely_constrained(n):
        raise ValueError("enumeration needs constraints to stay outside recursive nodes")
    pick = resolve_schedule(schedule)
    stats = stats if stats is not None else EnumStats()
    stack: list[Union[EnumState, ChoicePoint]] = [initial_state(n)]
    stats.states_explored += 1
    while stack:
        item = stack.pop()
        if isinstance(item, ChoicePoint):
            cp = item
            last = cp.next + 1 >= len(cp.alternatives)
            if not last:
                stack.append(ChoicePoint(cp.state, cp.location, cp.alternatives, cp.next + 1))
            st = cp.state if last else cp.state.copy()
            edge = cp.alternatives[cp.next]
            stats.states_explored += 1
            if max_states is not None and stats.states_explored > max_states:
                raise BudgetExceeded(f"explored more than {max_states} states")
            if deadline is not None and time.monotonic() > deadline:
                raise BudgetExceeded("deadline reached")
            try:
                _audited(st, "choose", lambda: _choose(st, cp.location, edge))
            except DeadBranch:
                stats.dead_branches += 1
                continue
            stats.choices += 1
        else:
            st = item
        try:
            _saturate(st, stats)
        except DeadBranch:
            stats.dead_branches += 1
            continue
        if st.settled:
            stats.yielded += 1
            if AUDIT.enabled:
                audit_crosscheck(st)
            yield st
            if limit is not None and stats.yielded >= limit:
                return
            continue
        candidates = [loc for loc in st.open if st.solved(loc[0])]
        if not candidates:
            # every open node waits on a variable that is itself waiting: no finite solution
            stats.dead_branches += 1
            continue
        loc = pick(st, candidates)
        u = st.get(loc)
        if u.node.kind == MU:
            _audited(st, "choose-mu", lambda: _choose_mu(st, loc))
            stats.unfolds += 1
            stack.append(st)
            continue
        stack.append(ChoicePoint(st, loc, edges_of(u.node)))


def enumerate_terms(n: Node, max_depth: Optional[int] = None, **kw) -> Iterator[Term]:
    """Concrete terms of every settled state; bounded by depth when given."""
    for st in enumerate_states(n, **kw):
        if max_depth is None:
            yield from expand(st)
        else:
            yield from sorted(expand_bounded(st, max_depth))


# -- expansion ------------------------------------------------------------------------

def _var_order(state: EnumState) -> list[int]:
    """Variables reachable from the root, dependencies first."""
    order: list[int] = []
    done: set[int] = set()
    active: set[int] = set()

    def refs(t: PTerm) -> list[int]:
        out = []
        stack = [t]
        while stack:
            x = stack.pop()
            if isinstance(x, Var):
                out.append(state.find(x.id))
            elif isinstance(x, App):
                stack.extend(reversed(x.children))
        return out

    stack = [(ROOT, iter(refs(state.bindings[ROOT])))]
    active.add(ROOT)
    while stack:
        v, it = stack[-1]
        nxt = next(it, None)
        if nxt is None:
            stack.pop()
            active.discard(v)
            done.add(v)
            order.append(v)
            continue
        if nxt in done:
            continue
        if nxt in active:
            raise ValueError("variable bindings are cyclic")
        active.add(nxt)
        stack.append((nxt, iter(refs(state.bindings[nxt]))))
    return order


def _unodes_reachable(state: EnumState, order: list[int]) -> list[Node]:
    return [u.node for v in order for _, u in iter_unodes(state.bindings[v])]


def _dag_depth(n: Node) -> int:
    memo = STORE.table("dag-depth")
    d = memo.get(n.id)
    if d is None:
        d = memo[n.id] = 1 + max((_dag_depth(c) for e in edges_of(n) for c in e.children), default=0)
    return d


def _is_cyclic(n: Node) -> bool:
    return any(m.kind == MU for m in reachable(n, through_mu=False))


def _expand_at(state: EnumState, order: list[int], bound: int,
               max_depth: Optional[int] = None) -> Iterator[Term]:
    """Terms of the state with every u-node cut at ``bound``; ``max_depth`` also caps whole terms."""
    cache: dict[tuple[int, int], list[Term]] = {}

    def node_terms(n: Node, room: int) -> list[Term]:
        key = (n.id, room)
        hit = cache.get(key)
        if hit is None:
            hit = cache[key] = sorted(denote_bounded(n, room)) if room > 0 else []
        return hit

    def values(t: PTerm, env: dict[int, Term], room: Optional[int]) -> Iterator[Term]:
        if room is not None and room <= 0:
            return
        if isinstance(t, Var):
            val = env[state.find(t.id)]
            if room is None or val.depth <= room:
                yield val
        elif isinstance(t, UNode):
            yield from node_terms(t.node, bound if room is None else min(bound, room))
        else:
            sub = None if room is None else room - 1
            for combo in itertools.product(*(list(values(c, env, sub)) for c in t.children)):
                yield Term(t.symbol, combo)

    def assign(i: int, env: dict[int, Term]) -> Iterator[Term]:
        v = order[i]
        for val in values(state.bindings[v], env, max_depth):
            if v == ROOT:
                yield val
            else:
                env[v] = val
                yield from assign(i + 1, env)

    if order:
        yield from assign(0, {})


def expand(state: EnumState, limit: Optional[int] = None) -> Iterator[Term]:
    """Concrete terms represented by a fully enumerated state.

    Each unenumerated node is expanded independently; a shared variable takes
    one value everywhere it occurs.  Recursive nodes make the stream infinite,
    so it is produced by increasing depth bound.
    """
    if not is_fully_enumerated(state):
        raise ValueError("expand needs a fully enumerated state")
    if limit is not None and limit <= 0:
        return
    order = _var_order(state)
    nodes = _unodes_reachable(state, order)
    cyclic = any(_is_cyclic(n) for n in nodes)
    seen: set[Term] = set()
    bound = max((_dag_depth(n) for n in nodes if not _is_cyclic(n)), default=1)
    while True:
        for t in _expand_at(state, order, bound):
            if t not in seen:
                seen.add(t)
                yield t
                if limit is not None and len(seen) >= limit:
                    return
        if not cyclic:
            return
        bound += 1


def expand_bounded(state: EnumState, max_depth: int) -> set[Term]:
    """Terms of depth at most ``max_depth`` represented by a fully enumerated state."""
    if not is_fully_enumerated(state):
        raise ValueError("expand needs a fully enumerated state")
    order = _var_order(state)
    return set(_expand_at(state, order, max_depth, max_depth))


# -- rendering ------------------------------------------------------------------------

def _var_name(v: int) -> str:
    return "v⊤" if v == ROOT else f"v{v}"


def format_pterm(state: EnumState, t: PTerm) -> str:
    if isinstance(t, Var):
        return _var_name(state.find(t.id))
    if isinstance(t, App):
        if not t.children:
            return format_symbol(t.symbol)
        return f"{format_symbol(t.symbol)}({', '.join(format_pterm(state, c) for c in t.children)})"
    alts = " | ".join(format_symbol(e.symbol) for e in edges_of(t.node))
    if t.node.kind == MU:
        alts = f"μ {alts}"
    if not t.fragments:
        return f"⟨{alts}⟩"
    frags = ", ".join(f"{'='.join(format_path(p) for p in f.pec.paths)}:{_var_name(state.find(f.var))}"
                      for f in state.canon(t.fragments))
    return f"⟨{alts} ; {frags}⟩"


def format_state(state: EnumState) -> str:
    return "\n".join(f"{_var_name(v)} ↦ {format_pterm(state, t)}" for v, t in sorted(state.bindings.items()))
