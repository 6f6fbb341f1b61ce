"""Terms, paths, path equivalence classes (PECs) and path constraint sets (PCSs).

Paths are plain tuples of child indices; ``()`` is the empty path.  Subterm
lookups that fall off the tree return ``None`` rather than raising.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Optional, Sequence

Path = tuple[int, ...]
EPSILON: Path = ()


@dataclass(frozen=True)
class Symbol:
    name: str
    arity: int

    def __post_init__(self):
        if self.arity < 0:
            raise ValueError(f"negative arity for {self.name!r}")


class Term:
    """An immutable ranked tree.  Hash, size and depth are computed once."""

    __slots__ = ("symbol", "children", "_hash", "size", "depth")

    def __init__(self, symbol: str, children: Sequence["Term"] = ()):
        self.symbol = symbol
        self.children = tuple(children)
        self._hash = hash((symbol, self.children))
        self.size = 1 + sum(c.size for c in self.children)
        self.depth = 1 + max((c.depth for c in self.children), default=0)

    @property
    def arity(self) -> int:
        return len(self.children)

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, Term) or self._hash != other._hash:
            return False
        return self.symbol == other.symbol and self.children == other.children

    def __lt__(self, other: "Term") -> bool:
        return _term_key(self) < _term_key(other)

    def __repr__(self) -> str:
        return f"Term({format_term(self)})"

    def __str__(self) -> str:
        return format_term(self)


def _term_key(t: Term):
    return (t.symbol, tuple(_term_key(c) for c in t.children))


def subterm_at(t: Term, p: Path) -> Optional[Term]:
    """Return ``t|p``, or None when an index exceeds a child count."""
    for i in p:
        if i >= len(t.children):
            return None
        t = t.children[i]
    return t


def is_prefix(p: Path, q: Path) -> bool:
    return len(p) <= len(q) and q[: len(p)] == p


def is_proper_prefix(p: Path, q: Path) -> bool:
    return len(p) < len(q) and q[: len(p)] == p


# -- textual notation ---------------------------------------------------------

def parse_path(text: str) -> Path:
    text = text.strip()
    if text in ("", "ε", "eps"):
        return EPSILON
    try:
        parts = tuple(int(x) for x in text.split("."))
    except ValueError:
        raise ValueError(f"bad path {text!r}") from None
    if any(i < 0 for i in parts):
        raise ValueError(f"bad path {text!r}")
    return parts


def format_path(p: Path) -> str:
    return ".".join(map(str, p)) if p else "ε"


_TERM_TOKEN = re.compile(r'\s*(?:(?P<punct>[(),])|"(?P<quoted>[^"]*)"|(?P<name>[^\s(),"]+))')


def parse_term(text: str) -> Term:
    """Parse ``sym(child,child)`` notation; nullary symbols may drop the parens."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TERM_TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"unexpected character at {pos} in {text!r}")
        pos = m.end()
        if m.group("punct"):
            tokens.append(("p", m.group("punct")))
        elif m.group("quoted") is not None:
            tokens.append(("n", m.group("quoted")))
        elif m.group("name"):
            tokens.append(("n", m.group("name")))

    def parse(i: int) -> tuple[Term, int]:
        if i >= len(tokens) or tokens[i][0] != "n":
            raise ValueError(f"expected symbol in {text!r}")
        name = tokens[i][1]
        i += 1
        children = []
        if i < len(tokens) and tokens[i] == ("p", "("):
            i += 1
            if i < len(tokens) and tokens[i] == ("p", ")"):
                return Term(name), i + 1
            while True:
                child, i = parse(i)
                children.append(child)
                if i < len(tokens) and tokens[i] == ("p", ","):
                    i += 1
                    continue
                if i < len(tokens) and tokens[i] == ("p", ")"):
                    i += 1
                    break
                raise ValueError(f"unbalanced parentheses in {text!r}")
        return Term(name, children), i

    term, end = parse(0)
    if end != len(tokens):
        raise ValueError(f"trailing input in {text!r}")
    return term


_PLAIN_SYMBOL = re.compile(r'^[^\s(),"{}|;=]+$')


def format_symbol(name: str) -> str:
    return name if _PLAIN_SYMBOL.match(name) else f'"{name}"'


def format_term(t: Term) -> str:
    # iterative to survive very deep terms
    out: list[str] = []
    stack: list[object] = [t]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            out.append(item)
            continue
        assert isinstance(item, Term)
        out.append(format_symbol(item.symbol))
        if item.children:
            stack.append(")")
            for k, c in enumerate(reversed(item.children)):
                stack.append(c)
                if k < len(item.children) - 1:
                    stack.append(",")
            stack.append("(")
    return "".join(out)


# -- PECs and PCSs ------------------------------------------------------------

@dataclass(frozen=True, order=True, init=False)
class PEC:
    """A set of paths that must address identical subterms."""

    paths: tuple[Path, ...]

    def __init__(self, paths: Iterable[Sequence[int]]):
        canon = tuple(sorted({tuple(p) for p in paths}))
        if not canon:
            raise ValueError("a PEC needs at least one path")
        object.__setattr__(self, "paths", canon)
        object.__setattr__(self, "_hash", hash(canon))

    def __hash__(self) -> int:
        return self._hash

    def __iter__(self) -> Iterator[Path]:
        return iter(self.paths)

    def __len__(self) -> int:
        return len(self.paths)

    def __contains__(self, p) -> bool:
        return tuple(p) in self.paths

    def __str__(self) -> str:
        return "{" + "=".join(format_path(p) for p in self.paths) + "}"

    def __repr__(self) -> str:
        return f"PEC({self})"

    @property
    def max_length(self) -> int:
        return max(len(p) for p in self.paths)


def pec_prefix_free(c: PEC) -> bool:
    ps = c.paths
    # sorted order puts every prefix immediately before some extension of it
    return not any(is_proper_prefix(ps[i], ps[i + 1]) for i in range(len(ps) - 1))


def pec_satisfied(c: PEC, t: Term) -> tuple[bool, Optional[Term]]:
    witness = None
    for p in c.paths:
        sub = subterm_at(t, p)
        if sub is None:
            return False, None
        if witness is None:
            witness = sub
        elif sub != witness:
            return False, None
    return True, witness


@dataclass(frozen=True, order=True, init=False)
class PCS:
    """A normalized set of pairwise-disjoint PECs, sorted by smallest member path."""

    classes: tuple[PEC, ...]

    def __init__(self, classes: Iterable[PEC] = ()):
        object.__setattr__(self, "classes", tuple(sorted(classes)))

    def __iter__(self) -> Iterator[PEC]:
        return iter(self.classes)

    def __len__(self) -> int:
        return len(self.classes)

    def __bool__(self) -> bool:
        return bool(self.classes)

    def __str__(self) -> str:
        return "{" + "; ".join(format_pec_body(c) for c in self.classes) + "}"

    def __repr__(self) -> str:
        return f"PCS({self})"

    def paths(self) -> set[Path]:
        return {p for c in self.classes for p in c.paths}

    @property
    def max_length(self) -> int:
        return max((c.max_length for c in self.classes), default=0)


EMPTY_PCS = PCS()


def format_pec_body(c: PEC) -> str:
    return "=".join(format_path(p) for p in c.paths)


def parse_pec(text: str) -> PEC:
    text = text.strip()
    if text.startswith("{") and text.endswith("}"):
        text = text[1:-1]
    return PEC(parse_path(x) for x in text.split("="))


def parse_pcs(text: str) -> PCS:
    """Parse ``{0=1; 0.0=2}`` or a sequence of ``{..}`` groups."""
    text = text.strip()
    bodies = re.findall(r"\{([^{}]*)\}", text)
    if bodies and len(bodies) > 1:
        parts = bodies
    else:
        inner = bodies[0] if bodies else text
        parts = [x for x in inner.split(";")]
    return pcs_normalize(parse_pec(x) for x in parts if x.strip())


def pcs_satisfied(C: PCS, t: Term) -> bool:
    return all(pec_satisfied(c, t)[0] for c in C.classes)


def pcs_normalize(classes: Iterable[PEC | Iterable[Sequence[int]]]) -> PCS:
    """Merge classes that share a path until they are pairwise disjoint."""
    parent: dict[Path, Path] = {}

    def find(p: Path) -> Path:
        root = p
        while parent[root] != root:
            root = parent[root]
        while parent[p] != root:
            parent[p], p = root, parent[p]
        return root

    for c in classes:
        paths = c.paths if isinstance(c, PEC) else [tuple(p) for p in c]
        first = None
        for p in paths:
            parent.setdefault(p, p)
            if first is None:
                first = find(p)
            else:
                r = find(p)
                if r != first:
                    parent[r] = first
    groups: dict[Path, list[Path]] = {}
    for p in parent:
        groups.setdefault(find(p), []).append(p)
    return PCS(PEC(g) for g in groups.values())


def pcs_union(a: PCS, b: PCS) -> PCS:
    if not a:
        return b
    if not b:
        return a
    return pcs_normalize(a.classes + b.classes)


# -- congruence closure over paths -----------------------------------------------

class PathEGraph:
    """Union-find over paths with congruence along child-index steps.

    A node stands for a path; the class of ``p.i`` is the ``i``-child of the class
    of ``p``.  Merging two classes merges their child maps, which is congruence
    closure specialised to the unary ``.i`` constructors.  The (possibly
    infinite) closure of a PCS is represented by the resulting finite graph.
    """

    def __init__(self):
        self._parent: list[int] = []
        self._children: list[dict[int, int]] = []
        self._ids: dict[Path, int] = {}
        self._frozen = False
        self.root = self._new()
        self._ids[EPSILON] = self.root

    def _new(self) -> int:
        self._parent.append(len(self._parent))
        self._children.append({})
        return len(self._parent) - 1

    def find(self, a: int) -> int:
        parent = self._parent
        root = a
        while parent[root] != root:
            root = parent[root]
        while parent[a] != root:
            parent[a], a = root, parent[a]
        return root

    def add(self, p: Path) -> int:
        if self._frozen:
            raise RuntimeError("e-graph is frozen")
        known = self._ids.get(p)
        if known is not None:
            return known
        parent = self.find(self.add(p[:-1]))
        kids = self._children[parent]
        node = kids.get(p[-1])
        if node is None:
            node = self._new()
            kids[p[-1]] = node
        self._ids[p] = node
        return node

    def merge(self, a: int, b: int) -> None:
        if self._frozen:
            raise RuntimeError("e-graph is frozen")
        pending = [(a, b)]
        while pending:
            x, y = pending.pop()
            x, y = self.find(x), self.find(y)
            if x == y:
                continue
            if len(self._children[x]) < len(self._children[y]):
                x, y = y, x
            self._parent[y] = x
            kids_x = self._children[x]
            for i, cy in self._children[y].items():
                cx = kids_x.get(i)
                if cx is None:
                    kids_x[i] = cy
                else:
                    pending.append((cx, cy))
            self._children[y] = {}

    def freeze(self) -> "PathEGraph":
        self._frozen = True
        return self

    # -- queries

    def classes(self) -> list[int]:
        return sorted({self.find(i) for i in range(len(self._parent))})

    def children_of(self, cls: int) -> dict[int, int]:
        return {i: self.find(c) for i, c in self._children[self.find(cls)].items()}

    def class_key(self, p: Path) -> tuple[int, Path]:
        """Canonical key of ``p`` in the closure: (class, unresolved suffix).

        Two paths are equal in the closure iff their keys coincide.
        """
        cls = self.find(self.root)
        for k, i in enumerate(p):
            nxt = self._children[cls].get(i)
            if nxt is None:
                return cls, p[k:]
            cls = self.find(nxt)
        return cls, EPSILON

    def equal(self, p: Path, q: Path) -> bool:
        return self.class_key(p) == self.class_key(q)

    def is_acyclic(self) -> bool:
        state: dict[int, int] = {}
        for start in self.classes():
            if start in state:
                continue
            stack = [(start, iter(self.children_of(start).values()))]
            state[start] = 1
            while stack:
                node, it = stack[-1]
                nxt = next(it, None)
                if nxt is None:
                    state[node] = 2
                    stack.pop()
                    continue
                st = state.get(nxt)
                if st == 1:
                    return False
                if st is None:
                    state[nxt] = 1
                    stack.append((nxt, iter(self.children_of(nxt).values())))
        return True

    def restricted(self, paths: Iterable[Path]) -> PCS:
        """The closure's classes restricted to ``paths``.

        Singleton groups are kept: a one-path class still demands that the path
        exists in the term.
        """
        groups: dict[tuple[int, Path], list[Path]] = {}
        for p in paths:
            groups.setdefault(self.class_key(p), []).append(p)
        return PCS(PEC(g) for g in groups.values())

    def witness(self) -> Term:
        """Build a term satisfying the closed constraints (acyclic graphs only).

        Classes are visited children-first, so each class's term is assembled from
        already-built terms of its children; unconstrained positions get a leaf.
        """
        if not self.is_acyclic():
            raise ValueError("inconsistent constraints have no witness")
        built: dict[int, Term] = {}
        leaf = Term("z")
        stack = [(self.find(self.root), False)]
        while stack:
            cls, expanded = stack.pop()
            if cls in built:
                continue
            kids = self.children_of(cls)
            if not expanded:
                stack.append((cls, True))
                stack.extend((c, False) for c in kids.values() if c not in built)
                continue
            arity = max(kids) + 1 if kids else 0
            built[cls] = Term(f"w{arity}", [built[kids[i]] if i in kids else leaf for i in range(arity)])
        return built[self.find(self.root)]


def pcs_closure(C: PCS) -> PathEGraph:
    g = PathEGraph()
    for c in C.classes:
        ids = [g.add(p) for p in c.paths]
        for other in ids[1:]:
            g.merge(ids[0], other)
    return g.freeze()


def pcs_consistent(C: PCS) -> bool:
    return _closed(C)[0]


def pcs_consistency_witness(C: PCS) -> Term:
    """A term satisfying ``C``; test support for the consistency check."""
    return pcs_closure(C).witness()


@lru_cache(maxsize=1 << 16)
def _closed(C: PCS) -> tuple[bool, PCS]:
    if not C:
        return True, C
    g = pcs_closure(C)
    if not g.is_acyclic():
        return False, C
    return True, g.restricted(C.paths())


def pcs_close(C: PCS) -> Optional[PCS]:
    """Closure of ``C`` restricted to its own paths; None when inconsistent."""
    ok, closed = _closed(C)
    return closed if ok else None
