"""Automata for types, components and sized term spaces.

Child layout:

* a component or input transition ``name(type)``, so a term's type is at child 0;
* an arrow ``->(tag, in, out)``; with the tag switched off, ``->(in, out)``;
* an application ``app(type, fun, arg, tag)``, constrained by
  fun.type.in = arg.type, app.type = fun.type.out and fun.type.tag = tag;
* ``query(term, type)`` with term.type = type.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Optional, Sequence

from ecta.automaton import BOTTOM, Node, fvar, leaf, mk_edge, mk_node, mu
from ecta.terms import PEC
from ecta.synth.types import Arrow, Component, TCon, TVar, TypeExpr, constructors

ARROW = "->"
TAG = "(->)"
APP = "app"
QUERY = "query"
RESERVED = {APP, QUERY}


@dataclass(frozen=True)
class Encoding:
    """Index layout; ``tag=False`` gives the untagged binary arrow."""

    tag: bool = True

    @property
    def arg_index(self) -> int:
        return 1 if self.tag else 0

    @property
    def res_index(self) -> int:
        return 2 if self.tag else 1


TAGGED = Encoding(True)
UNTAGGED = Encoding(False)


def tag_node() -> Node:
    return leaf(TAG)


def constructor_table(types: Iterable[TypeExpr]) -> dict[str, int]:
    """Constructor arities, checked for consistency."""
    table: dict[str, int] = {}
    for t in types:
        for name, arity in constructors(t):
            if table.setdefault(name, arity) != arity:
                raise ValueError(f"type constructor {name} used with arities {table[name]} and {arity}")
    return table


def build_any_node(cons: dict[str, int], enc: Encoding = TAGGED) -> Node:
    """Every type over ``cons`` plus arrows, as one recursive node."""
    me = fvar("any")
    edges = [mk_edge(name, [me] * arity) for name, arity in sorted(cons.items())]
    edges.append(mk_edge(ARROW, ([tag_node()] if enc.tag else []) + [me, me]))
    return mu("any", mk_node(edges))


def encode_type(t: TypeExpr, any_node: Node, enc: Encoding = TAGGED,
                occurrences: Optional[dict[str, list]] = None, path: tuple = ()) -> Node:
    """The node for ``t``; variables become ``any_node`` and their paths are recorded."""
    if isinstance(t, TVar):
        if occurrences is not None:
            occurrences.setdefault(t.name, []).append(path)
        return any_node
    if isinstance(t, Arrow):
        kids = [tag_node()] if enc.tag else []
        kids.append(encode_type(t.arg, any_node, enc, occurrences, path + (enc.arg_index,)))
        kids.append(encode_type(t.res, any_node, enc, occurrences, path + (enc.res_index,)))
        return mk_node([mk_edge(ARROW, kids)])
    kids = [encode_type(a, any_node, enc, occurrences, path + (i,)) for i, a in enumerate(t.args)]
    return mk_node([mk_edge(t.name, kids)])


def encode_component(comp: Component, any_node: Node, enc: Encoding = TAGGED):
    """``name(type)``; all positions of one type variable share a constraint class."""
    if comp.name in RESERVED:
        raise ValueError(f"component name {comp.name!r} is reserved")
    occ: dict[str, list] = {}
    ty = encode_type(comp.type, any_node, enc, occ)
    classes = [PEC([(0,) + p for p in ps]) for ps in occ.values() if len(ps) > 1]
    return mk_edge(comp.name, [ty], classes)


def app_edge(any_node: Node, fun: Node, arg: Node, enc: Encoding = TAGGED):
    classes = [PEC([(1, 0, enc.arg_index), (2, 0)]), PEC([(0,), (1, 0, enc.res_index)])]
    kids = [any_node, fun, arg]
    if enc.tag:
        classes.append(PEC([(1, 0, 0), (3,)]))
        kids.append(tag_node())
    return mk_edge(APP, kids, classes)


@dataclass
class TermSpace:
    """Nodes of terms by size and, with relevancy, by the set of inputs they mention."""

    any_node: Node
    encoding: Encoding
    num_inputs: int
    relevancy: bool
    nodes: dict[tuple[int, int], Node]

    def full(self, size: int) -> Node:
        """Terms of ``size`` that mention every input (all terms without relevancy)."""
        mask = (1 << self.num_inputs) - 1 if self.relevancy else 0
        return self.nodes.get((size, mask), BOTTOM)


def build_term_space(max_size: int, library: Sequence[Component], inputs: Sequence[Component],
                     relevancy: bool = True, enc: Encoding = TAGGED,
                     extra_types: Iterable[TypeExpr] = ()) -> TermSpace:
    """Term nodes for sizes ``1..max_size``.

    Keys are ``(size, mask)``; without relevancy the mask is always 0 and inputs
    sit with the components.
    """
    if max_size < 1:
        raise ValueError("max_size must be at least 1")
    cons = constructor_table([c.type for c in library] + [c.type for c in inputs] + list(extra_types))
    any_node = build_any_node(cons, enc)
    comp_edges = [encode_component(c, any_node, enc) for c in library]
    input_edges = [encode_component(c, any_node, enc) for c in inputs]
    k = len(inputs)
    nodes: dict[tuple[int, int], Node] = {}
    if relevancy:
        masks = range(1 << k)
        nodes[(1, 0)] = mk_node(comp_edges)
        for i, e in enumerate(input_edges):
            nodes[(1, 1 << i)] = mk_node([e])
    else:
        masks = range(1)
        nodes[(1, 0)] = mk_node(comp_edges + input_edges)
    for n in range(2, max_size + 1):
        for s in masks:
            edges = []
            for i in range(1, n):
                for p, q in product(masks, repeat=2):
                    if p | q != s:
                        continue
                    fun = nodes.get((i, p), BOTTOM)
                    arg = nodes.get((n - i, q), BOTTOM)
                    if fun.is_bottom or arg.is_bottom:
                        continue
                    edges.append(app_edge(any_node, fun, arg, enc))
            node = mk_node(edges)
            if not node.is_bottom:
                nodes[(n, s)] = node
    return TermSpace(any_node, enc, k, relevancy, nodes)


def attach_query(space: Node, query_type: Node) -> Node:
    """Keep the terms of ``space`` whose type is ``query_type``."""
    return mk_node([mk_edge(QUERY, [space, query_type], [PEC([(0, 0), (1,)])])])


