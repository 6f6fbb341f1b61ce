"""Small hand-built automata used by the report command and the tests."""

from __future__ import annotations

from ecta.automaton import Node, leaf, mk_edge, mk_node


def perfect_tree(depth: int, leaves: tuple[str, ...] = ("x", "y")) -> Node:
    """Perfect binary ``t``-trees of the given depth whose two subtrees are always equal.

    The language has one term per leaf symbol, each of size ``2**(depth+1) - 1``.
    """
    if depth < 0:
        raise ValueError("depth must be non-negative")
    n = mk_node([mk_edge(s) for s in leaves])
    for _ in range(depth):
        n = mk_node([mk_edge("t", [n, n], "{0=1}")])
    return n


def equal_pair(symbols: tuple[str, ...] = ("a", "b", "c")) -> Node:
    """``+(f(t), f(t))`` with the two arguments of ``f`` forced equal."""
    base = mk_node([mk_edge(s) for s in symbols])
    wrapped = mk_node([mk_edge("f", [base])])
    return mk_node([mk_edge("+", [wrapped, wrapped], "{0.0=1.0}")])


def typed_applications() -> Node:
    """Size-two applications over x:Int, y:Char, f:Bool->Bool, g:Int->Bool, h:Char->Int.

    Scalars are ``name(type)``, functions ``name(arg, result)``, and
    ``app(fun, arg)`` requires fun.arg = arg.type.
    """
    ty = {s: leaf(s) for s in ("Int", "Char", "Bool")}
    unary = mk_node([mk_edge("f", [ty["Bool"], ty["Bool"]]),
                     mk_edge("g", [ty["Int"], ty["Bool"]]),
                     mk_edge("h", [ty["Char"], ty["Int"]])])
    scalar = mk_node([mk_edge("x", [ty["Int"]]), mk_edge("y", [ty["Char"]])])
    return mk_node([mk_edge("app", [unary, scalar], "{0.0=1.0}")])


def typed_query(goal: str = "Bool") -> Node:
    """The applications above with a result type, wrapped in ``query(term, type)``.

    ``app(type, fun, arg)`` carries the application's type, constrained to the
    function's result; the query pins the term's type to ``goal``.
    """
    ty = {s: leaf(s) for s in ("Int", "Char", "Bool")}
    base = mk_node([mk_edge(s) for s in ("Int", "Char", "Bool")])
    unary = mk_node([mk_edge("f", [ty["Bool"], ty["Bool"]]),
                     mk_edge("g", [ty["Int"], ty["Bool"]]),
                     mk_edge("h", [ty["Char"], ty["Int"]])])
    scalar = mk_node([mk_edge("x", [ty["Int"]]), mk_edge("y", [ty["Char"]])])
    term = mk_node([mk_edge("app", [base, unary, scalar], "{1.0=2.0; 0=1.1}")])
    return mk_node([mk_edge("query", [term, ty[goal]], "{0.0=1}")])
