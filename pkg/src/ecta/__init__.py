"""Equality-constrained tree automata: construction, static reduction and enumeration."""

from ecta.automaton import (
    BOTTOM,
    Edge,
    Node,
    denote_bounded,
    fvar,
    intersect,
    leaf,
    mk_edge,
    mk_node,
    mu,
    union,
)
from ecta.enumeration import (
    AUDIT,
    EnumStats,
    enumerate_states,
    enumerate_terms,
    expand,
    format_state,
)
from ecta.reduction import reduce_fixpoint
from ecta.terms import PCS, PEC, Term, parse_pcs, parse_term, pcs_consistent
from ecta.textformat import parse_ecta_text, print_ecta

__all__ = [
    "AUDIT", "BOTTOM", "Edge", "EnumStats", "Node", "PCS", "PEC", "Term",
    "denote_bounded", "enumerate_states", "enumerate_terms", "expand", "format_state",
    "fvar", "intersect", "leaf", "mk_edge", "mk_node", "mu", "parse_ecta_text",
    "parse_pcs", "parse_term", "pcs_consistent", "print_ecta", "reduce_fixpoint", "union",
]
