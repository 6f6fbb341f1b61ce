"""Cross-check enumeration against brute-force bounded denotation."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ecta.automaton import Node, denote_bounded, is_finitely_constrained
from ecta.enumeration import EnumStats, enumerate_states, expand_bounded
from ecta.terms import Term, format_term


@dataclass
class OracleReport:
    depth: int
    enumerated: int
    denoted: int
    only_enumerated: list[Term] = field(default_factory=list)
    only_denoted: list[Term] = field(default_factory=list)
    stats: Optional[EnumStats] = None

    @property
    def passed(self) -> bool:
        return not self.only_enumerated and not self.only_denoted

    def lines(self) -> list[str]:
        out = [
            f"result={'pass' if self.passed else 'fail'}",
            f"depth={self.depth}",
            f"enumerated={self.enumerated}",
            f"denoted={self.denoted}",
            f"only_enumerated={len(self.only_enumerated)}",
            f"only_denoted={len(self.only_denoted)}",
        ]
        out += [f"+ {format_term(t)}" for t in self.only_enumerated]
        out += [f"- {format_term(t)}" for t in self.only_denoted]
        return out


def oracle_check(n: Node, depth: int, schedule="dfs-lr") -> OracleReport:
    """Terms up to ``depth`` from enumerate-then-expand versus :func:`denote_bounded`.

    ``+`` lines in the report are terms only enumeration produced, ``-`` lines
    terms it missed.
    """
    if not is_finitely_constrained(n):
        raise ValueError("enumeration needs a finitely-constrained automaton")
    stats = EnumStats()
    enumerated: set[Term] = set()
    if not n.is_bottom:
        for st in enumerate_states(n, schedule=schedule, stats=stats):
            enumerated |= expand_bounded(st, depth)
    denoted = set(denote_bounded(n, depth)) if not n.is_bottom else set()
    return OracleReport(depth, len(enumerated), len(denoted),
                        sorted(enumerated - denoted), sorted(denoted - enumerated), stats)
