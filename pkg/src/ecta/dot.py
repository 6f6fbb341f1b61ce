"""Graphviz rendering: states as ellipses, transitions as boxes."""

from __future__ import annotations

from ecta.automaton import BVAR, MU, Edge, Node
from ecta.terms import format_pec_body


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'


def export_dot(n: Node, name: str = "ecta") -> str:
    """Deterministic DOT text; identifiers depend only on traversal order, not store ids."""
    lines = [f"digraph {_quote(name)} {{", "  node [fontname=\"Helvetica\"];"]
    if n.is_bottom:
        lines.append('  n0 [shape=ellipse, label="⊥"];')
        lines.append("}")
        return "\n".join(lines) + "\n"
    ids: dict[tuple, str] = {}
    counter = [0]

    def fresh(prefix: str) -> str:
        counter[0] += 1
        return f"{prefix}{counter[0]}"

    def visit(m: Node, env: tuple[str, ...]) -> str:
        key = (m.id, env[: m.nbound])
        hit = ids.get(key)
        if hit is not None:
            return hit
        me = ids[key] = fresh("n")
        if m.kind == MU:
            lines.append(f'  {me} [shape=ellipse, label="μ"];')
            edges, inner = m.body.edges, (me,) + env
        else:
            label = "⊥" if m.is_bottom else ""
            lines.append(f"  {me} [shape=ellipse, label={_quote(label)}];")
            edges, inner = m.edges, env
        for e in edges:
            if not isinstance(e, Edge):
                continue
            box = fresh("e")
            label = e.symbol
            if e.constraints:
                label += "\n{" + "; ".join(format_pec_body(c) for c in e.constraints.classes) + "}"
            lines.append(f"  {box} [shape=box, label={_quote(label)}];")
            lines.append(f"  {me} -> {box};")
            for i, c in enumerate(e.children):
                if c.kind == BVAR:
                    lines.append(f'  {box} -> {inner[c.index]} [label="{i}", style=dashed];')
                else:
                    lines.append(f'  {box} -> {visit(c, inner)} [label="{i}"];')
        return me

    visit(n, ())
    lines.append("}")
    return "\n".join(lines) + "\n"
