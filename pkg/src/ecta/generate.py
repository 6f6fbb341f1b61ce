"""Random small ECTAs for property checks and benchmarks."""

from __future__ import annotations

import random
from typing import Optional

from ecta.automaton import Node, edges_of, mk_edge, mk_node, normalize
from ecta.terms import PEC

# symbol -> arity
SIGNATURE = {"a": 0, "b": 0, "c": 0, "f": 1, "g": 1, "h": 2, "k": 2}


def _random_path(rng: random.Random, kids: list[Node], max_len: int) -> tuple[int, ...]:
    """Mostly a path that exists in some run: walk down random transitions."""
    first = rng.randrange(len(kids))
    path = [first]
    n = kids[first]
    while len(path) < max_len and rng.random() < 0.6:
        edges = [e for e in edges_of(n) if e.children]
        if not edges:
            break
        e = rng.choice(edges)
        i = rng.randrange(len(e.children))
        path.append(i)
        n = e.children[i]
    return tuple(path)


def random_acyclic_ecta(rng: random.Random, max_nodes: int = 7, max_pecs: int = 3,
                        max_edges: int = 3, signature: Optional[dict[str, int]] = None) -> Node:
    """A normalized acyclic ECTA with at most ``max_nodes`` nodes and ``max_pecs`` constraint classes.

    Nodes are built bottom-up so children always come from earlier nodes; the
    last node is the root.  The result may be the empty node.
    """
    sig = signature or SIGNATURE
    leaves = [s for s, a in sig.items() if a == 0]
    inner = [s for s, a in sig.items() if a > 0]
    nodes: list[Node] = []
    pecs_left = rng.randint(min(1, max_pecs), max_pecs)
    count = rng.randint(min(2, max_nodes), max_nodes)
    for i in range(count):
        edges = []
        for _ in range(rng.randint(1, max_edges)):
            if not nodes or rng.random() < (0.1 if i == count - 1 else 0.3):
                edges.append(mk_edge(rng.choice(leaves)))
                continue
            sym = rng.choice(inner)
            arity = sig[sym]
            kids = [rng.choice(nodes) for _ in range(arity)]
            classes = []
            if pecs_left and (i == count - 1 or rng.random() < 0.6):
                size = rng.choice((2, 2, 3))
                paths = {_random_path(rng, kids, 3) for _ in range(size)}
                if len(paths) > 1:
                    classes.append(PEC(paths))
                    pecs_left -= 1
            edges.append(mk_edge(sym, kids, classes))
        nodes.append(mk_node(edges))
    return normalize(nodes[-1])
