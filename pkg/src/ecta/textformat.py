"""Line-oriented text form of an automaton.

::

    # comment
    node 0 = { a() | b() }
    node 1 = { f(0) | "+"(0, 0) where {0=1} }
    mu 2 = { z() | s(2) }        # the node's own id inside its body is the back-reference
    node 3 = { pair(1, 2) where {0.0=1.0; 0=1} }
    root 3

Declarations may appear in any order.  Every cycle has to pass through a
``mu`` declaration.  ``node 4 = { }`` is the empty node.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from ecta.automaton import BVAR, MU, Edge, Node, fvar, mk_edge, mk_node, mu
from ecta.terms import PEC, format_pec_body, parse_path


class EctaSyntaxError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        where = f"{line}:{column}: " if line else ""
        super().__init__(where + message)
        self.line = line
        self.column = column


_TOKEN = re.compile(r'''
    (?P<space>[ \t\r]+)
  | (?P<newline>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<punct>[(),{}|;=])
  | "(?P<quoted>[^"\n]*)"
  | (?P<word>[^\s(),"{}|;=\#][^\s(),"{}|;=]*)
''', re.VERBOSE)

_KEYWORDS = {"node", "mu", "root", "where"}


@dataclass
class _Tok:
    kind: str  # "p" punctuation, "w" word, "q" quoted word
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    out = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise EctaSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        col = pos - line_start + 1
        kind = m.lastgroup
        if kind == "newline":
            line += 1
            line_start = m.end()
        elif kind == "punct":
            out.append(_Tok("p", m.group(), line, col))
        elif kind == "quoted":
            out.append(_Tok("q", m.group("quoted"), line, col))
        elif kind == "word":
            out.append(_Tok("w", m.group(), line, col))
        pos = m.end()
    return out


@dataclass
class _EdgeDecl:
    symbol: str
    children: list[tuple[str, _Tok]]
    constraints: list[PEC]
    tok: _Tok


@dataclass
class _Decl:
    name: str
    recursive: bool
    edges: list[_EdgeDecl]
    tok: _Tok


@dataclass
class EctaDocument:
    nodes: dict[str, Node] = field(default_factory=dict)
    root: Optional[Node] = None


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0
        end_line = text.count("\n") + 1
        self.eof = _Tok("eof", "", end_line, len(text) - text.rfind("\n"))

    def peek(self) -> _Tok:
        return self.toks[self.i] if self.i < len(self.toks) else self.eof

    def next(self) -> _Tok:
        t = self.peek()
        self.i += 1
        return t

    def fail(self, msg: str, tok: Optional[_Tok] = None):
        tok = tok or self.peek()
        raise EctaSyntaxError(msg, tok.line, tok.col)

    def expect(self, text: str) -> _Tok:
        t = self.next()
        if t.kind != "p" or t.text != text:
            self.fail(f"expected {text!r}, found {t.text or 'end of input'!r}", t)
        return t

    def at(self, text: str) -> bool:
        t = self.peek()
        return t.kind == "p" and t.text == text

    def ident(self) -> _Tok:
        t = self.next()
        if t.kind != "w" or t.text in _KEYWORDS:
            self.fail(f"expected a node id, found {t.text or 'end of input'!r}", t)
        return t

    def parse(self) -> tuple[dict[str, _Decl], Optional[_Tok]]:
        decls: dict[str, _Decl] = {}
        root = None
        while self.peek().kind != "eof":
            t = self.next()
            if t.kind == "w" and t.text == "root":
                if root is not None:
                    self.fail("duplicate root declaration", t)
                root = self.ident()
            elif t.kind == "w" and t.text in ("node", "mu"):
                name = self.ident()
                if name.text in decls:
                    self.fail(f"node {name.text} declared twice", name)
                self.expect("=")
                decls[name.text] = _Decl(name.text, t.text == "mu", self.body(), name)
            else:
                self.fail(f"expected 'node', 'mu' or 'root', found {t.text!r}", t)
        return decls, root

    def body(self) -> list[_EdgeDecl]:
        self.expect("{")
        edges = []
        if self.at("}"):
            self.next()
            return edges
        while True:
            edges.append(self.edge())
            if self.at("|"):
                self.next()
                continue
            self.expect("}")
            return edges

    def edge(self) -> _EdgeDecl:
        t = self.next()
        if t.kind not in ("w", "q") or (t.kind == "w" and t.text in _KEYWORDS):
            self.fail(f"expected a transition symbol, found {t.text or 'end of input'!r}", t)
        kids = []
        if self.at("("):
            self.next()
            if not self.at(")"):
                while True:
                    k = self.ident()
                    kids.append((k.text, k))
                    if self.at(","):
                        self.next()
                        continue
                    break
            self.expect(")")
        constraints = []
        w = self.peek()
        if w.kind == "w" and w.text == "where":
            self.next()
            self.expect("{")
            while True:
                constraints.append(self.pec(len(kids)))
                if self.at(";"):
                    self.next()
                    continue
                break
            self.expect("}")
        return _EdgeDecl(t.text, kids, constraints, t)

    def pec(self, arity: int) -> PEC:
        paths = []
        while True:
            t = self.next()
            if t.kind != "w":
                self.fail(f"expected a path, found {t.text or 'end of input'!r}", t)
            try:
                p = parse_path(t.text)
            except ValueError:
                self.fail(f"bad path {t.text!r}", t)
            if p and p[0] >= arity:
                self.fail(f"path {t.text} leaves a transition of arity {arity}", t)
            paths.append(p)
            if self.at("="):
                self.next()
                continue
            return PEC(paths)


def _build(decls: dict[str, _Decl], root: Optional[str]) -> dict[str, Node]:
    arities: dict[str, tuple[int, _Tok]] = {}
    for d in decls.values():
        for e in d.edges:
            seen = arities.setdefault(e.symbol, (len(e.children), e.tok))
            if seen[0] != len(e.children):
                raise EctaSyntaxError(
                    f"arity mismatch: {e.symbol} takes {seen[0]} children "
                    f"(line {seen[1].line}), used here with {len(e.children)}",
                    e.tok.line, e.tok.col)
            for name, tok in e.children:
                if name not in decls:
                    raise EctaSyntaxError(f"reference to undeclared node {name}", tok.line, tok.col)

    closed: dict[str, Node] = {}
    open_results: dict[str, Node] = {}
    active: list[str] = []

    def resolve(name: str, tok: _Tok) -> Node:
        hit = closed.get(name)
        if hit is not None:
            return hit
        if name in active:
            if decls[name].recursive:
                return fvar(("text", name))
            raise EctaSyntaxError(f"cycle through node {name}; declare it with 'mu'", tok.line, tok.col)
        hit = open_results.get(name)
        if hit is not None and all(n[1] in active for n in hit.fvars):
            return hit
        d = decls[name]
        active.append(name)
        edges = [mk_edge(e.symbol, [resolve(c, t) for c, t in e.children], e.constraints)
                 for e in d.edges]
        active.pop()
        node = mk_node(edges)
        if d.recursive:
            node = mu(("text", name), node)
        if node.fvars:
            open_results[name] = node
        else:
            closed[name] = node
        return node

    # start from the root so that recursive nodes nest the way the root sees them
    order = ([root] if root is not None else []) + list(reversed(decls))
    for name in order:
        resolve(name, decls[name].tok)
    return {name: closed[name] for name in decls}


def parse_ecta_document(text: str) -> EctaDocument:
    decls, root = _Parser(text).parse()
    if root is not None and root.text not in decls:
        raise EctaSyntaxError(f"root refers to undeclared node {root.text}", root.line, root.col)
    nodes = _build(decls, root.text if root is not None else None)
    return EctaDocument(nodes, nodes[root.text] if root is not None else None)


def parse_ecta_text(text: str) -> Node:
    """The root node of a document; without a ``root`` line, the last declaration."""
    doc = parse_ecta_document(text)
    if doc.root is not None:
        return doc.root
    if not doc.nodes:
        raise EctaSyntaxError("document declares no nodes", 1, 1)
    return list(doc.nodes.values())[-1]


_PLAIN = re.compile(r'^[^\s(),"{}|;=#][^\s(),"{}|;=]*$')


def _symbol_text(name: str) -> str:
    if '"' in name or "\n" in name:
        raise ValueError(f"symbol {name!r} cannot be written in the text format")
    if _PLAIN.match(name) and name not in _KEYWORDS:
        return name
    return f'"{name}"'


def print_ecta(n: Node) -> str:
    """Declarations for everything reachable from ``n``, children first, then ``root``."""
    if not n.closed:
        raise ValueError("only closed nodes can be printed")
    names: dict[tuple, str] = {}
    lines: list[str] = []

    def edge_text(e: Edge, env: tuple[str, ...]) -> str:
        kids = ", ".join(visit(c, env) for c in e.children)
        out = _symbol_text(e.symbol) + f"({kids})"
        if e.constraints:
            out += " where {" + "; ".join(format_pec_body(c) for c in e.constraints.classes) + "}"
        return out

    def visit(m: Node, env: tuple[str, ...]) -> str:
        if m.kind == BVAR:
            return env[m.index]
        key = (m.id, env[: m.nbound])
        hit = names.get(key)
        if hit is not None:
            return hit
        name = names[key] = str(len(names))
        if m.kind == MU:
            inner = (name,) + env
            body = " | ".join(edge_text(e, inner) for e in m.body.edges if isinstance(e, Edge))
            lines.append(f"mu {name} = {{ {body} }}" if body else f"mu {name} = {{ }}")
        else:
            body = " | ".join(edge_text(e, env) for e in m.edges if isinstance(e, Edge))
            lines.append(f"node {name} = {{ {body} }}" if body else f"node {name} = {{ }}")
        return name

    # children are declared before their parents, except inside recursive nodes
    root = visit(n, ())
    lines.append(f"root {root}")
    return "\n".join(lines) + "\n"
