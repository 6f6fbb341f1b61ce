"""Haskell-flavoured type expressions and component libraries."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union


@dataclass(frozen=True)
class TCon:
    name: str
    args: tuple["TypeExpr", ...] = ()


@dataclass(frozen=True)
class TVar:
    name: str


@dataclass(frozen=True)
class Arrow:
    arg: "TypeExpr"
    res: "TypeExpr"


TypeExpr = Union[TCon, TVar, Arrow]

LIST = "List"


def tuple_name(n: int) -> str:
    return "(" + "," * (n - 1) + ")"


class TypeSyntaxError(ValueError):
    pass


class UnsupportedType(TypeSyntaxError):
    """Valid Haskell the encoding cannot express."""


@dataclass(frozen=True)
class Component:
    name: str
    type: TypeExpr

    def __str__(self) -> str:
        return f"{self.name} :: {format_type(self.type)}"


_TOKEN = re.compile(r"\s*(?:(->|=>|::)|([()\[\],.])|([A-Za-z_][A-Za-z0-9_']*)|(\S))")


def _tokens(text: str) -> list[str]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        if m.group(4):
            if m.group(4) == "\\":
                raise UnsupportedType("lambda abstractions are not supported")
            raise TypeSyntaxError(f"unexpected character {m.group(4)!r} in {text!r}")
        out.append(m.group(1) or m.group(2) or m.group(3))
        pos = m.end()
    return out


class _TypeParser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokens(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, expected=None) -> str:
        t = self.peek()
        if t is None or (expected is not None and t != expected):
            want = repr(expected) if expected else "more input"
            raise TypeSyntaxError(f"expected {want} in {self.text!r}, found {t!r}")
        self.i += 1
        return t

    def parse(self) -> TypeExpr:
        self._skip_forall()
        self._skip_context()
        t = self.arrow()
        if self.peek() is not None:
            raise TypeSyntaxError(f"trailing {self.peek()!r} in {self.text!r}")
        return t

    def _skip_forall(self):
        if self.peek() == "forall":
            self.take()
            while self.peek() not in (".", None):
                self.take()
            self.take(".")

    def _skip_context(self):
        # class constraints are parsed and dropped
        if "=>" in self.toks:
            depth = 0
            for j, t in enumerate(self.toks):
                if t in "([":
                    depth += 1
                elif t in ")]":
                    depth -= 1
                elif t == "=>" and depth == 0:
                    self.i = j + 1
                    return

    def arrow(self) -> TypeExpr:
        left = self.app()
        if self.peek() == "->":
            self.take()
            return Arrow(left, self.arrow())
        return left

    def app(self) -> TypeExpr:
        head = self.atom()
        args = []
        while self.peek() not in (None, "->", ")", "]", ","):
            args.append(self.atom())
        if not args:
            return head
        if isinstance(head, TVar):
            raise UnsupportedType(f"higher-kinded type variable {head.name} in {self.text!r}")
        if not isinstance(head, TCon) or head.args:
            raise TypeSyntaxError(f"cannot apply {format_type(head)} in {self.text!r}")
        return TCon(head.name, tuple(args))

    def atom(self) -> TypeExpr:
        t = self.take()
        if t == "(":
            if self.peek() == ")":
                self.take()
                return TCon("()")
            if self.peek() == "->" and self.toks[self.i + 1: self.i + 2] == [")"]:
                raise UnsupportedType("the bare arrow constructor (->) is higher-kinded")
            items = [self.arrow()]
            while self.peek() == ",":
                self.take()
                items.append(self.arrow())
            self.take(")")
            return items[0] if len(items) == 1 else TCon(tuple_name(len(items)), tuple(items))
        if t == "[":
            if self.peek() == "]":
                raise UnsupportedType("the bare list constructor [] is higher-kinded")
            inner = self.arrow()
            self.take("]")
            return TCon(LIST, (inner,))
        if t in ("->", "=>", "::", ")", "]", ",", "."):
            raise TypeSyntaxError(f"unexpected {t!r} in {self.text!r}")
        if t[0].isupper():
            return TCon(t)
        return TVar(t)


def parse_type(text: str) -> TypeExpr:
    """Parse a type: ``a -> [Maybe a] -> a``, ``Ord a => (a, b) -> [a]``."""
    return _TypeParser(text).parse()


def format_type(t: TypeExpr, prec: int = 0) -> str:
    if isinstance(t, TVar):
        return t.name
    if isinstance(t, Arrow):
        s = f"{format_type(t.arg, 1)} -> {format_type(t.res, 0)}"
        return f"({s})" if prec > 0 else s
    if t.name == LIST and len(t.args) == 1:
        return f"[{format_type(t.args[0])}]"
    if t.name.startswith("(,") and len(t.args) == len(t.name) - 1:
        return "(" + ", ".join(format_type(a) for a in t.args) + ")"
    if not t.args:
        return t.name
    s = " ".join([t.name] + [format_type(a, 2) for a in t.args])
    return f"({s})" if prec > 1 else s


def type_vars(t: TypeExpr) -> list[str]:
    """Distinct variables in order of first occurrence."""
    seen: dict[str, None] = {}
    stack = [t]
    while stack:
        x = stack.pop()
        if isinstance(x, TVar):
            seen.setdefault(x.name, None)
        elif isinstance(x, Arrow):
            stack += [x.res, x.arg]
        else:
            stack += list(reversed(x.args))
    return list(seen)


def constructors(t: TypeExpr) -> Iterator[tuple[str, int]]:
    """(name, arity) of every type constructor occurring in ``t``; arrows excluded."""
    stack = [t]
    while stack:
        x = stack.pop()
        if isinstance(x, Arrow):
            stack += [x.arg, x.res]
        elif isinstance(x, TCon):
            yield x.name, len(x.args)
            stack += list(x.args)


def substitute_vars(t: TypeExpr, env: dict[str, TypeExpr]) -> TypeExpr:
    if isinstance(t, TVar):
        return env.get(t.name, t)
    if isinstance(t, Arrow):
        return Arrow(substitute_vars(t.arg, env), substitute_vars(t.res, env))
    return TCon(t.name, tuple(substitute_vars(a, env) for a in t.args))


SKOLEM_PREFIX = "'"


def skolemize(t: TypeExpr) -> TypeExpr:
    """Turn the query's type variables into opaque constants."""
    return substitute_vars(t, {v: TCon(SKOLEM_PREFIX + v) for v in type_vars(t)})


def arrow_spine(t: TypeExpr) -> tuple[list[TypeExpr], TypeExpr]:
    params = []
    while isinstance(t, Arrow):
        params.append(t.arg)
        t = t.res
    return params, t


def parse_library(text: str) -> list[Component]:
    """One ``name :: type`` per line; ``--`` and ``#`` start comments."""
    comps: list[Component] = []
    seen: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = re.split(r"--|#", raw, maxsplit=1)[0].strip()
        if not line:
            continue
        if "::" not in line:
            raise TypeSyntaxError(f"line {lineno}: expected 'name :: type'")
        name, ty = (s.strip() for s in line.split("::", 1))
        if name.startswith("(") and name.endswith(")"):
            name = name[1:-1].strip()
        if not name or any(c.isspace() for c in name):
            raise TypeSyntaxError(f"line {lineno}: bad component name {name!r}")
        if name in seen:
            raise TypeSyntaxError(f"line {lineno}: duplicate component {name}")
        try:
            t = parse_type(ty)
        except TypeSyntaxError as exc:
            raise type(exc)(f"line {lineno}: {exc}") from None
        seen.add(name)
        comps.append(Component(name, t))
    return comps
