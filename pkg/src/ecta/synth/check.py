"""Programs and an independent Hindley-Milner style checker used as a test oracle."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Union

from ecta.synth.types import Arrow, Component, TCon, TVar, TypeExpr, type_vars


@dataclass(frozen=True)
class Name:
    name: str

    def __str__(self) -> str:
        return format_program(self)


@dataclass(frozen=True)
class Apply:
    fun: "Program"
    arg: "Program"

    def __str__(self) -> str:
        return format_program(self)


Program = Union[Name, Apply]


def format_program(p: Program) -> str:
    if isinstance(p, Name):
        name = p.name
        return f"({name})" if not (name[0].isalnum() or name[0] in "_'") else name
    head, args = p, []
    while isinstance(head, Apply):
        args.append(head.arg)
        head = head.fun
    parts = [format_program(head)]
    for a in reversed(args):
        s = format_program(a)
        parts.append(f"({s})" if isinstance(a, Apply) else s)
    return " ".join(parts)


def program_size(p: Program) -> int:
    return 1 if isinstance(p, Name) else program_size(p.fun) + program_size(p.arg)


def program_names(p: Program) -> set[str]:
    if isinstance(p, Name):
        return {p.name}
    return program_names(p.fun) | program_names(p.arg)


class TypeError_(Exception):
    pass


class _Unifier:
    def __init__(self):
        self.subst: dict[str, TypeExpr] = {}
        self.counter = itertools.count()

    def fresh(self) -> TVar:
        return TVar(f"?{next(self.counter)}")

    def instantiate(self, t: TypeExpr) -> TypeExpr:
        env = {v: self.fresh() for v in type_vars(t)}
        return _apply_env(t, env)

    def walk(self, t: TypeExpr) -> TypeExpr:
        while isinstance(t, TVar) and t.name in self.subst:
            t = self.subst[t.name]
        return t

    def occurs(self, name: str, t: TypeExpr) -> bool:
        t = self.walk(t)
        if isinstance(t, TVar):
            return t.name == name
        if isinstance(t, Arrow):
            return self.occurs(name, t.arg) or self.occurs(name, t.res)
        return any(self.occurs(name, a) for a in t.args)

    def unify(self, a: TypeExpr, b: TypeExpr) -> None:
        a, b = self.walk(a), self.walk(b)
        if isinstance(a, TVar) and isinstance(b, TVar) and a.name == b.name:
            return
        if isinstance(a, TVar):
            if self.occurs(a.name, b):
                raise TypeError_("occurs check")
            self.subst[a.name] = b
            return
        if isinstance(b, TVar):
            self.unify(b, a)
            return
        if isinstance(a, Arrow) and isinstance(b, Arrow):
            self.unify(a.arg, b.arg)
            self.unify(a.res, b.res)
            return
        if isinstance(a, TCon) and isinstance(b, TCon) and a.name == b.name and len(a.args) == len(b.args):
            for x, y in zip(a.args, b.args):
                self.unify(x, y)
            return
        raise TypeError_("constructor clash")

    def resolve(self, t: TypeExpr) -> TypeExpr:
        t = self.walk(t)
        if isinstance(t, Arrow):
            return Arrow(self.resolve(t.arg), self.resolve(t.res))
        if isinstance(t, TCon):
            return TCon(t.name, tuple(self.resolve(a) for a in t.args))
        return t


def _apply_env(t: TypeExpr, env: dict[str, TypeExpr]) -> TypeExpr:
    if isinstance(t, TVar):
        return env.get(t.name, t)
    if isinstance(t, Arrow):
        return Arrow(_apply_env(t.arg, env), _apply_env(t.res, env))
    return TCon(t.name, tuple(_apply_env(a, env) for a in t.args))


def infer(p: Program, env: dict[str, TypeExpr], monomorphic: frozenset = frozenset()) -> Optional[TypeExpr]:
    """Most general type of ``p``, or None if it is ill-typed.

    Names in ``env`` are polymorphic in all their variables, except those in
    ``monomorphic``.
    """
    u = _Unifier()

    def go(q: Program) -> TypeExpr:
        if isinstance(q, Name):
            if q.name not in env:
                raise TypeError_(f"unknown name {q.name}")
            t = env[q.name]
            return t if q.name in monomorphic else u.instantiate(t)
        f = go(q.fun)
        a = go(q.arg)
        r = u.fresh()
        u.unify(f, Arrow(a, r))
        return r

    try:
        return u.resolve(go(p))
    except TypeError_:
        return None


def check_program(p: Program, library: Sequence[Component], inputs: Sequence[Component],
                  goal: TypeExpr) -> bool:
    """Does ``p`` have a type that instantiates to ``goal``?"""
    env = {c.name: c.type for c in library}
    env.update({c.name: c.type for c in inputs})
    t = infer(p, env, frozenset(c.name for c in inputs))
    if t is None:
        return False
    u = _Unifier()
    try:
        u.unify(t, goal)
    except TypeError_:
        return False
    return True


def all_programs(names: Sequence[str], size: int) -> Iterator[Program]:
    """Every application tree with ``size`` leaves drawn from ``names``."""
    if size == 1:
        for n in names:
            yield Name(n)
        return
    for i in range(1, size):
        for f in all_programs(names, i):
            for a in all_programs(names, size - i):
                yield Apply(f, a)


def brute_force(library: Sequence[Component], inputs: Sequence[Component], goal: TypeExpr,
                size: int, relevancy: bool = True) -> set[Program]:
    """Well-typed programs of exactly ``size`` by exhaustive generation."""
    names = [c.name for c in library] + [c.name for c in inputs]
    needed = {c.name for c in inputs}
    out = set()
    for p in all_programs(names, size):
        if relevancy and not needed <= program_names(p):
            continue
        if check_program(p, library, inputs, goal):
            out.add(p)
    return out
