"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 input error; ``sat solve`` exits 10
when satisfiable and 20 when not.  ``--stats`` writes ``key=value`` lines to
stderr.
"""

from __future__ import annotations

import argparse
import importlib
import os
import random
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

EXIT_OK, EXIT_USAGE, EXIT_INPUT = 0, 1, 2
EXIT_SAT, EXIT_UNSAT = 10, 20


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _global_options(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--seed", type=int, default=d(0), help="seed for every random choice")
    p.add_argument("--timeout-secs", type=float, default=d(None), help="wall-clock budget")
    p.add_argument("--stats", action="store_true", default=d(False), help="print key=value stats to stderr")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ecta", description="Equality-constrained tree automata toolkit.")
    _global_options(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    def add(name: str, help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help, description=help)
        _global_options(p, suppress=True)
        return p

    sat = add("sat", "Boolean satisfiability through enumeration")
    sat_sub = sat.add_subparsers(dest="sat_command", metavar="ACTION", parser_class=_Parser)
    sat_sub.required = True
    solve = sat_sub.add_parser("solve", help="solve a DIMACS CNF file ('-' for stdin)")
    _global_options(solve, suppress=True)
    solve.add_argument("file")
    solve.add_argument("--all", action="store_true", help="print every model")
    solve.add_argument("--reduce-rounds", type=int, default=0, help="static reduction rounds first")
    solve.add_argument("--strategy", default="exclusive", help="all-models strategy: exclusive, states, blocking")
    solve.add_argument("--schedule", default="fewest-live")

    syn = add("synth", "type-directed component synthesis")
    syn.add_argument("--library", help="component file, one 'name :: type' per line (default: bundled sample)")
    syn.add_argument("--query", required=True, help='query type, e.g. "a -> [Maybe a] -> a"')
    syn.add_argument("--arg-names", help="comma-separated names for the query's arguments")
    syn.add_argument("--max-size", type=int, default=8)
    syn.add_argument("--limit", type=int, help="stop after this many candidates")
    syn.add_argument("--no-relevancy", action="store_true", help="allow programs that ignore inputs")
    mode = syn.add_mutually_exclusive_group()
    mode.add_argument("--naive", action="store_true", help="generate-and-filter baseline")
    mode.add_argument("--dynamic-only", action="store_true", help="skip static reduction")
    syn.add_argument("--reduce-rounds", type=int, default=30)
    syn.add_argument("--no-tag", action="store_true", help="drop the arrow tag (admits ill-typed programs)")
    syn.add_argument("--max-states", type=int, help="state budget")
    syn.add_argument("--schedule", default="fewest-live")

    en = add("enumerate", "enumerate the terms of an automaton file")
    en.add_argument("file")
    en.add_argument("--limit", type=int, help="maximum number of states (compact) or terms (expand)")
    shape = en.add_mutually_exclusive_group()
    shape.add_argument("--expand", dest="expand", action="store_true", default=True,
                       help="print concrete terms (default)")
    shape.add_argument("--compact", dest="expand", action="store_false", help="print enumeration states")
    en.add_argument("--max-depth", type=int, help="depth bound when expanding recursive nodes")
    en.add_argument("--schedule", default="dfs-lr",
                    choices=["dfs-lr", "dfs-rl", "fewest-edges", "fewest-live", "custom"])
    en.add_argument("--schedule-fn", help="module:function used with --schedule custom")

    red = add("reduce", "statically reduce an automaton file and print the result")
    red.add_argument("file")
    red.add_argument("--rounds", type=int, default=30)
    red.add_argument("--algo", choices=["basic", "optimized"], default="optimized")
    red.add_argument("--growth-limit", type=float, help="stop once edges exceed this multiple")

    dot = add("dot", "render an automaton file as Graphviz DOT")
    dot.add_argument("file")

    oc = add("oracle-check", "compare enumeration with brute-force denotation")
    oc.add_argument("file")
    oc.add_argument("--depth", type=int, default=4)

    gen = add("generate", "print a random automaton or CNF formula")
    gen.add_argument("kind", choices=["ecta", "cnf"])
    gen.add_argument("--nodes", type=int, default=7)
    gen.add_argument("--pecs", type=int, default=3)
    gen.add_argument("--vars", type=int, default=8)
    gen.add_argument("--clauses", type=int, default=20)

    rep = add("report", "write scaling and ablation figures with CSV data")
    rep.add_argument("--out", default="report", help="output directory")
    rep.add_argument("--max-depth", type=int, default=8)
    rep.add_argument("--sat-formulas", type=int, default=50)
    rep.add_argument("--naive-budget", type=int, default=3_000_000)
    return parser


# -- helpers -------------------------------------------------------------------------

def _read(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _load_ecta(path: str):
    from ecta.textformat import EctaSyntaxError, parse_ecta_text

    try:
        return parse_ecta_text(_read(path))
    except EctaSyntaxError as exc:
        raise InputError(f"{path}:{exc}") from None


def _deadline(args) -> Optional[float]:
    t = getattr(args, "timeout_secs", None)
    return None if t is None else time.monotonic() + t


def _emit_stats(args, values: dict) -> None:
    if args.stats:
        for k, v in values.items():
            print(f"{k}={v}", file=sys.stderr)


def resolve_schedule_fn(spec: str):
    mod, sep, attr = spec.partition(":")
    if not sep or not mod or not attr:
        raise UsageError("--schedule-fn expects module:function")
    try:
        fn = getattr(importlib.import_module(mod), attr)
    except (ImportError, AttributeError) as exc:
        raise UsageError(f"cannot load schedule {spec}: {exc}") from None
    if not callable(fn):
        raise UsageError(f"{spec} is not callable")
    return fn


# -- commands ------------------------------------------------------------------------

def cmd_sat(args) -> int:
    from ecta.enumeration import BudgetExceeded
    from ecta.sat import STRATEGIES, DimacsError, parse_dimacs, solve_detailed

    if args.strategy not in STRATEGIES:
        raise UsageError(f"unknown strategy {args.strategy}; known: {', '.join(STRATEGIES)}")
    try:
        f = parse_dimacs(_read(args.file))
    except DimacsError as exc:
        raise InputError(f"{args.file}: {exc}") from None
    started = time.monotonic()
    try:
        res = solve_detailed(f, all_models=args.all, reduce_rounds=args.reduce_rounds,
                             strategy=args.strategy, schedule=args.schedule, deadline=_deadline(args))
    except BudgetExceeded:
        print("s UNKNOWN")
        _emit_stats(args, {"timed_out": 1, "seconds": round(time.monotonic() - started, 3)})
        return EXIT_OK
    if res.satisfiable:
        print("s SATISFIABLE")
        for m in res.models:
            print(m.format())
    else:
        print("s UNSATISFIABLE")
    stats = dict(res.stats.as_dict())
    stats.update(models=len(res.models), solves=res.solves, seconds=round(time.monotonic() - started, 3))
    if res.reduction is not None:
        stats.update(reduction_rounds=res.reduction.rounds_run,
                     reduction_edges_removed=res.reduction.edges_removed)
    _emit_stats(args, stats)
    return EXIT_SAT if res.satisfiable else EXIT_UNSAT


def cmd_synth(args) -> int:
    from ecta.synth import SynthesisProblem, SynthStats, parse_library, parse_type, sample_library, synthesize
    from ecta.synth.types import TypeSyntaxError

    try:
        library = parse_library(_read(args.library)) if args.library else sample_library()
        query = parse_type(args.query)
    except TypeSyntaxError as exc:
        raise InputError(str(exc)) from None
    names = [s.strip() for s in args.arg_names.split(",")] if args.arg_names else None
    try:
        problem = SynthesisProblem(library, query, args.max_size, names,
                                   relevancy=not args.no_relevancy, tag=not args.no_tag)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    mode = "naive" if args.naive else "dynamic" if args.dynamic_only else "full"
    stats = SynthStats()
    count = 0
    try:
        for cand in synthesize(problem, mode=mode, reduce_rounds=args.reduce_rounds, schedule=args.schedule,
                               stats=stats, max_states=args.max_states, deadline=_deadline(args)):
            print(f"{cand}\t-- size {cand.size}", flush=True)
            count += 1
            if args.limit is not None and count >= args.limit:
                break
    except ValueError as exc:
        raise InputError(str(exc)) from None
    _emit_stats(args, {"mode": mode, **stats.as_dict()})
    return EXIT_OK


def cmd_enumerate(args) -> int:
    from ecta.automaton import is_finitely_constrained
    from ecta.enumeration import (BudgetExceeded, EnumStats, enumerate_states, expand, expand_bounded,
                                  format_state)
    from ecta.terms import format_term

    schedule = args.schedule
    if schedule == "custom":
        if not args.schedule_fn:
            raise UsageError("--schedule custom needs --schedule-fn module:function")
        schedule = resolve_schedule_fn(args.schedule_fn)
    elif args.schedule_fn:
        raise UsageError("--schedule-fn only applies with --schedule custom")
    n = _load_ecta(args.file)
    if not is_finitely_constrained(n):
        raise InputError("constraints inside recursive nodes cannot be enumerated")
    stats = EnumStats()
    printed = 0
    try:
        if n.is_bottom:
            pass
        elif args.expand:
            for st in enumerate_states(n, schedule=schedule, stats=stats, deadline=_deadline(args)):
                terms = sorted(expand_bounded(st, args.max_depth)) if args.max_depth else expand(st)
                for t in terms:
                    print(format_term(t))
                    printed += 1
                    if args.limit is not None and printed >= args.limit:
                        raise StopIteration
        else:
            for st in enumerate_states(n, schedule=schedule, limit=args.limit, stats=stats,
                                       deadline=_deadline(args)):
                if printed:
                    print()
                print(format_state(st))
                printed += 1
    except StopIteration:
        pass
    except BudgetExceeded:
        _emit_stats(args, {"timed_out": 1})
    _emit_stats(args, {"printed": printed, **stats.as_dict()})
    return EXIT_OK


def cmd_reduce(args) -> int:
    from ecta.automaton import is_finitely_constrained
    from ecta.reduction import reduce_fixpoint
    from ecta.textformat import print_ecta

    n = _load_ecta(args.file)
    if not is_finitely_constrained(n):
        raise InputError("constraints inside recursive nodes cannot be reduced")
    out, report = reduce_fixpoint(n, args.rounds, args.algo, growth_limit=args.growth_limit)
    sys.stdout.write(print_ecta(out))
    _emit_stats(args, {"rounds_run": report.rounds_run, "edges_removed": report.edges_removed,
                       "converged": int(report.converged), "grew_too_large": int(report.grew_too_large)})
    return EXIT_OK


def cmd_dot(args) -> int:
    from ecta.dot import export_dot

    sys.stdout.write(export_dot(_load_ecta(args.file)))
    return EXIT_OK


def cmd_oracle(args) -> int:
    from ecta.oracle import oracle_check

    if args.depth < 1:
        raise UsageError("--depth must be at least 1")
    n = _load_ecta(args.file)
    try:
        report = oracle_check(n, args.depth)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    print("\n".join(report.lines()))
    if report.stats is not None:
        _emit_stats(args, report.stats.as_dict())
    return EXIT_OK if report.passed else EXIT_INPUT


def cmd_generate(args) -> int:
    rng = random.Random(args.seed)
    if args.kind == "ecta":
        from ecta.generate import random_acyclic_ecta
        from ecta.textformat import print_ecta

        sys.stdout.write(print_ecta(random_acyclic_ecta(rng, max_nodes=args.nodes, max_pecs=args.pecs)))
    else:
        from ecta.sat import format_dimacs, random_3cnf

        sys.stdout.write(format_dimacs(random_3cnf(rng, args.vars, args.clauses)))
    return EXIT_OK


def cmd_report(args) -> int:
    from ecta.report import write_report

    values = write_report(Path(args.out), seed=args.seed, max_depth=args.max_depth,
                          sat_formulas=args.sat_formulas, naive_budget=args.naive_budget)
    for k, v in values.items():
        print(f"{k}={v}")
    return EXIT_OK


COMMANDS = {
    "sat": cmd_sat,
    "synth": cmd_synth,
    "enumerate": cmd_enumerate,
    "reduce": cmd_reduce,
    "dot": cmd_dot,
    "oracle-check": cmd_oracle,
    "generate": cmd_generate,
    "report": cmd_report,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.timeout_secs is not None and args.timeout_secs <= 0:
        parser.error("--timeout-secs must be positive")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"ecta: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InputError as exc:
        print(f"ecta: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BrokenPipeError:
        # output piped into something like head
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
