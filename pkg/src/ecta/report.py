"""Scaling and ablation figures plus their data as CSV."""

from __future__ import annotations

import csv
import random
import time
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from ecta.enumeration import enumerate_states, expand, state_size  # noqa: E402
from ecta.examples import perfect_tree  # noqa: E402
from ecta.sat import random_3cnf, solve_detailed, truth_table  # noqa: E402

ABLATION_QUERY = "a -> [Maybe a] -> a"
ABLATION_ARGS = ("def", "mbs")
ABLATION_TARGET = "fromMaybe def (listToMaybe (catMaybes mbs))"


def scaling_rows(max_depth: int = 8, min_depth: int = 3) -> list[dict]:
    rows = []
    for d in range(min_depth, max_depth + 1):
        states = list(enumerate_states(perfect_tree(d)))
        terms = [t for st in states for t in expand(st)]
        rows.append({
            "depth": d,
            "states": len(states),
            "state_nodes": sum(state_size(st) for st in states),
            "terms": len(terms),
            "term_size": max(t.size for t in terms),
        })
    return rows


def ablation_rows(naive_budget: int = 3_000_000) -> list[dict]:
    from ecta.synth import SynthesisProblem, SynthStats, parse_type, sample_library, synthesize

    problem = SynthesisProblem(sample_library(), parse_type(ABLATION_QUERY), max_size=5,
                               arg_names=list(ABLATION_ARGS))
    rows = []
    for mode in ("naive", "dynamic", "full"):
        stats = SynthStats()
        found = False
        for cand in synthesize(problem, mode=mode, stats=stats, max_states=naive_budget):
            if str(cand) == ABLATION_TARGET:
                found = True
                break
        rows.append({"mode": mode, "states_explored": stats.states_explored, "found": int(found),
                     "budget_exhausted": int(stats.budget_exhausted), "seconds": round(stats.seconds, 3)})
    return rows


def sat_rows(count: int, seed: int) -> list[dict]:
    rng = random.Random(seed)
    rows = []
    for i in range(count):
        n, m = rng.randint(3, 12), rng.randint(1, 30)
        f = random_3cnf(rng, n, m)
        t0 = time.perf_counter()
        res = solve_detailed(f, all_models=True)
        secs = time.perf_counter() - t0
        got = {x for a in res.models for x in a.expansions()}
        rows.append({"index": i, "vars": n, "clauses": m, "models": len(got),
                     "agrees": int(got == truth_table(f)), "states": res.stats.states_explored,
                     "seconds": round(secs, 4)})
    return rows


def _write_csv(path: Path, rows: list[dict]) -> None:
    with path.open("w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rows[0]))
        w.writeheader()
        w.writerows(rows)


def write_report(out: Path, seed: int = 0, max_depth: int = 8, sat_formulas: int = 50,
                 naive_budget: int = 3_000_000) -> dict[str, object]:
    """Write CSVs and PNGs into ``out``; return summary values."""
    out.mkdir(parents=True, exist_ok=True)
    summary: dict[str, object] = {}

    scaling = scaling_rows(max_depth)
    _write_csv(out / "scaling.csv", scaling)
    fig, ax = plt.subplots(figsize=(5, 3.5))
    depths = [r["depth"] for r in scaling]
    ax.plot(depths, [r["state_nodes"] for r in scaling], marker="o", label="compact state (nodes)")
    ax.plot(depths, [r["term_size"] for r in scaling], marker="s", label="expanded term (nodes)")
    ax.set_yscale("log")
    ax.set_xlabel("tree depth")
    ax.set_ylabel("size")
    ax.legend()
    fig.tight_layout()
    fig.savefig(out / "scaling.png", dpi=120)
    plt.close(fig)
    summary["scaling_depths"] = f"{depths[0]}-{depths[-1]}"
    summary["scaling_state_nodes"] = ",".join(str(r["state_nodes"]) for r in scaling)
    summary["scaling_term_sizes"] = ",".join(str(r["term_size"]) for r in scaling)

    ablation = ablation_rows(naive_budget)
    _write_csv(out / "ablation.csv", ablation)
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.bar([r["mode"] for r in ablation], [r["states_explored"] for r in ablation],
           color=["#bbbbbb", "#6699cc", "#336699"])
    ax.set_yscale("log")
    ax.set_ylabel("states explored")
    ax.set_title("until the target program is found")
    fig.tight_layout()
    fig.savefig(out / "ablation.png", dpi=120)
    plt.close(fig)
    for r in ablation:
        summary[f"ablation_{r['mode']}_states"] = r["states_explored"]
        summary[f"ablation_{r['mode']}_found"] = r["found"]

    if sat_formulas > 0:
        sat = sat_rows(sat_formulas, seed)
        _write_csv(out / "sat.csv", sat)
        summary["sat_formulas"] = len(sat)
        summary["sat_agree"] = sum(r["agrees"] for r in sat)
        summary["sat_seconds"] = round(sum(r["seconds"] for r in sat), 3)
    summary["out"] = str(out)
    return summary
