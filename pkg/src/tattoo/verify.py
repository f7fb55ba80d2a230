"""Reproduction report: family tables, cross-solver bounds, formula checks,
residency on trees and witness replay.

Everything here is deterministic for a given seed; the report carries no
timings so two runs can be compared byte for byte.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field

from .engine import run_brush
from .graphs import (
    BaseGraph,
    build_family,
    nonisomorphic_trees,
    odd_degree_count,
    orientation_representatives,
    random_connected_graph,
    random_tree,
)
from .solvers import (
    INF,
    Budget,
    BrushResult,
    OrientationSearch,
    TauResult,
    blend_count_oracle,
    brush_number,
    closed_form_tau,
    erika_residency_report,
    min_additional_primaries,
    oracle_min_additional,
    orientation_lower_bound,
    tau,
    tree_brush_number,
)
from .solvers.search import Counter
from .solvers.tau import DEFAULT_MODE, _witness

DEFAULT_SEED = 2024
DEFAULT_ORACLE_RANGE = 50
FAMILY_BUDGET_EPS = 16  # log2 of the candidate cap after block-symmetry reduction

SECTIONS = (
    "paths",
    "cycles",
    "friendship",
    "joost",
    "tau_vs_brush",
    "tree_brush",
    "lemma_part_i",
    "lemma_part_ii",
    "erika",
    "optimal_start",
    "witness_replay",
)


def _value(v):
    return "infinity" if v == INF else v


@dataclass
class ReplayLog:
    """Every finite witness produced during a run, replayed through the engine."""

    checked: int = 0
    failures: list = field(default_factory=list)

    def tau(self, where: str, res: TauResult):
        if res.witness is None or res.value is None or res.value == INF:
            return
        self.checked += 1
        trace = res.witness.replay()
        if not trace.complete or trace.injected_total != res.value or trace != res.witness.trace:
            self.failures.append({"where": where, "kind": "tau", "claimed": res.value,
                                  "outcome": trace.outcome, "injected": trace.injected_total})

    def brush(self, where: str, res: BrushResult):
        if res.orientation is None or res.value is None:
            return
        self.checked += 1
        out = run_brush(res.orientation, res.allocation)
        if not out.complete or out.allocated != res.value:
            self.failures.append({"where": where, "kind": "brush", "claimed": res.value,
                                  "outcome": out.outcome, "allocated": out.allocated})


def _check(name: str, criterion: int | None, rows: list, discrepancies: list, **extra) -> dict:
    out = {
        "check": name,
        "criterion": criterion,
        "passed": not discrepancies,
        "rows": rows,
        "discrepancies": discrepancies,
    }
    out.update(extra)
    return out


def _table(name, criterion, specs, expected, mode, budget, replay, symmetry=True):
    rows, bad = [], []
    for spec in specs:
        g = build_family(spec)
        res = tau(g, budget, mode, symmetry=symmetry)
        replay.tau(spec, res)
        want = expected(spec)
        row = {
            "family": spec,
            "tau": _value(res.value),
            "expected": want,
            "exact": res.exact,
            "searched": res.orientations_searched,
            "candidates": res.orientations_enumerated,
            "symmetry_reduced": res.symmetry,
        }
        if res.witness is not None:
            row["witness_schedule"] = res.witness.schedule.to_json()
        rows.append(row)
        if not res.exact or res.value != want:
            bad.append({"family": spec, "tau": _value(res.value), "expected": want,
                        "budget_hit": res.budget_hit})
    return _check(name, criterion, rows, bad)


def check_paths(mode=DEFAULT_MODE, budget=Budget(), replay=None):
    return _table("paths", 1, [f"path:{n}" for n in range(2, 9)], lambda s: 1, mode, budget,
                  replay or ReplayLog())


def check_cycles(mode=DEFAULT_MODE, budget=Budget(), replay=None):
    return _table("cycles", 2, [f"cycle:{n}" for n in range(3, 8)], lambda s: 2, mode, budget,
                  replay or ReplayLog())


def check_friendship(mode=DEFAULT_MODE, budget=Budget(max_edges=FAMILY_BUDGET_EPS), replay=None,
                     sizes=range(1, 8), symmetry=True):
    return _table("friendship", 3, [f"friendship:{n}" for n in sizes], closed_form_tau, mode, budget,
                  replay or ReplayLog(), symmetry)


def check_joost(mode=DEFAULT_MODE, budget=Budget(max_edges=FAMILY_BUDGET_EPS), replay=None):
    specs = [f"joost:{n},{k}" for n in (4, 5) for k in range(1, 6)]
    return _table("joost", 4, specs, closed_form_tau, mode, budget, replay or ReplayLog())


def random_graph_sample(seed: int, count: int = 200, max_n: int = 7, max_m: int = 8) -> list[BaseGraph]:
    rng = random.Random(f"{seed}:graphs")
    out = []
    for _ in range(count):
        n = rng.randint(2, max_n)
        m = rng.randint(n - 1, min(max_m, n * (n - 1) // 2))
        out.append(random_connected_graph(n, m, rng))
    return out


def random_tree_sample(seed: int, count: int = 100, max_n: int = 9) -> list[BaseGraph]:
    rng = random.Random(f"{seed}:trees")
    return [random_tree(rng.randint(2, max_n), rng) for _ in range(count)]


def check_tau_vs_brush(seed=DEFAULT_SEED, mode=DEFAULT_MODE, budget=Budget(), replay=None, count=200):
    replay = replay or ReplayLog()
    rows, bad = [], []
    for i, g in enumerate(random_graph_sample(seed, count)):
        t = tau(g, budget, mode)
        b = brush_number(g)
        replay.tau(f"random graph {i}", t)
        replay.brush(f"random graph {i}", b)
        rows.append({"graph": g.to_json(), "tau": _value(t.value), "brush": b.value})
        if not t.exact or b.value is None or t.value > b.value:
            bad.append({"index": i, "graph": g.to_json(), "tau": _value(t.value), "brush": b.value})
    return _check("tau_vs_brush", 5, rows, bad)


def check_tree_brush(seed=DEFAULT_SEED, replay=None, count=100):
    replay = replay or ReplayLog()
    rows, bad = [], []
    for i, t in enumerate(random_tree_sample(seed, count)):
        b = brush_number(t)
        replay.brush(f"random tree {i}", b)
        half = tree_brush_number(t)
        rows.append({"tree": t.to_json(), "brush": b.value, "odd_degree": odd_degree_count(t)})
        if b.value != half:
            bad.append({"index": i, "tree": t.to_json(), "brush": b.value, "expected": half})
    return _check("tree_brush", 6, rows, bad)


def check_lemma_part_i(oracle_range=DEFAULT_ORACLE_RANGE):
    rows, bad = [], []
    for need in range(1, oracle_range + 1):
        f = min_additional_primaries(need, 0, 0)
        o = oracle_min_additional(need, 0, "powerset")
        rows.append([need, f, o])
        if f != o:
            bad.append({"deficit": need, "formula": f, "oracle": o})
    return _check("lemma_part_i", 7, rows, bad, columns=["deficit", "formula", "powerset_oracle"])


def check_lemma_part_ii(oracle_range=DEFAULT_ORACLE_RANGE, max_omega=5):
    """The formula must agree with the lemma's own count model; points where
    the full power set needs fewer primaries are listed, not failed."""
    rows, bad, divergent = [], [], []
    for omega in range(max_omega + 1):
        for need in range(1, oracle_range + 1):
            f = min_additional_primaries(need, 0, omega)
            lemma = oracle_min_additional(need, omega, "lemma")
            power = oracle_min_additional(need, omega, "powerset")
            rows.append([omega, need, f, lemma, power])
            if f != lemma:
                bad.append({"omega": omega, "deficit": need, "formula": f, "lemma_model": lemma})
            if power < f:
                divergent.append({
                    "omega": omega, "deficit": need, "formula": f, "powerset": power,
                    "lemma_count": blend_count_oracle(power, omega, "lemma"),
                    "powerset_count": blend_count_oracle(power, omega, "powerset"),
                })
    return _check(
        "lemma_part_ii", 8, rows, bad,
        columns=["omega", "deficit", "formula", "lemma_model", "powerset_oracle"],
        documented_deviation=divergent,
        first_divergence=divergent[0] if divergent else None,
    )


def check_erika(mode=DEFAULT_MODE, budget=Budget(), max_n=7):
    rows, bad, brush_bad = [], [], []
    for n in range(2, max_n + 1):
        for t in nonisomorphic_trees(n):
            rep = erika_residency_report(t, budget, mode)
            rows.append(rep.to_json())
            if rep.violations("tattoo"):
                bad.append({"tree": t.to_json(), "degrees": list(t.degrees),
                            "vertices": rep.violations("tattoo"),
                            "resident": [rep.tattoo[v] for v in range(t.n)]})
            if rep.violations("brush"):
                brush_bad.append({"tree": t.to_json(), "vertices": rep.violations("brush")})
    return _check("erika", 9, rows, bad, brush_model_discrepancies=brush_bad,
                  brush_model_passed=not brush_bad)


def _first_injection_degrees(g: BaseGraph, value: int, budget: Budget, mode: str) -> list[int]:
    """Degree of the first vertex to receive primaries, one optimal witness per
    optimal orientation representative."""
    degs = set()
    for o in orientation_representatives(g, budget.max_edges):
        if orientation_lower_bound(o) > value:
            continue
        search = OrientationSearch(o, mode, Counter(budget.max_nodes))
        if search.value(value + 1) != value:
            continue
        w = _witness(search, value)
        injected = {v for (_, v) in w.schedule.injections}
        first = min(w.schedule.injections)[0]
        for _, v in w.trace.firings:
            if v in injected and (first, v) in w.schedule.injections:
                degs.add(g.degrees[v])
                break
    return sorted(degs)


def check_optimal_start(mode=DEFAULT_MODE, budget=Budget(max_edges=FAMILY_BUDGET_EPS)):
    """Friendship graphs: some optimal run starts at a minimum-degree vertex.
    Joost graphs with k >= 2: some optimal run starts at a maximum-degree vertex."""
    rows, bad = [], []
    specs = [f"friendship:{n}" for n in range(2, 8)] + [f"joost:{n},{k}" for n in (4, 5) for k in range(2, 6)]
    for spec in specs:
        g = build_family(spec)
        res = tau(g, budget, mode)
        degs = _first_injection_degrees(g, res.value, budget, mode)
        want = min(g.degrees) if spec.startswith("friendship") else max(g.degrees)
        ok = want in degs
        rows.append({"family": spec, "first_injection_degrees": degs, "wanted_degree": want, "holds": ok})
        if not ok:
            bad.append(rows[-1])
    return _check("optimal_start", None, rows, bad)


def run_verify(
    seed: int = DEFAULT_SEED,
    oracle_range: int = DEFAULT_ORACLE_RANGE,
    mode: str = DEFAULT_MODE,
    jobs: int = 1,
    sections=SECTIONS,
) -> dict:
    replay = ReplayLog()
    plain = Budget(jobs=jobs)
    family = Budget(max_edges=FAMILY_BUDGET_EPS, jobs=jobs)
    checks = []
    run = {
        "paths": lambda: check_paths(mode, plain, replay),
        "cycles": lambda: check_cycles(mode, plain, replay),
        "friendship": lambda: check_friendship(mode, family, replay),
        "joost": lambda: check_joost(mode, family, replay),
        "tau_vs_brush": lambda: check_tau_vs_brush(seed, mode, plain, replay),
        "tree_brush": lambda: check_tree_brush(seed, replay),
        "lemma_part_i": lambda: check_lemma_part_i(oracle_range),
        "lemma_part_ii": lambda: check_lemma_part_ii(oracle_range),
        "erika": lambda: check_erika(mode, plain),
        "optimal_start": lambda: check_optimal_start(mode, family),
    }
    for name in sections:
        if name == "witness_replay":
            continue
        if name not in run:
            raise ValueError(f"unknown verify section {name!r}")
        checks.append(run[name]())
    if "witness_replay" in sections:
        checks.append(_check("witness_replay", 10, [{"witnesses_replayed": replay.checked}], replay.failures))
    return {
        "seed": seed,
        "mode": mode,
        "oracle_range": oracle_range,
        "checks": checks,
        "passed": all(c["passed"] for c in checks),
    }


def report_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def report_table(report: dict) -> str:
    lines = [f"verify  seed={report['seed']}  mode={report['mode']}"]
    for c in report["checks"]:
        tag = "PASS" if c["passed"] else "FAIL"
        crit = f"#{c['criterion']}" if c["criterion"] else "  "
        lines.append(f"{tag}  {crit:>3}  {c['check']:<15} {len(c['rows']):>4} rows  "
                     f"{len(c['discrepancies'])} discrepancies")
        for d in c["discrepancies"][:10]:
            lines.append(f"        {json.dumps(d, sort_keys=True)}")
        if c.get("documented_deviation"):
            fd = c["first_divergence"]
            lines.append(f"        documented deviation at {len(c['documented_deviation'])} points; first: "
                         f"omega={fd['omega']} deficit={fd['deficit']} formula x={fd['formula']} "
                         f"powerset x={fd['powerset']} (counts {fd['lemma_count']} vs {fd['powerset_count']})")
        if "brush_model_passed" in c:
            lines.append(f"        brush-model comparison: "
                         f"{'PASS' if c['brush_model_passed'] else 'FAIL'}")
    lines.append("overall: " + ("PASS" if report["passed"] else "FAIL"))
    return "\n".join(lines) + "\n"
