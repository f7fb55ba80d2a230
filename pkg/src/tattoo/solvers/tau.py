"""Random tattoo number of one orientation and tattoo number of a graph."""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from ..colours import Colour
from ..engine import AllocationSchedule, TattooTrace, run, scripted_policy
from ..graphs import (
    BaseGraph,
    BudgetError,
    Orientation,
    orientation_representatives,
    symmetric_candidate_count,
)
from .search import (
    INF,
    Counter,
    OrientationSearch,
    SearchAborted,
    Step,
    orientation_lower_bound,
)

DEFAULT_MODE = "restricted"


@dataclass(frozen=True)
class Budget:
    """Search limits. ``max_edges`` caps the orientation space at ``2^max_edges``
    candidates (after block-symmetry reduction, when the graph has blocks)."""

    max_edges: int = 12
    max_nodes: int | None = 2_000_000
    time_limit: float | None = None
    jobs: int = 1


@dataclass(frozen=True)
class TauWitness:
    orientation: Orientation
    schedule: AllocationSchedule
    plan: dict[int, dict[int, Colour]]
    trace: TattooTrace

    def replay(self) -> TattooTrace:
        return run(self.orientation, self.schedule, scripted_policy(self.plan))

    def to_json(self) -> dict:
        return {
            "orientation": self.orientation.to_json(),
            "schedule": self.schedule.to_json(),
            "trace": self.trace.to_json(),
        }


@dataclass(frozen=True)
class TauResult:
    value: float | int | None  # int, math.inf, or None when the budget ran out first
    exact: bool
    lower_bound: float | int
    witness: TauWitness | None = None
    orientations_enumerated: int = 0
    orientations_searched: int = 0
    nodes: int = 0
    mode: str = DEFAULT_MODE
    budget_hit: str | None = None
    symmetry: bool = False

    @property
    def is_infinite(self) -> bool:
        return self.value == INF

    def to_json(self) -> dict:
        v = self.value
        return {
            "invariant": "tau",
            "value": "infinity" if v == INF else v,
            "exact": self.exact,
            "lower_bound": "infinity" if self.lower_bound == INF else self.lower_bound,
            "witness": self.witness.to_json() if self.witness else None,
            "searched": self.orientations_searched,
            "enumerated": self.orientations_enumerated,
            "mode": self.mode,
            "budget_hit": self.budget_hit,
        }


def schedule_from_steps(o: Orientation, steps: list[Step], mode: str) -> tuple[AllocationSchedule, dict]:
    """Turn search decisions into a step-indexed schedule plus a dispatch script.

    Injections at original sources (and pre-positioned ones in unrestricted
    mode) happen at step 0; the rest are placed one step after the engine
    stalls on the vertex."""
    plan = {s.vertex: {arc: Colour.from_mask(m) for arc, m in s.dispatch} for s in steps}
    wanted = {s.vertex: frozenset(Colour.from_mask(m) for m in s.injected) for s in steps if s.injected}
    inj = {}
    for v, cols in wanted.items():
        if o.in_degree(v) == 0 or mode == "unrestricted":
            inj[(0, v)] = cols
    placed = {v for (_, v) in inj}
    while True:
        sched = AllocationSchedule(dict(inj))
        trace = run(o, sched, scripted_policy(plan))
        if trace.complete:
            return sched, plan
        late = [b.vertex for b in trace.blocked if b.vertex in wanted and b.vertex not in placed]
        if not late:
            raise RuntimeError("witness schedule does not complete")  # pragma: no cover
        t = sched.last_step + 1
        for v in late:
            inj[(t, v)] = wanted[v]
            placed.add(v)


def _witness(search: OrientationSearch, value: int) -> TauWitness:
    steps = search.witness(value)
    sched, plan = schedule_from_steps(search.o, steps, search.mode)
    trace = run(search.o, sched, scripted_policy(plan))
    return TauWitness(search.o, sched, plan, trace)


def tau_for_orientation(
    orientation: Orientation, budget: Budget = Budget(), mode: str = DEFAULT_MODE
) -> TauResult:
    if not orientation.is_acyclic:
        return TauResult(INF, True, INF, orientations_enumerated=1, orientations_searched=1, mode=mode)
    deadline = time.monotonic() + budget.time_limit if budget.time_limit else None
    counter = Counter(budget.max_nodes, deadline)
    search = OrientationSearch(orientation, mode, counter)
    lb = orientation_lower_bound(orientation)
    try:
        val = search.value()
    except SearchAborted as exc:
        return TauResult(None, False, lb, None, 1, 1, counter.nodes, mode, str(exc))
    if val == INF:
        return TauResult(INF, True, INF, None, 1, 1, counter.nodes, mode)
    return TauResult(int(val), True, int(val), _witness(search, int(val)), 1, 1, counter.nodes, mode)


def _null_result(g: BaseGraph, mode: str) -> TauResult:
    # an edgeless graph needs one colour-brush per vertex by convention
    return TauResult(g.n, True, g.n, None, 0, 0, 0, mode)


def _scan(cands: list[tuple[int, int, Orientation]], mode: str, counter: Counter, best: float):
    """Branch and bound over candidates sorted by lower bound.
    Returns (best, best_index, searched, aborted_message, frontier_lb)."""
    best_idx = None
    searched = 0
    for lb, idx, o in cands:
        if lb >= best:
            break
        searched += 1
        try:
            val = OrientationSearch(o, mode, counter).value(best)
        except SearchAborted as exc:
            return best, best_idx, searched, str(exc), lb
        if val < best:
            best, best_idx = val, (lb, idx)
    return best, best_idx, searched, None, best


def _scan_worker(args):
    cands, mode, max_nodes, deadline = args
    counter = Counter(max_nodes, deadline)
    best, idx, searched, msg, frontier = _scan(cands, mode, counter, INF)
    return best, idx, searched, msg, frontier, counter.nodes


def tau(
    g: BaseGraph,
    budget: Budget = Budget(),
    mode: str = DEFAULT_MODE,
    symmetry: bool = True,
) -> TauResult:
    """Minimum of the random tattoo number over all orientations of ``g``.

    Cyclic orientations are skipped (no vertex on a directed cycle ever fires).
    With ``symmetry`` and a graph that declares interchangeable edge blocks,
    only one orientation per multiset of block patterns is searched.
    """
    if g.is_null:
        return _null_result(g, mode)
    if not symmetry:
        g = g.without_symmetry()
    try:
        raw = list(orientation_representatives(g, budget.max_edges))
    except BudgetError as exc:
        return TauResult(None, False, 1, mode=mode, budget_hit=str(exc), symmetry=bool(g.blocks))
    cands = sorted(
        ((orientation_lower_bound(o), i, o) for i, o in enumerate(raw)), key=lambda c: (c[0], c[1])
    )
    deadline = time.monotonic() + budget.time_limit if budget.time_limit else None
    counter = Counter(budget.max_nodes, deadline)

    if budget.jobs > 1 and len(cands) > 1:
        chunks = [cands[j :: budget.jobs] for j in range(budget.jobs)]
        with ProcessPoolExecutor(max_workers=budget.jobs) as ex:
            parts = list(ex.map(_scan_worker, [(c, mode, budget.max_nodes, deadline) for c in chunks]))
        best, best_idx, searched, msg, frontier = INF, None, 0, None, INF
        for b, idx, s, m, f, nodes in parts:
            searched += s
            counter.nodes += nodes
            if m:
                msg = m
                frontier = min(frontier, f)
            if idx is not None and (best_idx is None or (b, idx) < (best, best_idx)):
                best, best_idx = b, idx
        if msg:
            frontier = min(frontier, best)
    else:
        best, best_idx, searched, msg, frontier = _scan(cands, mode, counter, INF)

    if msg is not None:
        return TauResult(
            None if best == INF else int(best), False, frontier, None,
            len(cands), searched, counter.nodes, mode, msg, bool(g.blocks),
        )
    if best == INF:
        return TauResult(INF, True, INF, None, len(cands), searched, counter.nodes, mode, None, bool(g.blocks))
    o = raw[best_idx[1]]
    search = OrientationSearch(o, mode, Counter())
    value = int(search.value())
    return TauResult(
        value, True, value, _witness(search, value), len(cands), searched,
        counter.nodes, mode, None, bool(g.blocks),
    )


def candidate_count(g: BaseGraph, symmetry: bool = True) -> int:
    return symmetric_candidate_count(g if symmetry else g.without_symmetry())
