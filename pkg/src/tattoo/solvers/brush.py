"""Brush number: minimum unit brushes over acyclic orientations."""

from __future__ import annotations

from dataclasses import dataclass

from ..engine import BrushOutcome, run_brush
from ..graphs import BaseGraph, BudgetError, Orientation, acyclic_orientations

DEFAULT_BRUSH_CAP = 16


def brush_allocation(o: Orientation) -> tuple[int, ...]:
    """Least allocation that cleans an acyclic orientation: every vertex receives
    one brush per in-arc, so it needs ``max(0, d+ - d-)`` of its own."""
    return tuple(max(0, o.out_degree(v) - o.in_degree(v)) for v in range(o.base.n))


@dataclass(frozen=True)
class BrushResult:
    value: int | None
    orientation: Orientation | None
    allocation: tuple[int, ...]
    outcome: BrushOutcome | None
    orientations_searched: int = 0
    budget_hit: str | None = None

    @property
    def final_counts(self) -> tuple[int, ...]:
        return self.outcome.final_counts if self.outcome else ()

    @property
    def exact(self) -> bool:
        return self.budget_hit is None

    def to_json(self) -> dict:
        return {
            "invariant": "brush_number",
            "value": self.value,
            "exact": self.exact,
            "witness": None
            if self.orientation is None
            else {
                "orientation": self.orientation.to_json(),
                "allocation": list(self.allocation),
                "final_counts": list(self.final_counts),
            },
            "searched": self.orientations_searched,
            "budget_hit": self.budget_hit,
        }


def brush_number(g: BaseGraph, cap: int = DEFAULT_BRUSH_CAP) -> BrushResult:
    if g.is_null:
        return BrushResult(g.n, None, (1,) * g.n, None)
    best = None
    searched = 0
    try:
        for o in acyclic_orientations(g, cap):
            searched += 1
            alloc = brush_allocation(o)
            total = sum(alloc)
            if best is None or total < best[0]:
                best = (total, o, alloc)
    except BudgetError as exc:
        return BrushResult(None, None, (), None, searched, str(exc))
    total, o, alloc = best
    return BrushResult(total, o, alloc, run_brush(o, alloc), searched)


def brush_residency(g: BaseGraph, cap: int = DEFAULT_BRUSH_CAP) -> dict[int, bool]:
    """Per vertex: does some brush-optimal orientation leave a brush there?"""
    best = brush_number(g, cap).value
    out = {v: False for v in range(g.n)}
    for o in acyclic_orientations(g, cap):
        alloc = brush_allocation(o)
        if sum(alloc) != best:
            continue
        res = run_brush(o, alloc)
        for v, k in enumerate(res.final_counts):
            if k > 0:
                out[v] = True
    return out
