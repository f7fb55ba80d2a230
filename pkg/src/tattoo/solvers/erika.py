"""Where can colour-brushes come to rest after an optimal tattooing of a tree?"""

from __future__ import annotations

from dataclasses import dataclass

from ..graphs import BaseGraph, GraphError, acyclic_orientations
from .brush import brush_residency
from .search import Counter, OrientationSearch, orientation_lower_bound
from .tau import DEFAULT_MODE, Budget, tau


@dataclass(frozen=True)
class ResidencyReport:
    graph: BaseGraph
    tau: int
    optimal_orientations: int
    tattoo: dict[int, bool]  # some optimal tattoo run leaves a brush at v
    brush: dict[int, bool]  # some optimal brush cleaning leaves a brush at v

    def predicted(self, v: int) -> bool:
        return self.graph.degrees[v] % 2 == 1

    def violations(self, model: str = "tattoo") -> list[int]:
        got = self.tattoo if model == "tattoo" else self.brush
        return [v for v in range(self.graph.n) if got[v] != self.predicted(v)]

    def to_json(self) -> dict:
        return {
            "graph": self.graph.to_json(),
            "tau": self.tau,
            "optimal_orientations": self.optimal_orientations,
            "degrees": list(self.graph.degrees),
            "tattoo_residency": [self.tattoo[v] for v in range(self.graph.n)],
            "brush_residency": [self.brush[v] for v in range(self.graph.n)],
            "tattoo_violations": self.violations("tattoo"),
            "brush_violations": self.violations("brush"),
        }


def erika_residency_report(t: BaseGraph, budget: Budget = Budget(), mode: str = DEFAULT_MODE) -> ResidencyReport:
    """Enumerate every optimal tattooing of tree ``t`` (all orientations,
    injections and dispatches reaching the tattoo number) and record, per
    vertex, whether any of them ends with a colour-brush resident there.
    The same question is answered for the brush model alongside."""
    if not t.is_tree or t.n < 2:
        raise GraphError("residency report needs a tree with at least two vertices")
    res = tau(t, budget, mode, symmetry=False)
    if not res.exact:
        raise GraphError(f"tattoo number search hit its budget: {res.budget_hit}")
    best = res.value
    seen = {v: False for v in range(t.n)}
    count = 0
    for o in acyclic_orientations(t, budget.max_edges):
        if orientation_lower_bound(o) > best:
            continue
        search = OrientationSearch(o, mode, Counter(budget.max_nodes))
        if search.value(best + 1) != best:
            continue
        count += 1
        for v, flags in search.residency().items():
            if True in flags:
                seen[v] = True
    return ResidencyReport(t, best, count, seen, brush_residency(t, budget.max_edges))
