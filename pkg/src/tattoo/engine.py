"""Step-wise simulation of tattooing and of plain brush cleaning on one orientation."""

from __future__ import annotations

import json
from collections.abc import Callable, Mapping
from dataclasses import dataclass, field

from .colours import Colour, ColourError, format_colour_set, mutate, mutated_size
from .graphs import Orientation


class EngineError(ValueError):
    """A firing precondition was violated."""


@dataclass(frozen=True)
class AllocationSchedule:
    """Primary colours injected at ``(step, vertex)``."""

    injections: Mapping[tuple[int, int], frozenset[Colour]] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (t, v), cols in self.injections.items():
            if t < 0:
                raise EngineError(f"negative step {t}")
            cols = frozenset(cols)
            bad = [c for c in cols if not c.is_primary]
            if bad:
                raise EngineError(f"only primary colours can be injected, got {bad[0]}")
            if cols:
                clean[(int(t), int(v))] = cols
        object.__setattr__(self, "injections", dict(sorted(clean.items())))

    @classmethod
    def initial(cls, allocation: Mapping[int, frozenset[Colour] | set[Colour]]) -> AllocationSchedule:
        return cls({(0, v): frozenset(c) for v, c in allocation.items()})

    @property
    def total_count(self) -> int:
        return sum(len(c) for c in self.injections.values())

    @property
    def last_step(self) -> int:
        return max((t for t, _ in self.injections), default=-1)

    def at(self, t: int) -> dict[int, frozenset[Colour]]:
        return {v: c for (s, v), c in self.injections.items() if s == t}

    def to_json(self) -> list[dict]:
        return [
            {"step": t, "vertex": v, "colours": [c.subscripts[0] for c in sorted(cols)]}
            for (t, v), cols in self.injections.items()
        ]

    @classmethod
    def from_json(cls, data) -> AllocationSchedule:
        """Accepts the list form written by :meth:`to_json`, or a
        ``{"vertex": [subscripts]}`` mapping meaning step 0."""
        try:
            if isinstance(data, dict):
                return cls.initial({int(v): {Colour((int(i),)) for i in s} for v, s in data.items()})
            return cls(
                {
                    (int(item.get("step", 0)), int(item["vertex"])): frozenset(
                        Colour((int(i),)) for i in item["colours"]
                    )
                    for item in data
                }
            )
        except (KeyError, TypeError, ValueError, ColourError) as exc:
            raise EngineError(f"malformed schedule: {exc}") from None


@dataclass
class EngineState:
    orientation: Orientation
    residual: frozenset[int]
    resident: tuple[frozenset[Colour], ...]
    step: int = 0
    injected_total: int = 0
    labels: dict[int, Colour] = field(default_factory=dict)
    firings: list[tuple[int, int]] = field(default_factory=list)

    @classmethod
    def start(cls, orientation: Orientation) -> EngineState:
        n = orientation.base.n
        return cls(orientation, frozenset(range(orientation.base.size)), (frozenset(),) * n)

    def residual_out(self, v: int) -> list[int]:
        return [i for i in self.orientation.out_arcs[v] if i in self.residual]

    def residual_in(self, v: int) -> list[int]:
        return [i for i in self.orientation.in_arcs[v] if i in self.residual]

    def inject(self, v: int, colours) -> EngineState:
        res = list(self.resident)
        res[v] = res[v] | frozenset(colours)
        return EngineState(
            self.orientation, self.residual, tuple(res), self.step,
            self.injected_total + len(colours), dict(self.labels), list(self.firings),
        )

    def deficit(self, v: int) -> tuple[int, int]:
        """``(l, kappa)``: residual out-degree and mutated resident size."""
        return len(self.residual_out(v)), mutated_size(self.resident[v])


def eligible(state: EngineState, v: int) -> bool:
    if state.residual_in(v):
        return False
    ell = len(state.residual_out(v))
    return ell > 0 and mutated_size(state.resident[v]) >= ell


def fire(state: EngineState, v: int, dispatch: Mapping[int, Colour]) -> EngineState:
    """Send one distinct colour down every residual out-arc of ``v``.

    ``dispatch`` maps arc index to colour. Undispatched members of the
    mutated set stay resident at ``v``.
    """
    if not eligible(state, v):
        raise EngineError(f"vertex {v} is not eligible to fire")
    out = state.residual_out(v)
    if set(dispatch) != set(out):
        raise EngineError(f"dispatch for vertex {v} must cover arcs {sorted(out)}, got {sorted(dispatch)}")
    cols = list(dispatch.values())
    if len(set(cols)) != len(cols):
        raise EngineError(f"vertex {v} dispatched the same colour twice")
    available = mutate(state.resident[v])
    for c in cols:
        if c not in available:
            raise EngineError(f"colour {c} is not available at vertex {v}")
    res = list(state.resident)
    res[v] = available - frozenset(cols)
    labels = dict(state.labels)
    for arc, c in dispatch.items():
        head = state.orientation.arcs[arc][1]
        res[head] = res[head] | {c}
        labels[arc] = c
    return EngineState(
        state.orientation,
        state.residual - frozenset(out),
        tuple(res),
        state.step,
        state.injected_total,
        labels,
        state.firings + [(state.step, v)],
    )


DispatchPolicy = Callable[[EngineState, int, list[Colour], list[int]], Mapping[int, Colour]]


def deterministic_dispatch(state: EngineState, v: int, available: list[Colour], arcs: list[int]):
    """Smallest labels (lexicographic subscript order) to arcs taken by head id."""
    return dict(zip(arcs, available))


@dataclass(frozen=True)
class Blockage:
    vertex: int
    out_degree: int
    available: int

    @property
    def deficit(self) -> int:
        return self.out_degree - self.available


@dataclass(frozen=True)
class TattooTrace:
    orientation: Orientation
    firings: tuple[tuple[int, int], ...]
    arc_labels: dict[tuple[int, int], tuple[int, ...]]
    final_resident: tuple[frozenset[Colour], ...]
    injected_total: int
    outcome: str
    blocked: tuple[Blockage, ...] = ()

    @property
    def complete(self) -> bool:
        return self.outcome == "complete"

    @property
    def label_sums(self) -> dict[tuple[int, int], int]:
        return {a: sum(lab) for a, lab in self.arc_labels.items()}

    def to_json(self) -> dict:
        return {
            "outcome": self.outcome,
            "injected_total": self.injected_total,
            "firing_order": [list(f) for f in self.firings],
            "arc_labels": [
                {"tail": t, "head": h, "label": list(lab), "label_sum": sum(lab)}
                for (t, h), lab in sorted(self.arc_labels.items())
            ],
            "final_resident": {
                str(v): [list(c.subscripts) for c in sorted(cs)] for v, cs in enumerate(self.final_resident)
            },
            "blocked": [
                {"vertex": b.vertex, "out_degree": b.out_degree, "available": b.available, "deficit": b.deficit}
                for b in self.blocked
            ],
        }

    def to_dot(self) -> str:
        lines = ["digraph tattoo {"]
        for v in range(self.orientation.base.n):
            lines.append(f"  {v};")
        for t, h in self.orientation.arcs:
            lab = self.arc_labels.get((t, h))
            if lab is None:
                lines.append(f"  {t} -> {h};")
            else:
                text = "(" + ",".join(map(str, lab)) + ")"
                lines.append(f'  {t} -> {h} [label="{text}", label_sum="{sum(lab)}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def summary(self) -> str:
        head = f"{self.outcome}: {self.injected_total} primary colour(s) injected"
        rows = [head]
        for (t, h), lab in sorted(self.arc_labels.items()):
            rows.append(f"  {t}->{h}  l={'(' + ','.join(map(str, lab)) + ')'}  sum={sum(lab)}")
        for b in self.blocked:
            rows.append(f"  blocked at {b.vertex}: l={b.out_degree} kappa={b.available} deficit={b.deficit}")
        for v, cs in enumerate(self.final_resident):
            if cs:
                rows.append(f"  resident {v}: {format_colour_set(cs)}")
        return "\n".join(rows)


def run(
    orientation: Orientation,
    schedule: AllocationSchedule,
    policy: str | DispatchPolicy = "deterministic",
) -> TattooTrace:
    """Apply step-``t`` injections, fire the lowest eligible vertex until none is,
    then move to the next step while injections remain."""
    if policy == "deterministic":
        policy = deterministic_dispatch
    elif isinstance(policy, str):
        raise EngineError(f"unknown dispatch policy {policy!r}")
    n = orientation.base.n
    for (_, v) in schedule.injections:
        if not 0 <= v < n:
            raise EngineError(f"schedule references unknown vertex {v}")
    state = EngineState.start(orientation)
    last = schedule.last_step
    t = 0
    while True:
        state.step = t
        for v, cols in schedule.at(t).items():
            state = state.inject(v, cols)
        while True:
            ready = [v for v in range(n) if eligible(state, v)]
            if not ready:
                break
            v = ready[0]
            arcs = state.residual_out(v)
            available = sorted(mutate(state.resident[v]))
            dispatch = policy(state, v, available, arcs)
            state = fire(state, v, dispatch)
        if not state.residual or t >= last:
            break
        t += 1
    blocked = ()
    if state.residual:
        blocked = tuple(
            Blockage(v, *state.deficit(v))
            for v in range(n)
            if state.residual_out(v) and not state.residual_in(v)
        )
    return TattooTrace(
        orientation,
        tuple(state.firings),
        {orientation.arcs[i]: c.subscripts for i, c in state.labels.items()},
        state.resident,
        state.injected_total,
        "blocked" if state.residual else "complete",
        blocked,
    )


def scripted_policy(plan: Mapping[int, Mapping[int, Colour]]) -> DispatchPolicy:
    """Replay fixed per-vertex dispatches (vertex -> arc -> colour)."""

    def policy(state, v, available, arcs):
        if v not in plan:
            raise EngineError(f"no scripted dispatch for vertex {v}")
        return plan[v]

    return policy


@dataclass(frozen=True)
class BrushOutcome:
    outcome: str
    final_counts: tuple[int, ...]
    firings: tuple[int, ...]
    allocated: int

    @property
    def complete(self) -> bool:
        return self.outcome == "complete"


def run_brush(orientation: Orientation, allocation) -> BrushOutcome:
    """Classic cleaning with anonymous unit brushes allocated at step 0.

    A vertex fires when its residual in-degree is 0 and it holds at least as
    many brushes as residual out-arcs; one brush travels down each.
    """
    n = orientation.base.n
    if isinstance(allocation, Mapping):
        counts = [0] * n
        for v, k in allocation.items():
            counts[v] = k
    else:
        counts = list(allocation)
    if len(counts) != n or any(k < 0 for k in counts):
        raise EngineError("allocation must give a non-negative count for every vertex")
    allocated = sum(counts)
    residual = set(range(orientation.base.size))
    firings = []
    while True:
        for v in range(n):
            out = [i for i in orientation.out_arcs[v] if i in residual]
            if out and not any(i in residual for i in orientation.in_arcs[v]) and counts[v] >= len(out):
                break
        else:
            break
        counts[v] -= len(out)
        for i in out:
            counts[orientation.arcs[i][1]] += 1
            residual.discard(i)
        firings.append(v)
    return BrushOutcome("blocked" if residual else "complete", tuple(counts), tuple(firings), allocated)


def trace_json_text(trace: TattooTrace, **extra) -> str:
    data = dict(extra)
    data["trace"] = trace.to_json()
    return json.dumps(data, indent=2, sort_keys=True)
