"""Exact minimum-injection search on one acyclic orientation.

Each vertex fires exactly once, after every in-arc has been tattooed, so the
search walks a fixed topological order and at each vertex decides (a) how
many fresh primaries to inject and (b) which colour goes down which out-arc.
Colours are bitmasks (bit ``i`` is ``c_{i+1}``).

Reductions, all exact:

* Vertices whose whole downstream has out-degree <= 1 ("insensitive") can
  never block, so the colours sent to them are irrelevant to the cost and are
  not branched on.
* Primaries of the firing vertex that appear nowhere else are interchangeable;
  dispatches are generated only up to a renaming of them.
* States are memoised up to a renaming of primary subscripts
  (transposition table keyed by a relabelled state).
* Branch and bound: every original source with ``l`` out-arcs must receive at
  least ``ceil(log2(l + 1))`` primaries.
"""

from __future__ import annotations

import math
import time
from collections.abc import Iterator
from dataclasses import dataclass

from ..colours import mutate_masks, mutated_size_masks
from ..graphs import Orientation

INF = math.inf

MODES = ("initial", "restricted", "unrestricted")


class SearchAborted(RuntimeError):
    """Node or time budget ran out."""


@dataclass
class Counter:
    max_nodes: int | None = None
    deadline: float | None = None
    nodes: int = 0

    def tick(self):
        self.nodes += 1
        if self.max_nodes is not None and self.nodes > self.max_nodes:
            raise SearchAborted(f"node budget of {self.max_nodes} exhausted")
        if self.deadline is not None and self.nodes % 1024 == 0 and time.monotonic() > self.deadline:
            raise SearchAborted("time budget exhausted")


def source_need(ell: int) -> int:
    return (ell).bit_length() if ell > 0 else 0  # smallest s with 2^s - 1 >= ell


def orientation_lower_bound(o: Orientation) -> int:
    return sum(source_need(o.out_degree(v)) for v in o.sources)


def _sorted_masks(ms) -> list[int]:
    return sorted(ms, key=lambda m: (m.bit_count(), m))


@dataclass(frozen=True)
class Step:
    """What one vertex did in a witness: injected masks and arc -> mask dispatch."""

    vertex: int
    injected: tuple[int, ...]
    dispatch: tuple[tuple[int, int], ...]
    resident_after: int  # colour-brushes left at the vertex


class OrientationSearch:
    def __init__(self, orientation: Orientation, mode: str = "restricted", counter: Counter | None = None):
        if mode not in MODES:
            raise ValueError(f"unknown injection mode {mode!r}")
        order = orientation.topological_order
        if order is None:
            raise ValueError("orientation has a directed cycle")
        self.o = orientation
        self.mode = mode
        self.counter = counter or Counter()
        self.order = order
        n = len(order)
        self.N = n
        pos = {v: i for i, v in enumerate(order)}
        self.arcs = [orientation.out_arcs[v] for v in order]
        self.head_pos = [tuple(pos[orientation.arcs[a][1]] for a in arcs) for arcs in self.arcs]
        self.ell = [len(a) for a in self.arcs]
        self.indeg = [orientation.in_degree(v) for v in order]
        self.is_source = [d == 0 for d in self.indeg]
        sens = [False] * n
        for i in reversed(range(n)):
            if self.ell[i] == 0:
                sens[i] = False
            elif self.ell[i] == 1 and not self.is_source[i]:
                sens[i] = sens[self.head_pos[i][0]]
            else:
                sens[i] = True
        self.sensitive = sens
        self.sens_positions = [i for i in range(n) if sens[i]]
        lb = [0] * (n + 1)
        for i in reversed(range(n)):
            lb[i] = lb[i + 1] + (source_need(self.ell[i]) if self.is_source[i] else 0)
        self.lb = lb
        self.memo: dict = {}
        self.reach_memo: dict = {}

    # -- state helpers -------------------------------------------------------

    def initial_pending(self) -> tuple[frozenset, ...]:
        return (frozenset(),) * self.N

    def _key(self, i: int, pending) -> tuple:
        mapping: dict[int, int] = {}
        parts = []
        for j in self.sens_positions:
            if j < i:
                continue
            fs = pending[j]
            if not fs:
                continue
            row = []
            for m in _sorted_masks(fs):
                out = 0
                while m:
                    low = m & -m
                    b = mapping.get(low)
                    if b is None:
                        b = mapping[low] = 1 << len(mapping)
                    out |= b
                    m ^= low
                row.append(out)
            parts.append((j, tuple(sorted(row))))
        return (i, tuple(parts))

    def injection_sizes(self, i: int, resident) -> range:
        ell = self.ell[i]
        kappa = mutated_size_masks(resident)
        pmask = 0
        extra = 0
        for m in resident:
            if m & (m - 1) == 0:
                pmask |= m
        p = pmask.bit_count()
        extra = kappa - ((1 << p) - 1)
        xmin = 0
        while (1 << (p + xmin)) - 1 + extra < ell:
            xmin += 1
        if self.mode == "initial":
            if self.is_source[i]:
                return range(xmin, max(xmin, ell) + 1)
            return range(0, 1) if xmin == 0 else range(0)
        if self.mode == "restricted":
            if kappa >= ell:
                return range(0, 1)
            return range(xmin, max(xmin, ell - kappa) + 1)
        return range(xmin, max(xmin, ell) + 1)

    def _dispatches(self, i: int, colours: frozenset, pending, full: bool) -> Iterator[tuple[int, ...]]:
        """Masks per out-arc (aligned with ``self.arcs[i]``); non-sensitive heads
        get ``-1`` unless ``full``."""
        heads = self.head_pos[i]
        M = _sorted_masks(mutate_masks(colours))
        sens_idx = [k for k, h in enumerate(heads) if self.sensitive[h]]
        elsewhere = 0
        for j in self.sens_positions:
            if j > i:
                for m in pending[j]:
                    elsewhere |= m
        for m in colours:
            if m & (m - 1):
                elsewhere |= m
        free = [m for m in colours if m & (m - 1) == 0 and not m & elsewhere]
        free.sort()
        free_mask = 0
        for b in free:
            free_mask |= b
        chosen = [0] * len(sens_idx)
        used = set()

        def rec(k: int, untouched: list[int]):
            if k == len(sens_idx):
                out = [-1] * len(heads)
                for kk, idx in enumerate(sens_idx):
                    out[idx] = chosen[kk]
                if full:
                    rest = iter(m for m in M if m not in used)
                    for idx in range(len(heads)):
                        if out[idx] == -1:
                            out[idx] = next(rest)
                yield tuple(out)
                return
            for m in M:
                if m in used:
                    continue
                fb = m & free_mask
                nxt = untouched
                if fb:
                    # free bits seen for the first time must be the lowest untouched ones
                    newbits = [b for b in untouched if b & fb]
                    if newbits != untouched[: len(newbits)]:
                        continue
                    nxt = untouched[len(newbits):]
                used.add(m)
                chosen[k] = m
                yield from rec(k + 1, nxt)
                used.discard(m)

        yield from rec(0, free)

    def _fresh(self, i: int, pending, x: int, used_global: int | None = None) -> tuple[int, ...]:
        used = used_global
        if used is None:
            used = 0
            for j in range(i, self.N):
                for m in pending[j]:
                    used |= m
        out = []
        b = 1
        while len(out) < x:
            if not used & b:
                out.append(b)
            b <<= 1
        return tuple(out)

    def children(self, i: int, pending, full: bool = False, used_global: int | None = None):
        """Yield ``(x, injected, colours, dispatch, new_pending)`` for vertex at position ``i``."""
        R = pending[i]
        for x in self.injection_sizes(i, R):
            inj = self._fresh(i, pending, x, used_global)
            colours = R | frozenset(inj)
            for disp in self._dispatches(i, colours, pending, full):
                new = list(pending)
                for h, m in zip(self.head_pos[i], disp):
                    if m != -1 and (full or self.sensitive[h]):
                        new[h] = new[h] | {m}
                yield x, inj, colours, disp, tuple(new)

    # -- cost ----------------------------------------------------------------

    def solve(self, i: int, pending, bound: float = INF) -> float:
        """Minimum further injections from position ``i``. Exact when the
        result is below ``bound``; otherwise a lower bound that is >= ``bound``."""
        while i < self.N and not self.sensitive[i]:
            i += 1
        if i >= self.N:
            return 0
        lb = self.lb[i]
        if lb >= bound:
            return lb
        key = self._key(i, pending)
        hit = self.memo.get(key)
        if hit is not None:
            val, exact = hit
            if exact or val >= bound:
                return val
        self.counter.tick()
        best = INF
        pruned = False
        rest_lb = self.lb[i + 1]
        for x, inj, colours, disp, new in self.children(i, pending):
            cap = min(bound, best)
            if x + rest_lb >= cap:
                # injection sizes only grow from here
                if bound < best:
                    pruned = True
                break
            sub = self.solve(i + 1, new, cap - x)
            if sub >= cap - x and bound < best:
                pruned = True
            if x + sub < best:
                best = x + sub
            if best <= self.lb[i]:
                break
        exact = best < bound or not pruned
        val = best if exact else bound
        self.memo[key] = (val, exact)
        return val

    def value(self, bound: float = INF) -> float:
        return self.solve(0, self.initial_pending(), bound)

    # -- witness -------------------------------------------------------------

    def witness(self, target: float | None = None) -> list[Step]:
        """Decisions of one optimal run, with real (globally fresh) subscripts."""
        if target is None:
            target = self.value()
        if target == INF:
            raise ValueError("no finite witness")
        pending = self.initial_pending()
        used = 0
        remaining = target
        steps = []
        for i in range(self.N):
            if self.ell[i] == 0:
                continue
            for x, inj, colours, disp, new in self.children(i, pending, full=True, used_global=used):
                sub = self.solve(i + 1, new, remaining - x + 1)
                if x + sub == remaining:
                    break
            else:  # pragma: no cover - solve() and children() disagree
                raise RuntimeError("witness reconstruction failed")
            remaining -= x
            for m in inj:
                used |= m
            left = len(mutate_masks(colours)) - self.ell[i]
            steps.append(
                Step(self.order[i], inj, tuple(zip(self.arcs[i], disp)), left)
            )
            pending = new
        return steps

    # -- residency over all optimal runs --------------------------------------

    def residency(self) -> dict[int, set[bool]]:
        """For every vertex, the residency outcomes (colour-brush left behind
        or not) realised by some minimum-injection run on this orientation."""
        target = self.value()
        if target == INF:
            return {}
        found = self._reach(0, self.initial_pending(), target)
        out: dict[int, set[bool]] = {v: set() for v in self.order}
        for i, flag in found:
            out[self.order[i]].add(flag)
        return out

    def _structural_residency(self, i: int) -> bool:
        # insensitive vertex in a tree: arrivals are pairwise distinct
        return self.ell[i] == 0 or self.indeg[i] >= 2

    def _reach(self, i: int, pending, remaining) -> frozenset:
        if i == self.N:
            return frozenset()
        if not self.sensitive[i]:
            return frozenset({(i, self._structural_residency(i))}) | self._reach(i + 1, pending, remaining)
        key = (self._key(i, pending), remaining)
        hit = self.reach_memo.get(key)
        if hit is not None:
            return hit
        acc = set()
        for x, inj, colours, disp, new in self.children(i, pending):
            if x > remaining:
                continue
            sub = self.solve(i + 1, new, remaining - x + 1)
            if x + sub != remaining:
                continue
            flag = len(mutate_masks(colours)) > self.ell[i]
            acc.add((i, flag))
            acc |= self._reach(i + 1, new, remaining - x)
        res = frozenset(acc)
        self.reach_memo[key] = res
        return res
