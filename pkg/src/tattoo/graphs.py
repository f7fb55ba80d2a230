"""Base graphs, the named families, and orientation enumeration."""

from __future__ import annotations

import heapq
import math
import json
import random
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, combinations_with_replacement, product
from pathlib import Path

import networkx as nx

DEFAULT_ORIENTATION_CAP = 20

FAMILY_KINDS = ("path", "cycle", "null", "friendship", "joost", "complete", "star")


class GraphError(ValueError):
    pass


class BudgetError(RuntimeError):
    pass


@dataclass(frozen=True)
class BaseGraph:
    """Simple undirected graph on vertices ``0..n-1``.

    ``edges`` keeps construction order (orientation bit ``i`` refers to
    ``edges[i]``); each pair is stored as ``(u, v)`` with ``u < v``.
    ``blocks`` lists groups of edge indices that an automorphism of the graph
    permutes wholesale (the triangles of a friendship graph, the paths of a
    Joost graph). Blocks must have equal length and corresponding positions
    must play the same role, so any permutation of blocks is an automorphism.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    name: str = ""
    blocks: tuple[tuple[int, ...], ...] = field(default=(), compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise GraphError("a graph needs at least one vertex")
        norm = []
        seen = set()
        for e in self.edges:
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={self.n}")
            e = (u, v) if u < v else (v, u)
            if e in seen:
                raise GraphError(f"duplicate edge {e}")
            seen.add(e)
            norm.append(e)
        object.__setattr__(self, "edges", tuple(norm))
        if self.blocks:
            sizes = {len(b) for b in self.blocks}
            flat = [i for b in self.blocks for i in b]
            if len(sizes) != 1 or len(set(flat)) != len(flat) or not set(flat) <= set(range(len(norm))):
                raise GraphError("malformed edge blocks")

    @classmethod
    def from_edges(cls, n: int, edges, name: str = "") -> BaseGraph:
        return cls(n, tuple(tuple(e) for e in edges), name)

    @property
    def size(self) -> int:
        return len(self.edges)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        d = [0] * self.n
        for u, v in self.edges:
            d[u] += 1
            d[v] += 1
        return tuple(d)

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def is_connected(self) -> bool:
        seen = {0}
        stack = [0]
        while stack:
            for w in self.adjacency[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n

    @property
    def is_tree(self) -> bool:
        return self.is_connected and self.size == self.n - 1

    @property
    def is_null(self) -> bool:
        return self.size == 0

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges)
        return g

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges]}

    def without_symmetry(self) -> BaseGraph:
        return BaseGraph(self.n, self.edges, self.name)


@dataclass(frozen=True)
class Orientation:
    """One direction per base edge. Bit ``i`` of ``bits`` set means
    ``edges[i] = (u, v)`` is directed ``v -> u``; clear means ``u -> v``."""

    base: BaseGraph
    bits: int

    @classmethod
    def from_arcs(cls, base: BaseGraph, arcs) -> Orientation:
        index = {e: i for i, e in enumerate(base.edges)}
        bits = 0
        seen = set()
        for tail, head in arcs:
            key = (min(tail, head), max(tail, head))
            if key not in index:
                raise GraphError(f"arc ({tail}, {head}) is not an edge of the base graph")
            if key in seen:
                raise GraphError(f"edge {key} oriented twice")
            seen.add(key)
            if tail > head:
                bits |= 1 << index[key]
        if len(seen) != base.size:
            raise GraphError(f"orientation covers {len(seen)} of {base.size} edges")
        return cls(base, bits)

    @cached_property
    def arcs(self) -> tuple[tuple[int, int], ...]:
        return tuple(
            (v, u) if self.bits >> i & 1 else (u, v) for i, (u, v) in enumerate(self.base.edges)
        )

    @cached_property
    def out_arcs(self) -> tuple[tuple[int, ...], ...]:
        """Arc indices leaving each vertex, ordered by head id."""
        out = [[] for _ in range(self.base.n)]
        for i, (t, h) in enumerate(self.arcs):
            out[t].append(i)
        return tuple(tuple(sorted(a, key=lambda i: self.arcs[i][1])) for a in out)

    @cached_property
    def in_arcs(self) -> tuple[tuple[int, ...], ...]:
        inn = [[] for _ in range(self.base.n)]
        for i, (t, h) in enumerate(self.arcs):
            inn[h].append(i)
        return tuple(tuple(a) for a in inn)

    def out_degree(self, v: int) -> int:
        return len(self.out_arcs[v])

    def in_degree(self, v: int) -> int:
        return len(self.in_arcs[v])

    @property
    def sources(self) -> list[int]:
        return [v for v in range(self.base.n) if not self.in_arcs[v]]

    @cached_property
    def topological_order(self) -> tuple[int, ...] | None:
        """Source-peeling order taking the lowest free id first; None if cyclic."""
        indeg = [len(a) for a in self.in_arcs]
        heap = [v for v in range(self.base.n) if indeg[v] == 0]
        heapq.heapify(heap)
        order = []
        while heap:
            v = heapq.heappop(heap)
            order.append(v)
            for i in self.out_arcs[v]:
                h = self.arcs[i][1]
                indeg[h] -= 1
                if indeg[h] == 0:
                    heapq.heappush(heap, h)
        return tuple(order) if len(order) == self.base.n else None

    @property
    def is_acyclic(self) -> bool:
        return self.topological_order is not None

    def to_json(self) -> dict:
        return {"bits": self.bits, "arcs": [list(a) for a in self.arcs]}


# -- families ---------------------------------------------------------------

@dataclass(frozen=True)
class FamilySpec:
    kind: str
    params: tuple[int, ...]

    @classmethod
    def parse(cls, text: str) -> FamilySpec:
        """``"friendship:4"``, ``"joost:7,3"`` (n then k), ``"cycle:6"``..."""
        kind, _, rest = text.strip().partition(":")
        kind = kind.strip().lower()
        if kind not in FAMILY_KINDS:
            raise GraphError(f"unknown family {kind!r}; expected one of {', '.join(FAMILY_KINDS)}")
        try:
            params = tuple(int(p) for p in rest.split(",") if p.strip())
        except ValueError as exc:
            raise GraphError(f"bad family parameters in {text!r}") from exc
        want = 2 if kind == "joost" else 1
        if len(params) != want:
            raise GraphError(f"family {kind!r} takes {want} integer parameter(s), got {len(params)}")
        return cls(kind, params)

    def __str__(self) -> str:
        return f"{self.kind}:{','.join(map(str, self.params))}"


def _need(cond: bool, msg: str):
    if not cond:
        raise GraphError(msg)


def path_graph(n: int) -> BaseGraph:
    _need(n >= 2, f"path needs n >= 2, got {n}")
    return BaseGraph(n, tuple((i, i + 1) for i in range(n - 1)), f"path:{n}")


def cycle_graph(n: int) -> BaseGraph:
    _need(n >= 3, f"cycle needs n >= 3, got {n}")
    return BaseGraph(n, tuple((i, i + 1) for i in range(n - 1)) + ((0, n - 1),), f"cycle:{n}")


def null_graph(n: int) -> BaseGraph:
    _need(n >= 1, f"null graph needs n >= 1, got {n}")
    return BaseGraph(n, (), f"null:{n}")


def complete_graph(n: int) -> BaseGraph:
    _need(n >= 2, f"complete graph needs n >= 2, got {n}")
    return BaseGraph(n, tuple(combinations(range(n), 2)), f"complete:{n}")


def star_graph(leaves: int) -> BaseGraph:
    _need(leaves >= 1, f"star needs at least one leaf, got {leaves}")
    return BaseGraph(leaves + 1, tuple((0, i) for i in range(1, leaves + 1)), f"star:{leaves}")


def friendship_graph(n: int) -> BaseGraph:
    """Fr(3, n): hub 0, triangle ``i`` on ``{0, 2i+1, 2i+2}``."""
    _need(n >= 1, f"friendship graph needs n >= 1, got {n}")
    edges = []
    for i in range(n):
        a, b = 2 * i + 1, 2 * i + 2
        edges += [(0, a), (0, b), (a, b)]
    blocks = tuple(tuple(range(3 * i, 3 * i + 3)) for i in range(n)) if n > 1 else ()
    return BaseGraph(2 * n + 1, tuple(edges), f"friendship:{n}", blocks)


def joost_graph(n: int, k: int) -> BaseGraph:
    """P^(k)_n: ``k`` paths of ``n`` vertices sharing end-vertices ``u1 = 0`` and ``u2 = 1``.

    Internal vertex ``i`` (0-based) of path ``j`` is ``2 + j*(n-2) + i``.
    """
    _need(n >= 3, f"Joost graph needs n >= 3, got {n}")
    _need(k >= 1, f"Joost graph needs k >= 1, got {k}")
    edges = []
    for j in range(k):
        inner = [2 + j * (n - 2) + i for i in range(n - 2)]
        chain = [0] + inner + [1]
        edges += list(zip(chain, chain[1:]))
    blocks = tuple(tuple(range(j * (n - 1), (j + 1) * (n - 1))) for j in range(k)) if k > 1 else ()
    return BaseGraph(k * (n - 2) + 2, tuple(edges), f"joost:{n},{k}", blocks)


def build_family(spec: FamilySpec | str) -> BaseGraph:
    if isinstance(spec, str):
        spec = FamilySpec.parse(spec)
    p = spec.params
    builders = {
        "path": lambda: path_graph(p[0]),
        "cycle": lambda: cycle_graph(p[0]),
        "null": lambda: null_graph(p[0]),
        "complete": lambda: complete_graph(p[0]),
        "star": lambda: star_graph(p[0]),
        "friendship": lambda: friendship_graph(p[0]),
        "joost": lambda: joost_graph(p[0], p[1]),
    }
    if spec.kind not in builders:
        raise GraphError(f"unknown family {spec.kind!r}")
    return builders[spec.kind]()


# -- orientations -----------------------------------------------------------

def _check_cap(count_log2: float, cap: int, what: str):
    if count_log2 > cap:
        raise BudgetError(f"{what} needs 2^{count_log2:.1f} orientations, cap is 2^{cap}")


def orientations(g: BaseGraph, cap: int = DEFAULT_ORIENTATION_CAP) -> Iterator[Orientation]:
    """All ``2^size`` orientations, in binary-counter order of the edge bits."""
    _check_cap(g.size, cap, g.name or "graph")
    for bits in range(1 << g.size):
        yield Orientation(g, bits)


def acyclic_orientations(g: BaseGraph, cap: int = DEFAULT_ORIENTATION_CAP) -> Iterator[Orientation]:
    for o in orientations(g, cap):
        if o.is_acyclic:
            yield o


def symmetric_candidate_count(g: BaseGraph) -> int:
    """Number of orientations :func:`orientation_representatives` visits."""
    if not g.blocks:
        return 1 << g.size
    b = len(g.blocks[0])
    loose = g.size - b * len(g.blocks)
    return math.comb((1 << b) + len(g.blocks) - 1, len(g.blocks)) << loose


def orientation_representatives(g: BaseGraph, cap: int = DEFAULT_ORIENTATION_CAP) -> Iterator[Orientation]:
    """Acyclic orientations up to permutation of the graph's edge blocks.

    Each block gets a local direction pattern; only non-decreasing pattern
    sequences are produced, one per multiset. Edges outside the blocks are
    enumerated in full. Without blocks this is :func:`acyclic_orientations`.
    """
    if not g.blocks:
        yield from acyclic_orientations(g, cap)
        return
    count = symmetric_candidate_count(g)
    _check_cap(math.log2(count), cap, g.name or "graph")
    b = len(g.blocks[0])
    in_blocks = {i for blk in g.blocks for i in blk}
    loose = [i for i in range(g.size) if i not in in_blocks]
    for patterns in combinations_with_replacement(range(1 << b), len(g.blocks)):
        base_bits = 0
        for blk, pat in zip(g.blocks, patterns):
            for pos, ei in enumerate(blk):
                if pat >> pos & 1:
                    base_bits |= 1 << ei
        for extra in product((0, 1), repeat=len(loose)):
            bits = base_bits
            for ei, bit in zip(loose, extra):
                bits |= bit << ei
            o = Orientation(g, bits)
            if o.is_acyclic:
                yield o


def odd_degree_count(g: BaseGraph) -> int:
    return sum(1 for d in g.degrees if d % 2)


# -- ingestion / generation -------------------------------------------------

def parse_edge_list(text: str, n: int | None = None, name: str = "") -> BaseGraph:
    """``u v`` per line; ``#`` starts a comment. Vertex count is the largest id + 1
    unless ``n`` is given (an ``# n = 7`` header also works)."""
    edges = []
    hint = n
    for lineno, raw in enumerate(text.splitlines(), 1):
        line, _, comment = raw.partition("#")
        c = comment.replace(" ", "")
        if c.startswith("n=") and hint is None:
            try:
                hint = int(c[2:])
            except ValueError:
                raise GraphError(f"line {lineno}: bad vertex-count header {raw.strip()!r}")
        toks = line.split()
        if not toks:
            continue
        if len(toks) != 2:
            raise GraphError(f"line {lineno}: expected 'u v', got {line.strip()!r}")
        try:
            u, v = int(toks[0]), int(toks[1])
        except ValueError:
            raise GraphError(f"line {lineno}: vertex ids must be integers, got {line.strip()!r}")
        if u < 0 or v < 0:
            raise GraphError(f"line {lineno}: negative vertex id")
        if u == v:
            raise GraphError(f"line {lineno}: loop at vertex {u}")
        edges.append((u, v))
    if hint is None:
        hint = max((max(e) for e in edges), default=-1) + 1
    if hint < 1:
        raise GraphError("empty graph")
    try:
        return BaseGraph.from_edges(hint, edges, name)
    except GraphError as exc:
        raise GraphError(f"invalid graph: {exc}") from None


def graph_from_json(data: dict | str, name: str = "") -> BaseGraph:
    if isinstance(data, str):
        data = json.loads(data)
    try:
        return BaseGraph.from_edges(int(data["n"]), [tuple(e) for e in data["edges"]], name)
    except (KeyError, TypeError, ValueError) as exc:
        raise GraphError(f"invalid JSON graph: {exc}") from None


def load_graph(path: str | Path) -> BaseGraph:
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".json" or text.lstrip().startswith("{"):
        try:
            return graph_from_json(text, path.stem)
        except json.JSONDecodeError as exc:
            raise GraphError(f"{path}: line {exc.lineno}: {exc.msg}") from None
    return parse_edge_list(text, name=path.stem)


def graph_to_edge_list(g: BaseGraph) -> str:
    return f"# n = {g.n}\n" + "".join(f"{u} {v}\n" for u, v in g.edges)


def random_tree(n: int, rng: random.Random) -> BaseGraph:
    if n == 1:
        return null_graph(1)
    t = nx.random_labeled_tree(n, seed=rng.randrange(2**32))
    return BaseGraph.from_edges(n, sorted(tuple(sorted(e)) for e in t.edges()), f"tree{n}")


def random_connected_graph(n: int, m: int, rng: random.Random) -> BaseGraph:
    if not n - 1 <= m <= n * (n - 1) // 2:
        raise GraphError(f"no connected simple graph with n={n}, m={m}")
    while True:
        g = nx.gnm_random_graph(n, m, seed=rng.randrange(2**32))
        if nx.is_connected(g):
            return BaseGraph.from_edges(n, sorted(tuple(sorted(e)) for e in g.edges()), f"g{n}_{m}")


def nonisomorphic_trees(n: int) -> list[BaseGraph]:
    if n == 1:
        return [null_graph(1)]
    out = []
    for i, t in enumerate(nx.nonisomorphic_trees(n)):
        out.append(BaseGraph.from_edges(n, sorted(tuple(sorted(e)) for e in t.edges()), f"tree{n}.{i}"))
    return out


def describe(g: BaseGraph) -> str:
    return g.name or f"graph(n={g.n}, m={g.size})"


def degree_sequence(g: BaseGraph) -> Sequence[int]:
    return sorted(g.degrees, reverse=True)
