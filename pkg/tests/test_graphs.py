import json

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tattoo.graphs import (
    BaseGraph,
    BudgetError,
    FamilySpec,
    GraphError,
    Orientation,
    acyclic_orientations,
    build_family,
    graph_from_json,
    graph_to_edge_list,
    load_graph,
    nonisomorphic_trees,
    odd_degree_count,
    orientation_representatives,
    orientations,
    parse_edge_list,
    random_connected_graph,
    random_tree,
    symmetric_candidate_count,
)


def test_base_graph_normalises_and_rejects():
    g = BaseGraph.from_edges(3, [(1, 0), (2, 1)])
    assert g.edges == ((0, 1), (1, 2))
    with pytest.raises(GraphError, match="loop"):
        BaseGraph.from_edges(2, [(1, 1)])
    with pytest.raises(GraphError, match="duplicate"):
        BaseGraph.from_edges(2, [(0, 1), (1, 0)])
    with pytest.raises(GraphError, match="out of range"):
        BaseGraph.from_edges(2, [(0, 2)])


def test_joost_7_3():
    g = build_family("joost:7,3")
    assert (g.n, g.size) == (17, 18)
    assert g.degrees[0] == g.degrees[1] == 3
    assert g.is_connected


def test_friendship_1_is_triangle():
    g = build_family("friendship:1")
    assert nx.is_isomorphic(g.to_networkx(), nx.cycle_graph(3))


def test_joost_two_paths_is_a_cycle():
    g = build_family("joost:5,2")
    assert g.n == 8
    assert nx.is_isomorphic(g.to_networkx(), nx.cycle_graph(8))


def test_joost_three_vertex_paths_are_simple():
    g = build_family("joost:3,4")
    assert nx.is_isomorphic(g.to_networkx(), nx.complete_bipartite_graph(2, 4))


@pytest.mark.parametrize("n", range(1, 8))
def test_friendship_degrees(n):
    g = build_family(f"friendship:{n}")
    assert (g.n, g.size) == (2 * n + 1, 3 * n)
    assert sorted(g.degrees) == [2] * (2 * n) + [2 * n]
    assert g.degrees[0] == 2 * n


@pytest.mark.parametrize("n,k", [(4, 1), (4, 3), (5, 4), (7, 3), (6, 5)])
def test_joost_degrees(n, k):
    g = build_family(f"joost:{n},{k}")
    assert (g.n, g.size) == (k * (n - 2) + 2, k * (n - 1))
    twos = sum(1 for d in g.degrees if d == 2)
    if k == 2:
        assert twos == g.n
    else:
        assert g.degrees[0] == g.degrees[1] == k
        assert twos == k * (n - 2)


@pytest.mark.parametrize(
    "text,msg",
    [
        ("path:1", "n >= 2"),
        ("cycle:2", "n >= 3"),
        ("friendship:0", "n >= 1"),
        ("joost:2,3", "n >= 3"),
        ("joost:4,0", "k >= 1"),
        ("null:0", "n >= 1"),
        ("wheel:5", "unknown family"),
        ("joost:4", "2 integer"),
        ("path:x", "bad family"),
    ],
)
def test_family_errors(text, msg):
    with pytest.raises(GraphError, match=msg):
        build_family(FamilySpec.parse(text))


def test_family_spec_str_round_trip():
    assert str(FamilySpec.parse(" Joost:7, 3 ")) == "joost:7,3"


def test_orientation_counts():
    assert len(list(orientations(build_family("path:3")))) == 4
    assert len(list(orientations(build_family("path:2")))) == 2
    assert len(list(orientations(build_family("cycle:3")))) == 8
    assert len(list(acyclic_orientations(build_family("cycle:3")))) == 6
    assert len(list(acyclic_orientations(build_family("cycle:4")))) == 14
    assert len(list(acyclic_orientations(build_family("path:6")))) == 32


def test_orientation_order_is_binary_counter():
    g = build_family("path:3")
    assert [o.bits for o in orientations(g)] == [0, 1, 2, 3]


def test_orientation_cap():
    with pytest.raises(BudgetError):
        list(orientations(build_family("complete:6"), cap=10))


def test_odd_degree_count():
    assert odd_degree_count(build_family("path:5")) == 2
    assert odd_degree_count(build_family("star:3")) == 4
    assert odd_degree_count(build_family("cycle:6")) == 0


def test_orientation_from_arcs_and_sources():
    g = build_family("cycle:4")
    o = Orientation.from_arcs(g, [(0, 1), (1, 2), (2, 3), (0, 3)])
    assert o.sources == [0]
    assert o.topological_order == (0, 1, 2, 3)
    cyc = Orientation.from_arcs(g, [(0, 1), (1, 2), (2, 3), (3, 0)])
    assert not cyc.is_acyclic
    with pytest.raises(GraphError, match="not an edge"):
        Orientation.from_arcs(g, [(0, 2)])
    with pytest.raises(GraphError, match="covers"):
        Orientation.from_arcs(g, [(0, 1)])


def _block_signature(o):
    pats = []
    for blk in o.base.blocks:
        pats.append(sum((o.bits >> e & 1) << pos for pos, e in enumerate(blk)))
    return tuple(sorted(pats))


@pytest.mark.parametrize("spec", ["friendship:3", "joost:4,3"])
def test_block_representatives_cover_each_class_once(spec):
    g = build_family(spec)
    reps = [_block_signature(o) for o in orientation_representatives(g, 16)]
    every = {_block_signature(o) for o in acyclic_orientations(g)}
    assert len(reps) == len(set(reps))
    assert set(reps) == every


def test_friendship_candidate_count():
    g = build_family("friendship:3")
    assert symmetric_candidate_count(g) == 120  # multisets of 3 from 8 triangle patterns
    assert len(list(orientation_representatives(g))) == 56  # 6 acyclic patterns per triangle


def test_edge_list_parsing(tmp_path):
    g = parse_edge_list("# n = 5\n0 1  # first\n\n1 2\n")
    assert g.n == 5 and g.edges == ((0, 1), (1, 2))
    with pytest.raises(GraphError, match="line 2"):
        parse_edge_list("0 1\n1 2 3\n")
    with pytest.raises(GraphError, match="line 3"):
        parse_edge_list("0 1\n\n1 b\n")
    with pytest.raises(GraphError, match="line 1: loop"):
        parse_edge_list("2 2\n")
    f = tmp_path / "g.txt"
    f.write_text(graph_to_edge_list(build_family("cycle:5")))
    h = load_graph(f)
    assert (h.n, h.edges) == (5, build_family("cycle:5").edges)


def test_json_round_trip(tmp_path):
    g = build_family("joost:5,3")
    f = tmp_path / "g.json"
    f.write_text(json.dumps(g.to_json()))
    h = load_graph(f)
    assert (h.n, h.edges) == (g.n, g.edges)
    with pytest.raises(GraphError):
        graph_from_json({"n": 2})
    f.write_text('{"n": 2,\n "edges": [[0, 1],]}')
    with pytest.raises(GraphError, match="line 2"):
        load_graph(f)


def test_nonisomorphic_tree_counts():
    # OEIS A000055
    assert [len(nonisomorphic_trees(n)) for n in range(1, 9)] == [1, 1, 1, 2, 3, 6, 11, 23]


def test_random_generators_are_seeded():
    import random

    a = [random_connected_graph(6, 8, random.Random(3)).edges for _ in range(2)]
    assert a[0] == a[1]
    t = random_tree(9, random.Random(5))
    assert t.is_tree and t.n == 9
    with pytest.raises(GraphError):
        random_connected_graph(5, 2, random.Random(0))


small_graphs = st.integers(2, 6).flatmap(
    lambda n: st.lists(
        st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda e: e[0] != e[1]),
        max_size=9,
    ).map(lambda es: BaseGraph.from_edges(n, sorted({tuple(sorted(e)) for e in es})))
)


@settings(max_examples=60, deadline=None)
@given(small_graphs)
def test_orientation_invariants(g):
    acyc = list(acyclic_orientations(g))
    assert len(acyc) <= 2 ** g.size
    forest = nx.is_forest(g.to_networkx()) if g.size else True
    assert (len(acyc) == 2 ** g.size) == forest
    for o in acyc:
        assert sum(o.out_degree(v) for v in range(g.n)) == g.size
        assert sum(o.in_degree(v) for v in range(g.n)) == g.size
        for v in range(g.n):
            assert o.out_degree(v) + o.in_degree(v) == g.degrees[v]
    assert odd_degree_count(g) % 2 == 0
