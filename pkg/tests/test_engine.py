import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tattoo.colours import Colour, mutate
from tattoo.engine import (
    AllocationSchedule,
    EngineError,
    EngineState,
    eligible,
    fire,
    run,
    run_brush,
)
from tattoo.graphs import Orientation, build_family, odd_degree_count
from tattoo.solvers import brush_allocation, brush_number


def C(*s):
    return Colour.of(*s)


def forward(spec):
    return Orientation(build_family(spec), 0)


def directed_cycle_one_source(n):
    # edges (i, i+1) forward and (0, n-1) forward: source 0, sink n-1
    return forward(f"cycle:{n}")


def at_source(o, *cols):
    return EngineState.start(o).inject(0, {C(c) for c in cols})


def test_eligibility_examples():
    o = directed_cycle_one_source(5)
    assert eligible(at_source(o, 1, 2), 0)
    assert not eligible(at_source(o, 1), 0)
    assert eligible(at_source(forward("path:5"), 1), 0)
    assert not eligible(EngineState.start(o), 1)  # residual in-arc


def test_fire_cycle_blend_on_closing_arc():
    o = directed_cycle_one_source(5)
    st0 = at_source(o, 1, 2)
    a1, closing = o.out_arcs[0]  # ordered by head: 1, then 4
    st1 = fire(st0, 0, {a1: C(1), closing: C(1, 2)})
    assert st1.labels[closing] == C(1, 2)
    assert st1.resident[0] == {C(2)}
    assert st1.resident[4] == {C(1, 2)}
    assert len(st1.residual) == o.base.size - 2


def test_fire_moves_everything_when_fully_used():
    o = forward("path:3")
    st1 = fire(at_source(o, 1), 0, {0: C(1)})
    assert st1.resident[0] == frozenset()
    assert st1.resident[1] == {C(1)}


def test_fire_preconditions():
    o = directed_cycle_one_source(4)
    st0 = at_source(o, 1, 2)
    a, b = o.out_arcs[0]
    with pytest.raises(EngineError, match="twice"):
        fire(st0, 0, {a: C(1), b: C(1)})
    with pytest.raises(EngineError, match="not available"):
        fire(st0, 0, {a: C(1), b: C(3)})
    with pytest.raises(EngineError, match="must cover"):
        fire(st0, 0, {a: C(1)})
    with pytest.raises(EngineError, match="not eligible"):
        fire(at_source(o, 1), 0, {a: C(1)})


def test_run_path_labels_all_one():
    tr = run(forward("path:4"), AllocationSchedule.initial({0: {C(1)}}))
    assert tr.complete and tr.injected_total == 1
    assert set(tr.arc_labels.values()) == {(1,)}
    assert tr.final_resident[3] == {C(1)}


def test_run_cycle_blocked_with_deficit():
    tr = run(directed_cycle_one_source(5), AllocationSchedule.initial({0: {C(1)}}))
    assert tr.outcome == "blocked"
    assert [(b.vertex, b.deficit) for b in tr.blocked] == [(0, 1)]
    assert tr.arc_labels == {}


def test_run_cycle_complete_canonical_labels():
    tr = run(directed_cycle_one_source(5), AllocationSchedule.initial({0: {C(1), C(2)}}))
    assert tr.complete
    assert tr.arc_labels[(0, 1)] == (1,)
    assert tr.arc_labels[(0, 4)] == (1, 2)
    assert tr.label_sums[(0, 4)] == 3
    assert {tr.arc_labels[(i, i + 1)] for i in range(4)} == {(1,)}


def test_later_injection_unblocks():
    o = directed_cycle_one_source(4)
    tr = run(o, AllocationSchedule({(0, 0): {C(1)}, (1, 0): {C(2)}}))
    assert tr.complete and tr.injected_total == 2
    assert [t for t, _ in tr.firings][0] == 1


def test_trace_exports():
    tr = run(directed_cycle_one_source(4), AllocationSchedule.initial({0: {C(1), C(2)}}))
    dot = tr.to_dot()
    assert '0 -> 3 [label="(1,2)", label_sum="3"];' in dot
    js = tr.to_json()
    assert js["outcome"] == "complete"
    assert {"tail": 0, "head": 3, "label": [1, 2], "label_sum": 3} in js["arc_labels"]


def test_schedule_validation():
    with pytest.raises(EngineError, match="primary"):
        AllocationSchedule.initial({0: {C(1, 2)}})
    with pytest.raises(EngineError, match="negative"):
        AllocationSchedule({(-1, 0): {C(1)}})
    with pytest.raises(EngineError, match="unknown vertex"):
        run(forward("path:3"), AllocationSchedule.initial({7: {C(1)}}))
    with pytest.raises(EngineError, match="malformed"):
        AllocationSchedule.from_json([{"vertex": 0}])
    s = AllocationSchedule.from_json({"0": [1, 2]})
    assert AllocationSchedule.from_json(s.to_json()) == s


def test_unknown_policy():
    with pytest.raises(EngineError):
        run(forward("path:3"), AllocationSchedule(), policy="random")


def test_run_brush_examples():
    r = run_brush(forward("path:4"), {0: 1})
    assert r.complete and r.final_counts == (0, 0, 0, 1)
    assert run_brush(directed_cycle_one_source(4), {0: 2}).complete
    g = build_family("cycle:4")
    cyc = Orientation.from_arcs(g, [(0, 1), (1, 2), (2, 3), (3, 0)])
    assert run_brush(cyc, [5, 5, 5, 5]).outcome == "blocked"
    with pytest.raises(EngineError):
        run_brush(forward("path:3"), [1, -1, 0])


def test_tree_brush_conservation():
    for spec in ("path:6", "star:5", "joost:5,1"):
        g = build_family(spec)
        res = brush_number(g)
        assert res.outcome.complete
        assert sum(res.final_counts) == res.value == odd_degree_count(g) // 2


orientation_cases = st.tuples(st.sampled_from(["path:5", "cycle:5", "star:4", "friendship:2", "joost:4,3"]),
                              st.integers(0, 2**12 - 1))


@settings(max_examples=80, deadline=None)
@given(orientation_cases, st.integers(1, 4))
def test_run_invariants(case, k):
    spec, bits = case
    g = build_family(spec)
    o = Orientation(g, bits % (1 << g.size))
    sched = AllocationSchedule.initial({v: {C(i) for i in range(1, k + 1)} for v in o.sources})
    tr = run(o, sched)
    assert tr == run(o, sched)
    assert tr.complete == (len(tr.arc_labels) == g.size)
    injected = {i for cols in sched.injections.values() for c in cols for i in c.subscripts}
    for lab in tr.arc_labels.values():
        assert set(lab) <= injected
    for t in range(g.n):
        labs = [tr.arc_labels[a] for a in o.arcs if a[0] == t and a in tr.arc_labels]
        assert len(labs) == len(set(labs))
    assert tr.label_sums == {a: sum(l) for a, l in tr.arc_labels.items()}
    b = run_brush(o, brush_allocation(o))
    if o.is_acyclic:
        assert b.complete and sum(b.final_counts) == b.allocated


@settings(max_examples=40, deadline=None)
@given(orientation_cases)
def test_residual_strictly_shrinks(case):
    spec, bits = case
    g = build_family(spec)
    o = Orientation(g, bits % (1 << g.size))
    st_ = EngineState.start(o)
    for v in o.sources:
        st_ = st_.inject(v, {C(i) for i in range(1, 5)})
    while True:
        ready = [v for v in range(g.n) if eligible(st_, v)]
        if not ready:
            break
        v = ready[0]
        out = st_.residual_out(v)
        before = len(st_.residual)
        st_ = fire(st_, v, dict(zip(out, sorted(mutate(st_.resident[v])))))
        assert len(st_.residual) < before
