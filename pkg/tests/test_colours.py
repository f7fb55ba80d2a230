from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tattoo.colours import (
    Colour,
    ColourError,
    blends,
    dedup_arrivals,
    fresh_primaries,
    mutate,
    mutate_masks,
    mutated_size,
    mutated_size_masks,
    primaries,
)


def C(*s):
    return Colour.of(*s)


def test_colour_validation():
    with pytest.raises(ColourError):
        Colour(())
    with pytest.raises(ColourError):
        Colour((2, 1))
    with pytest.raises(ColourError):
        Colour((1, 1))
    with pytest.raises(ColourError):
        Colour((0,))
    assert C(2, 1) == Colour((1, 2))
    assert C(1).is_primary and not C(1).is_blend
    assert C(1, 2).is_blend


def test_colour_text_round_trip():
    assert str(C(1, 2)) == "(1,2)"
    assert Colour.parse("(1,2)") == C(1, 2)
    assert Colour.parse(str(C(3, 7, 9))) == C(3, 7, 9)
    with pytest.raises(ColourError):
        Colour.parse("(a)")


def test_mask_round_trip():
    assert C(1, 3).mask == 0b101
    assert Colour.from_mask(0b101) == C(1, 3)
    assert C(2, 5).label_sum == 7


def test_dedup_examples():
    i, k = C(4), C(9)
    stl = C(2, 6, 8)
    assert dedup_arrivals([i, i, i, k, k, stl]) == {i, k, stl}
    assert dedup_arrivals([]) == frozenset()
    assert dedup_arrivals([C(1), C(1)]) == {C(1)}


def test_mutate_three_primaries():
    assert mutate({C(1), C(2), C(3)}) == {
        C(1), C(2), C(3), C(1, 2), C(1, 3), C(2, 3), C(1, 2, 3)
    }


def test_mutate_single_primary():
    assert mutate({C(1)}) == {C(1)}
    assert mutate(set()) == frozenset()


def test_mutate_blend_passes_through():
    i = 5
    blend = C(7, 8, 9)
    got = mutate({C(1), C(2), C(i), blend})
    assert got == {C(1), C(2), C(i), C(1, 2), C(1, i), C(2, i), C(1, 2, i), blend}


def test_blend_equal_to_subset_counts_once():
    s = {C(1), C(2), C(1, 2)}
    assert mutate(s) == {C(1), C(2), C(1, 2)}
    assert mutated_size(s) == 3


def test_fresh_primaries_examples():
    assert fresh_primaries({C(1), C(3)}, 2) == {C(2), C(4)}
    assert fresh_primaries(set(), 3) == {C(1), C(2), C(3)}
    assert fresh_primaries({C(2), C(5)}, 1) == {C(1)}
    assert fresh_primaries(set(), 2, exclude=[1, 2]) == {C(3), C(4)}
    with pytest.raises(ColourError):
        fresh_primaries(set(), -1)


def test_primary_limit():
    with pytest.raises(ColourError):
        mutate({C(i) for i in range(1, 5)}, limit=3)


def test_size_formula_by_enumeration():
    # blends use subscripts >= 10 so none coincides with a subset of the primaries
    pool = [C(10, 11), C(10, 12), C(11, 12, 13)]
    for p in range(6):
        for b in range(4):
            for bl in combinations(pool, b):
                s = {C(i) for i in range(1, p + 1)} | set(bl)
                assert len(mutate(s)) == (1 << p) - 1 + b == mutated_size(s)


colour = st.lists(st.integers(1, 8), min_size=1, max_size=4, unique=True).map(lambda s: C(*s))
colour_sets = st.frozensets(colour, max_size=7)


@given(colour_sets)
def test_mutate_idempotent(s):
    assert mutate(mutate(s)) == mutate(s)


@given(colour_sets)
def test_mutate_no_foreign_blends(s):
    pset = {c.subscripts[0] for c in primaries(s)}
    for c in mutate(s):
        assert set(c.subscripts) <= pset or c in s


@given(colour_sets)
def test_mutate_keeps_blends_and_primaries(s):
    m = mutate(s)
    assert blends(s) <= m and primaries(s) <= m
    assert len(m) == mutated_size(s)


@given(st.lists(colour, max_size=10))
def test_dedup_idempotent_on_doubling(xs):
    assert dedup_arrivals(xs + xs) == dedup_arrivals(xs)
    assert len(dedup_arrivals(xs)) <= len(xs)


@given(colour_sets)
def test_mask_helpers_agree(s):
    masks = [c.mask for c in s]
    assert {Colour.from_mask(m) for m in mutate_masks(masks)} == mutate(s)
    assert mutated_size_masks(masks) == mutated_size(s)
