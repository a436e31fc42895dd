import itertools
import math

import pytest
from hypothesis import assume, given, settings, strategies as st

from doubling_lab import (
    ArithmeticOverflow, Gap, IntSet, InvalidArgument, TooLarge, cover_with_ap, cover_with_gap_rank2,
    format_gap, gap_elements, is_proper, longest_side, membership, parse_gap,
)
from doubling_lab.gaps import gap_grid


def enumerate_gap(base, diffs, lens):
    return {base + sum(d * x for d, x in zip(diffs, xs))
            for xs in itertools.product(*(range(L + 1) for L in lens))}


gaps = st.builds(
    lambda base, sides: Gap(base, tuple(d for d, _ in sides), tuple(L for _, L in sides)),
    st.integers(-50, 50),
    st.lists(st.tuples(st.integers(-12, 12).filter(bool), st.integers(0, 6)), min_size=1, max_size=3),
)


def test_parse_and_format():
    p = parse_gap("0;1:2,5:2")
    assert (p.base, p.diffs, p.lens) == (0, (1, 5), (2, 2))
    assert format_gap(p) == "0;1:2,5:2"
    assert gap_elements(p).tolist() == [0, 1, 2, 5, 6, 7, 10, 11, 12]
    assert p.rank == 2 and p.volume == 4 and p.nominal_size == 9


@pytest.mark.parametrize("text,token", [
    ("0:1:2", "';'"), ("x;1:2", "'x'"), ("0;1-2", "'1-2'"), ("0;0:3", "'0:3'"), ("0;2:-1", "'2:-1'"), ("0;a:1", "'a:1'"),
])
def test_parse_names_the_bad_token(text, token):
    with pytest.raises(InvalidArgument) as err:
        parse_gap(text)
    assert token in str(err.value)


def test_properness_examples():
    assert is_proper(Gap(0, (1, 5), (2, 2)))
    assert not is_proper(Gap(0, (2, 3), (3, 2)))
    assert is_proper(Gap(7, (3,), (100,)))


def test_longest_side_examples():
    assert longest_side(Gap(0, (1, 10, 100), (3, 9, 2))) == (2, 10, 10)
    assert longest_side(Gap(0, (5, 7), (4, 4))) == (1, 5, 5)


@given(gaps)
@settings(max_examples=200)
def test_grid_and_elements_match_enumeration(p):
    expect = enumerate_gap(p.base, p.diffs, p.lens)
    assert gap_elements(p).tolist() == sorted(expect)
    assert gap_grid(p).shape == tuple(L + 1 for L in p.lens)
    assert is_proper(p) == (len(expect) == p.nominal_size)
    assert p.value_range == (min(expect), max(expect))


@given(gaps, st.integers(-300, 300))
@settings(max_examples=300)
def test_membership_matches_enumeration(p, x):
    assert membership(p, x) == (x in enumerate_gap(p.base, p.diffs, p.lens))


@given(gaps)
def test_membership_of_every_element(p):
    for v in enumerate_gap(p.base, p.diffs, p.lens):
        assert membership(p, v)


@given(gaps)
def test_longest_side_dominates_geometric_mean(p):
    _, points, _ = longest_side(p)
    assert points ** p.rank >= p.nominal_size


def test_ap_cover():
    p = cover_with_ap(IntSet([3, 7, 19]))
    assert format_gap(p) == "3;4:4"
    assert format_gap(cover_with_ap(IntSet([5]))) == "5;1:0"
    with pytest.raises(InvalidArgument):
        cover_with_ap(IntSet())


@given(st.sets(st.integers(-100, 100), min_size=2, max_size=20))
@settings(max_examples=100)
def test_rank2_cover_contains_and_is_proper(a):
    u = IntSet(a)
    p = cover_with_gap_rank2(u, 6)
    assume(p is not None)
    elems = enumerate_gap(p.base, p.diffs, p.lens)
    assert set(a) <= elems
    assert len(elems) == p.nominal_size


def test_rank2_cover_examples():
    assert format_gap(cover_with_gap_rank2(IntSet([0, 1, 10, 11]), 4)) == "0;1:1,10:1"
    u = IntSet([x + 100 * y for x in range(5) for y in range(3)])
    # differences 1..4 and 96..104 come first; 100 is the 9th candidate
    assert cover_with_gap_rank2(u, 8).nominal_size > 15
    p = cover_with_gap_rank2(u, 13)
    assert (p.diffs, p.lens) == ((1, 100), (4, 2)) and is_proper(p)


@given(st.integers(-50, 50), st.integers(1, 9), st.integers(1, 12))
def test_rank2_cover_of_ap_is_no_smaller(base, d, n):
    u = IntSet([base + d * i for i in range(n + 1)])
    p = cover_with_gap_rank2(u, 4)
    if p is not None:
        assert p.nominal_size >= cover_with_ap(u).nominal_size


def test_guards():
    with pytest.raises(TooLarge):
        gap_elements(Gap(0, (1, 100000), (99999, 2000)))
    with pytest.raises(ArithmeticOverflow):
        gap_elements(Gap(2**61, (2**60,), (4,)))
    with pytest.raises(InvalidArgument):
        Gap(0, (0,), (3,))
    with pytest.raises(InvalidArgument):
        Gap(0, (), ())
    with pytest.raises(InvalidArgument):
        cover_with_gap_rank2(IntSet([1, 2]), 0)
