import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from doubling_lab import (
    ArithmeticOverflow, BipartiteGraph, IncidenceInstance, IntSet, MalformedGraph, count_incidences,
    count_incidences_bruteforce, product_set, st_bound_check, st_instance,
)
from doubling_lab.incidence import containment_incidence, line_support_check, st_ratio


def python_incidences(points, lines):
    pts = {tuple(p) for p in points}
    return sum(1 for s, t in {tuple(l) for l in lines} for x, y in pts if y == s * x + t)


def test_tiny_instance():
    inst = IncidenceInstance.build([(0, 0), (1, 1), (2, 2), (1, 0)], [(1, 0), (0, 0), (0, 0)])
    assert inst.num_points == 4 and inst.num_lines == 2
    # y = x hits three points, y = 0 hits two
    assert count_incidences(inst) == 5 == count_incidences_bruteforce(inst)
    assert json.loads(inst.to_json()) == {"points": [[0, 0], [1, 0], [1, 1], [2, 2]], "lines": [[0, 0], [1, 0]]}


points_st = st.lists(st.tuples(st.integers(-8, 8), st.integers(-40, 40)), max_size=60)
lines_st = st.lists(st.tuples(st.integers(-5, 5), st.integers(-10, 10)), max_size=40)


@given(points_st, lines_st)
@settings(max_examples=150)
def test_counts_agree(points, lines):
    inst = IncidenceInstance.build(points, lines)
    expect = python_incidences(set(points), set(lines))
    assert count_incidences(inst) == expect
    assert count_incidences_bruteforce(inst) == expect


def test_empty_instances():
    assert count_incidences(IncidenceInstance.build([], [(1, 1)])) == 0
    assert count_incidences_bruteforce(IncidenceInstance.build([(1, 1)], [])) == 0


def test_bound_check():
    assert st_bound_check(10, 10, 20)
    m = n = 1000
    assert not st_bound_check(m, n, m * n)
    assert st_ratio(8, 1, 0) == 0.0
    assert st_ratio(1, 1, 3) == pytest.approx(1.0)


def test_st_instance_shape():
    b1 = IntSet([1, 2, 3])
    g = BipartiteGraph(3, 3, [(0, 1), (1, 0), (0, 2)])
    a = IntSet([0, 5])
    b = IntSet([1, 2])
    inst = st_instance(b1, g, a, b)
    # slopes {3, 4}, intercepts {0, 5}
    assert inst.lines.tolist() == [[3, 0], [3, 5], [4, 0], [4, 5]]
    three_a = sorted({x + y + z for x in (0, 5) for y in (0, 5) for z in (0, 5)})
    assert inst.points.tolist() == [[x, y] for x in (1, 2) for y in three_a]
    assert inst.line_multiplicity == 3 * 2
    assert count_incidences(inst) == python_incidences(inst.points.tolist(), inst.lines.tolist())
    with pytest.raises(MalformedGraph):
        st_instance(b1, BipartiteGraph(2, 3), a, b)


def test_overflow_detected():
    inst = IncidenceInstance.build([(2**40, 0)], [(2**40, 0)])
    with pytest.raises(ArithmeticOverflow):
        count_incidences(inst)


def test_containment_incidence_full_product_set():
    b = IntSet.interval(1, 12)
    a = product_set(b, b)
    li = containment_incidence(a, b)
    assert li.certificate.verify(li.containment)
    i = count_incidences(li.instance)
    assert i == count_incidences_bruteforce(li.instance)
    assert st_bound_check(li.instance.num_points, li.instance.num_lines, i, 4)
    checked, violations = line_support_check(li, a)
    assert checked == li.pair_graph.num_edges * len(a) and violations == 0


def test_containment_incidence_per_line_lower_bound_independent():
    rng = np.random.default_rng(5)
    b = IntSet.interval(1, 10)
    bb = product_set(b, b).array
    a = IntSet(rng.choice(bb, bb.size * 3 // 4, replace=False))
    li = containment_incidence(a, b)
    pts = {tuple(p) for p in li.instance.points.tolist()}
    bl = b.tolist()
    aset = set(a.tolist())
    nbr = {i: {j for j in range(len(bl)) if j >= i and bl[i] * bl[j] in aset} for i in range(len(bl))}
    thr = li.certificate.threshold
    for i, j in li.pair_graph.edges.tolist():
        gi, gj = int(li.b1_indices[i]), int(li.b1_indices[j])
        common = nbr[gi] & nbr[gj]
        assert len(common) >= thr
        slope = bl[gi] + bl[gj]
        for t in a.tolist():
            on_line = sum(1 for x, y in pts if y == slope * x + t)
            assert on_line >= len(common)
