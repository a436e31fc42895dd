"""Turn a dense subset of B.B into a point-line incidence problem.

Pairs (b_i, b_j) with many common neighbours in the containment graph give
slopes b_i + b_j; together with intercepts from A they define lines that
each pass through many points of B x 3A.
"""

import numpy as np

from doubling_lab import IntSet, count_incidences, product_set, st_bound_check
from doubling_lab.incidence import containment_incidence, line_support_check, st_ratio

rng = np.random.default_rng(3)
b = IntSet.interval(1, 24)
bb = product_set(b, b).array
a = IntSet(rng.choice(bb, size=bb.size * 3 // 4, replace=False))

li = containment_incidence(a, b)
inst = li.instance
i = count_incidences(inst)
print(f"|B_1| = {len(li.b1)}, good pairs = {li.pair_graph.num_edges}")
print(f"points = {inst.num_points}, lines = {inst.num_lines}, incidences = {i}")
print(f"I / ((mn)^(2/3) + m + n) = {st_ratio(inst.num_points, inst.num_lines, i):.3f}")
print("within the c=2.5 bound:", st_bound_check(inst.num_points, inst.num_lines, i))
checked, bad = line_support_check(li, a)
print(f"per-line support checked on {checked} lines, violations: {bad}")
