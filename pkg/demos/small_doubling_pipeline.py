"""Refine the containment graph of B.B down to two small-doubling sets.

B = [1..48] and A = B.B.  Each stage prints its vertex counts and the
density it leaves; afterwards every certificate is recomputed from scratch.
"""

from doubling_lab import IntSet, cover_with_ap, cover_with_gap_rank2, product_set, recheck_pipeline, \
    small_doubling_pipeline

b = IntSet.interval(1, 48)
a = product_set(b, b)
res = small_doubling_pipeline(a, b)

print(f"alpha = {res.alpha} ({float(res.alpha):.4f}), eps = {float(res.eps):g}")
for st in res.stages:
    print(f"  {st.name:24} left={len(st.left):3d} right={len(st.right):3d} density={float(st.density):.4f}")
print(f"|V| = {len(res.final_v)}, doubling {res.doubling_v}; |W| = {len(res.final_w)}, doubling {res.doubling_w}")
print(f"edges between V and W: {res.restricted_edge_count}")

for claim, ok in recheck_pipeline(res, a, b):
    if not ok:
        print("recheck failed:", claim)
print("all certificates rechecked:", all(ok for _, ok in recheck_pipeline(res, a, b)))

print("AP cover of V:", cover_with_ap(res.final_v))
print("rank-2 cover of V:", cover_with_gap_rank2(res.final_v, 16))
