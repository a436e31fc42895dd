"""Pairs from [1..1000]^2 against [1..10^6].

Prime-power divisors of x and y up to 1000 survive as divisors of xy up to
10^6, so the pair sum never exceeds the count for xy.  On average the pair
sum is about 2 log log n while elements of [1..10^6] average only
log log n + O(1): the gap is what a dense multiplicative structure inside a
progression cannot afford.
"""

from doubling_lab import Gap, omega_tension

for delta in (1.0, 0.75, 0.5):
    r = omega_tension(Gap.interval(1, 1000), Gap.interval(1, 1000), Gap.interval(1, 10**6),
                      delta=delta, sample=10_000, seed=0)
    print(f"delta={delta:4}  levels ({r.low_bound}, {r.high_bound})  pair sum {r.mean_pair_sum:.4f}  "
          f"P3 mean {r.mean_p3:.4f}  gap {r.gap:.4f}  violations {r.violations}")
