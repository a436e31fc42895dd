"""Counting prime-power divisors across an arithmetic progression.

For P = [1..10^6] the number of prime-power divisors up to 10^6 has mean
close to log log n + 1.03 and stays concentrated; the exact mean equals the
sum of the per-prime-power counts divided by |P|.
"""

import math
from fractions import Fraction

from doubling_lab import Gap, mertens_sum, omega_stats_over_gap, prime_power_count_in_gap, restricted_primes, \
    sieve_prime_powers

for N in (10**3, 10**4, 10**5, 10**6):
    v = mertens_sum(sieve_prime_powers(N))
    print(f"N={N:8d}  sum 1/p^a = {v:.5f}  minus log log N = {v - math.log(math.log(N)):.5f}")

p = Gap.interval(1, 10**6)
table = sieve_prime_powers(10**6)
stats = omega_stats_over_gap(p, table)
print(f"\nmean {stats.mean:.5f}  variance {stats.variance:.5f}  log log n + 1.03 = "
      f"{math.log(math.log(10**6)) + 1.03:.5f}")
print("histogram:", dict(sorted(stats.histogram.items())))
print(f"outside the band: {stats.outside_fraction:.4f}")

total = sum(prime_power_count_in_gap(p, int(q), int(a))[0] for q, a, _ in table.entries)
print("double counting matches exactly:", Fraction(total, stats.n) == stats.exact_mean)

# a rank-2 progression whose differences exclude the primes 2 and 5
q = Gap(7, (1, 1000), (199, 99))
t = restricted_primes(q.diffs, sieve_prime_powers(q.nominal_size))
print(f"\nrank-2 GAP {q}: excluded primes {sorted(t.excluded)}, "
      f"mean {omega_stats_over_gap(q, t).mean:.4f}")
