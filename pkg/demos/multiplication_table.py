"""How many distinct entries does the n x n multiplication table have?

The density M(n)/n^2 falls slowly; the additive energy of the product set,
normalised by n^6, falls too.
"""

from doubling_lab import IntSet, energy, product_set
from doubling_lab.experiments import mult_table_size

for n in (10, 100, 1000, 10000):
    m = mult_table_size(n)
    print(f"n={n:6d}  M(n)={m:10d}  M(n)/n^2={m / n**2:.4f}")

print()
for n in (8, 16, 32, 64):
    b = IntSet.interval(1, n)
    bb = product_set(b, b)
    e = energy(bb)
    print(f"n={n:3d}  |B.B|={len(bb):5d}  E+(B.B)={e:12d}  E+/n^6={e / n**6:.5f}")
