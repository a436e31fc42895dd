"""Sumsets, product sets and energy of a few contrasting sets.

An interval has the smallest possible sumset and the largest additive
energy; powers of two sit at the other extreme.  The product set of an
interval shows the opposite behaviour for multiplication.
"""

from doubling_lab import IntSet, doubling_ratio, energy, iterated_sum_difference, product_set, sumset

sets = {
    "interval [1..20]": IntSet.interval(1, 20),
    "powers of two": IntSet([2 ** i for i in range(20)]),
    "squares": IntSet([i * i for i in range(1, 21)]),
}

print(f"{'set':18} {'|A|':>4} {'|A+A|':>6} {'|A.A|':>6} {'K+':>8} {'E+':>8} {'Ex':>8}")
for name, a in sets.items():
    print(f"{name:18} {len(a):4d} {len(sumset(a, a)):6d} {len(product_set(a, a)):6d} "
          f"{float(doubling_ratio(a)):8.3f} {energy(a):8d} {energy(a, 'mul'):8d}")

# iterated sumsets grow polynomially for an interval, exponentially for a Sidon-like set
for name, a in sets.items():
    sizes = [len(iterated_sum_difference(a, m, 0)) for m in range(1, 5)]
    print(f"{name:18} |mA| for m=1..4: {sizes}")
