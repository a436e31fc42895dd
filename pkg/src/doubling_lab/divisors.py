"""Restricted prime-power divisor statistics.

``omega(x)`` below always means the restricted count
``#{(p, a) : p allowed, p**a <= N, p**a | x}`` for a given
:class:`PrimePowerTable`.  Logarithms are natural.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

from .errors import InvalidArgument, PreconditionError, TooLarge, TooSmall
from .gaps import Gap, gap_grid, is_proper, longest_side

SIEVE_LIMIT = 10**9
# dense value-range sieve is used when the span is at most this multiple of |P|
DENSE_SPAN_FACTOR = 8


@dataclass(frozen=True)
class PrimePowerTable:
    """All ``p**a <= bound`` with ``p`` outside ``excluded``, sorted by value."""

    bound: int
    primes: np.ndarray
    exps: np.ndarray
    values: np.ndarray
    excluded: frozenset = field(default_factory=frozenset)

    def __len__(self) -> int:
        return int(self.values.size)

    @property
    def entries(self) -> list[tuple[int, int, int]]:
        return [(int(p), int(a), int(v)) for p, a, v in zip(self.primes, self.exps, self.values)]

    def allowed_primes(self) -> np.ndarray:
        return self.primes[self.exps == 1]

    def _filtered(self, keep: np.ndarray, bound=None, excluded=None) -> "PrimePowerTable":
        return PrimePowerTable(
            self.bound if bound is None else bound,
            self.primes[keep], self.exps[keep], self.values[keep],
            self.excluded if excluded is None else excluded,
        )

    def truncate(self, bound: int) -> "PrimePowerTable":
        """The same table restricted to values ``<= bound``."""
        if bound > self.bound:
            raise InvalidArgument(f"cannot extend a table from {self.bound} to {bound}")
        return self._filtered(self.values <= bound, bound=bound)


def prime_sieve(limit: int) -> np.ndarray:
    """Primes ``<= limit`` (Eratosthenes over a bool array)."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    is_p = np.ones(limit + 1, dtype=bool)
    is_p[:2] = False
    is_p[4::2] = False
    for p in range(3, math.isqrt(limit) + 1, 2):
        if is_p[p]:
            is_p[p * p::2 * p] = False
    return np.flatnonzero(is_p).astype(np.int64)


def sieve_prime_powers(n_bound: int, excluded: Iterable[int] = ()) -> PrimePowerTable:
    if not 2 <= n_bound <= SIEVE_LIMIT:
        raise InvalidArgument(f"bound must lie in [2, {SIEVE_LIMIT}], got {n_bound}")
    excluded = frozenset(int(p) for p in excluded)
    primes = prime_sieve(n_bound)
    if excluded:
        primes = primes[~np.isin(primes, np.fromiter(excluded, dtype=np.int64))]
    ps, es, vs = [primes], [np.ones(primes.size, np.int64)], [primes]
    for p in primes[primes <= math.isqrt(n_bound)].tolist():
        v, a = p * p, 2
        while v <= n_bound:
            ps.append(np.array([p]))
            es.append(np.array([a]))
            vs.append(np.array([v]))
            v *= p
            a += 1
    p_all, e_all, v_all = (np.concatenate(x).astype(np.int64) for x in (ps, es, vs))
    order = np.argsort(v_all, kind="stable")
    return PrimePowerTable(int(n_bound), p_all[order], e_all[order], v_all[order], excluded)


def restricted_primes(diffs: Iterable[int], table: PrimePowerTable) -> PrimePowerTable:
    """Drop every table prime dividing one of ``diffs``.

    The returned table's ``excluded`` set holds all excluded primes so far;
    its size is the exclusion count to report.
    """
    diffs = [abs(int(d)) for d in diffs]
    if any(d == 0 for d in diffs):
        raise InvalidArgument("differences must be nonzero")
    base = table.allowed_primes()
    hit = np.zeros(base.size, dtype=bool)
    for d in diffs:
        if d < 2**62:
            hit |= (np.int64(d) % base) == 0
        else:
            hit |= np.array([d % int(p) == 0 for p in base], dtype=bool)
    newly = frozenset(int(p) for p in base[hit])
    keep = ~np.isin(table.primes, base[hit])
    return table._filtered(keep, excluded=table.excluded | newly)


def omega_restricted(x: int, table: PrimePowerTable) -> int:
    """Number of table prime powers dividing ``x``."""
    x = int(x)
    if x <= 0:
        raise InvalidArgument(f"omega is defined for positive integers, got {x}")
    vals = table.values[table.values <= x]
    if x < 2**63:
        return int(np.count_nonzero(np.int64(x) % vals == 0))
    return sum(1 for v in vals.tolist() if x % v == 0)


def mertens_sum(table: PrimePowerTable) -> float:
    """``sum 1/p**a`` over the table (correctly rounded)."""
    return math.fsum(1.0 / v for v in table.values.tolist())


def _fibers(p1: Gap):
    """Split ``p1`` along its longest side: returns (L, D, rest_values, side index)."""
    idx, points, diff = longest_side(p1)
    k = idx - 1
    others = [(d, L) for i, (d, L) in enumerate(zip(p1.diffs, p1.lens)) if i != k]
    if others:
        rest = gap_grid(Gap(p1.base, [d for d, _ in others], [L for _, L in others])).ravel()
    else:
        rest = np.array([p1.base], dtype=np.int64)
    return points - 1, diff, rest, k


def _fiber_count(rest: np.ndarray, L: int, D: int, q: int) -> int:
    """``#{(r, x) : 0 <= x <= L, q | r + D x}`` for ``gcd(D, q) = 1``."""
    inv = pow(D % q, -1, q) if q > 1 else 0
    if q < 2**31:
        s = ((-(rest % q)) % q) * inv % q
    else:
        s = np.array([(-int(r) * inv) % q for r in rest], dtype=np.int64)
    return int(np.where(s <= L, (L - s) // q + 1, 0).sum())


def _require_proper(p: Gap):
    if not is_proper(p):
        raise InvalidArgument(f"GAP {p} is not proper")


def prime_power_count_in_gap(p1: Gap, p: int, a: int) -> tuple[int, bool]:
    """Exact ``#{x in P : p**a | x}`` and whether it lies within ``|P|/I_1`` of ``|P|/p**a``.

    ``I_1`` is the number of points on the longest side, whose difference must
    be coprime to ``p``.
    """
    _require_proper(p1)
    if a < 1:
        raise InvalidArgument(f"exponent must be >= 1, got {a}")
    L, D, rest, _ = _fibers(p1)
    if math.gcd(p, D) != 1:
        raise PreconditionError(f"prime {p} divides the longest-side difference {D}")
    q = p ** a
    count = _fiber_count(rest, L, D, q)
    n = p1.nominal_size
    bound_ok = abs(count * q - n) * (L + 1) <= n * q
    return count, bound_ok


@dataclass(frozen=True)
class OmegaStats:
    n: int
    mean: float
    variance: float
    histogram: dict
    band_center: float
    band_halfwidth: float
    outside_fraction: float
    omega_sum: int = 0

    @property
    def exact_mean(self) -> Fraction:
        return Fraction(self.omega_sum, self.n)

    def chebyshev_holds(self, t: float) -> bool:
        """Empirical ``P(|Y - mean| > t) <= variance / t**2`` over the histogram."""
        far = sum(c for k, c in self.histogram.items() if abs(k - self.mean) > t)
        return far / self.n <= self.variance / (t * t) + 1e-12

    def csv_row(self) -> dict:
        return {k: getattr(self, k) for k in
                ("n", "mean", "variance", "band_center", "band_halfwidth", "outside_fraction")}


def omega_values_over_gap(p1: Gap, table: PrimePowerTable) -> np.ndarray:
    """Restricted omega of every element of ``p1``, in grid order."""
    grid = gap_grid(p1)
    lo, hi = p1.value_range
    if lo < 1:
        raise InvalidArgument(f"GAP {p1} has nonpositive elements")
    n = grid.size
    vals = table.values[table.values <= hi].tolist()
    if hi - lo + 1 <= DENSE_SPAN_FACTOR * n:
        acc = np.zeros(hi - lo + 1, dtype=np.int32)
        for v in vals:
            acc[(-lo) % v::v] += 1
        return acc[grid.ravel() - lo]
    # sparse GAP: walk the fibres of the longest side
    L, D, rest, k = _fibers(p1)
    out = np.zeros((rest.size, L + 1), dtype=np.int32)
    flat = np.moveaxis(grid, k, -1).reshape(rest.size, L + 1)
    for v in vals:
        if math.gcd(v, D) != 1:
            out += (flat % v == 0)
            continue
        inv = pow(D % v, -1, v)
        s = ((-(rest % v)) % v) * inv % v if v < 2**31 else \
            np.array([(-int(r) * inv) % v for r in rest], dtype=np.int64)
        rows = np.flatnonzero(s <= L)
        if v > L:
            out[rows, s[rows]] += 1
        else:
            for r in rows.tolist():
                out[r, s[r]::v] += 1
    res = np.moveaxis(out.reshape(np.moveaxis(grid, k, -1).shape), -1, k)
    return res.ravel()


def omega_stats_over_gap(p1: Gap, table: PrimePowerTable) -> OmegaStats:
    """Histogram, mean, variance and concentration band of omega over ``p1``."""
    _require_proper(p1)
    n = p1.nominal_size
    if n < 16:
        raise TooSmall(f"|P| = {n} is below 16")
    om = omega_values_over_gap(p1, table)
    hist = np.bincount(om)
    ks = np.arange(hist.size)
    total = int((ks * hist).sum())
    mean = total / n
    variance = float(((ks - mean) ** 2 * hist).sum() / n)
    center = math.log(math.log(n))
    half = center ** (2 / 3)
    outside = int(hist[np.abs(ks - center) > half].sum())
    return OmegaStats(
        n=n, mean=mean, variance=variance,
        histogram={int(k): int(c) for k, c in zip(ks, hist) if c},
        band_center=center, band_halfwidth=half,
        outside_fraction=outside / n, omega_sum=total,
    )


# ---------------------------------------------------------------------------
# the tension experiment


def _spf_table(limit: int) -> np.ndarray:
    spf = np.zeros(limit + 1, dtype=np.int64)
    for p in prime_sieve(math.isqrt(limit)).tolist():
        block = spf[p * p::p]
        block[block == 0] = p
    rest = np.flatnonzero(spf == 0)
    spf[rest] = rest
    return spf


def _factor(x: int, spf: np.ndarray) -> dict[int, int]:
    out: dict[int, int] = {}
    while x > 1:
        p = int(spf[x])
        e = 0
        while x % p == 0:
            x //= p
            e += 1
        out[p] = e
    return out


def _max_exponent(p: int, bound: int) -> int:
    a, v = 0, p
    while v <= bound:
        a += 1
        v *= p
    return a


def omega_from_factors(factors: dict[int, int], excluded: frozenset, bound: int) -> int:
    """``sum_p min(v_p, max a with p**a <= bound)`` over allowed primes ``p``."""
    return sum(min(e, _max_exponent(p, bound)) for p, e in factors.items() if p not in excluded)


@dataclass(frozen=True)
class TensionReport:
    n: int
    delta: float
    low_bound: int
    high_bound: int
    sample: int
    seed: int
    mean_pair_sum: float
    mean_p3: float
    gap: float
    violations: int
    excluded_primes: int

    def to_json(self) -> dict:
        return {"n": self.n, "delta": self.delta, "mean_pair_sum": self.mean_pair_sum,
                "mean_p3": self.mean_p3, "gap": self.gap, "violations": self.violations}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _sample_elements(p: Gap, count: int, rng: np.random.Generator) -> np.ndarray:
    vals = np.full(count, p.base, dtype=np.int64)
    for d, L in zip(p.diffs, p.lens):
        vals += d * rng.integers(0, L + 1, size=count, dtype=np.int64)
    return vals


def level_bounds(n: int, delta: float) -> tuple[int, int]:
    """``(floor(sqrt(N_hi)), N_hi)`` with ``N_hi = floor(n**delta)``."""
    high = n if delta == 1 else int(math.floor(n ** delta * (1 + 1e-12)))
    return math.isqrt(high), high


def omega_tension(p1: Gap, p2: Gap, p3: Gap, delta: float = 1.0,
                  sample: int = 10_000, seed: int = 0) -> TensionReport:
    """Compare ``omega_low(x) + omega_low(y)`` on sampled pairs with omega over ``p3``.

    ``n = |P_3|``; the high level is ``n**delta`` and the low level its
    integer square root, so the pairwise sum never exceeds
    ``omega_high(x*y)`` (counted per sample as ``violations``).
    """
    if sample < 1:
        raise InvalidArgument(f"sample must be positive, got {sample}")
    if not 0 < delta <= 1:
        raise InvalidArgument(f"delta must lie in (0, 1], got {delta}")
    for name, p in (("p1", p1), ("p2", p2), ("p3", p3)):
        _require_proper(p)
        if p.value_range[0] < 1:
            raise InvalidArgument(f"{name} has nonpositive elements")
    n = p3.nominal_size
    low, high = level_bounds(n, delta)
    if low < 2:
        raise TooSmall(f"level n^(delta/2) = {low} is below 2")
    table = restricted_primes(p1.diffs + p2.diffs + p3.diffs, sieve_prime_powers(high))
    excluded = table.excluded

    hi_xy = max(p1.value_range[1], p2.value_range[1])
    if hi_xy > 2 * 10**7:
        raise TooLarge(f"elements up to {hi_xy} exceed the factorisation sieve")
    spf = _spf_table(max(hi_xy, 2))
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    xs = _sample_elements(p1, sample, rng)
    ys = _sample_elements(p2, sample, rng)
    pair_sums = np.empty(sample, dtype=np.int64)
    violations = 0
    for t, (x, y) in enumerate(zip(xs.tolist(), ys.tolist())):
        fx, fy = _factor(x, spf), _factor(y, spf)
        s = omega_from_factors(fx, excluded, low) + omega_from_factors(fy, excluded, low)
        fxy = dict(fx)
        for p, e in fy.items():
            fxy[p] = fxy.get(p, 0) + e
        if s > omega_from_factors(fxy, excluded, high):
            violations += 1
        pair_sums[t] = s
    stats3 = omega_stats_over_gap(p3, table)
    mean_pair = float(pair_sums.mean())
    return TensionReport(
        n=n, delta=float(delta), low_bound=low, high_bound=high, sample=sample, seed=seed,
        mean_pair_sum=mean_pair, mean_p3=stats3.mean, gap=mean_pair - stats3.mean,
        violations=violations, excluded_primes=len(excluded),
    )
