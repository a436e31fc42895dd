"""Generalized arithmetic progressions.

A progression ``Gap(base, diffs, lens)`` is the set of values
``base + sum(d_i * x_i)`` with ``0 <= x_i <= lens[i]``; side ``i`` therefore
contributes ``lens[i] + 1`` points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .errors import ArithmeticOverflow, InvalidArgument, TooLarge
from .intset import MAGNITUDE_BOUND, IntSet

ENUMERATION_GUARD = 10**8


@dataclass(frozen=True)
class Gap:
    base: int
    diffs: tuple
    lens: tuple

    def __post_init__(self):
        object.__setattr__(self, "base", int(self.base))
        object.__setattr__(self, "diffs", tuple(int(d) for d in self.diffs))
        object.__setattr__(self, "lens", tuple(int(L) for L in self.lens))
        if not self.diffs:
            raise InvalidArgument("a GAP needs rank >= 1")
        if len(self.diffs) != len(self.lens):
            raise InvalidArgument("diffs and lens must have equal length")
        if any(d == 0 for d in self.diffs):
            raise InvalidArgument(f"differences must be nonzero: {self.diffs}")
        if any(L < 0 for L in self.lens):
            raise InvalidArgument(f"side lengths must be nonnegative: {self.lens}")

    @classmethod
    def interval(cls, lo: int, hi: int) -> "Gap":
        """``[lo..hi]`` as a rank-1 progression with difference 1."""
        if hi < lo:
            raise InvalidArgument(f"empty interval [{lo}, {hi}]")
        return cls(lo, (1,), (hi - lo,))

    @property
    def rank(self) -> int:
        return len(self.diffs)

    @property
    def volume(self) -> int:
        return math.prod(self.lens)

    @property
    def nominal_size(self) -> int:
        return math.prod(L + 1 for L in self.lens)

    @property
    def value_range(self) -> tuple[int, int]:
        lo = self.base + sum(min(0, d * L) for d, L in zip(self.diffs, self.lens))
        hi = self.base + sum(max(0, d * L) for d, L in zip(self.diffs, self.lens))
        return lo, hi

    def __str__(self) -> str:
        return format_gap(self)


def parse_gap(text: str) -> Gap:
    """Parse ``"base;d1:L1,d2:L2,..."`` (e.g. ``"0;1:2,5:2"``)."""
    if ";" not in text:
        raise InvalidArgument(f"GAP text {text!r} lacks ';' between base and sides")
    base_tok, sides_tok = text.split(";", 1)
    try:
        base = int(base_tok.strip())
    except ValueError:
        raise InvalidArgument(f"bad GAP base token {base_tok!r}") from None
    diffs, lens = [], []
    for tok in sides_tok.split(","):
        parts = tok.split(":")
        if len(parts) != 2:
            raise InvalidArgument(f"bad GAP side token {tok!r}; expected 'd:L'")
        try:
            d, L = int(parts[0].strip()), int(parts[1].strip())
        except ValueError:
            raise InvalidArgument(f"bad GAP side token {tok!r}; expected integers") from None
        if d == 0 or L < 0:
            raise InvalidArgument(f"bad GAP side token {tok!r}; need d != 0 and L >= 0")
        diffs.append(d)
        lens.append(L)
    return Gap(base, tuple(diffs), tuple(lens))


def format_gap(p: Gap) -> str:
    return f"{p.base};" + ",".join(f"{d}:{L}" for d, L in zip(p.diffs, p.lens))


def _guard(p: Gap):
    if p.nominal_size > ENUMERATION_GUARD:
        raise TooLarge(f"GAP nominal size {p.nominal_size} exceeds enumeration guard {ENUMERATION_GUARD}")
    lo, hi = p.value_range
    if lo <= -MAGNITUDE_BOUND or hi >= MAGNITUDE_BOUND:
        raise ArithmeticOverflow(f"GAP {format_gap(p)} has elements beyond magnitude 2**62")


def gap_grid(p: Gap) -> np.ndarray:
    """All ``base + sum d_i x_i`` as an array of shape ``(L_1+1, ..., L_k+1)``.

    Duplicates are kept; index ``(x_1, ..., x_k)`` holds the value at that
    coordinate tuple.
    """
    _guard(p)
    grid = np.full((1,) * p.rank, p.base, dtype=np.int64)
    for i, (d, L) in enumerate(zip(p.diffs, p.lens)):
        shape = [1] * p.rank
        shape[i] = L + 1
        grid = grid + (d * np.arange(L + 1, dtype=np.int64)).reshape(shape)
    return grid


def gap_elements(p: Gap) -> IntSet:
    return IntSet(gap_grid(p))


def is_proper(p: Gap) -> bool:
    """True iff all ``prod(L_i + 1)`` coordinate tuples give distinct values.

    Ranks 1 and 2 are decided arithmetically; higher ranks enumerate, with
    the answer cached per progression.
    """
    if p.rank <= 2:
        lo, hi = p.value_range
        if lo <= -MAGNITUDE_BOUND or hi >= MAGNITUDE_BOUND:
            raise ArithmeticOverflow(f"GAP {format_gap(p)} has elements beyond magnitude 2**62")
        return p.rank == 1 or _rank2_proper(p)
    return _proper_by_enumeration(p)


@lru_cache(maxsize=256)
def _proper_by_enumeration(p: Gap) -> bool:
    return len(gap_elements(p)) == p.nominal_size


def longest_side(p: Gap) -> tuple[int, int, int]:
    """``(index, points, diff)`` of the longest side, 1-based; ties go to the first."""
    best = max(range(p.rank), key=lambda i: (p.lens[i], -i))
    return best + 1, p.lens[best] + 1, p.diffs[best]


def _member_rank1(t: int, d: int, L: int) -> bool:
    if t % d:
        return False
    x = t // d
    return 0 <= x <= L


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def _member_rank2(t: int, d1: int, d2: int, L1: int, L2: int) -> bool:
    g = math.gcd(d1, d2)
    if t % g:
        return False
    t, e1, e2 = t // g, d1 // g, d2 // g
    m = abs(e2)
    # x1 must be congruent to t * e1^{-1} modulo |e2|
    x1_0 = (t * pow(e1, -1, m)) % m if m > 1 else 0
    if x1_0 > L1:
        return False
    # x1 = x1_0 + m*k, then x2 = c - s*k with s != 0
    c = (t - e1 * x1_0) // e2
    s = e1 * (1 if e2 > 0 else -1)
    k_lo, k_hi = 0, (L1 - x1_0) // m
    # need 0 <= c - s*k <= L2
    if s > 0:
        k_lo = max(k_lo, _ceil_div(c - L2, s))
        k_hi = min(k_hi, c // s)
    else:
        k_lo = max(k_lo, _ceil_div(-c, -s))
        k_hi = min(k_hi, (L2 - c) // (-s))
    return k_lo <= k_hi


def membership(p: Gap, x: int) -> bool:
    """Whether ``x`` is an element of ``p``.

    Ranks 1 and 2 are decided arithmetically (gcd and a modular inverse);
    higher ranks fall back to enumeration under the usual guard.
    """
    t = int(x) - p.base
    if p.rank == 1:
        return _member_rank1(t, p.diffs[0], p.lens[0])
    if p.rank == 2:
        return _member_rank2(t, p.diffs[0], p.diffs[1], p.lens[0], p.lens[1])
    return int(x) in gap_elements(p)


def cover_with_ap(u: IntSet) -> Gap:
    """Shortest arithmetic progression containing ``u``."""
    if not len(u):
        raise InvalidArgument("cannot cover the empty set")
    if len(u) == 1:
        return Gap(u.min, (1,), (0,))
    d = int(np.gcd.reduce(np.diff(u.array)))
    return Gap(u.min, (d,), ((u.max - u.min) // d,))


def _candidate_diffs(u: IntSet, budget: int) -> list[int]:
    vals = u.tolist()
    seen = set()
    for i, a in enumerate(vals):
        for b in vals[i + 1:]:
            seen.add(b - a)
    return sorted(seen)[:budget]


def _box(lo: int, d1: int, d2: int, coords) -> Gap:
    min1 = min(c[0] for c in coords)
    min2 = min(c[1] for c in coords)
    L1 = max(c[0] for c in coords) - min1
    L2 = max(c[1] for c in coords) - min2
    return Gap(lo + d1 * min1 + d2 * min2, (d1, d2), (L1, L2))


def _cover_for_pair(vals: list[int], d1: int, d2: int) -> Optional[Gap]:
    lo = vals[0]
    g = math.gcd(d1, d2)
    if any((v - lo) % g for v in vals):
        return None
    e1, m = d1 // g, d2 // g  # m > 0
    inv = pow(e1, -1, m) if m > 1 else 0
    coords = []
    for v in vals:
        w = (v - lo) // g
        x1 = (w * inv) % m if m > 1 else 0
        coords.append((x1, (w - e1 * x1) // m))
    options = [_box(lo, d1, d2, coords)]
    # x1 lives on a cycle of length m; cutting at the widest gap minimises its span
    residues = sorted({c[0] for c in coords})
    if len(residues) > 1:
        gaps = [(residues[(i + 1) % len(residues)] - residues[i]) % m for i in range(len(residues))]
        cut = max(range(len(residues)), key=lambda i: (gaps[i], -i))
        start = residues[(cut + 1) % len(residues)]
        if start:
            shifted = [(x1, x2) if x1 >= start else (x1 + m, x2 - e1) for x1, x2 in coords]
            options.append(_box(lo, d1, d2, shifted))
    p = min(options, key=lambda q: q.nominal_size)
    vlo, vhi = p.value_range
    if vlo <= -MAGNITUDE_BOUND or vhi >= MAGNITUDE_BOUND:
        return None
    return p


def _rank2_proper(p: Gap) -> bool:
    # two box points collide iff they differ by a nonzero multiple of (d2/g, -d1/g)
    g = math.gcd(*p.diffs)
    return p.lens[0] < abs(p.diffs[1] // g) or p.lens[1] < abs(p.diffs[0] // g)


def cover_with_gap_rank2(u: IntSet, budget: int) -> Optional[Gap]:
    """Best-effort proper rank-2 GAP containing ``u``, or ``None``.

    Difference pairs are drawn from the ``budget`` smallest positive pairwise
    differences of ``u``.  For each ordered pair the first coordinate is
    reduced modulo ``d2/gcd`` (cut at its widest cyclic gap), which always
    yields a proper progression.  The smallest nominal size wins; ties keep
    the earliest pair.
    """
    if budget <= 0:
        raise InvalidArgument(f"budget must be positive, got {budget}")
    if len(u) < 2:
        raise InvalidArgument("rank-2 cover needs at least two elements")
    vals = u.tolist()
    cands = _candidate_diffs(u, budget)
    best = None
    for d1 in cands:
        for d2 in cands:
            if d2 == d1:
                continue
            p = _cover_for_pair(vals, d1, d2)
            if p is None or not _rank2_proper(p):
                continue
            if best is None or p.nominal_size < best.nominal_size:
                best = p
    return best
