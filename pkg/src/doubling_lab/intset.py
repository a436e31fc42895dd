"""Exact calculus on finite sets of integers.

Every set is stored as a sorted, deduplicated, read-only ``int64`` array.
Elements are bounded by ``|x| < 2**62``; all binary operations check their
extreme results with Python integers before touching numpy, so overflow is
reported instead of wrapping around.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Literal

import numpy as np

from .errors import ArithmeticOverflow, InvalidArgument, MalformedGraph

MAGNITUDE_BOUND = 2**62

Kind = Literal["add", "mul"]


class IntSet:
    """Immutable finite set of signed integers with magnitude below 2**62."""

    __slots__ = ("_a",)

    def __init__(self, elements: Iterable[int] | np.ndarray = ()):
        if isinstance(elements, IntSet):
            self._a = elements._a
            return
        if isinstance(elements, np.ndarray) and elements.dtype.kind == "i":
            arr = np.unique(elements.astype(np.int64, copy=False).ravel())
            if arr.size and (arr[0] <= -MAGNITUDE_BOUND or arr[-1] >= MAGNITUDE_BOUND):
                bad = int(arr[0]) if arr[0] <= -MAGNITUDE_BOUND else int(arr[-1])
                raise ArithmeticOverflow(f"element {bad} has magnitude >= 2**62")
        else:
            vals = sorted({int(x) for x in elements})
            for x in (vals[:1] + vals[-1:]):
                if abs(x) >= MAGNITUDE_BOUND:
                    raise ArithmeticOverflow(f"element {x} has magnitude >= 2**62")
            arr = np.array(vals, dtype=np.int64)
        arr.setflags(write=False)
        self._a = arr

    @classmethod
    def _trusted(cls, arr: np.ndarray) -> "IntSet":
        # arr already sorted, unique, int64 and in range
        obj = cls.__new__(cls)
        arr.setflags(write=False)
        obj._a = arr
        return obj

    @classmethod
    def interval(cls, lo: int, hi: int) -> "IntSet":
        """The integers ``lo, lo+1, ..., hi`` (inclusive)."""
        if hi < lo:
            return cls()
        if lo <= -MAGNITUDE_BOUND or hi >= MAGNITUDE_BOUND:
            raise ArithmeticOverflow(f"interval [{lo}, {hi}] exceeds 2**62")
        return cls._trusted(np.arange(lo, hi + 1, dtype=np.int64))

    @property
    def array(self) -> np.ndarray:
        return self._a

    def tolist(self) -> list[int]:
        return [int(x) for x in self._a]

    @property
    def min(self) -> int:
        return int(self._a[0])

    @property
    def max(self) -> int:
        return int(self._a[-1])

    def __len__(self) -> int:
        return int(self._a.size)

    def __iter__(self):
        return (int(x) for x in self._a)

    def __getitem__(self, i):
        return int(self._a[i])

    def __contains__(self, x) -> bool:
        x = int(x)
        if not self._a.size or abs(x) >= MAGNITUDE_BOUND:
            return False
        i = int(np.searchsorted(self._a, x))
        return i < self._a.size and int(self._a[i]) == x

    def contains_array(self, xs: np.ndarray) -> np.ndarray:
        """Vectorised membership for an int64 array."""
        if not self._a.size:
            return np.zeros(np.shape(xs), dtype=bool)
        idx = np.searchsorted(self._a, xs)
        idx = np.minimum(idx, self._a.size - 1)
        return self._a[idx] == xs

    def index(self, x: int) -> int:
        i = int(np.searchsorted(self._a, int(x)))
        if i >= self._a.size or int(self._a[i]) != int(x):
            raise KeyError(x)
        return i

    def __eq__(self, other) -> bool:
        if isinstance(other, IntSet):
            return np.array_equal(self._a, other._a)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._a.tobytes())

    def __repr__(self) -> str:
        if len(self) <= 12:
            return f"IntSet({self.tolist()})"
        head = ", ".join(str(x) for x in self._a[:5])
        return f"IntSet([{head}, ...] size={len(self)})"

    def subset(self, indices) -> "IntSet":
        idx = np.unique(np.asarray(indices, dtype=np.int64))
        return IntSet._trusted(self._a[idx].copy())

    def negate(self) -> "IntSet":
        return IntSet._trusted((-self._a[::-1]).copy())


@dataclass(frozen=True)
class GrowthParams:
    c1: float
    c2: float

    def __post_init__(self):
        if not (self.c1 > 0 and self.c2 > 0):
            raise InvalidArgument(f"growth constants must be positive, got c1={self.c1}, c2={self.c2}")


def _check_range(lo: int, hi: int, what: str, pair_lo, pair_hi):
    if lo <= -MAGNITUDE_BOUND:
        raise ArithmeticOverflow(f"{what} of pair {pair_lo} = {lo} exceeds magnitude 2**62")
    if hi >= MAGNITUDE_BOUND:
        raise ArithmeticOverflow(f"{what} of pair {pair_hi} = {hi} exceeds magnitude 2**62")


def check_sum_range(u: IntSet, w: IntSet) -> None:
    """Raise if some pairwise sum of ``u`` and ``w`` leaves the admissible range."""
    if not len(u) or not len(w):
        return
    _check_range(u.min + w.min, u.max + w.max, "sum",
                 (u.min, w.min), (u.max, w.max))


def check_product_range(u: IntSet, w: IntSet) -> None:
    if not len(u) or not len(w):
        return
    corners = [(a * b, (a, b)) for a in (u.min, u.max) for b in (w.min, w.max)]
    lo = min(corners)
    hi = max(corners)
    _check_range(lo[0], hi[0], "product", lo[1], hi[1])


def _outer_unique(x: np.ndarray, y: np.ndarray, op) -> np.ndarray:
    # row blocks keep peak memory near 2**24 entries
    if x.size * y.size <= 1 << 24:
        return np.unique(op.outer(x, y))
    step = max(1, (1 << 24) // max(1, y.size))
    parts = [np.unique(op.outer(x[i:i + step], y)) for i in range(0, x.size, step)]
    return np.unique(np.concatenate(parts))


def sumset(u: IntSet, w: IntSet) -> IntSet:
    """``{a + b : a in u, b in w}``."""
    if not len(u) or not len(w):
        return IntSet()
    check_sum_range(u, w)
    return IntSet._trusted(_outer_unique(u.array, w.array, np.add))


def difference_set(u: IntSet, w: IntSet) -> IntSet:
    return sumset(u, w.negate())


def product_set(u: IntSet, w: IntSet) -> IntSet:
    """``{a * b : a in u, b in w}``; zero is allowed as an element."""
    if not len(u) or not len(w):
        return IntSet()
    check_product_range(u, w)
    return IntSet._trusted(_outer_unique(u.array, w.array, np.multiply))


def iterated_sum_difference(u: IntSet, m: int, k: int) -> IntSet:
    """The set ``mA - kA`` built by repeated sumsets.

    ``m`` copies of ``u`` are added and ``k`` copies subtracted; ``m + k`` must
    be at least one.
    """
    if m < 0 or k < 0:
        raise InvalidArgument(f"m and k must be nonnegative, got m={m}, k={k}")
    if m + k == 0:
        raise InvalidArgument("iterated_sum_difference needs m + k >= 1")
    if not len(u):
        return IntSet()
    neg = u.negate()
    acc: IntSet | None = None
    for part in [u] * m + [neg] * k:
        acc = part if acc is None else sumset(acc, part)
    return acc


def restricted_sumset(u: IntSet, w: IntSet, g) -> IntSet:
    """Sums ``u[i] + w[j]`` taken only over the edges ``(i, j)`` of ``g``."""
    if g.left_order != len(u) or g.right_order != len(w):
        raise MalformedGraph(
            f"graph orders ({g.left_order}, {g.right_order}) do not match set sizes ({len(u)}, {len(w)})")
    e = g.edges
    if not e.shape[0]:
        return IntSet()
    if e.min() < 0 or e[:, 0].max() >= len(u) or e[:, 1].max() >= len(w):
        raise MalformedGraph("edge index out of range")
    check_sum_range(u, w)
    return IntSet._trusted(np.unique(u.array[e[:, 0]] + w.array[e[:, 1]]))


def doubling_ratio(u: IntSet, kind: Kind = "add") -> Fraction:
    """``|u o u| / |u|`` as an exact fraction."""
    if not len(u):
        raise InvalidArgument("doubling ratio of the empty set is undefined")
    if kind == "add":
        return Fraction(len(sumset(u, u)), len(u))
    if kind == "mul":
        if 0 in u:
            raise InvalidArgument("multiplicative doubling is undefined when 0 is in the set")
        return Fraction(len(product_set(u, u)), len(u))
    raise InvalidArgument(f"unknown kind {kind!r}")


def check_polynomial_growth(b: IntSet, params: GrowthParams) -> bool:
    """True iff every element satisfies ``|x| < c1 * |b|**c2``."""
    if not len(b):
        raise InvalidArgument("polynomial growth check needs a nonempty set")
    biggest = max(abs(b.min), abs(b.max))
    return biggest < params.c1 * len(b) ** params.c2


def load_set(path) -> IntSet:
    """Read the set file format: one integer per line, ``#`` lines ignored."""
    vals = []
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InvalidArgument(f"cannot read set file {path}: {exc.strerror}") from None
    for lineno, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        try:
            vals.append(int(s))
        except ValueError:
            raise InvalidArgument(f"{path}:{lineno}: not an integer: {s!r}") from None
    return IntSet(vals)


def dump_set(s: IntSet, path) -> None:
    text = "".join(f"{x}\n" for x in s)
    Path(path).write_text(text, encoding="utf-8", newline="\n")
