"""Representation counts and additive / multiplicative energy.

Three routes compute the same integer:

* ``naive``: hashed pair enumeration (sort + run-length of all pair values),
* ``convolution``: squares the indicator vector of the set with a real FFT,
  used only when a rigorous rounding bound guarantees every coefficient
  rounds to the exact integer,
* ``energy_bruteforce``: the literal four-fold quadruple count, kept as an
  oracle for the other two.
"""

from __future__ import annotations

import math
from typing import Literal

import numpy as np

from .errors import ArithmeticOverflow, InvalidArgument
from .intset import IntSet, Kind, check_product_range, check_sum_range

Algo = Literal["auto", "naive", "convolution"]

ENERGY_LIMIT = 2**63 - 1
BRUTEFORCE_MAX = 512
# dense convolution is only attempted for spans up to this many slots
CONVOLUTION_MAX_SPAN = 1 << 26
_EPS = np.finfo(np.float64).eps


def _pair_values(u: IntSet, w: IntSet, kind: Kind, rows: slice = slice(None)) -> np.ndarray:
    op = np.add if kind == "add" else np.multiply
    return op.outer(u.array[rows], w.array).ravel()


def _check_kind(kind):
    if kind not in ("add", "mul"):
        raise InvalidArgument(f"unknown kind {kind!r}")


def _merge_counts(vals: np.ndarray, counts: np.ndarray):
    order = np.argsort(vals, kind="stable")
    vals, counts = vals[order], counts[order]
    starts = np.flatnonzero(np.r_[True, vals[1:] != vals[:-1]])
    return vals[starts], np.add.reduceat(counts, starts)


def _rep_arrays(u: IntSet, w: IntSet, kind: Kind):
    _check_kind(kind)
    if not len(u) or not len(w):
        return np.empty(0, np.int64), np.empty(0, np.int64)
    (check_sum_range if kind == "add" else check_product_range)(u, w)
    step = max(1, (1 << 23) // len(w))
    vals_parts, count_parts = [], []
    for i in range(0, len(u), step):
        v, c = np.unique(_pair_values(u, w, kind, slice(i, i + step)), return_counts=True)
        vals_parts.append(v)
        count_parts.append(c.astype(np.int64))
    if len(vals_parts) == 1:
        return vals_parts[0], count_parts[0]
    return _merge_counts(np.concatenate(vals_parts), np.concatenate(count_parts))


def representation_counts(u: IntSet, w: IntSet, kind: Kind = "add") -> dict[int, int]:
    """Map each value ``x`` of ``u o w`` to ``#{(a, b) : a o b = x}``."""
    vals, counts = _rep_arrays(u, w, kind)
    return {int(v): int(c) for v, c in zip(vals, counts)}


def _sum_squares(counts: np.ndarray) -> int:
    total = sum(int(c) * int(c) for c in counts) if counts.size < 64 else int(
        np.dot(counts.astype(object), counts.astype(object)))
    if total > ENERGY_LIMIT:
        raise ArithmeticOverflow(f"energy {total} exceeds 2**63 - 1")
    return total


def _fft_error_bound(n: int, length: int) -> float:
    # Worst-case forward error of an FFT-based convolution of two vectors with
    # l2 norm sqrt(n) each (Percival-style bound, with a 4x safety factor on
    # the twiddle-factor error term).
    m = max(1, math.ceil(math.log2(length)))
    growth = (1 + _EPS) ** (3 * m) * (1 + 4 * math.sqrt(5) * _EPS) ** (3 * m + 1) * (1 + 4 * _EPS) ** (3 * m) - 1
    return 4 * n * growth


def _convolution_counts(u: IntSet) -> np.ndarray:
    span = u.max - u.min + 1
    if span > CONVOLUTION_MAX_SPAN:
        raise InvalidArgument(f"span {span} too large for the dense convolution path")
    length = 1 << (2 * span - 1 - 1).bit_length()
    n = len(u)
    if _fft_error_bound(n, length) >= 0.25:
        raise InvalidArgument("FFT rounding bound too weak for exact convolution at this size")
    ind = np.zeros(length, dtype=np.float64)
    ind[u.array - u.min] = 1.0
    f = np.fft.rfft(ind)
    raw = np.fft.irfft(f * f, n=length)[: 2 * span - 1]
    r = np.rint(raw).astype(np.int64)
    if int(r.sum()) != n * n or float(np.max(np.abs(raw - r))) >= 0.25:
        raise ArithmeticOverflow("convolution lost exactness")
    return r[r > 0]


def _auto_uses_convolution(u: IntSet) -> bool:
    n = len(u)
    span = u.max - u.min
    return span <= 64 * n * n and span < CONVOLUTION_MAX_SPAN and _fft_error_bound(n, 4 * span + 4) < 0.25


def energy(u: IntSet, kind: Kind = "add", algo: Algo = "auto") -> int:
    """Number of quadruples with ``a1 o a2 = a3 o a4``, i.e. ``sum_x r(x)**2``.

    ``auto`` takes the convolution route for additive energy of sets whose
    span is at most ``64 |u|**2``; everything else goes through pair
    enumeration. All routes return the same exact integer.
    """
    _check_kind(kind)
    if algo not in ("auto", "naive", "convolution"):
        raise InvalidArgument(f"unknown algo {algo!r}")
    if algo == "convolution" and kind != "add":
        raise InvalidArgument("convolution energy is only defined for kind='add'")
    if not len(u):
        return 0
    if kind == "add":
        check_sum_range(u, u)
    if algo == "convolution" or (algo == "auto" and kind == "add" and _auto_uses_convolution(u)):
        return _sum_squares(_convolution_counts(u))
    return _sum_squares(_rep_arrays(u, u, kind)[1])


def energy_bruteforce(u: IntSet, kind: Kind = "add") -> int:
    """Count quadruples directly; guarded at ``|u| <= 512``."""
    _check_kind(kind)
    n = len(u)
    if n > BRUTEFORCE_MAX:
        raise InvalidArgument(f"brute-force energy limited to |u| <= {BRUTEFORCE_MAX}, got {n}")
    if kind == "add":
        check_sum_range(u, u)
    else:
        check_product_range(u, u)
    a = u.array
    op = np.add if kind == "add" else np.multiply
    # right-hand side a3 o a4 for every ordered pair (a3, a4)
    rhs = op.outer(a, a)
    total = 0
    for a1 in a:
        lhs = op(a1, a)  # a1 o a2 over every a2
        total += int(np.count_nonzero(lhs[:, None, None] == rhs[None, :, :]))
    return total
