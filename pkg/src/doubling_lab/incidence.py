"""Point-line incidences for the multiplicity-elimination argument.

Lines are ``y = s*x + t`` with integer slope ``s`` and intercept ``t``.  The
instance built by :func:`st_instance` uses slopes from a restricted sumset
``B_1 (+)_G' B_1``, intercepts from ``A``, and the point grid ``B x 3A``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ArithmeticOverflow, InvalidArgument, MalformedGraph, TooLarge
from .graphs import BipartiteGraph, PairCertificate, containment_graph_multi, gowers_pair_refine
from .intset import IntSet, iterated_sum_difference

POINT_GUARD = 10**8
_I64 = 2**63


@dataclass(frozen=True)
class IncidenceInstance:
    points: np.ndarray  # (P, 2), lexicographically sorted, distinct
    lines: np.ndarray   # (L, 2) rows (slope, intercept), distinct
    line_multiplicity: int = 0

    @classmethod
    def build(cls, points, lines, line_multiplicity=None) -> "IncidenceInstance":
        pts = np.unique(np.asarray(points, dtype=np.int64).reshape(-1, 2), axis=0)
        lns = np.unique(np.asarray(lines, dtype=np.int64).reshape(-1, 2), axis=0)
        mult = lns.shape[0] if line_multiplicity is None else int(line_multiplicity)
        return cls(pts, lns, mult)

    @property
    def num_points(self) -> int:
        return int(self.points.shape[0])

    @property
    def num_lines(self) -> int:
        return int(self.lines.shape[0])

    def to_json(self) -> str:
        return json.dumps({"points": self.points.tolist(), "lines": self.lines.tolist()},
                          separators=(",", ":"))


def _check_line_eval(lines: np.ndarray, xs: np.ndarray):
    if not lines.shape[0] or not xs.size:
        return
    s = int(np.abs(lines[:, 0]).max())
    t = int(np.abs(lines[:, 1]).max())
    x = int(np.abs(xs).max())
    if s * x + t >= _I64:
        raise ArithmeticOverflow("line evaluation exceeds int64")


def st_instance(b1: IntSet, g: BipartiteGraph, a: IntSet, b: IntSet) -> IncidenceInstance:
    """Lines ``y = (b1[i] + b1[j]) x + a_k`` over edges of ``g``; points ``b x 3a``."""
    if g.left_order != len(b1) or g.right_order != len(b1):
        raise MalformedGraph("pair graph must live on (b1, b1)")
    e = g.edges
    av = a.array
    slopes = np.unique(b1.array[e[:, 0]] + b1.array[e[:, 1]]) if e.shape[0] else np.empty(0, np.int64)
    lines = np.column_stack([np.repeat(slopes, av.size), np.tile(av, slopes.size)])
    mult = g.num_edges * len(a)
    three_a = iterated_sum_difference(a, 3, 0) if len(a) else IntSet()
    count = len(b) * len(three_a)
    if count > POINT_GUARD:
        raise TooLarge(f"{count} points exceeds guard {POINT_GUARD}")
    pts = np.column_stack([np.repeat(b.array, len(three_a)), np.tile(three_a.array, len(b))])
    # both arrays are already sorted and distinct
    return IncidenceInstance(pts.reshape(-1, 2), lines.reshape(-1, 2), mult)


def _point_columns(inst: IncidenceInstance):
    pts = inst.points
    xs, starts = np.unique(pts[:, 0], return_index=True)
    ends = np.r_[starts[1:], pts.shape[0]]
    return xs, starts, ends


def count_incidences(inst: IncidenceInstance) -> int:
    """Exact number of (point, line) incidences, one column of points at a time."""
    if not inst.num_points or not inst.num_lines:
        return 0
    xs, starts, ends = _point_columns(inst)
    _check_line_eval(inst.lines, xs)
    s, t = inst.lines[:, 0], inst.lines[:, 1]
    total = 0
    for x, lo, hi in zip(xs, starts, ends):
        ys = inst.points[lo:hi, 1]
        target = s * x + t
        idx = np.minimum(np.searchsorted(ys, target), ys.size - 1)
        total += int(np.count_nonzero(ys[idx] == target))
    return total


def count_incidences_bruteforce(inst: IncidenceInstance) -> int:
    """Every point against every line; the oracle for :func:`count_incidences`."""
    if not inst.num_points or not inst.num_lines:
        return 0
    _check_line_eval(inst.lines, inst.points[:, 0])
    px, py = inst.points[:, 0], inst.points[:, 1]
    total = 0
    step = max(1, (1 << 22) // inst.num_points)
    for i in range(0, inst.num_lines, step):
        s = inst.lines[i:i + step, 0][:, None]
        t = inst.lines[i:i + step, 1][:, None]
        total += int(np.count_nonzero(py[None, :] == s * px[None, :] + t))
    return total


def st_bound_check(m_points: int, n_lines: int, incidences: int, c: float = 2.5) -> bool:
    """``incidences <= c * ((m n)^(2/3) + m + n)``."""
    if min(m_points, n_lines, incidences) < 0:
        raise InvalidArgument("counts must be nonnegative")
    return incidences <= c * ((m_points * n_lines) ** (2 / 3) + m_points + n_lines)


def st_ratio(m_points: int, n_lines: int, incidences: int) -> float:
    """Measured incidences divided by ``(m n)^(2/3) + m + n``."""
    denom = (m_points * n_lines) ** (2 / 3) + m_points + n_lines
    return incidences / denom if denom else 0.0


@dataclass(frozen=True)
class ContainmentIncidence:
    """The construction that turns a dense ``G^m`` into an incidence problem."""

    b: IntSet
    b1_indices: np.ndarray
    b1: IntSet
    containment: BipartiteGraph
    pair_graph: BipartiteGraph
    certificate: PairCertificate
    instance: IncidenceInstance


def containment_incidence(a: IntSet, b: IntSet, eps=Fraction(1, 4)) -> ContainmentIncidence:
    """Build the incidence instance from ``G^m(a, b.b)``.

    Pair refinement on ``G^m`` gives ``B_1``; ``G'`` keeps the pairs of
    ``B_1`` whose codegree reaches the refinement threshold.
    """
    gm = containment_graph_multi(a, b)
    idx, cert = gowers_pair_refine(gm, eps)
    need = -((-cert.threshold.numerator) // cert.threshold.denominator)
    codeg = gm.codegree_matrix()[np.ix_(idx, idx)]
    pairs = BipartiteGraph.from_adjacency(codeg >= need)
    b1 = b.subset(idx)
    return ContainmentIncidence(b, idx, b1, gm, pairs, cert, st_instance(b1, pairs, a, b))


def line_support_check(li: ContainmentIncidence, a: IntSet) -> tuple[int, int]:
    """Check that every line meets at least ``codegree`` points above ``N(b_i) & N(b_j)``.

    Returns ``(lines_checked, violations)``.  For a pair ``(i, j)`` of ``G'``
    and each ``a_k``, the points ``(x, (b_i + b_j) x + a_k)`` with ``x`` a
    common neighbour are looked up in the instance point set.
    """
    pts = {(int(x), int(y)) for x, y in li.instance.points}
    adj = li.containment.adjacency
    bvals = li.b.array
    checked = violations = 0
    for i, j in li.pair_graph.edges:
        gi, gj = int(li.b1_indices[i]), int(li.b1_indices[j])
        xs = bvals[np.flatnonzero(adj[gi] & adj[gj])].tolist()
        slope = li.b1[int(i)] + li.b1[int(j)]
        for t in a:
            hits = sum(1 for x in xs if (x, slope * x + t) in pts)
            checked += 1
            if hits < len(xs):
                violations += 1
    return checked, violations
