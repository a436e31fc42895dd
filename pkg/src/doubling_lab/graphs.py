"""Containment graphs and the dense-graph refinement steps.

Vertices are indices into sorted :class:`IntSet` instances.  Every threshold
is an exact :class:`~fractions.Fraction`; inequalities involving square
roots are decided by squaring, so no certificate depends on floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Optional, Union

import numpy as np

from .errors import (
    CertificateError,
    GraphNotDenseEnough,
    InvalidArgument,
    MalformedGraph,
    PipelineFailed,
    RefinementFailed,
)
from .intset import IntSet, check_product_range, doubling_ratio, restricted_sumset, sumset

EXHAUSTIVE_LIMIT = 512
GREEDY_CANDIDATES = 32


class BipartiteGraph:
    """Immutable bipartite graph on ``range(left_order) x range(right_order)``."""

    def __init__(self, left_order: int, right_order: int, edges=()):
        if left_order < 0 or right_order < 0:
            raise MalformedGraph("vertex class orders must be nonnegative")
        arr = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if arr.shape[0]:
            if arr.min() < 0 or arr[:, 0].max() >= left_order or arr[:, 1].max() >= right_order:
                raise MalformedGraph(f"edge index out of range for orders ({left_order}, {right_order})")
            arr = np.unique(arr, axis=0)
        arr.setflags(write=False)
        self.left_order = int(left_order)
        self.right_order = int(right_order)
        self._edges = arr

    @classmethod
    def from_adjacency(cls, adj: np.ndarray) -> "BipartiteGraph":
        adj = np.asarray(adj, dtype=bool)
        g = cls(adj.shape[0], adj.shape[1], np.argwhere(adj))
        return g

    @classmethod
    def complete(cls, left_order: int, right_order: int) -> "BipartiteGraph":
        return cls.from_adjacency(np.ones((left_order, right_order), dtype=bool))

    @property
    def edges(self) -> np.ndarray:
        """``(E, 2)`` array of ``(i, j)`` pairs in lexicographic order."""
        return self._edges

    @property
    def num_edges(self) -> int:
        return int(self._edges.shape[0])

    @property
    def density(self) -> Fraction:
        total = self.left_order * self.right_order
        return Fraction(self.num_edges, total) if total else Fraction(0)

    @cached_property
    def adjacency(self) -> np.ndarray:
        adj = np.zeros((self.left_order, self.right_order), dtype=bool)
        adj[self._edges[:, 0], self._edges[:, 1]] = True
        adj.setflags(write=False)
        return adj

    @cached_property
    def left_degrees(self) -> np.ndarray:
        return np.bincount(self._edges[:, 0], minlength=self.left_order).astype(np.int64)

    @cached_property
    def right_degrees(self) -> np.ndarray:
        return np.bincount(self._edges[:, 1], minlength=self.right_order).astype(np.int64)

    def neighbors(self, i: int) -> np.ndarray:
        return np.flatnonzero(self.adjacency[i])

    def transpose(self) -> "BipartiteGraph":
        return BipartiteGraph(self.right_order, self.left_order, self._edges[:, ::-1])

    def restrict(self, left=None, right=None) -> "BipartiteGraph":
        """Keep only edges whose endpoints lie in the given vertex subsets.

        Vertex numbering and class orders are unchanged.
        """
        keep = np.ones(self.num_edges, dtype=bool)
        if left is not None:
            mask = np.zeros(self.left_order, dtype=bool)
            mask[np.asarray(left, dtype=np.int64)] = True
            keep &= mask[self._edges[:, 0]]
        if right is not None:
            mask = np.zeros(self.right_order, dtype=bool)
            mask[np.asarray(right, dtype=np.int64)] = True
            keep &= mask[self._edges[:, 1]]
        return BipartiteGraph(self.left_order, self.right_order, self._edges[keep])

    def induced(self, left, right) -> "BipartiteGraph":
        """Subgraph on ``left x right`` renumbered to ``0..len-1``."""
        left = np.asarray(left, dtype=np.int64)
        right = np.asarray(right, dtype=np.int64)
        sub = self.adjacency[np.ix_(left, right)]
        return BipartiteGraph.from_adjacency(sub)

    def codegree_matrix(self) -> np.ndarray:
        """``C[i, j] = |N(i) & N(j)|`` over the left class."""
        a = self.adjacency.astype(np.int32)
        return a @ a.T

    def __eq__(self, other):
        if not isinstance(other, BipartiteGraph):
            return NotImplemented
        return (self.left_order, self.right_order) == (other.left_order, other.right_order) and \
            np.array_equal(self._edges, other._edges)

    def __repr__(self):
        return f"BipartiteGraph({self.left_order}x{self.right_order}, edges={self.num_edges})"


def containment_graph_multi(a: IntSet, b: IntSet) -> BipartiteGraph:
    """Edge ``(i, j)`` iff ``b[i] <= b[j]`` and ``b[i] * b[j]`` lies in ``a``."""
    n = len(b)
    if not n or not len(a):
        return BipartiteGraph(n, n)
    check_product_range(b, b)
    prod = np.multiply.outer(b.array, b.array)
    mask = np.triu(a.contains_array(prod))
    return BipartiteGraph(n, n, np.argwhere(mask))


def deduplicate(gm: BipartiteGraph, a: IntSet, b: IntSet) -> BipartiteGraph:
    """Keep, for every product value, only its lexicographically first edge."""
    e = gm.edges
    if not e.shape[0]:
        return gm
    prods = b.array[e[:, 0]] * b.array[e[:, 1]]
    # edges are sorted lexicographically, so return_index picks the first pair
    _, first = np.unique(prods, return_index=True)
    return BipartiteGraph(gm.left_order, gm.right_order, e[np.sort(first)])


def codegree(g: BipartiteGraph, i: int, j: int) -> int:
    if not (0 <= i < g.left_order and 0 <= j < g.left_order):
        raise InvalidArgument(f"left indices ({i}, {j}) out of range for order {g.left_order}")
    adj = g.adjacency
    return int(np.count_nonzero(adj[i] & adj[j]))


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


def _ceil(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def le_sqrt_times(x, eps: Fraction, scale) -> bool:
    """Exact test of ``x <= sqrt(eps) * scale`` for ``scale >= 0``."""
    x = Fraction(x)
    if x <= 0:
        return True
    return x * x <= eps * Fraction(scale) ** 2


# ---------------------------------------------------------------------------
# pair refinement


@dataclass(frozen=True)
class PairCertificate:
    alpha: Fraction
    eps: Fraction
    n: int
    m: int
    threshold: Fraction
    size_floor: Fraction
    subset: tuple
    bad_pairs: int

    @property
    def total_pairs(self) -> int:
        return len(self.subset) ** 2

    @property
    def bad_fraction(self) -> Fraction:
        return Fraction(self.bad_pairs, self.total_pairs) if self.subset else Fraction(1)

    def verify(self, g: BipartiteGraph) -> bool:
        """Recount every ordered pair by intersecting neighbour sets."""
        nbrs = {i: set(g.neighbors(i).tolist()) for i in self.subset}
        bad = sum(1 for u in self.subset for v in self.subset
                  if len(nbrs[u] & nbrs[v]) < self.threshold)
        return (
            bad == self.bad_pairs
            and len(self.subset) >= self.size_floor
            and bad <= self.eps * len(self.subset) ** 2
            and self.alpha == g.density
            and self.threshold == self.eps * self.alpha ** 2 * g.right_order / 2
        )


def _prune(bad: np.ndarray, cand: np.ndarray, floor_size: int, eps: Fraction) -> Optional[tuple]:
    """Greedy deletion of the vertex in most bad pairs until the fraction is small."""
    sub = bad[np.ix_(cand, cand)]
    alive = np.ones(cand.size, dtype=bool)
    part = sub.sum(axis=0) + sub.sum(axis=1) - np.diag(sub)
    total = int(sub.sum())
    size = cand.size
    while total > eps * size * size:
        if size - 1 < floor_size:
            return None
        worst = int(np.argmax(np.where(alive, part, -1)))
        total -= int(part[worst])
        alive[worst] = False
        part = part - sub[worst] - sub[:, worst]
        size -= 1
    return cand[alive], total


def gowers_pair_refine(g: BipartiteGraph, eps) -> tuple[np.ndarray, PairCertificate]:
    """Find a left subset in which most ordered pairs share many neighbours.

    With ``alpha = density(g)``, ``n = left_order`` and ``m = right_order``,
    the returned ``S`` satisfies ``|S| >= alpha*n/2`` and at most
    ``eps*|S|**2`` ordered pairs of ``S x S`` (diagonal included) have
    codegree below ``eps * alpha**2 * m / 2``.  Codegrees never exceed ``m``,
    which is why the threshold scales with the right class.

    Candidates are the neighbourhoods ``N(w)`` of right vertices in
    decreasing degree order, each greedily pruned.  The certificate is
    rechecked by direct counting before it is returned.
    """
    eps = _frac(eps)
    if not 0 < eps < 1:
        raise InvalidArgument(f"eps must lie in (0, 1), got {eps}")
    alpha = g.density
    if alpha <= 0:
        raise InvalidArgument("pair refinement needs a graph with positive density")
    n, m = g.left_order, g.right_order
    threshold = eps * alpha * alpha * m / 2
    size_floor = alpha * n / 2
    floor_size = _ceil(size_floor)
    need = _ceil(threshold)
    bad = g.codegree_matrix() < need

    rdeg = g.right_degrees
    order = sorted((w for w in range(g.right_order) if rdeg[w] >= max(1, floor_size)),
                   key=lambda w: (-int(rdeg[w]), w))
    adj = g.adjacency
    candidates = [np.flatnonzero(adj[:, w]) for w in order]
    passes = [candidates[:GREEDY_CANDIDATES]]
    if n <= EXHAUSTIVE_LIMIT:
        passes.append(candidates[GREEDY_CANDIDATES:] + [np.flatnonzero(g.left_degrees > 0)])
    for batch in passes:
        for cand in batch:
            if cand.size < floor_size:
                continue
            found = _prune(bad, cand, floor_size, eps)
            if found is None:
                continue
            subset, bad_pairs = found
            cert = PairCertificate(alpha, eps, n, m, threshold, size_floor,
                                   tuple(int(i) for i in subset), int(bad_pairs))
            if not cert.verify(g):
                raise CertificateError("pair-refinement certificate failed its recheck")
            return subset, cert
    raise RefinementFailed(
        f"no subset found for eps={eps}, alpha={alpha}; an averaging argument guarantees one, "
        "so the input violates a precondition or the search is broken")


# ---------------------------------------------------------------------------
# dense-graph sumset extraction


@dataclass(frozen=True)
class BSGCertificate:
    eps: Fraction
    indices: tuple
    size_u: int
    size_kept: int
    sumset_size: int
    restricted_size: int

    @property
    def size_ok(self) -> bool:
        # |u'| >= (1 - sqrt(eps)) |u|
        return le_sqrt_times(self.size_u - self.size_kept, self.eps, self.size_u)

    @property
    def sumset_ok(self) -> bool:
        # |u'+u'| (1 - 2 sqrt(eps)) |u| <= |u (+)_g w|^2
        lhs = self.sumset_size * self.size_u
        return le_sqrt_times(lhs - self.restricted_size ** 2, self.eps, 2 * lhs)


def dense_bsg_extract(g: BipartiteGraph, u: IntSet, w: IntSet) -> tuple[IntSet, BSGCertificate]:
    """Keep the left vertices of degree at least ``(1 - sqrt(eps)) |w|``.

    ``eps = 1 - density(g)`` must be below 1/4.  The size bound always
    holds and is enforced.  The sumset bound is enforced when ``|u| == |w|``;
    for unequal classes it can genuinely fail, so it is only reported through
    ``cert.sumset_ok``.
    """
    if g.left_order != len(u) or g.right_order != len(w):
        raise MalformedGraph("graph orders do not match the vertex sets")
    if not len(u) or not len(w):
        raise InvalidArgument("dense BSG needs nonempty vertex classes")
    eps = 1 - g.density
    if eps >= Fraction(1, 4):
        raise GraphNotDenseEnough(f"missing-edge fraction {eps} is not below 1/4")
    m = len(w)
    deg = g.left_degrees
    keep = [i for i in range(len(u)) if le_sqrt_times(m - int(deg[i]), eps, m)]
    kept = u.subset(keep)
    cert = BSGCertificate(
        eps=eps,
        indices=tuple(keep),
        size_u=len(u),
        size_kept=len(kept),
        sumset_size=len(sumset(kept, kept)),
        restricted_size=len(restricted_sumset(u, w, g)),
    )
    if not cert.size_ok or (m == len(u) and not cert.sumset_ok):
        raise CertificateError(f"dense BSG bounds failed: {cert}")
    return kept, cert


# ---------------------------------------------------------------------------
# small-doubling pipeline


@dataclass(frozen=True)
class Stage:
    name: str
    left: tuple
    right: tuple
    density: Fraction
    threshold: Optional[Fraction] = None
    bad_pair_fraction: Optional[Fraction] = None
    passed: bool = True

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "size_left": len(self.left),
            "size_right": len(self.right),
            "density": float(self.density),
            "threshold": None if self.threshold is None else float(self.threshold),
            "bad_pair_fraction": None if self.bad_pair_fraction is None else float(self.bad_pair_fraction),
            "passed": self.passed,
        }


@dataclass(frozen=True)
class Certificate:
    claim: str
    lhs: Fraction
    rhs: Fraction
    holds: bool

    def to_json(self) -> dict:
        return {"claim": self.claim, "lhs": float(self.lhs), "rhs": float(self.rhs), "holds": self.holds}


@dataclass(frozen=True)
class PipelineResult:
    n: int
    alpha: Fraction
    eps: Fraction
    stages: tuple
    final_v: IntSet
    final_w: IntSet
    doubling_v: Fraction
    doubling_w: Fraction
    restricted_edge_count: int
    certificates: tuple
    v_indices: tuple = field(default=(), repr=False)
    w_indices: tuple = field(default=(), repr=False)

    def __post_init__(self):
        failed = [c.claim for c in self.certificates if not c.holds]
        if failed:
            raise CertificateError(f"pipeline certificates failed: {failed}")

    def stage(self, name: str) -> Stage:
        for s in self.stages:
            if s.name == name:
                return s
        raise KeyError(name)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "alpha": float(self.alpha),
            "eps": float(self.eps),
            "stages": [s.to_json() for s in self.stages],
            "size_v": len(self.final_v),
            "size_w": len(self.final_w),
            "doubling_v": str(self.doubling_v),
            "doubling_w": str(self.doubling_w),
            "restricted_edge_count": self.restricted_edge_count,
            "certificates": [c.to_json() for c in self.certificates],
        }


def _cert(claim: str, lhs, rhs, holds: Optional[bool] = None) -> Certificate:
    lhs, rhs = Fraction(lhs), Fraction(rhs)
    return Certificate(claim, lhs, rhs, lhs >= rhs if holds is None else holds)


def _good_pair_graph(g: BipartiteGraph, subset: np.ndarray, threshold: Fraction) -> BipartiteGraph:
    """Pairs of ``subset`` whose codegree in ``g`` reaches ``threshold``, renumbered."""
    c = g.codegree_matrix()[np.ix_(subset, subset)]
    return BipartiteGraph.from_adjacency(c >= _ceil(threshold))


def auto_epsilon(alpha: Fraction) -> Fraction:
    """``max(alpha**8 / 2**30, 1e-6)``; the floor keeps thresholds nondegenerate at small n."""
    return max(Fraction(alpha) ** 8 / 2**30, Fraction(1, 10**6))


def small_doubling_pipeline(a: IntSet, b: IntSet,
                            eps_policy: Union[str, float, Fraction] = "auto") -> PipelineResult:
    """Run the refinement chain from a dense containment graph to sets ``V, W``.

    Stages, in order: low-degree deletion, pair refinement on the left, rich
    right vertices, pair refinement on the right, dense BSG on both sides.
    Every inequality a stage relies on is recorded as a certificate.
    """
    n = len(b)
    if n < 2:
        raise PipelineFailed("size-gate", f"need |B| >= 2, got {n}")
    g = deduplicate(containment_graph_multi(a, b), a, b)
    E = g.num_edges
    if E == 0:
        raise PipelineFailed("density-gate", "containment graph has no edges")
    nn = n * n
    alpha = Fraction(E, nn)
    if eps_policy == "auto":
        eps = min(auto_epsilon(alpha), Fraction(1, 4) - Fraction(1, 10**9))
    else:
        eps = _frac(eps_policy)
    if not 0 < eps < Fraction(1, 4):
        raise PipelineFailed("epsilon", f"eps must lie in (0, 1/4), got {eps}")

    every = tuple(range(n))
    stages = [Stage("containment", every, every, alpha)]
    certs = []

    # low-degree deletion: drop edges at left vertices of degree < alpha n / 2
    low_thr = alpha * n / 2
    keep_left = np.flatnonzero(g.left_degrees >= low_thr)
    g1 = g.restrict(left=keep_left)
    certs.append(_cert("edges after low-degree deletion >= alpha n^2 / 2", g1.num_edges, alpha * nn / 2))
    alpha1 = Fraction(g1.num_edges, nn)
    stages.append(Stage("low-degree-deletion", tuple(keep_left.tolist()), every, alpha1, low_thr))

    # pair refinement on the left class
    try:
        s1, pc1 = gowers_pair_refine(g1, eps)
    except (RefinementFailed, InvalidArgument) as exc:
        raise PipelineFailed("left-pair-refinement", str(exc)) from exc
    deg1 = g1.left_degrees
    s1 = s1[deg1[s1] > 0]
    if not s1.size:
        raise PipelineFailed("left-pair-refinement", "refined set has only isolated vertices")
    bad1 = int(np.count_nonzero(g1.codegree_matrix()[np.ix_(s1, s1)] < _ceil(pc1.threshold)))
    frac1 = Fraction(bad1, s1.size ** 2)
    certs.append(_cert("|L| >= alpha n / 8", s1.size, alpha * n / 8))
    certs.append(_cert("min degree on L >= alpha n / 2", int(deg1[s1].min()), low_thr))
    certs.append(_cert("bad pair fraction on L <= eps", eps, frac1))
    g2 = g1.restrict(left=s1)
    nbrs = np.flatnonzero(g2.right_degrees > 0)
    stages.append(Stage("left-pair-refinement", tuple(s1.tolist()), tuple(nbrs.tolist()),
                        Fraction(g2.num_edges, nn), pc1.threshold, frac1))

    # rich vertices among the neighbours of L
    certs.append(_cert("E(L, N(L)) >= alpha^2 n^2 / 16", g2.num_edges, alpha ** 2 * nn / 16))
    rich_thr = alpha ** 2 * n / 32
    rich = np.flatnonzero((g2.right_degrees >= rich_thr) & (g2.right_degrees > 0))
    certs.append(_cert("#rich vertices >= alpha^2 n / 32", rich.size, rich_thr))
    g3 = g2.restrict(right=rich)
    alpha2 = Fraction(g3.num_edges, nn)
    certs.append(_cert("alpha_R >= alpha^2 / 32", alpha2, alpha ** 2 / 32))
    stages.append(Stage("rich-right-vertices", tuple(s1.tolist()), tuple(rich.tolist()), alpha2, rich_thr))

    # pair refinement on the right class
    g3t = g3.transpose()
    try:
        s2, pc2 = gowers_pair_refine(g3t, eps)
    except (RefinementFailed, InvalidArgument) as exc:
        raise PipelineFailed("right-pair-refinement", str(exc)) from exc
    certs.append(_cert("|R| >= alpha_R n / 2", s2.size, alpha2 * n / 2))
    certs.append(_cert("bad pair fraction on R <= eps", eps, pc2.bad_fraction))
    g4 = g3.restrict(right=s2)
    E4 = g4.num_edges
    certs.append(_cert("E(L, R) >= alpha^4 n^2 / 2^11", E4, alpha ** 4 * nn / 2**11))
    stages.append(Stage("right-pair-refinement", tuple(s1.tolist()), tuple(s2.tolist()),
                        Fraction(E4, nn), pc2.threshold, pc2.bad_fraction))

    # dense BSG on the good-pair graphs H_1 and H_2
    u1, u2 = b.subset(s1), b.subset(s2)
    h1 = _good_pair_graph(g1, s1, pc1.threshold)
    h2 = _good_pair_graph(g3t, s2, pc2.threshold)
    try:
        v_set, bsg1 = dense_bsg_extract(h1, u1, u1)
    except GraphNotDenseEnough as exc:
        raise PipelineFailed("dense-bsg-left", str(exc)) from exc
    try:
        w_set, bsg2 = dense_bsg_extract(h2, u2, u2)
    except GraphNotDenseEnough as exc:
        raise PipelineFailed("dense-bsg-right", str(exc)) from exc
    for side, c in (("V", bsg1), ("W", bsg2)):
        certs.append(Certificate(f"|{side}| >= (1 - sqrt(eps_H)) |parent|",
                                 Fraction(c.size_kept), Fraction(c.size_u), c.size_ok))
        certs.append(Certificate(f"|{side} + {side}| <= |H-restricted sumset|^2 / ((1 - 2 sqrt(eps_H)) |parent|)",
                                 Fraction(c.sumset_size), Fraction(c.restricted_size ** 2, c.size_u), c.sumset_ok))
    v_idx = s1[list(bsg1.indices)]
    w_idx = s2[list(bsg2.indices)]
    E5 = g.restrict(left=v_idx, right=w_idx).num_edges
    area = s1.size * s2.size
    # E5 >= E4 - (eps + 2 sqrt(eps)) |L| |R|
    loss = Fraction(E4 - E5, area) - eps
    certs.append(Certificate("E(V, W) >= E(L, R) - (eps + 2 sqrt(eps)) |L||R|",
                             Fraction(E5), Fraction(E4), le_sqrt_times(loss, eps, 2)))
    certs.append(_cert("E(V, W) > 0", E5, 1))
    stages.append(Stage("dense-bsg", tuple(v_idx.tolist()), tuple(w_idx.tolist()), Fraction(E5, nn)))

    return PipelineResult(
        n=n, alpha=alpha, eps=eps, stages=tuple(stages),
        final_v=v_set, final_w=w_set,
        doubling_v=doubling_ratio(v_set, "add"), doubling_w=doubling_ratio(w_set, "add"),
        restricted_edge_count=E5, certificates=tuple(certs),
        v_indices=tuple(v_idx.tolist()), w_indices=tuple(w_idx.tolist()),
    )


def recheck_pipeline(result: PipelineResult, a: IntSet, b: IntSet) -> list[tuple[str, bool]]:
    """Recompute every pipeline claim from scratch with plain Python sets.

    Only the stage vertex sets are taken from ``result``; graphs, degrees,
    codegrees, densities and sumsets are rebuilt independently.
    """
    bl = b.tolist()
    aset = set(a.tolist())
    n = len(bl)
    first = {}
    for i in range(n):
        for j in range(i, n):
            p = bl[i] * bl[j]
            if p in aset and p not in first:
                first[p] = (i, j)
    edges = set(first.values())
    adj = {i: set() for i in range(n)}
    for i, j in edges:
        adj[i].add(j)
    alpha = Fraction(len(edges), n * n)
    eps = result.eps
    out = []

    def check(claim, ok):
        out.append((claim, bool(ok)))

    check("alpha recomputed", alpha == result.alpha)
    st = {s.name: s for s in result.stages}

    kept = set(st["low-degree-deletion"].left)
    check("low-degree set", kept == {i for i in range(n) if len(adj[i]) * 2 >= alpha * n})
    adj1 = {i: (adj[i] if i in kept else set()) for i in range(n)}
    e1 = sum(len(v) for v in adj1.values())
    check("edges after deletion >= alpha n^2/2", 2 * e1 >= alpha * n * n)
    alpha1 = Fraction(e1, n * n)

    s1 = list(st["left-pair-refinement"].left)
    check("L inside kept vertices", set(s1) <= kept)
    check("|L| >= alpha n/8", 8 * len(s1) >= alpha * n)
    check("degrees on L >= alpha n/2", all(2 * len(adj1[i]) >= alpha * n for i in s1))
    thr1 = eps * alpha1 ** 2 * n / 2
    good1 = {(u, v) for u in s1 for v in s1 if len(adj1[u] & adj1[v]) >= thr1}
    check("L bad fraction <= eps", len(s1) ** 2 - len(good1) <= eps * len(s1) ** 2)

    e12 = sum(len(adj1[i]) for i in s1)
    check("E(L, N(L)) >= alpha^2 n^2/16", 16 * e12 >= alpha ** 2 * n * n)
    right_deg = {}
    for i in s1:
        for j in adj1[i]:
            right_deg[j] = right_deg.get(j, 0) + 1
    rich = list(st["rich-right-vertices"].right)
    check("rich set", set(rich) == {j for j, d in right_deg.items() if 32 * d >= alpha ** 2 * n})
    check("#rich >= alpha^2 n/32", 32 * len(rich) >= alpha ** 2 * n)
    radj = {j: {i for i in s1 if j in adj1[i]} for j in rich}
    alpha2 = Fraction(sum(len(v) for v in radj.values()), n * n)
    check("alpha_R >= alpha^2/32", 32 * alpha2 >= alpha ** 2)

    s2 = list(st["right-pair-refinement"].right)
    check("R inside rich", set(s2) <= set(rich))
    check("|R| >= alpha_R n/2", 2 * len(s2) >= alpha2 * n)
    thr2 = eps * alpha2 ** 2 * n / 2
    good2 = {(u, v) for u in s2 for v in s2 if len(radj[u] & radj[v]) >= thr2}
    check("R bad fraction <= eps", len(s2) ** 2 - len(good2) <= eps * len(s2) ** 2)
    e4 = sum(len(radj[j]) for j in s2)
    check("E(L, R) >= alpha^4 n^2/2^11", 2**11 * e4 >= alpha ** 4 * n * n)

    def sq_le(x, e, scale):
        return x <= 0 or x * x <= e * scale * scale

    v_idx = list(st["dense-bsg"].left)
    w_idx = list(st["dense-bsg"].right)
    for label, parent, good, chosen in (("V", s1, good1, v_idx), ("W", s2, good2, w_idx)):
        m = len(parent)
        eps_h = 1 - Fraction(len(good), m * m)
        check(f"{label}: eps_H < 1/4", eps_h < Fraction(1, 4))
        check(f"{label} inside parent", set(chosen) <= set(parent))
        check(f"|{label}| >= (1 - sqrt(eps_H)) |parent|", sq_le(Fraction(m - len(chosen)), eps_h, m))
        vals = [bl[i] for i in chosen]
        ss = {x + y for x in vals for y in vals}
        restricted = {bl[u] + bl[v] for u, v in good}
        lhs = Fraction(len(ss) * m)
        check(f"|{label}+{label}| bound", sq_le(lhs - len(restricted) ** 2, eps_h, 2 * lhs))
    e5 = sum(1 for i, j in edges if i in set(v_idx) and j in set(w_idx))
    check("restricted edge count", e5 == result.restricted_edge_count)
    loss = Fraction(e4 - e5, len(s1) * len(s2)) - eps
    check("E(V, W) >= E(L, R) - (eps + 2 sqrt eps)|L||R|", sq_le(loss, eps, 2))
    check("E(V, W) > 0", e5 > 0)
    check("V values", result.final_v.tolist() == sorted(bl[i] for i in v_idx))
    check("W values", result.final_w.tolist() == sorted(bl[j] for j in w_idx))
    vv = result.final_v.tolist()
    ww = result.final_w.tolist()
    check("doubling V", result.doubling_v == Fraction(len({x + y for x in vv for y in vv}), len(vv)))
    check("doubling W", result.doubling_w == Fraction(len({x + y for x in ww for y in ww}), len(ww)))
    return out
