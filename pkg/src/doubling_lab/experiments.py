"""Desk-scale experiments and their CSV / JSON reports.

Each ``run_*`` function maps an :class:`ExperimentConfig` to a
:class:`Report` whose rows follow the grid order.  Reports contain no
timestamps or host data, so identical configs give byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from . import __version__
from .divisors import level_bounds, omega_stats_over_gap, omega_tension, restricted_primes, sieve_prime_powers
from .energy import energy
from .errors import DoublingLabError, InvalidArgument, PipelineFailed
from .gaps import Gap, cover_with_ap, cover_with_gap_rank2, format_gap, parse_gap
from .graphs import containment_graph_multi, deduplicate, small_doubling_pipeline
from .intset import GrowthParams, IntSet, check_polynomial_growth, doubling_ratio, load_set, product_set, sumset

MULT_TABLE_MAX = 2 * 10**4
ENERGY_DECAY_MAX = 128

DEFAULT_GRIDS = {
    "multtable": (10, 50, 100, 500, 1000, 5000),
    "energy-decay": (8, 16, 32, 64),
    "search": (8, 16, 32),
    "pipeline": (32, 64),
    "tension": (1000,),
    "omega-stats": (10**4, 10**5, 10**6),
    "energy": (10,),
    "sumset": (10,),
}


@dataclass(frozen=True)
class ExperimentConfig:
    name: str
    n_list: tuple = ()
    k: float = 3.0
    delta: float = 1.0
    eps: Optional[float] = None
    sample: int = 10_000
    seed: int = 0
    fmt: str = "csv"
    out: Optional[str] = None
    gaps: tuple = ()
    set_file: Optional[str] = None
    growth: GrowthParams = field(default_factory=lambda: GrowthParams(1.0, 2.0))

    def grid(self) -> tuple:
        grid = tuple(self.n_list) or DEFAULT_GRIDS.get(self.name, ())
        if not grid and not self.gaps and not self.set_file:
            raise InvalidArgument(f"experiment {self.name!r} has an empty grid")
        return grid

    def echo(self) -> dict:
        d = asdict(self)
        d["growth"] = {"c1": self.growth.c1, "c2": self.growth.c2}
        d["n_list"] = list(self.n_list or DEFAULT_GRIDS.get(self.name, ()))
        d["gaps"] = list(self.gaps)
        d.pop("out")
        d.pop("fmt")
        return d


def _cell(v):
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}" if v.denominator != 1 else str(v.numerator)
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (np.integer,)):
        return str(int(v))
    if v is None:
        return ""
    return str(v)


def _jsonable(v):
    if isinstance(v, Fraction):
        return _cell(v)
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.floating):
        return float(v)
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


@dataclass
class Report:
    name: str
    columns: list
    rows: list
    config: dict
    gate: Optional[bool] = None
    gate_description: str = ""
    details: list = field(default_factory=list)

    @property
    def provenance(self) -> dict:
        return {"seed": self.config.get("seed"), "config": self.config, "library_version": __version__}

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for row in self.rows:
            w.writerow([_cell(row.get(c)) for c in self.columns])
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {
            "experiment": self.name,
            "columns": self.columns,
            "rows": [{c: _jsonable(r.get(c)) for c in self.columns} for r in self.rows],
            "gate": {"description": self.gate_description, "passed": self.gate},
            "provenance": _jsonable(self.provenance),
        }
        if self.details:
            doc["details"] = _jsonable(self.details)
        return json.dumps(doc, indent=2) + "\n"

    def render(self, fmt: str) -> str:
        if fmt == "csv":
            return self.to_csv()
        if fmt == "json":
            return self.to_json()
        raise InvalidArgument(f"unknown format {fmt!r}")

    def write(self, path, fmt: str) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.render(fmt))


def thread_cap() -> int:
    raw = os.environ.get("DOUBLING_LAB_THREADS", "1")
    try:
        cap = int(raw)
    except ValueError:
        raise InvalidArgument(f"DOUBLING_LAB_THREADS must be an integer, got {raw!r}") from None
    if cap < 1:
        raise InvalidArgument("DOUBLING_LAB_THREADS must be >= 1")
    return cap


def _map_grid(fn: Callable, grid) -> list:
    cap = thread_cap()
    if cap == 1 or len(grid) <= 1:
        return [fn(x) for x in grid]
    with ThreadPoolExecutor(max_workers=cap) as pool:
        return list(pool.map(fn, grid))


def _strictly_decreasing(xs) -> bool:
    return all(a > b for a, b in zip(xs, xs[1:]))


# ---------------------------------------------------------------------------
# multiplication table


def mult_table_size(n: int) -> int:
    """``|[1..n] . [1..n]|`` via a presence bitset over ``[1..n^2]``."""
    if not 1 <= n <= MULT_TABLE_MAX:
        raise InvalidArgument(f"n must lie in [1, {MULT_TABLE_MAX}], got {n}")
    seen = np.zeros(n * n + 1, dtype=bool)
    for i in range(1, n + 1):
        seen[i * np.arange(i, n + 1, dtype=np.int64)] = True
    return int(np.count_nonzero(seen))


def run_multtable_density(cfg: ExperimentConfig) -> Report:
    grid = cfg.grid()

    def row(n):
        m = mult_table_size(n)
        return {"n": n, "size": m, "density": m / (n * n)}

    rows = _map_grid(row, grid)
    return Report("multtable", ["n", "size", "density"], rows, cfg.echo(),
                  gate=_strictly_decreasing([r["density"] for r in rows]),
                  gate_description="density strictly decreasing across the grid")


# ---------------------------------------------------------------------------
# energy decay of product sets


def run_energy_decay(cfg: ExperimentConfig) -> Report:
    grid = cfg.grid()
    for n in grid:
        if not 1 <= n <= ENERGY_DECAY_MAX:
            raise InvalidArgument(f"energy-decay needs 1 <= n <= {ENERGY_DECAY_MAX}, got {n}")

    def row(n):
        b = IntSet.interval(1, n)
        bb = product_set(b, b)
        e = energy(bb, "add")
        return {"n": n, "product_set_size": len(bb), "energy": e, "ratio": e / n ** 6,
                "ratio_exact": Fraction(e, n ** 6)}

    rows = _map_grid(row, grid)
    return Report("energy-decay", ["n", "product_set_size", "energy", "ratio", "ratio_exact"], rows,
                  cfg.echo(), gate=_strictly_decreasing([r["ratio_exact"] for r in rows]),
                  gate_description="E+(B.B)/n^6 strictly decreasing across the grid")


# ---------------------------------------------------------------------------
# heuristic search for large small-doubling subsets of B.B


def _search_candidates(bb: IntSet, n: int):
    arr = bb.array
    cuts = sorted({int(np.ceil(n * n * j / 64)) for j in range(1, 65)} | {1})
    for m in cuts:
        part = IntSet._trusted(arr[arr <= m].copy())
        if len(part):
            yield f"prefix<= {m}", part
            ap = cover_with_ap(part)
            if ap.diffs[0] != 1 or ap.base != 1:
                d = ap.diffs[0]
                top = ap.base + d * ap.lens[0]
                sel = arr[((arr - ap.base) % d == 0) & (arr >= ap.base) & (arr <= top)]
                yield f"ap-cover {format_gap(ap)}", IntSet._trusted(sel.copy())
    for d in range(1, 17):
        for r in range(d):
            sel = arr[arr % d == r]
            if sel.size:
                yield f"residue {r} mod {d}", IntSet._trusted(sel.copy())


def run_small_doubling_search(cfg: ExperimentConfig) -> Report:
    """Lower-bound search for ``A`` inside ``[1..n].[1..n]`` with ``|A+A| <= K|A|``."""
    grid = cfg.grid()
    k = Fraction(repr(float(cfg.k)))

    def row(n):
        b = IntSet.interval(1, n)
        bb = product_set(b, b)
        best = None
        for label, cand in _search_candidates(bb, n):
            if best is not None and len(cand) <= len(best[1]):
                continue
            dr = doubling_ratio(cand, "add")
            if dr <= k:
                best = (label, cand, dr)
        if best is None:
            # a singleton always has doubling 1
            best = ("singleton", IntSet([bb.min]), Fraction(1))
        label, a, dr = best
        return {"n": n, "k": float(cfg.k), "product_set_size": len(bb),
                "product_set_doubling": doubling_ratio(bb, "add"),
                "best_size": len(a), "best_density": len(a) / (n * n),
                "best_doubling": dr, "candidate": label}

    rows = _map_grid(row, grid)
    cols = ["n", "k", "product_set_size", "product_set_doubling", "best_size", "best_density",
            "best_doubling", "candidate"]
    rep = Report("search", cols, rows, cfg.echo(),
                 gate_description="heuristic lower bound; never gated")
    rep.details = [{"best_density_decreasing": _strictly_decreasing([r["best_density"] for r in rows])}]
    return rep


# ---------------------------------------------------------------------------
# pipeline demonstration


def _cover_sizes(s: IntSet, budget: int = 24) -> tuple[int, Optional[int]]:
    ap = cover_with_ap(s).nominal_size
    if len(s) < 2:
        return ap, ap
    r2 = cover_with_gap_rank2(s, budget)
    return ap, (r2.nominal_size if r2 is not None else None)


def run_pipeline_demo(cfg: ExperimentConfig) -> Report:
    grid = cfg.grid()
    eps_policy = "auto" if cfg.eps is None else cfg.eps

    def row(n):
        b = IntSet.interval(1, n)
        a = product_set(b, b)
        base = {"n": n, "growth_ok": check_polynomial_growth(b, cfg.growth)}
        try:
            res = small_doubling_pipeline(a, b, eps_policy)
        except PipelineFailed as exc:
            return {**base, "status": f"failed:{exc.stage}"}, {"n": n, "failed_stage": exc.stage, "message": str(exc)}
        bl = b.array
        vi, wi = np.array(res.v_indices), np.array(res.w_indices)
        g = deduplicate(containment_graph_multi(a, b), a, b).restrict(left=vi, right=wi)
        rprod = IntSet(bl[g.edges[:, 0]] * bl[g.edges[:, 1]])
        v_ap, v_r2 = _cover_sizes(res.final_v)
        w_ap, w_r2 = _cover_sizes(res.final_w)
        p_ap, p_r2 = _cover_sizes(rprod)
        out = {
            **base, "status": "ok", "alpha": float(res.alpha), "eps": float(res.eps),
            "size_v": len(res.final_v), "size_w": len(res.final_w),
            "doubling_v": res.doubling_v, "doubling_w": res.doubling_w,
            "restricted_edges": res.restricted_edge_count,
            "certificates_passed": sum(c.holds for c in res.certificates),
            "certificates_total": len(res.certificates),
            "ap_cover_v": v_ap, "rank2_cover_v": v_r2,
            "ap_cover_w": w_ap, "rank2_cover_w": w_r2,
            "restricted_product_size": len(rprod), "ap_cover_product": p_ap, "rank2_cover_product": p_r2,
        }
        return out, res.to_json()

    pairs = _map_grid(row, grid)
    cols = ["n", "status", "growth_ok", "alpha", "eps", "size_v", "size_w", "doubling_v", "doubling_w",
            "restricted_edges", "certificates_passed", "certificates_total", "ap_cover_v", "rank2_cover_v",
            "ap_cover_w", "rank2_cover_w", "restricted_product_size", "ap_cover_product",
            "rank2_cover_product"]
    rows = [p[0] for p in pairs]
    ok = all(r.get("certificates_passed") == r.get("certificates_total") for r in rows if r["status"] == "ok")
    return Report("pipeline", cols, rows, cfg.echo(), gate=ok,
                  gate_description="every completed pipeline has all certificates verified",
                  details=[p[1] for p in pairs])


# ---------------------------------------------------------------------------
# the omega tension


def _tension_gaps(cfg: ExperimentConfig, n: int) -> tuple[Gap, Gap, Gap]:
    if cfg.gaps:
        if len(cfg.gaps) != 3:
            raise InvalidArgument("tension takes exactly three --gap values (p1, p2, p3)")
        return tuple(parse_gap(g) for g in cfg.gaps)
    return Gap.interval(1, n), Gap.interval(1, n), Gap.interval(1, n * n)


def run_tension(cfg: ExperimentConfig) -> Report:
    grid = cfg.grid() if not cfg.gaps else (None,)

    def row(n):
        p1, p2, p3 = _tension_gaps(cfg, n)
        rep = omega_tension(p1, p2, p3, cfg.delta, cfg.sample, cfg.seed)
        return {"p1": format_gap(p1), "p2": format_gap(p2), "p3": format_gap(p3),
                "sample": cfg.sample, "seed": cfg.seed, "excluded_primes": rep.excluded_primes,
                **rep.to_json()}

    rows = _map_grid(row, grid)
    cols = ["n", "delta", "mean_pair_sum", "mean_p3", "gap", "violations",
            "p1", "p2", "p3", "sample", "seed", "excluded_primes"]
    return Report("tension", cols, rows, cfg.echo(),
                  gate=all(r["violations"] == 0 for r in rows),
                  gate_description="superadditivity violations = 0")


# ---------------------------------------------------------------------------
# small utilities exposed on the command line


def run_omega_stats(cfg: ExperimentConfig) -> Report:
    gaps = [parse_gap(g) for g in cfg.gaps] if cfg.gaps else [Gap.interval(1, n) for n in cfg.grid()]

    def row(p):
        _, high = level_bounds(p.nominal_size, cfg.delta)
        table = restricted_primes(p.diffs, sieve_prime_powers(max(2, high)))
        st = omega_stats_over_gap(p, table)
        return {"gap": format_gap(p), "table_bound": high, **st.csv_row()}

    rows = _map_grid(row, gaps)
    cols = ["n", "mean", "variance", "band_center", "band_halfwidth", "outside_fraction", "gap", "table_bound"]
    return Report("omega-stats", cols, rows, cfg.echo())


def _input_sets(cfg: ExperimentConfig) -> list[tuple[str, IntSet]]:
    if cfg.set_file:
        return [(cfg.set_file, load_set(cfg.set_file))]
    return [(f"[1..{n}]", IntSet.interval(1, n)) for n in cfg.grid()]


def run_energy(cfg: ExperimentConfig) -> Report:
    def row(item):
        label, s = item
        e_add = energy(s, "add")
        try:
            e_mul = energy(s, "mul")
        except DoublingLabError:
            e_mul = None
        n = len(s)
        return {"set": label, "size": n, "energy_add": e_add, "energy_mul": e_mul,
                "energy_add_over_n3": Fraction(e_add, n ** 3) if n else None}

    rows = _map_grid(row, _input_sets(cfg))
    return Report("energy", ["set", "size", "energy_add", "energy_mul", "energy_add_over_n3"], rows, cfg.echo())


def run_sumset(cfg: ExperimentConfig) -> Report:
    def row(item):
        label, s = item
        out = {"set": label, "size": len(s), "sumset_size": len(sumset(s, s)),
               "product_set_size": len(product_set(s, s))}
        if len(s):
            out["doubling_add"] = doubling_ratio(s, "add")
            # multiplicative doubling is undefined once 0 is present
            out["doubling_mul"] = doubling_ratio(s, "mul") if 0 not in s else None
        return out

    rows = _map_grid(row, _input_sets(cfg))
    return Report("sumset", ["set", "size", "sumset_size", "product_set_size", "doubling_add", "doubling_mul"],
                  rows, cfg.echo())


REGISTRY = {
    "multtable": run_multtable_density,
    "energy-decay": run_energy_decay,
    "search": run_small_doubling_search,
    "pipeline": run_pipeline_demo,
    "tension": run_tension,
    "omega-stats": run_omega_stats,
    "energy": run_energy,
    "sumset": run_sumset,
}


def run(cfg: ExperimentConfig) -> Report:
    try:
        fn = REGISTRY[cfg.name]
    except KeyError:
        raise InvalidArgument(f"unknown experiment {cfg.name!r}") from None
    return fn(cfg)
