"""Acceptance criteria, each at its stated tolerance.

Every test records a PASS/FAIL line that is printed in the terminal summary.
Expected values come from independent oracles computed inside the test.
"""

import math
import os
import subprocess
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

from doubling_lab import (
    BipartiteGraph, Gap, IncidenceInstance, IntSet, count_incidences, count_incidences_bruteforce,
    dense_bsg_extract, doubling_ratio, energy, energy_bruteforce, gap_elements, gowers_pair_refine, is_proper,
    iterated_sum_difference, longest_side, mertens_sum, omega_stats_over_gap, omega_tension,
    prime_power_count_in_gap, product_set, recheck_pipeline, sieve_prime_powers, small_doubling_pipeline,
    st_bound_check,
)
from doubling_lab.experiments import mult_table_size
from doubling_lab.incidence import containment_incidence, line_support_check

from conftest import record_acceptance

SEED = 20240601


def rng_for(criterion):
    return np.random.default_rng([SEED, criterion])


def primes_upto(n):
    """Plain bytearray sieve, independent of the library."""
    flags = bytearray([1]) * (n + 1)
    flags[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(n) + 1):
        if flags[p]:
            flags[p * p::p] = bytearray(len(range(p * p, n + 1, p)))
    return [p for p in range(n + 1) if flags[p]]


def prime_power_triples(n):
    """Sorted ``(q, p, a)`` with ``q = p**a <= n``."""
    out = []
    for p in primes_upto(n):
        q, a = p, 1
        while q <= n:
            out.append((q, p, a))
            q, a = q * p, a + 1
    return sorted(out)


def prime_powers_upto(n):
    return [q for q, _, _ in prime_power_triples(n)]


def test_01_energy_oracle_equivalence():
    rng = rng_for(1)
    t0 = time.perf_counter()
    mismatches = 0
    for _ in range(200):
        n = int(rng.integers(1, 61))
        hi = int(np.exp(rng.uniform(np.log(max(n, 2)), np.log(10**6))))
        u = IntSet(rng.choice(hi + 1, size=n, replace=False))
        for kind in ("add", "mul"):
            e_auto, e_naive, e_brute = energy(u, kind, "auto"), energy(u, kind, "naive"), energy_bruteforce(u, kind)
            mismatches += not (e_auto == e_naive == e_brute)
    elapsed = time.perf_counter() - t0
    ok = mismatches == 0 and elapsed < 10
    record_acceptance(1, "energy auto = naive = brute force on 200 sets x 2 kinds", ok,
                      f"mismatches={mismatches} time={elapsed:.2f}s")
    assert ok


def test_02_energy_closed_forms():
    bad = [n for n in range(1, 101) if energy(IntSet.interval(0, n - 1)) * 3 != 2 * n ** 3 + n]
    bad += [-k for k in range(1, 21) if energy(IntSet([2 ** i for i in range(k)])) != 2 * k * k - k]
    record_acceptance(2, "E+([0..n-1]) = (2n^3+n)/3, E+({2^i}) = 2k^2-k", not bad, f"failures={bad}")
    assert not bad


def test_03_multiplication_table():
    t0 = time.perf_counter()
    oracle10 = len({i * j for i in range(1, 11) for j in range(1, 11)})
    oracle100 = len({i * j for i in range(1, 101) for j in range(1, 101)})
    exact = mult_table_size(10) == 42 == oracle10 and mult_table_size(100) == 2906 == oracle100
    grid = (10, 50, 100, 500, 1000, 5000)
    dens = [Fraction(mult_table_size(n), n * n) for n in grid]
    decreasing = all(a > b for a, b in zip(dens, dens[1:]))
    elapsed = time.perf_counter() - t0
    ok = exact and decreasing and elapsed < 60
    record_acceptance(3, "M(10)=42, M(100)=2906, M(n)/n^2 strictly decreasing", ok,
                      f"densities={[round(float(d), 4) for d in dens]} time={elapsed:.2f}s")
    assert ok


def test_04_energy_decay_of_product_sets():
    t0 = time.perf_counter()
    ratios = []
    agree = True
    for n in (8, 16, 32, 64):
        bb = product_set(IntSet.interval(1, n), IntSet.interval(1, n))
        e = energy(bb)
        if n <= 16:
            agree &= e == energy_bruteforce(bb)
        agree &= e == energy(bb, "add", "naive")
        ratios.append(Fraction(e, n ** 6))
    elapsed = time.perf_counter() - t0
    ok = agree and all(a > b for a, b in zip(ratios, ratios[1:])) and elapsed < 60
    record_acceptance(4, "E+(B.B)/n^6 strictly decreasing on {8,16,32,64}", ok,
                      f"ratios={[round(float(r), 5) for r in ratios]} time={elapsed:.2f}s")
    assert ok


def _random_proper_gap(rng):
    while True:
        rank = int(rng.integers(1, 4))
        cap = int(rng.integers(100, 10**5 + 1))
        lens, size = [], 1
        for i in range(rank):
            room = cap // size
            if room < 1:
                break
            pts = int(rng.integers(1, room + 1)) if i < rank - 1 else room
            lens.append(pts - 1)
            size *= pts
        if len(lens) != rank:
            continue
        diffs = [int(rng.integers(1, 5000)) * int(rng.choice([-1, 1])) for _ in range(rank)]
        p = Gap(int(rng.integers(-10**6, 10**6)), tuple(diffs), tuple(lens))
        if p.nominal_size <= 10**5 and is_proper(p):
            return p


def test_05_gap_prime_power_count_bound():
    rng = rng_for(5)
    table = prime_power_triples(10**5)
    violations = checked = enumerated = 0
    for _ in range(100):
        p = _random_proper_gap(rng)
        _, points, _ = longest_side(p)
        elems = gap_elements(p).array
        n = p.nominal_size
        for q, prime, a in table:
            if q > points:
                break
            if any(d % prime == 0 for d in p.diffs):
                continue
            count, ok = prime_power_count_in_gap(p, prime, a)
            if q <= 2000:
                enumerated += 1
                if count != int(np.count_nonzero(elems % q == 0)):
                    violations += 1
            # |count - n/q| <= n/I_1, in exact integers
            if not (abs(count * q - n) * points <= n * q) or not ok:
                violations += 1
            checked += 1
    record_acceptance(5, "|count - |P|/p^a| <= |P|/I_1 on 100 proper GAPs", violations == 0,
                      f"checked={checked} enumerated={enumerated} violations={violations}")
    assert violations == 0


def test_06_mertens_window():
    offsets = {}
    agree = True
    for N in (10**3, 10**4, 10**5, 10**6):
        v = mertens_sum(sieve_prime_powers(N))
        direct = math.fsum(1 / q for q in prime_powers_upto(N))
        agree &= abs(v - direct) <= 1e-12 * direct
        offsets[N] = v - math.log(math.log(N))
    ok = agree and all(0.7 <= o <= 1.3 for o in offsets.values())
    record_acceptance(6, "mertens_sum - log log N in [0.7, 1.3]", ok,
                      " ".join(f"{N}:{o:.4f}" for N, o in offsets.items()))
    assert ok


def test_07_omega_statistics():
    t0 = time.perf_counter()
    N = 10**6
    p = Gap.interval(1, N)
    table = sieve_prime_powers(N)
    stats = omega_stats_over_gap(p, table)
    target = math.log(math.log(N)) + 1.03
    mean_ok = abs(stats.mean - target) <= 0.3
    # E(Y) = (1/n) sum over p^a of #{x : p^a | x}; also floor(N/q) summed directly
    via_counts = sum(prime_power_count_in_gap(p, int(pr), int(a))[0] for pr, a, _ in table.entries)
    via_floor = sum(N // q for q in prime_powers_upto(N))
    identity_ok = stats.exact_mean == Fraction(via_counts, N) == Fraction(via_floor, N)
    cheb_ok = all(stats.chebyshev_holds(t) for t in (0.5, 1, 2))
    elapsed = time.perf_counter() - t0
    ok = mean_ok and identity_ok and cheb_ok and elapsed < 120
    record_acceptance(7, "omega on [1..10^6]: mean, exact mean identity, Chebyshev", ok,
                      f"mean={stats.mean:.6f} target={target:.6f} identity={identity_ok} "
                      f"chebyshev={cheb_ok} time={elapsed:.2f}s")
    assert ok


def test_08_pipeline_certificates():
    failed = []
    detail = []
    for n in (32, 64):
        b = IntSet.interval(1, n)
        a = product_set(b, b)
        res = small_doubling_pipeline(a, b)
        failed += [f"n={n}: {c.claim}" for c in res.certificates if not c.holds]
        checks = recheck_pipeline(res, a, b)
        failed += [f"n={n}: recheck {claim}" for claim, ok in checks if not ok]
        detail.append(f"n={n} certs={len(res.certificates)} rechecks={len(checks)} |V|={len(res.final_v)} "
                      f"|W|={len(res.final_w)}")
    record_acceptance(8, "pipeline certificates re-verified for n in {32, 64}", not failed,
                      "; ".join(detail + failed))
    assert not failed


def test_09_pair_refinement_contract():
    rng = rng_for(9)
    eps = Fraction(1, 4)
    violations = 0
    made = 0
    while made < 50:
        n = int(rng.integers(8, 129))
        adj = rng.random((n, n)) < rng.uniform(0.3, 0.95)
        g = BipartiteGraph.from_adjacency(adj)
        alpha = g.density
        if alpha < Fraction(3, 10):
            continue
        made += 1
        s, _ = gowers_pair_refine(g, eps)
        nbrs = [set(np.flatnonzero(adj[i]).tolist()) for i in range(n)]
        thr = eps * alpha ** 2 * n / 2
        bad = sum(1 for u in s.tolist() for v in s.tolist() if len(nbrs[u] & nbrs[v]) < thr)
        if not (2 * len(s) >= alpha * n and bad <= eps * len(s) ** 2):
            violations += 1
    record_acceptance(9, "pair refinement |S| >= alpha n/2, bad fraction <= 1/4 on 50 graphs",
                      violations == 0, f"violations={violations}")
    assert violations == 0


def test_10_dense_bsg_contract():
    rng = rng_for(10)
    violations = made = 0
    while made < 100:
        m = int(rng.integers(2, 41))
        u = IntSet(rng.choice(10**4, m, replace=False))
        w = u if made % 2 else IntSet(rng.choice(10**4, m, replace=False))
        g = BipartiteGraph.from_adjacency(rng.random((m, m)) >= rng.uniform(0, 0.25))
        eps = 1 - g.density
        if eps >= Fraction(1, 4):
            continue
        made += 1
        kept, _ = dense_bsg_extract(g, u, w)
        kv = kept.tolist()
        restricted = {u[i] + w[j] for i, j in g.edges.tolist()}
        ss = {x + y for x in kv for y in kv}
        # |A'| >= (1 - sqrt eps)|A|  <=>  (|A| - |A'|)^2 <= eps |A|^2
        size_ok = Fraction(m - len(kv)) ** 2 <= eps * m * m
        # |A'+A'| (1 - 2 sqrt eps) |A| <= R^2  <=>  L - R^2 <= 2 sqrt(eps) L with L = |A'+A'||A|
        lhs = Fraction(len(ss) * m)
        gap = lhs - len(restricted) ** 2
        sum_ok = gap <= 0 or gap * gap <= 4 * eps * lhs * lhs
        violations += not (size_ok and sum_ok and set(kv) <= set(u.tolist()))
    record_acceptance(10, "dense BSG size and sumset inequalities on 100 instances", violations == 0,
                      f"violations={violations}")
    assert violations == 0


def test_11_incidences():
    rng = rng_for(11)
    mismatches = 0
    for _ in range(50):
        pts = np.column_stack([rng.integers(-20, 21, 400), rng.integers(-200, 201, 400)])
        lines = np.column_stack([rng.integers(-6, 7, 150), rng.integers(-40, 41, 150)])
        inst = IncidenceInstance.build(pts, lines)
        mismatches += count_incidences(inst) != count_incidences_bruteforce(inst)
    b = IntSet.interval(1, 32)
    bb = product_set(b, b).array
    bound_fail = support_fail = 0
    ratios = []
    for density in (0.5, 0.75, 0.9, 1.0):
        size = int(round(density * bb.size))
        a = IntSet(rng.choice(bb, size=size, replace=False))
        li = containment_incidence(a, b)
        inst = li.instance
        i = count_incidences(inst)
        bound_fail += not st_bound_check(inst.num_points, inst.num_lines, i, 4)
        ratios.append(i / ((inst.num_points * inst.num_lines) ** (2 / 3) + inst.num_points + inst.num_lines))
        _, viol = line_support_check(li, a)
        support_fail += viol
    ok = mismatches == 0 and bound_fail == 0 and support_fail == 0
    record_acceptance(11, "incidences match brute force; c=4 bound and per-line support hold", ok,
                      f"mismatches={mismatches} bound_failures={bound_fail} support_violations={support_fail} "
                      f"max_ratio={max(ratios):.3f}")
    assert ok


def test_12_plunnecke():
    rng = rng_for(12)
    violations = 0
    for _ in range(100):
        n = int(rng.integers(1, 41))
        hi = int(rng.choice([n + 5, 4 * n, 10**3, 10**5]))
        u = IntSet(rng.choice(hi, n, replace=False))
        K = doubling_ratio(u)
        for m in range(5):
            for k in range(5 - m):
                if m + k == 0:
                    continue
                violations += len(iterated_sum_difference(u, m, k)) > K ** (m + k) * n
    record_acceptance(12, "|mA - kA| <= K^(m+k)|A| for m+k <= 4 on 100 sets", violations == 0,
                      f"violations={violations}")
    assert violations == 0


def test_13_tension():
    rep = omega_tension(Gap.interval(1, 1000), Gap.interval(1, 1000), Gap.interval(1, 10**6),
                        delta=1.0, sample=10**4, seed=SEED)
    ok = rep.violations == 0 and rep.gap >= 1.5
    record_acceptance(13, "tension: zero superadditivity violations and mean gap >= 1.5", ok,
                      f"mean_pair_sum={rep.mean_pair_sum} mean_p3={rep.mean_p3} gap={rep.gap:.4f} "
                      f"violations={rep.violations}")
    assert ok


CLI_RUNS = {
    "multtable": [],
    "energy-decay": [],
    "search": [],
    "pipeline": [],
    "tension": ["--sample", "2000", "--seed", "7"],
    "omega-stats": ["--n-list", "10000,100000"],
    "energy": ["--set-file", "{set_file}"],
    "sumset": ["--set-file", "{set_file}"],
}


def test_14_cli_determinism(tmp_path):
    set_file = tmp_path / "set.txt"
    set_file.write_text("# sample\n1\n2\n3\n5\n8\n13\n21\n")
    env = dict(os.environ, DOUBLING_LAB_THREADS="2")
    differing = []
    for cmd, extra in CLI_RUNS.items():
        args = [a.format(set_file=set_file) for a in extra]
        for fmt in ("csv", "json"):
            outputs = []
            for attempt in range(2):
                out = tmp_path / f"{cmd}.{attempt}.{fmt}"
                proc = subprocess.run(
                    [sys.executable, "-m", "doubling_lab.cli", cmd, *args, "--format", fmt, "--out", str(out)],
                    capture_output=True, env=env)
                if proc.returncode != 0:
                    differing.append(f"{cmd}/{fmt} exit {proc.returncode}: {proc.stderr.decode()[-200:]}")
                outputs.append(out.read_bytes() if out.exists() else None)
            if outputs[0] is None or outputs[0] != outputs[1]:
                differing.append(f"{cmd}/{fmt}")
    record_acceptance(14, "every CLI subcommand is byte-identical on rerun", not differing,
                      f"subcommands={len(CLI_RUNS)} formats=2 problems={differing}")
    assert not differing
