"""Acceptance criteria, one test each.

Every test records a PASS/FAIL line (shown in the pytest terminal summary and
on stdout when run as a script) with the measured quantity and runtime.
"""

from __future__ import annotations

import random
import statistics
import time
from fractions import Fraction as F

import numpy as np
import pytest

from mskkt.graph import Graph, clique_number, complement, induced_subgraph, is_regular, subgraph_automorphisms
from mskkt.kkt import (
    ParametricProgram,
    Verdict,
    classify,
    is_gkkt,
    kkt_points,
    objective,
    scan,
    solve_on_support,
    symmetrize,
)
from mskkt.replicator import integrate, kkt_residual, random_interior_point
from mskkt.simplex import characteristic_vector, induced_partition, support
from mskkt.structure import (
    detect_generalized_star,
    density_matrix,
    forward_reduction_theorem,
    genstar_kkt_point,
    highly_regular_partitions,
    lift,
    reduce,
    reduced_kkt_check,
    shared_core_analysis,
    solve_reduced,
)

from conftest import ACCEPTANCE_LINES, atlas_graphs, brute_clique_number, labeled_graphs

C_SWEEP = (F(-2), F(0), F(1, 2), F(1), F(3))
Q = (F(1, 4), F(1, 4), F(1, 2))


def record(num: int, title: str, ok: bool, detail: str, seconds: float, limit: float | None = None) -> None:
    timing = f"{seconds:.4g}s" if limit is None else f"{seconds:.4g}s (limit {limit:g}s)"
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {title} -- {detail}; {timing}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def random_graph(rng: random.Random, n: int, p: float = 0.5) -> Graph:
    return Graph(n, [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1) if rng.random() < p])


def random_point(rng: random.Random, n: int, max_den: int = 12) -> tuple:
    while True:
        w = [rng.randint(0, max_den) for _ in range(n)]
        if sum(w):
            return tuple(F(v, sum(w)) for v in w)


def test_c01_cherry_point():
    g = Graph(3, [(1, 3), (2, 3)])
    p = ParametricProgram(g, 0)
    verdict = classify(p, Q).verdict
    times = []
    for _ in range(200):
        t0 = time.perf_counter()
        classify(p, Q)
        times.append(time.perf_counter() - t0)
    med = statistics.median(times)
    ok = verdict is Verdict.KKT and med < 1e-3
    record(1, "cherry (1/4,1/4,1/2) is KKT at c=0", ok, f"verdict {verdict.value}, median classify time {med * 1e6:.1f}us", med, 1e-3)
    assert ok


def test_c02_characteristic_vectors():
    t0 = time.perf_counter()
    failures = checks = 0
    for g in labeled_graphs(4):
        for mask in range(1, 16):
            s = {i + 1 for i in range(4) if mask >> i & 1}
            reg = is_regular(induced_subgraph(g, s)[0])[0]
            x = characteristic_vector(4, s)
            for c in C_SWEEP:
                checks += 1
                if (classify(ParametricProgram(g, c), x).verdict is not Verdict.NOT_STATIONARY) != reg:
                    failures += 1
    dt = time.perf_counter() - t0
    ok = failures == 0 and checks == 64 * 15 * 5 and dt < 10
    record(2, "characteristic vector stationary iff induced subgraph regular", ok, f"{checks} checks, {failures} failures", dt, 10)
    assert ok


def test_c03_complement_duality():
    rng = random.Random(2024)
    t0 = time.perf_counter()
    failures = members = 0
    for k in range(1000):
        n = rng.randint(1, 7)
        g = random_graph(rng, n, rng.random())
        c = F(rng.randint(-36, 36), 12)
        if k % 2:
            x = random_point(rng, n)
        else:
            # a solved stationary point of (G, 1-c) so that both sides are often true
            s = rng.sample(range(1, n + 1), rng.randint(1, n))
            sol = scan_one(g, 1 - c, s)
            x = sol if sol is not None else random_point(rng, n)
        lhs = is_gkkt(ParametricProgram(complement(g), c), x)
        rhs = is_gkkt(ParametricProgram(g, 1 - c), x)
        members += lhs
        failures += lhs != rhs
    dt = time.perf_counter() - t0
    ok = failures == 0 and dt < 30
    record(3, "gKKT(complement, c) == gKKT(G, 1-c)", ok, f"1000 triples, {members} members, {failures} failures", dt, 30)
    assert ok


def scan_one(g: Graph, c, s):
    sol = solve_on_support(ParametricProgram(g, c), s)
    return sol.points[0] if sol else None


def test_c04_symmetrization():
    rng = random.Random(7)
    t0 = time.perf_counter()
    failures = points = 0
    for _ in range(50):
        g = random_graph(rng, rng.randint(1, 6), rng.random())
        c = rng.choice(C_SWEEP)
        p = ParametricProgram(g, c)
        for sol in scan(p):
            group = subgraph_automorphisms(g, sol.support)
            for x in sol:
                points += 1
                xs = symmetrize(p, x, group)
                good = (
                    support(xs) == support(x)
                    and classify(p, xs).verdict is not Verdict.NOT_STATIONARY
                    and all(xs[sg[i] - 1] == xs[i - 1] for sg in group for i in sol.support)
                )
                failures += not good
    dt = time.perf_counter() - t0
    ok = failures == 0 and points > 0
    record(4, "symmetrized stationary points stay stationary with the same support", ok, f"50 graphs, {points} points, {failures} failures", dt)
    assert ok


def test_c05_reduction_round_trip():
    t0 = time.perf_counter()
    failures = lifted = reduced = 0
    graphs = atlas_graphs(5)
    for g in graphs:
        n = g.n
        families = []
        for mask in range(1, 1 << n):
            s = {i + 1 for i in range(n) if mask >> i & 1}
            families.extend(highly_regular_partitions(g, s))
        for c in C_SWEEP:
            p = ParametricProgram(g, c)
            for fam in families:
                rp = reduce(g, c, fam)
                for y in solve_reduced(rp).points:
                    lifted += 1
                    failures += not is_gkkt(p, lift(rp, y, n))
            for sol in scan(p):
                for x in sol:
                    reduced += 1
                    failures += not forward_reduction_theorem(g, c, x, induced_partition(x))
    dt = time.perf_counter() - t0
    ok = failures == 0 and dt < 120
    record(
        5,
        "lift of reduced solutions is stationary and reductions of stationary points solve the reduced program",
        ok,
        f"{len(graphs)} graphs, {lifted} lifts, {reduced} reductions, {failures} failures",
        dt,
        120,
    )
    assert ok


def test_c06_counterexample():
    t0 = time.perf_counter()
    g = Graph(4, [(1, 2), (1, 3), (1, 4), (3, 4)])
    fam = [{1, 2}, {3, 4}]
    h = F(1, 2)
    dm = density_matrix(g, fam)
    ok = dm.D == ((h, h), (h, h)) and dm.Lambda == ((2, 0), (0, 2))
    xv = characteristic_vector(4, {1, 2, 3, 4})
    for c in (F(-1), F(0), h, F(1), F(2)):
        ok &= reduced_kkt_check(reduce(g, c, fam), (h, h))
        ok &= classify(ParametricProgram(g, c), xv).verdict is Verdict.NOT_STATIONARY
    dt = time.perf_counter() - t0
    record(6, "reduced check holds for y=(1/2,1/2) while the full point fails", ok, "D all 1/2, Lambda diag(2,2), 5 values of c", dt)
    assert ok


def test_c07_star_point():
    t0 = time.perf_counter()
    g = Graph(3, [(1, 3), (2, 3)])
    gs = detect_generalized_star(g, {3}, {1, 2})
    x = genstar_kkt_point(gs, 0)
    ok = x == Q
    record(7, "generalized star point of the cherry at c=0", ok, f"got {tuple(str(v) for v in x)}", time.perf_counter() - t0)
    assert ok


def test_c08_shared_core():
    t0 = time.perf_counter()
    g = Graph(5, [(1, 2), (1, 3), (2, 3), (1, 4), (1, 5), (4, 5)])
    rep = shared_core_analysis(g, [{1, 2, 3}, {1, 4, 5}], 0)
    ok = (
        rep.q == 2
        and rep.b == 3
        and rep.c0 == -1
        and is_gkkt(ParametricProgram(g, 0), rep.point)
        and support(rep.point) == set(range(1, 6))
        and rep.outside_hull
        and not rep.equals_mean
    )
    record(8, "two triangles sharing a vertex: stationary full-support point outside the hull", ok,
           f"point {tuple(str(v) for v in rep.point)}, c0={rep.c0}, b={rep.b}", time.perf_counter() - t0)
    assert ok


def test_c09_motzkin_straus():
    t0 = time.perf_counter()
    failures = 0
    printed_matches = 0
    graphs = atlas_graphs(6)
    for g in graphs:
        p = ParametricProgram(g, 0)
        best = max(objective(p, x) for x in kkt_points(p))
        omega = brute_clique_number(g)
        assert omega == clique_number(g)
        failures += best != 1 - F(1, omega)
        printed_matches += best == F(1, omega) + 1
    dt = time.perf_counter() - t0
    ok = failures == 0 and dt < 60
    record(9, "max f_0 over KKT points equals 1 - 1/omega", ok,
           f"{len(graphs)} graphs, {failures} failures; printed 1/omega + 1 matched {printed_matches} times", dt, 60)
    assert ok


def test_c10_replicator():
    rng = np.random.default_rng(10)
    prng = random.Random(10)
    t0 = time.perf_counter()
    runs = good = monotone = 0
    worst = 0.0
    for _ in range(20):
        g = random_graph(prng, prng.randint(2, 10), prng.uniform(0.2, 0.8))
        for _ in range(20):
            x0 = random_interior_point(g.n, rng)
            traj = integrate(g, 0.5, x0, 500.0, 0.01)
            r = kkt_residual(g, 0.5, traj.terminal)
            worst = max(worst, r)
            runs += 1
            good += r < 1e-5
            monotone += traj.is_monotone(1e-9)
    dt = time.perf_counter() - t0
    frac = good / runs
    ok = frac >= 0.95 and monotone == runs and dt < 120
    record(10, "replicator terminal states are KKT and f_c is monotone", ok,
           f"{runs} runs, residual<1e-5 in {frac:.1%} (worst {worst:.2e}), monotone {monotone}/{runs}", dt, 120)
    assert ok


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
