"""Acceptance gate: one check per criterion, each reported as a PASS/FAIL line.

Run with pytest (lines appear in the terminal summary) or directly with
``python3 tests/test_acceptance.py``.
"""
from __future__ import annotations

import hashlib
import time
from decimal import Decimal
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

import numpy as np
from scipy import stats

from topoforge.bounds import diameter_lower_bound, mpl_lower_bound
from topoforge.cli import main as cli_main
from topoforge.generators import generate
from topoforge.graph import all_pairs_distances, compute_metrics, round_half_up
from topoforge.netsim import NetParams, alltoall_time, fit_latency_model, pingpong_samples
from topoforge.optimizer import SAConfig, exhaustive_tiny, sa_search
from topoforge.partition import bisection_exact, bisection_heuristic
from topoforge.routing import alltoall_loads, build_routing, trace_path

RESULTS: list[str] = []


def record(num: int, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {detail}"
    RESULTS.append(line)
    assert ok, line


def r2(x) -> Decimal:
    return round_half_up(x, 2)


@lru_cache(maxsize=None)
def annealed(n, k, n_iter, symmetry=1, seed=1, stop=False):
    t = time.perf_counter()
    res = sa_search(SAConfig(n, k, n_iter=n_iter, symmetry=symmetry, seed=seed, stop_at_bound=stop))
    return res, time.perf_counter() - t


def roster(n):
    fixed = {
        16: ["torus:4x4", "wagner:16", "ring:16"],
        32: ["torus:4x8", "wagner:32", "ring:32"],
        256: ["torus:4x4x4x4", "torus:4x8x8", "torus:16x16", "wagner:256", "ring:256"],
    }[n]
    if n == 16:
        sa = [annealed(16, 4, 1_000_000)[0].best, annealed(16, 3, 1_000_000, stop=True)[0].best]
    elif n == 32:
        sa = [annealed(32, 4, 4_000_000, stop=True)[0].best, annealed(32, 3, 1_000_000, symmetry=4)[0].best]
    else:
        sa = [annealed(256, k, 20_000, symmetry=8)[0].best for k in (8, 6, 4, 3)]
    return sa + [generate(s) for s in fixed]


def test_c1_table1_metrics():
    want = {"ring:16": (8, "4.27"), "ring:32": (16, "8.26"), "wagner:16": (4, "2.60"),
            "wagner:32": (8, "4.61"), "torus:4x4": (4, "2.13"), "torus:4x8": (6, "3.10")}
    t = time.perf_counter()
    got = {s: (m.diameter, str(m.mpl_rounded(2))) for s in want for m in [compute_metrics(generate(s))]}
    dt = time.perf_counter() - t
    record(1, got == want and dt < 1, f"16/32-node golden D/MPL {got} in {dt:.3f}s (< 1 s)")


def test_c2_table4_metrics():
    want = {"torus:4x4x4x4": (None, "4.02"), "torus:4x8x8": (None, "5.02"), "torus:16x16": (16, "8.03"),
            "ring:256": (128, "64.25"), "wagner:256": (64, "32.62")}
    t = time.perf_counter()
    ok = True
    got = {}
    for s, (d, mpl) in want.items():
        m = compute_metrics(generate(s))
        got[s] = (m.diameter, str(m.mpl_rounded(2)))
        ok &= got[s][1] == mpl and (d is None or m.diameter == d)
    dt = time.perf_counter() - t
    record(2, ok and dt < 5, f"256-node golden D/MPL {got} in {dt:.2f}s (< 5 s)")


def test_c3_bounds():
    want = {8: ("2.72", 3), 6: ("3.11", 4), 4: ("4.09", 5), 3: ("5.59", 7)}
    got = {k: (str(r2(mpl_lower_bound(256, k))), diameter_lower_bound(256, k)) for k in want}
    record(3, got == want, f"(256,k) MPL/D lower bounds {got}")


def test_c4_bisection():
    exact = {"ring:16": 2, "wagner:16": 4, "torus:4x4": 8, "ring:32": 2, "wagner:32": 4, "torus:4x8": 8}
    got = {s: bisection_exact(generate(s)).cut for s in exact}
    heur = {"ring:256": 2, "torus:16x16": 32}
    got_h = {s: bisection_heuristic(generate(s), restarts=64, seed=0).cut for s in heur}
    record(4, got == exact and got_h == heur, f"exact BW {got}; heuristic (64 restarts) BW {got_h}")


def test_c5_optimizer_targets():
    t = time.perf_counter()
    r83 = sa_search(SAConfig(8, 3, n_iter=100_000, seed=1, stop_at_bound=True))
    t83 = time.perf_counter() - t
    oracle = exhaustive_tiny(8, 3).best_mpl
    r164, t164 = annealed(16, 4, 1_000_000)
    d164 = compute_metrics(r164.best).diameter
    r163, t163 = annealed(16, 3, 1_000_000, stop=True)
    r324, t324 = annealed(32, 4, 4_000_000, stop=True)
    ok = (r83.best_mpl == oracle == Fraction(11, 7) and t83 < 10
          and r2(r164.best_mpl) <= Decimal("1.75") and d164 == 3 and t164 < 120
          and r2(r163.best_mpl) <= Decimal("2.20")
          and r2(r324.best_mpl) <= Decimal("2.36") and r324.iterations_used <= 4_000_000 and t324 < 900)
    record(5, ok, f"(8,3) {r83.best_mpl} vs oracle {oracle} in {t83:.1f}s; "
                  f"(16,4) MPL {r2(r164.best_mpl)} D={d164} in {t164:.1f}s; "
                  f"(16,3) MPL {r2(r163.best_mpl)} in {t163:.1f}s; "
                  f"(32,4) MPL {r2(r324.best_mpl)} after {r324.iterations_used} iterations in {t324:.1f}s")


def test_c6_oracle_equivalence():
    # The annealer keeps the ring 0..n-1, so its search space is the Hamiltonian
    # graphs; the matching oracle enumerates exactly those. The unrestricted
    # optimum is reported alongside (it differs only for (10,3): Petersen).
    got = {}
    ok = True
    for n, k in [(6, 3), (8, 3), (10, 3), (8, 4), (10, 4)]:
        oracle = exhaustive_tiny(n, k, hamiltonian=True).best_mpl
        free = exhaustive_tiny(n, k).best_mpl
        sa = min(sa_search(SAConfig(n, k, n_iter=200_000, seed=s)).best_mpl for s in range(2))
        got[(n, k)] = f"SA {sa} {'=' if sa == oracle else '!='} oracle {oracle} (any graph: {free})"
        ok &= sa == oracle
    record(6, ok, "SA best = Hamiltonian exhaustive best: " + "; ".join(f"{key}: {v}" for key, v in got.items()))


def test_c7_dragonfly():
    got = {}
    ok = True
    for (a, h), (n, k, mpl) in {(4, 1): (20, 4, Fraction("2.26")), (4, 2): (36, 5, Fraction("2.34"))}.items():
        g = generate(f"dragonfly:{a},{h}")
        m = compute_metrics(g)
        got[(a, h)] = (g.n, g.k, m.diameter, str(r2(m.mpl_exact)))
        ok &= (g.n, g.k, m.diameter) == (n, k, 3) and abs(m.mpl_exact - mpl) <= Fraction(1, 10)
    record(7, ok, f"dragonfly (N, k, D, MPL) {got}; MPL within 0.10")


def test_c8_routing():
    graphs = roster(16) + roster(32) + roster(256) + [generate(s) for s in ("chvatal", "dragonfly:4,1", "dragonfly:4,2")]
    ok = True
    for g in graphs:
        rt = build_routing(g)
        ok &= bool(np.array_equal(rt.dist, all_pairs_distances(g).d))
        ok &= bool(np.array_equal(rt.next_hop, build_routing(g).next_hop))
        step = rt.next_hop.copy()
        np.fill_diagonal(step, np.arange(g.n))
        # distance to every destination drops by exactly one per hop, so no loops
        nxt = rt.dist[step, np.arange(g.n)[None, :]]
        ok &= bool(np.all((nxt == rt.dist - 1) | (rt.dist == 0)))
        if g.n <= 32:
            ok &= all(len(trace_path(rt, s, d)) == rt.dist[s, d] + 1 for s in range(g.n) for d in range(g.n))
    record(8, ok, f"Floyd = BFS, loop-free, deterministic on {len(graphs)} topologies")


def test_c9a_pingpong_fit():
    worst = 0.0
    for n in (16, 32, 256):
        for g in roster(n):
            fit = fit_latency_model(pingpong_samples(g, build_routing(g), NetParams(), 1024))
            worst = max(worst, abs(fit.rho - 1))
    record(9, worst <= 1e-12, f"(a) ping-pong fit |rho - 1| <= {worst:.1e} on all rosters")


def test_c9b_load_conservation():
    m = 1 << 20
    ok = True
    for n in (16, 32, 256):
        for g in roster(n):
            total = int(alltoall_loads(build_routing(g), m).sum())
            ok &= total == m * g.n * (g.n - 1) * compute_metrics(g).mpl_exact
    record(9, ok, "(b) sum of all-to-all link loads = m N(N-1) MPL exactly on all rosters")


def _spearman(graphs, routing, m=1 << 20):
    p = NetParams()
    mpl = [compute_metrics(g).mpl_exact for g in graphs]
    speed = [1 / alltoall_time(g, build_routing(g, routing), p, m) for g in graphs]
    rho = stats.spearmanr([1 / float(x) for x in mpl], speed).statistic
    first = int(np.argmax(speed)) == int(np.argmin(mpl))
    last = graphs[int(np.argmin(speed))].k == 2
    return rho, first, last


def test_c9c_alltoall_rank_correlation():
    parts = []
    ok = True
    for n in (16, 32, 256):
        rho, first, last = _spearman(roster(n), "balanced")
        low, _, _ = _spearman(roster(n), "lowest")
        ok &= rho >= 0.9 and first and last
        parts.append(f"N={n}: rho={rho:.3f} min-MPL first={first} ring last={last} "
                     f"(lowest-index tie-break rho={low:.3f})")
    record(9, ok, "(c) alltoall speed vs 1/MPL, balanced routing, 1 MiB: " + "; ".join(parts))


def _run_commands(root: Path) -> dict[str, str]:
    root.mkdir(parents=True, exist_ok=True)
    cmds = [
        ["generate", "torus:4x8", "-o", str(root / "t48")],
        ["table", "ring:16", "wagner:16", "torus:4x4", "ring:256", "--seed", "3", "-o", str(root / "table.csv")],
        ["optimize", "16", "3", "--iters", "30000", "--chains", "2", "--seed", "5", "--trace-every", "1000",
         "-o", str(root / "opt")],
        ["pipeline", "16", "4", "--iters", "30000", "--symmetry", "4", "--seed", "9", "-o", str(root / "pipe")],
        ["simulate", "--roster", str(root / "t48.json"), "torus:8x4", "--seed", "2", "-o", str(root / "sim.csv")],
        ["route", str(root / "t48.json"), "--dump", "-o", str(root / "route.csv")],
        ["loads", str(root / "t48.json"), "--pattern", "alltoall", "-o", str(root / "loads.csv")],
    ]
    import contextlib
    import io
    for c in cmds:
        with contextlib.redirect_stdout(io.StringIO()):
            if cli_main(c) != 0:
                raise RuntimeError(f"command failed: {c}")
    return {p.name: hashlib.sha256(p.read_bytes()).hexdigest()
            for p in sorted(root.iterdir()) if not p.name.endswith(".manifest.json")}


def test_c10_determinism(tmp_path):
    a = _run_commands(tmp_path / "a")
    b = _run_commands(tmp_path / "b")
    record(10, a == b and len(a) >= 15, f"{len(a)} artifacts from 7 seeded commands hash-identical across reruns")


if __name__ == "__main__":
    import sys
    import tempfile

    failed = 0
    for name, fn in sorted((k, v) for k, v in dict(globals()).items() if k.startswith("test_c")):
        try:
            if "tmp_path" in fn.__code__.co_varnames[: fn.__code__.co_argcount]:
                with tempfile.TemporaryDirectory() as d:
                    fn(Path(d))
            else:
                fn()
        except AssertionError:
            failed += 1
        print(RESULTS[-1] if RESULTS else f"[FAIL] {name}: no result")
    sys.exit(1 if failed else 0)
