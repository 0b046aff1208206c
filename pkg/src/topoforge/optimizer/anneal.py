"""Simulated annealing over ring-embedded regular graphs.

The Hamiltonian ring 0-1-...-(n-1)-0 is never touched, so every candidate is
connected. Moves swap the endpoints of two non-ring chords (2-opt style).
With rotation order ``s > 1``, chords are kept in orbits under rotation by
n/s and whole orbits are swapped, so the result is rotation invariant.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from ..bounds import mpl_lower_bound, shell_profile
from ..errors import BadParams, InitFailure
from ..graph import RegularGraph, build_graph, cable_length_1d, compute_metrics
from . import _kernel

INIT_ATTEMPTS = 10_000


@dataclass(frozen=True)
class SAConfig:
    n: int
    k: int
    t_start: float = 1.0
    t_end: float = 1e-4
    n_iter: int = 1_000_000
    symmetry: int = 1
    seed: int = 0
    stop_at_bound: bool = False
    trace_every: int = 0

    def __post_init__(self):
        if self.k < 3:
            raise BadParams("k must be >= 3; the ring is the only connected 2-regular graph")
        if self.k >= self.n or (self.n * self.k) % 2:
            raise BadParams(f"no (n={self.n}, k={self.k}) simple regular graph")
        if not (self.t_start >= self.t_end > 0):
            raise BadParams("need t_start >= t_end > 0")
        if self.n_iter < 1:
            raise BadParams("n_iter must be >= 1")
        if self.symmetry < 1 or self.n % self.symmetry:
            raise BadParams(f"symmetry {self.symmetry} does not divide n={self.n}")


@dataclass(frozen=True)
class SearchResult:
    best: RegularGraph
    best_mpl: Fraction
    bound: Fraction
    iterations_used: int
    accept_count: int
    proposals: int = 0
    graphs_inspected: int = 0
    seed: int = 0
    trace: np.ndarray | None = field(default=None, repr=False, compare=False)

    @property
    def gap(self) -> Fraction:
        return self.best_mpl - self.bound

    @property
    def acceptance_ratio(self) -> float:
        return self.accept_count / self.iterations_used if self.iterations_used else 0.0


def cooling_rate(t_start: float, t_end: float, n_iter: int) -> float:
    """Geometric factor taking ``t_start`` to ``t_end`` in ``n_iter`` steps."""
    if not (t_start >= t_end > 0) or n_iter < 1:
        raise BadParams("need t_start >= t_end > 0 and n_iter >= 1")
    return math.exp(math.log(t_end / t_start) / n_iter)


def symmetric_orbit(n: int, s: int, edge: tuple[int, int]) -> list[tuple[int, int]]:
    """Orbit of ``edge`` under rotation by n/s, as sorted pairs in rotation order."""
    if s < 1 or n % s:
        raise BadParams(f"s={s} does not divide n={n}")
    r = n // s
    u, v = edge
    out: list[tuple[int, int]] = []
    for j in range(s):
        a, b = (u + j * r) % n, (v + j * r) % n
        e = (a, b) if a < b else (b, a)
        if e not in out:
            out.append(e)
    return out


def edge_swap_candidate(g: RegularGraph, rng: np.random.Generator) -> RegularGraph | None:
    """Rewire two random chords (a,b),(c,d) into (a,c),(b,d) or (a,d),(b,c).

    Returns None when the draw is unusable (shared endpoint, or the rewire
    would duplicate an existing edge); the caller resamples.
    """
    if not g.ring:
        raise BadParams("edge swaps need a ring-embedded graph")
    chords = list(g.chords())
    if len(chords) < 2:
        raise BadParams("need at least two non-ring edges to swap")
    i, j = rng.choice(len(chords), size=2, replace=False)
    (a, b), (c, d) = chords[i], chords[j]
    if len({a, b, c, d}) < 4:
        return None
    if rng.random() < 0.5:
        new = [(a, c), (b, d)]
    else:
        new = [(a, d), (b, c)]
    if any(g.has_edge(u, v) for u, v in new):
        return None
    edges = [e for e in g.edges if e not in (chords[i], chords[j])] + new
    return build_graph(g.n, g.k, edges, ring=True, name=g.name)


def random_start(n: int, k: int, s: int, rng: np.random.Generator) -> list[tuple[int, int]]:
    """Orbit representatives of a random rotation-invariant chord set.

    Each vertex needs k-2 chords. Orbits are added one at a time between
    random deficient vertices; a dead end restarts from the bare ring.
    """
    r = n // s
    ring = {(min(i, (i + 1) % n), max(i, (i + 1) % n)) for i in range(n)}
    for _ in range(INIT_ATTEMPTS):
        deficit = [k - 2] * n
        used = set(ring)
        reps: list[tuple[int, int]] = []
        while True:
            open_v = [v for v in range(r) if deficit[v] > 0]
            if not open_v:
                break
            u = open_v[int(rng.integers(len(open_v)))]
            cands = []
            for v in range(n):
                if v == u or deficit[v] <= 0:
                    continue
                orb = symmetric_orbit(n, s, (u, v))
                if any(e in used for e in orb):
                    continue
                inc: dict[int, int] = {}
                for a, b in orb:
                    inc[a] = inc.get(a, 0) + 1
                    inc[b] = inc.get(b, 0) + 1
                if all(deficit[x] >= c for x, c in inc.items()):
                    cands.append((v, orb, inc))
            if not cands:
                break
            v, orb, inc = cands[int(rng.integers(len(cands)))]
            used.update(orb)
            for x, c in inc.items():
                deficit[x] -= c
            reps.append(orb[0])
        if all(d == 0 for d in deficit):
            return reps
    raise InitFailure(f"no rotation-{s} start graph for (n={n}, k={k}) after {INIT_ATTEMPTS} attempts")


def _edges_from_reps(n: int, s: int, reps) -> list[tuple[int, int]]:
    ring = [(min(i, (i + 1) % n), max(i, (i + 1) % n)) for i in range(n)]
    chords = [e for rep in reps for e in symmetric_orbit(n, s, (int(rep[0]), int(rep[1])))]
    return ring + chords


def _state_arrays(n: int, k: int, edges):
    adj = np.zeros((n, n), dtype=np.int8)
    nbr = np.zeros((n, k), dtype=np.int64)
    deg = np.zeros(n, dtype=np.int64)
    for u, v in edges:
        adj[u, v] = adj[v, u] = 1
        nbr[u, deg[u]] = v
        deg[u] += 1
        nbr[v, deg[v]] = u
        deg[v] += 1
    return adj, nbr, deg


def sa_search(config: SAConfig) -> SearchResult:
    """Anneal one chain; deterministic for a given config."""
    n, k, s = config.n, config.k, config.symmetry
    rng = np.random.default_rng(config.seed)
    reps = random_start(n, k, s, rng)
    n_chords = n * (k - 2) // 2
    if n_chords < 2:
        raise InitFailure(f"(n={n}, k={k}) has fewer than two chords; nothing to swap")
    kernel_seed = int(rng.integers(0, 2**32 - 1))
    adj, nbr, deg = _state_arrays(n, k, _edges_from_reps(n, s, reps))
    rep_buf = np.zeros((n_chords, 2), dtype=np.int64)
    rep_buf[: len(reps)] = reps
    bound = mpl_lower_bound(n, k)
    stop_sum = n * sum(i * c for i, c in enumerate(shell_profile(n, k).shell_sizes, 1)) if config.stop_at_bound else -1
    gamma = cooling_rate(config.t_start, config.t_end, config.n_iter)
    rows = config.n_iter // config.trace_every if config.trace_every > 0 else 0
    trace = np.zeros((rows, 4), dtype=np.float64)
    best_reps, best_m, best_sum, iters, accepted, proposals, used_rows = _kernel.anneal(
        adj, nbr, deg, rep_buf, len(reps), k, s, kernel_seed,
        float(config.t_start), gamma, float(config.t_end), int(config.n_iter),
        int(stop_sum), int(config.trace_every), trace,
    )
    best_reps = best_reps[:best_m]
    best = build_graph(n, k, _edges_from_reps(n, s, best_reps), ring=True, name=f"sa:{n},{k}")
    best_mpl = Fraction(int(best_sum), n * (n - 1))
    check = compute_metrics(best).mpl_exact
    if check != best_mpl:
        raise AssertionError(f"kernel distance sum disagrees with BFS: {best_mpl} != {check}")
    return SearchResult(
        best=best, best_mpl=best_mpl, bound=bound, iterations_used=int(iters),
        accept_count=int(accepted), proposals=int(proposals), seed=config.seed,
        trace=trace[:used_rows] if rows else None,
    )


def _chain(config: SAConfig) -> SearchResult:
    return sa_search(config)


def default_jobs() -> int:
    env = os.environ.get("TOPOFORGE_JOBS")
    return max(1, int(env)) if env else 1


def multi_start(config: SAConfig, chains: int = 1, jobs: int | None = None) -> SearchResult:
    """Best of ``chains`` independent runs with seeds seed, seed+1, ...

    Ties on MPL go to the lower 1D cable length, then the lower chain index,
    so the result never depends on worker scheduling.
    """
    if chains < 1:
        raise BadParams("chains must be >= 1")
    configs = [replace(config, seed=config.seed + i) for i in range(chains)]
    jobs = default_jobs() if jobs is None else jobs
    if jobs > 1 and chains > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, chains)) as pool:
            results = list(pool.map(_chain, configs))
    else:
        results = [sa_search(c) for c in configs]
    idx = min(range(chains), key=lambda i: (results[i].best_mpl, cable_length_1d(results[i].best), i))
    return results[idx]
