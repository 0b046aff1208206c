"""Static shortest-path routing tables and per-link load accounting.

Distances come from Floyd-Warshall over the hop metric. By default the next
hop from ``s`` toward ``d`` is the smallest-index neighbour of ``s`` that is
one hop closer to ``d``. The ``balanced`` tie-break instead spreads uniform
all-to-all traffic greedily over the equal-length choices. Each undirected
edge is two independent directed channels.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .errors import BadParams
from .graph import RegularGraph

TIE_BREAKS = ("lowest", "balanced")

_INF = np.iinfo(np.int64).max // 4


def floyd_warshall(g: RegularGraph) -> np.ndarray:
    n = g.n
    d = np.full((n, n), _INF, dtype=np.int64)
    np.fill_diagonal(d, 0)
    for u, v in g.edges:
        d[u, v] = d[v, u] = 1
    for m in range(n):
        np.minimum(d, d[:, m, None] + d[None, m, :], out=d)
    return d


@dataclass(frozen=True)
class RoutingTable:
    n: int
    next_hop: np.ndarray = field(repr=False)  # -1 on the diagonal
    dist: np.ndarray = field(repr=False)

    def path(self, s: int, d: int) -> list[int]:
        return trace_path(self, s, d)


def build_routing(g: RegularGraph, tie_break: str = "lowest") -> RoutingTable:
    """Shortest-path next-hop table.

    ``lowest`` picks the smallest-index closer neighbour. ``balanced`` walks
    each destination's in-tree from the farthest level inward and sends every
    vertex's accumulated all-to-all flow over the closer neighbour whose
    outgoing link is least loaded so far (ties to the smaller index).
    Both are deterministic.
    """
    if tie_break not in TIE_BREAKS:
        raise BadParams(f"unknown tie-break {tie_break!r}; choose from {', '.join(TIE_BREAKS)}")
    dist = floyd_warshall(g)
    nh = _lowest_next_hop(g, dist) if tie_break == "lowest" else _balanced_next_hop(g, dist)
    nh.setflags(write=False)
    dist.setflags(write=False)
    return RoutingTable(g.n, nh, dist)


def _lowest_next_hop(g: RegularGraph, dist: np.ndarray) -> np.ndarray:
    n = g.n
    nh = np.full((n, n), -1, dtype=np.int64)
    for s in range(n):
        # adjacency is sorted, so the first neighbour found one hop closer wins
        nbrs = np.array(g.adjacency[s], dtype=np.int64)
        closer = dist[nbrs, :] == dist[s, :][None, :] - 1  # (deg, n)
        first = np.argmax(closer, axis=0)
        nh[s, :] = nbrs[first]
        nh[s, s] = -1
    return nh


def _balanced_next_hop(g: RegularGraph, dist: np.ndarray) -> np.ndarray:
    n = g.n
    adj = g.adjacency
    nh = np.full((n, n), -1, dtype=np.int64)
    load = [dict.fromkeys(adj[u], 0) for u in range(n)]
    dl = dist.tolist()
    for d in range(n):
        col = [row[d] for row in dl]
        carried = [1] * n
        carried[d] = 0
        by_level: dict[int, list[int]] = {}
        for v in range(n):
            by_level.setdefault(col[v], []).append(v)
        for level in range(max(col), 0, -1):
            for s in by_level.get(level, ()):
                lu = load[s]
                w = min((x for x in adj[s] if col[x] == level - 1), key=lambda x: (lu[x], x))
                nh[s, d] = w
                lu[w] += carried[s]
                carried[w] += carried[s]
    return nh


def trace_path(rt: RoutingTable, s: int, d: int) -> list[int]:
    path = [s]
    v = s
    while v != d:
        v = int(rt.next_hop[v, d])
        path.append(v)
        if len(path) > rt.n:
            raise RuntimeError(f"routing loop between {s} and {d}")
    return path


@dataclass
class LinkLoads:
    load: dict[tuple[int, int], float]

    def max(self) -> float:
        return max(self.load.values(), default=0)

    def total(self) -> float:
        return sum(self.load.values())


def _load_matrix(rt: RoutingTable, weights: np.ndarray) -> np.ndarray:
    """Directed link loads for a dense (n, n) traffic matrix.

    Traffic toward each destination ``d`` is pushed down the in-tree formed
    by ``next_hop[:, d]`` from the farthest sources inward, so every flow is
    charged once per hop of its route.
    """
    n = rt.n
    load = np.zeros((n, n), dtype=weights.dtype)
    for d in range(n):
        carried = weights[:, d].copy()
        carried[d] = 0
        col = rt.dist[:, d]
        hop = rt.next_hop[:, d]
        for level in range(int(col.max()), 0, -1):
            vs = np.flatnonzero(col == level)
            ws = hop[vs]
            load[vs, ws] += carried[vs]
            np.add.at(carried, ws, carried[vs])
    return load


def link_loads(rt: RoutingTable, traffic: Mapping[tuple[int, int], float] | Iterable) -> LinkLoads:
    """Accumulate traffic weights on every directed edge along each route.

    ``traffic`` maps (s, d) to a non-negative weight, or is an iterable of
    (s, d, w) triples.
    """
    items = traffic.items() if isinstance(traffic, Mapping) else (((s, d), w) for s, d, w in traffic)
    load: dict[tuple[int, int], float] = {}
    for (s, d), w in items:
        if s == d or w == 0:
            continue
        p = trace_path(rt, s, d)
        for a, b in zip(p, p[1:]):
            load[(a, b)] = load.get((a, b), 0) + w
    return LinkLoads(load)


def alltoall_loads(rt: RoutingTable, w=1) -> np.ndarray:
    """Dense directed-load matrix for uniform all-to-all traffic of weight ``w``."""
    weights = np.full((rt.n, rt.n), w, dtype=np.int64 if isinstance(w, int) else np.float64)
    np.fill_diagonal(weights, 0)
    return _load_matrix(rt, weights)


def pattern_loads(rt: RoutingTable, pairs: Iterable[tuple[int, int]], w=1) -> np.ndarray:
    weights = np.zeros((rt.n, rt.n), dtype=np.int64 if isinstance(w, int) else np.float64)
    for s, d in pairs:
        if s != d:
            weights[s, d] += w
    return _load_matrix(rt, weights)
