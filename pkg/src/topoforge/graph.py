"""Regular graph representation, validation, hop distances and scalar metrics."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from fractions import Fraction
from functools import cached_property
from typing import Iterable

import numpy as np

from .errors import Disconnected, GirthUndefined, NotRegular, NotSimple, RingMissing

Edge = tuple[int, int]


def _norm(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


def round_half_up(x: Fraction | float | int, places: int = 2) -> Decimal:
    """Round to a fixed number of decimals, ties away from zero.

    Fractions are converted through their exact decimal quotient so that
    e.g. 4.265 rounds up regardless of binary float representation.
    """
    if isinstance(x, Fraction):
        value = Decimal(x.numerator) / Decimal(x.denominator)
    elif isinstance(x, int):
        value = Decimal(x)
    else:
        value = Decimal(repr(float(x)))
    return value.quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_UP)


@dataclass(frozen=True)
class RegularGraph:
    """A validated simple, connected, k-regular graph on vertices 0..n-1.

    ``ring=True`` declares that the cycle 0-1-...-(n-1)-0 is embedded in the
    edge set. It is never inferred.
    """

    n: int
    k: int
    edges: tuple[Edge, ...]
    ring: bool = False
    name: str = ""

    def __post_init__(self):
        _validate(self.n, self.k, self.edges, self.ring)

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        nbrs: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        return tuple(tuple(sorted(x)) for x in nbrs)

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return _norm(u, v) in self.edge_set

    def ring_edges(self) -> frozenset[Edge]:
        if not self.ring:
            return frozenset()
        return frozenset(_norm(i, (i + 1) % self.n) for i in range(self.n))

    def chords(self) -> tuple[Edge, ...]:
        """Edges that are not part of the declared Hamiltonian ring."""
        ring = self.ring_edges()
        return tuple(e for e in self.edges if e not in ring)

    def relabel(self, perm, ring: bool = False, name: str | None = None) -> RegularGraph:
        """Return the graph with vertex ``v`` renamed ``perm[v]``."""
        edges = [(int(perm[u]), int(perm[v])) for u, v in self.edges]
        return build_graph(self.n, self.k, edges, ring=ring, name=self.name if name is None else name)

    def with_name(self, name: str) -> RegularGraph:
        return RegularGraph(self.n, self.k, self.edges, self.ring, name)


def _validate(n: int, k: int, edges: tuple[Edge, ...], ring: bool) -> None:
    if n < 3:
        raise NotSimple(f"need at least 3 vertices, got n={n}")
    seen: set[Edge] = set()
    deg = [0] * n
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise NotSimple(f"edge ({u}, {v}) references a vertex outside [0, {n})")
        if u == v:
            raise NotSimple(f"self-loop at vertex {u}")
        e = _norm(u, v)
        if e in seen:
            raise NotSimple(f"duplicate edge {e}")
        seen.add(e)
        deg[u] += 1
        deg[v] += 1
    for v, d in enumerate(deg):
        if d != k:
            raise NotRegular(f"vertex {v} has degree {d}, expected {k}")
    if ring:
        for i in range(n):
            if _norm(i, (i + 1) % n) not in seen:
                raise RingMissing(f"ring edge ({i}, {(i + 1) % n}) absent")
    # connectivity
    nbrs: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        nbrs[u].append(v)
        nbrs[v].append(u)
    mark = [False] * n
    mark[0] = True
    stack = [0]
    count = 1
    while stack:
        u = stack.pop()
        for w in nbrs[u]:
            if not mark[w]:
                mark[w] = True
                count += 1
                stack.append(w)
    if count != n:
        raise Disconnected(f"graph has a component of size {count} < {n}")


def build_graph(n: int, k: int, edges: Iterable[Edge], ring: bool = False, name: str = "") -> RegularGraph:
    """Validate an edge list and return it as a canonical RegularGraph.

    Edges are normalised to ``(min, max)`` and sorted. Raises NotSimple,
    NotRegular, RingMissing or Disconnected (checked in that order).
    """
    normed = sorted(_norm(int(u), int(v)) for u, v in edges)
    return RegularGraph(int(n), int(k), tuple(normed), bool(ring), name)


@dataclass(frozen=True)
class DistanceMatrix:
    n: int
    d: np.ndarray = field(repr=False)

    def __getitem__(self, ij):
        return int(self.d[ij])

    def total(self) -> int:
        """Sum of distances over unordered distinct pairs."""
        return int(self.d.sum()) // 2

    def eccentricities(self) -> np.ndarray:
        return self.d.max(axis=1)


def bfs_distances(g: RegularGraph, source: int) -> list[int]:
    dist = [-1] * g.n
    dist[source] = 0
    adj = g.adjacency
    q = deque([source])
    while q:
        u = q.popleft()
        du = dist[u] + 1
        for w in adj[u]:
            if dist[w] < 0:
                dist[w] = du
                q.append(w)
    return dist


def all_pairs_distances(g: RegularGraph) -> DistanceMatrix:
    """Hop distances by one breadth-first traversal per source."""
    rows = [bfs_distances(g, s) for s in range(g.n)]
    return DistanceMatrix(g.n, np.array(rows, dtype=np.int64))


def girth(g: RegularGraph) -> int:
    """Length of the shortest cycle, via a BFS from every root.

    A non-tree edge (u, w) met from ``u`` closes a cycle of length at most
    ``dist[u] + dist[w] + 1``; minimising over roots gives the exact girth.
    """
    best = None
    adj = g.adjacency
    for root in range(g.n):
        dist = [-1] * g.n
        parent = [-1] * g.n
        dist[root] = 0
        q = deque([root])
        while q:
            u = q.popleft()
            if best is not None and 2 * dist[u] >= best:
                break
            for w in adj[u]:
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    q.append(w)
                elif w != parent[u]:
                    c = dist[u] + dist[w] + 1
                    if best is None or c < best:
                        best = c
    if best is None:
        raise GirthUndefined("graph is acyclic")
    return best


def cable_length_1d(g: RegularGraph) -> int:
    """Total cable length with vertices placed at ring positions 0..n-1."""
    n = g.n
    return sum(min(v - u, n - (v - u)) for u, v in g.edges)


@dataclass(frozen=True)
class GraphMetrics:
    diameter: int
    distance_sum: int
    pairs: int
    girth: int
    cable_1d: int

    @property
    def mpl_exact(self) -> Fraction:
        return Fraction(self.distance_sum, self.pairs)

    @property
    def mpl(self) -> float:
        return self.distance_sum / self.pairs

    def mpl_rounded(self, places: int = 2) -> Decimal:
        return round_half_up(self.mpl_exact, places)


def compute_metrics(g: RegularGraph, dist: DistanceMatrix | None = None) -> GraphMetrics:
    if dist is None:
        dist = all_pairs_distances(g)
    n = g.n
    return GraphMetrics(
        diameter=int(dist.d.max()),
        distance_sum=dist.total(),
        pairs=n * (n - 1) // 2,
        girth=girth(g),
        cable_1d=cable_length_1d(g),
    )
