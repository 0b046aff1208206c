"""Exhaustive minimum-MPL search over tiny regular graphs.

Graphs are generated in breadth-first canonical labelling: vertices are
completed in label order, and any neighbour not yet seen receives the next
unused label. Every connected k-regular graph has at least one such
labelling (label it by a BFS from any root), so the enumeration is complete
up to isomorphism while skipping all labellings that differ only by
renaming undiscovered vertices.
"""
from __future__ import annotations

from collections import deque
from fractions import Fraction
from itertools import combinations

from ..bounds import mpl_lower_bound
from ..errors import BadParams, NoGraphFound, TooLarge
from ..graph import build_graph
from .anneal import SearchResult

MAX_N = {2: 12, 3: 12}
MAX_N_DEFAULT = 10


def _max_n(k: int) -> int:
    return MAX_N.get(k, MAX_N_DEFAULT)


def _hop(adj: list[set[int]], src: int, dst: int, limit: int) -> int:
    """BFS distance from src to dst, or ``limit`` if it is at least that."""
    if src == dst:
        return 0
    seen = {src}
    frontier = [src]
    for depth in range(1, limit):
        nxt = []
        for u in frontier:
            for w in adj[u]:
                if w == dst:
                    return depth
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        if not nxt:
            break
        frontier = nxt
    return limit


def _distance_sum(adj: list[set[int]], n: int) -> int:
    total = 0
    for s in range(n):
        dist = [-1] * n
        dist[s] = 0
        q = deque([s])
        while q:
            u = q.popleft()
            for w in adj[u]:
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    total += dist[w]
                    q.append(w)
    return total // 2


def enumerate_regular(n: int, k: int, girth_min: int | None = None):
    """Yield the edge lists of all BFS-canonical connected k-regular graphs.

    With ``girth_min`` set, an edge is refused whenever its endpoints are
    already within ``girth_min - 2`` hops, which would close a short cycle.
    """
    adj: list[set[int]] = [set() for _ in range(n)]
    gmin = girth_min or 3

    def rec(v: int, discovered: int):
        if v == n:
            yield [(a, b) for a in range(n) for b in adj[a] if a < b]
            return
        if v >= discovered:
            return  # BFS queue ran dry: disconnected
        need = k - len(adj[v])
        if need == 0:
            yield from rec(v + 1, discovered)
            return
        pool = [u for u in range(v + 1, discovered) if len(adj[u]) < k and u not in adj[v]]
        for t in range(min(need, len(pool)), -1, -1):
            fresh = need - t
            if discovered + fresh > n:
                continue
            for chosen in combinations(pool, t):
                if gmin > 3 and not _girth_ok(v, chosen):
                    continue
                new = list(chosen) + list(range(discovered, discovered + fresh))
                for u in new:
                    adj[v].add(u)
                    adj[u].add(v)
                yield from rec(v + 1, discovered + fresh)
                for u in new:
                    adj[v].discard(u)
                    adj[u].discard(v)

    def _girth_ok(v, chosen) -> bool:
        added = []
        ok = True
        for u in chosen:
            if _hop(adj, v, u, gmin - 1) < gmin - 1:
                ok = False
                break
            adj[v].add(u)
            adj[u].add(v)
            added.append(u)
        for u in added:
            adj[v].discard(u)
            adj[u].discard(v)
        return ok

    for u in range(1, k + 1):
        adj[0].add(u)
        adj[u].add(0)
    yield from rec(1, k + 1)


def hamiltonian_cycle(adj: list[set[int]]) -> list[int] | None:
    """A Hamiltonian cycle through vertex 0 by plain backtracking, or None."""
    n = len(adj)
    path = [0]
    used = [False] * n
    used[0] = True

    def rec() -> bool:
        if len(path) == n:
            return 0 in adj[path[-1]]
        for w in sorted(adj[path[-1]]):
            if not used[w]:
                used[w] = True
                path.append(w)
                if rec():
                    return True
                path.pop()
                used[w] = False
        return False

    return path if rec() else None


def exhaustive_tiny(n: int, k: int, girth_min: int | None = None, hamiltonian: bool = False) -> SearchResult:
    """Minimum-MPL connected (n, k) graph by complete enumeration.

    With ``hamiltonian`` only graphs containing a Hamiltonian cycle count,
    which is the space the annealer explores; the winner is then relabelled
    so that cycle is the ring 0..n-1. Raises TooLarge past the size guard
    (n <= 12 for k <= 3, n <= 10 otherwise) and NoGraphFound when nothing
    qualifies.
    """
    if k < 2 or k >= n or (n * k) % 2:
        raise BadParams(f"no (n={n}, k={k}) simple regular graph")
    if n > _max_n(k):
        raise TooLarge(f"exhaustive search limited to n <= {_max_n(k)} for k={k}, got n={n}")
    best_sum = None
    best_edges = None
    best_cycle = None
    count = 0
    for edges in enumerate_regular(n, k, girth_min):
        count += 1
        adj = [set() for _ in range(n)]
        for a, b in edges:
            adj[a].add(b)
            adj[b].add(a)
        total = _distance_sum(adj, n)
        if best_sum is not None and total >= best_sum:
            continue
        cycle = hamiltonian_cycle(adj) if hamiltonian else None
        if hamiltonian and cycle is None:
            continue
        best_sum, best_edges, best_cycle = total, edges, cycle
    if best_edges is None:
        what = "Hamiltonian " if hamiltonian else ""
        raise NoGraphFound(f"no connected {what}({n},{k}) graph with girth >= {girth_min}")
    best = build_graph(n, k, best_edges, name=f"exhaustive:{n},{k}")
    if best_cycle is not None:
        perm = [0] * n
        for pos, v in enumerate(best_cycle):
            perm[v] = pos
        best = best.relabel(perm, ring=True)
    return SearchResult(
        best=best,
        best_mpl=Fraction(best_sum, n * (n - 1) // 2),
        bound=mpl_lower_bound(n, k),
        iterations_used=0,
        accept_count=0,
        graphs_inspected=count,
    )
