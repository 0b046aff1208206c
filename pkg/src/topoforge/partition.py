"""Bisection width: exact branch-and-bound for small graphs, FM refinement beyond."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import BadParams, TooLarge
from .graph import RegularGraph

EXACT_MAX_N = 32


@dataclass(frozen=True)
class PartitionResult:
    cut: int
    side_a: tuple[int, ...]
    exact: bool

    def as_dict(self) -> dict:
        return {"cut": self.cut, "exact": self.exact, "side_a": list(self.side_a)}


def cut_size(g: RegularGraph, side_a) -> int:
    a = set(side_a)
    return sum((u in a) != (v in a) for u, v in g.edges)


def _canonical_side(n: int, side_a) -> tuple[int, ...]:
    side = tuple(sorted(side_a))
    if n % 2 == 0 and 0 not in side:
        in_a = set(side)
        side = tuple(v for v in range(n) if v not in in_a)
    return side


def _better(res: PartitionResult | None, cut: int, side: tuple[int, ...]) -> bool:
    return res is None or (cut, side) < (res.cut, res.side_a)


# ---------------------------------------------------------------------------
# exact
# ---------------------------------------------------------------------------

def bisection_exact(g: RegularGraph, upper_bound: int | None = None) -> PartitionResult:
    """Minimum balanced cut by depth-first branch-and-bound.

    Vertices are assigned in BFS order from vertex 0. At each node the
    unassigned vertices are charged only for edges into the assigned region,
    with the side capacities respected, which is a valid lower bound on the
    cut still to come. For even n vertex 0 is fixed to side A.
    """
    n = g.n
    if n > EXACT_MAX_N:
        raise TooLarge(f"exact bisection limited to n <= {EXACT_MAX_N}, got {n}")
    adj = g.adjacency
    order = _bfs_order(g, 0)
    size_a = n // 2
    side = [-1] * n
    ca = [0] * n  # assigned neighbours on side A
    cb = [0] * n
    best_cut = upper_bound + 1 if upper_bound is not None else len(g.edges) + 1
    best_side: list[int] | None = None

    def lower_bound(pos: int, rem_a: int) -> int:
        rest = order[pos:]
        base = 0
        deltas = []
        for u in rest:
            base += ca[u]
            deltas.append(cb[u] - ca[u])
        deltas.sort()
        return base + sum(deltas[:rem_a])

    def assign(v: int, s: int) -> int:
        side[v] = s
        added = cb[v] if s == 0 else ca[v]
        arr = ca if s == 0 else cb
        for w in adj[v]:
            arr[w] += 1
        return added

    def unassign(v: int, s: int) -> None:
        side[v] = -1
        arr = ca if s == 0 else cb
        for w in adj[v]:
            arr[w] -= 1

    def search(pos: int, rem_a: int, rem_b: int, cut: int) -> None:
        nonlocal best_cut, best_side
        if pos == n:
            if cut < best_cut:
                best_cut = cut
                best_side = side.copy()
            return
        if cut + lower_bound(pos, rem_a) >= best_cut:
            return
        v = order[pos]
        choices = []
        if rem_a:
            choices.append((cb[v], 0))
        if rem_b:
            choices.append((ca[v], 1))
        choices.sort()
        for cost, s in choices:
            if cut + cost >= best_cut:
                continue
            assign(v, s)
            search(pos + 1, rem_a - (s == 0), rem_b - (s == 1), cut + cost)
            unassign(v, s)

    if n % 2 == 0:
        assign(order[0], 0)
        search(1, size_a - 1, n - size_a, 0)
    else:
        search(0, size_a, n - size_a, 0)
    if best_side is None:
        # only reachable when the caller passes a bound below the optimum
        raise BadParams(f"upper bound {upper_bound} is below the optimum")
    side_a = _canonical_side(n, [v for v in range(n) if best_side[v] == 0])
    return PartitionResult(best_cut, side_a, True)


def _bfs_order(g: RegularGraph, root: int) -> list[int]:
    seen = [False] * g.n
    seen[root] = True
    out = [root]
    q = deque([root])
    while q:
        u = q.popleft()
        for w in g.adjacency[u]:
            if not seen[w]:
                seen[w] = True
                out.append(w)
                q.append(w)
    return out


# ---------------------------------------------------------------------------
# Fiduccia-Mattheyses
# ---------------------------------------------------------------------------

class _Buckets:
    """Per-side gain buckets; dicts double as insertion-ordered sets."""

    def __init__(self, k: int):
        self.k = k
        self.b = [[{} for _ in range(2 * k + 1)] for _ in range(2)]

    def add(self, s: int, v: int, gain: int) -> None:
        self.b[s][gain + self.k][v] = None

    def remove(self, s: int, v: int, gain: int) -> None:
        del self.b[s][gain + self.k][v]

    def best(self, s: int) -> tuple[int, int] | None:
        for idx in range(2 * self.k, -1, -1):
            bucket = self.b[s][idx]
            if bucket:
                v = next(reversed(bucket))
                return idx - self.k, v
        return None


def _fm_refine(g: RegularGraph, side: list[int]) -> int:
    """Run FM passes on ``side`` (0/1 per vertex, balanced) until a pass
    fails to improve. Returns the final cut; ``side`` is updated in place."""
    n, k = g.n, g.k
    adj = g.adjacency
    size_a = n // 2
    cut = sum(side[u] != side[v] for u, v in g.edges)
    while True:
        gain = [0] * n
        for v in range(n):
            s = side[v]
            gain[v] = sum(1 if side[w] != s else -1 for w in adj[v])
        buckets = _Buckets(k)
        for v in range(n):
            buckets.add(side[v], v, gain[v])
        locked = [False] * n
        count_a = side.count(0)
        moves = []
        cur = cut
        best_cut, best_len = cut, 0
        while True:
            if count_a == size_a:
                cands = [c for c in (buckets.best(0), buckets.best(1)) if c is not None]
                if not cands:
                    break
                gv, v = max(cands)
            else:
                src = 0 if count_a > size_a else 1
                c = buckets.best(src)
                if c is None:
                    break
                gv, v = c
            s = side[v]
            buckets.remove(s, v, gain[v])
            locked[v] = True
            side[v] = 1 - s
            count_a += -1 if s == 0 else 1
            cur -= gv
            for w in adj[v]:
                delta = 2 if side[w] == s else -2
                if not locked[w]:
                    buckets.remove(side[w], w, gain[w])
                    buckets.add(side[w], w, gain[w] + delta)
                gain[w] += delta
            gain[v] = -gv
            moves.append(v)
            if count_a == size_a and cur < best_cut:
                best_cut, best_len = cur, len(moves)
        for v in moves[best_len:]:
            side[v] = 1 - side[v]
        if best_cut >= cut:
            return cut
        cut = best_cut


def _random_init(g: RegularGraph, rng: np.random.Generator) -> list[int]:
    perm = rng.permutation(g.n)
    side = [1] * g.n
    for v in perm[: g.n // 2]:
        side[int(v)] = 0
    return side


def _grown_init(g: RegularGraph, rng: np.random.Generator) -> list[int]:
    """Breadth-first region grown from a random root with shuffled frontier."""
    n = g.n
    root = int(rng.integers(n))
    side = [1] * n
    side[root] = 0
    taken = 1
    q = deque([root])
    seen = {root}
    while taken < n // 2:
        u = q.popleft()
        nbrs = list(g.adjacency[u])
        rng.shuffle(nbrs)
        for w in nbrs:
            if w not in seen and taken < n // 2:
                seen.add(w)
                side[w] = 0
                taken += 1
                q.append(w)
    return side


def bisection_heuristic(g: RegularGraph, restarts: int = 32, seed: int = 0) -> PartitionResult:
    """Best balanced cut over ``restarts`` FM runs.

    Restarts alternate between a uniformly random balanced split and a
    randomly rooted breadth-first region; each restart draws from its own
    child of ``SeedSequence(seed)``.
    """
    if g.n < 4:
        raise BadParams(f"heuristic bisection needs n >= 4, got {g.n}")
    if restarts < 1:
        raise BadParams("restarts must be >= 1")
    best: PartitionResult | None = None
    for i, child in enumerate(np.random.SeedSequence(seed).spawn(restarts)):
        rng = np.random.default_rng(child)
        side = _random_init(g, rng) if i % 2 == 0 else _grown_init(g, rng)
        cut = _fm_refine(g, side)
        side_a = _canonical_side(g.n, [v for v in range(g.n) if side[v] == 0])
        if _better(best, cut, side_a):
            best = PartitionResult(cut, side_a, False)
    return best


def bisection(g: RegularGraph, exact: bool | None = None, restarts: int = 32, seed: int = 0) -> PartitionResult:
    """Exact when n is within the guard (or ``exact=True``), heuristic otherwise."""
    if exact is None:
        exact = g.n <= EXACT_MAX_N
    if exact:
        hint = bisection_heuristic(g, restarts=min(restarts, 8), seed=seed) if g.n >= 4 else None
        return bisection_exact(g, upper_bound=hint.cut if hint else None)
    return bisection_heuristic(g, restarts=restarts, seed=seed)
