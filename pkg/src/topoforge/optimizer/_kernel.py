"""Compiled annealing loop.

State is the edge set of a ring-embedded regular graph whose chords are
grouped into orbits under rotation by ``r = n // s``; with ``s == 1`` every
orbit is a single chord. Distance sums are kept as ordered-pair integers so
comparisons against the bound are exact.
"""
import numpy as np
from numba import njit

MAX_RESAMPLE = 64


@njit(cache=True)
def _bfs_rowsum(nbr, deg, src, dist, queue):
    n = nbr.shape[0]
    for i in range(n):
        dist[i] = -1
    dist[src] = 0
    head = 0
    tail = 1
    queue[0] = src
    total = 0
    while head < tail:
        u = queue[head]
        head += 1
        du = dist[u] + 1
        for t in range(deg[u]):
            w = nbr[u, t]
            if dist[w] < 0:
                dist[w] = du
                total += du
                queue[tail] = w
                tail += 1
    if tail < n:
        return -1
    return total


@njit(cache=True)
def ordered_distance_sum(nbr, deg, r, s):
    """Sum of d(i, j) over ordered pairs, using sources 0..r-1 only.

    Valid because rotation by r is an automorphism of the graph.
    """
    n = nbr.shape[0]
    dist = np.empty(n, np.int64)
    queue = np.empty(n, np.int64)
    total = 0
    for src in range(r):
        rs = _bfs_rowsum(nbr, deg, src, dist, queue)
        if rs < 0:
            return -1
        total += rs
    return total * s


@njit(cache=True)
def _add_edge(adj, nbr, deg, u, v):
    adj[u, v] = 1
    adj[v, u] = 1
    nbr[u, deg[u]] = v
    deg[u] += 1
    nbr[v, deg[v]] = u
    deg[v] += 1


@njit(cache=True)
def _drop(nbr, deg, u, v):
    for t in range(deg[u]):
        if nbr[u, t] == v:
            deg[u] -= 1
            nbr[u, t] = nbr[u, deg[u]]
            return


@njit(cache=True)
def _remove_edge(adj, nbr, deg, u, v):
    adj[u, v] = 0
    adj[v, u] = 0
    _drop(nbr, deg, u, v)
    _drop(nbr, deg, v, u)


@njit(cache=True)
def _orbit(u, v, n, r, s, out):
    """Write the deduplicated rotation orbit of (u, v) into ``out``; return its size."""
    m = 0
    for j in range(s):
        a = (u + j * r) % n
        b = (v + j * r) % n
        if a > b:
            a, b = b, a
        dup = False
        for t in range(m):
            if out[t, 0] == a and out[t, 1] == b:
                dup = True
                break
        if not dup:
            out[m, 0] = a
            out[m, 1] = b
            m += 1
    return m


@njit(cache=True)
def _try_swap(adj, nbr, deg, reps, k, r, s, ia, ib, j, flip, removed, added):
    """Apply an orbit swap in place.

    Chord (a, b) is the representative of orbit ``ia``; (c, d) is the
    representative of orbit ``ib`` rotated by ``j`` steps (``ia == ib`` is
    allowed for j != 0). Both orbits are removed and the orbits of the two
    rewired chords are added. Those may coincide, in which case two orbits
    merge into one; likewise one orbit may split into two.

    Returns (n_removed, n_first_orbit, n_added) on success or (-1, -1, -1)
    after restoring the previous state.
    """
    n = adj.shape[0]
    a, b = reps[ia, 0], reps[ia, 1]
    c = (reps[ib, 0] + j * r) % n
    d = (reps[ib, 1] + j * r) % n
    if a == c or a == d or b == c or b == d:
        return -1, -1, -1
    if flip:
        c, d = d, c
    nr = _orbit(a, b, n, r, s, removed)
    if ib != ia:
        nr += _orbit(reps[ib, 0], reps[ib, 1], n, r, s, removed[nr:])
    for t in range(nr):
        _remove_edge(adj, nbr, deg, removed[t, 0], removed[t, 1])
    na = _orbit(a, c, n, r, s, added)
    na1 = na
    e2u, e2v = min(b, d), max(b, d)
    merged = False
    for q in range(na1):
        if added[q, 0] == e2u and added[q, 1] == e2v:
            merged = True
            break
    if not merged:
        na += _orbit(b, d, n, r, s, added[na:])
    ok = True
    placed = 0
    for t in range(na):
        u, v = added[t, 0], added[t, 1]
        if u == v or adj[u, v] != 0 or deg[u] >= k or deg[v] >= k:
            ok = False
            break
        _add_edge(adj, nbr, deg, u, v)
        placed += 1
    if ok:
        for t in range(nr):
            if deg[removed[t, 0]] != k or deg[removed[t, 1]] != k:
                ok = False
                break
    if not ok:
        for t in range(placed):
            _remove_edge(adj, nbr, deg, added[t, 0], added[t, 1])
        for t in range(nr):
            _add_edge(adj, nbr, deg, removed[t, 0], removed[t, 1])
        return -1, -1, -1
    return nr, na1, na


@njit(cache=True)
def anneal(adj, nbr, deg, reps, m, k, s, seed, t_start, gamma, t_end, n_iter,
           stop_sum, trace_every, trace):
    """Run the annealing loop in place on (adj, nbr, deg, reps).

    ``reps`` has room for one row per chord; its first ``m`` rows are the
    live orbit representatives. Returns (best_reps, best_m, best_sum,
    iterations, accepted, proposals, n_trace_rows). ``stop_sum`` < 0
    disables the stop-at-bound criterion.
    """
    np.random.seed(seed)
    n = adj.shape[0]
    r = n // s
    pair_norm = float(n * (n - 1))
    removed = np.empty((2 * s, 2), np.int64)
    added = np.empty((2 * s, 2), np.int64)
    cur = ordered_distance_sum(nbr, deg, r, s)
    best = cur
    best_reps = reps.copy()
    best_m = m
    temp = t_start
    accepted = 0
    proposals = 0
    rows = 0
    it = 0
    t_floor = t_end * (1.0 - 1e-9)
    while it < n_iter:
        if stop_sum >= 0 and best <= stop_sum:
            break
        if temp < t_floor:
            break
        ia = -1
        ib = -1
        na1 = 0
        na = 0
        nr = 0
        for _ in range(MAX_RESAMPLE):
            proposals += 1
            ia = np.random.randint(0, m)
            ib = np.random.randint(0, m)
            j = np.random.randint(0, s)
            flip = np.random.random() < 0.5
            if ia == ib and j == 0:
                ia = -1
                continue
            nr, na1, na = _try_swap(adj, nbr, deg, reps, k, r, s, ia, ib, j, flip, removed, added)
            if nr >= 0:
                break
            ia = -1
        if ia >= 0:
            new = ordered_distance_sum(nbr, deg, r, s)
            delta = (new - cur) / pair_norm
            take = delta < 0.0
            if not take:
                take = np.random.random() < np.exp(-delta / temp)
            if take:
                cur = new
                accepted += 1
                reps[ia, 0] = added[0, 0]
                reps[ia, 1] = added[0, 1]
                two_old = ib != ia
                two_new = na > na1
                if two_old and two_new:
                    reps[ib, 0] = added[na1, 0]
                    reps[ib, 1] = added[na1, 1]
                elif two_old:
                    m -= 1
                    reps[ib, 0] = reps[m, 0]
                    reps[ib, 1] = reps[m, 1]
                elif two_new:
                    reps[m, 0] = added[na1, 0]
                    reps[m, 1] = added[na1, 1]
                    m += 1
                if cur < best:
                    best = cur
                    best_m = m
                    best_reps[:m, :] = reps[:m, :]
            else:
                for t in range(na):
                    _remove_edge(adj, nbr, deg, added[t, 0], added[t, 1])
                for t in range(nr):
                    _add_edge(adj, nbr, deg, removed[t, 0], removed[t, 1])
        it += 1
        if trace_every > 0 and it % trace_every == 0 and rows < trace.shape[0]:
            trace[rows, 0] = it
            trace[rows, 1] = temp
            trace[rows, 2] = cur / pair_norm
            trace[rows, 3] = best / pair_norm
            rows += 1
        temp *= gamma
    return best_reps, best_m, best, it, accepted, proposals, rows
