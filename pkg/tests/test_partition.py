from itertools import combinations

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from topoforge.errors import TooLarge
from topoforge.generators import generate
from topoforge.graph import build_graph
from topoforge.partition import bisection, bisection_exact, bisection_heuristic, cut_size


def _brute_force(g):
    best = None
    rest = range(1, g.n)
    for combo in combinations(rest, g.n // 2 - 1 if g.n % 2 == 0 else g.n // 2):
        side = (0, *combo) if g.n % 2 == 0 else combo
        c = cut_size(g, side)
        best = c if best is None else min(best, c)
    if g.n % 2:
        for combo in combinations(range(g.n), g.n // 2):
            best = min(best, cut_size(g, combo))
    return best


@pytest.mark.parametrize("spec, bw", [
    ("ring:16", 2), ("hypercube:4", 8), ("wagner:16", 4), ("torus:4x4", 8),
    ("ring:32", 2), ("wagner:32", 4), ("torus:4x8", 8),
])
def test_exact_table_values(spec, bw):
    res = bisection_exact(generate(spec))
    assert res.cut == bw and res.exact
    assert cut_size(generate(spec), res.side_a) == bw
    assert len(res.side_a) == generate(spec).n // 2
    assert 0 in res.side_a


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([(8, 3), (10, 3), (9, 4), (12, 3), (12, 5), (11, 4)]), st.integers(0, 10_000))
def test_exact_matches_brute_force(nk, seed):
    n, k = nk
    h = nx.random_regular_graph(k, n, seed=seed)
    if not nx.is_connected(h):
        return
    g = build_graph(n, k, list(h.edges()))
    assert bisection_exact(g).cut == _brute_force(g)


@pytest.mark.parametrize("spec", ["wagner:16", "torus:4x4", "chvatal", "dragonfly:4,1", "torus:4x8", "bidiakis:18"])
def test_heuristic_upper_bounds_exact(spec):
    g = generate(spec)
    heur = bisection_heuristic(g, restarts=16, seed=3)
    assert heur.cut >= bisection_exact(g).cut
    assert cut_size(g, heur.side_a) == heur.cut
    assert not heur.exact


def test_heuristic_large():
    assert bisection_heuristic(generate("ring:256"), restarts=64).cut == 2
    assert bisection_heuristic(generate("torus:16x16"), restarts=64).cut == 32


def test_heuristic_deterministic():
    g = generate("torus:4x8x8")
    assert bisection_heuristic(g, restarts=8, seed=5) == bisection_heuristic(g, restarts=8, seed=5)


def test_exact_size_guard():
    with pytest.raises(TooLarge):
        bisection_exact(generate("ring:34"))


def test_dispatch():
    assert bisection(generate("wagner:16")).exact
    assert not bisection(generate("ring:64"), restarts=4).exact
    assert bisection(generate("ring:7")).cut == 2


def test_upper_bound_hint_is_safe():
    g = generate("torus:4x4")
    assert bisection_exact(g, upper_bound=8).cut == 8
