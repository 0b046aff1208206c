from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from topoforge.bounds import (
    diameter_lower_bound, gap_report, mpl_lower_bound, shell_capacity, shell_profile,
)
from topoforge.errors import BadParams
from topoforge.generators import generate
from topoforge.graph import build_graph, compute_metrics


def test_shell_capacity():
    assert [shell_capacity(3, i) for i in range(1, 5)] == [3, 6, 12, 24]
    assert [shell_capacity(2, i) for i in range(1, 4)] == [2, 2, 2]


@pytest.mark.parametrize("n, k, shells", [
    (16, 4, (4, 11)),
    (8, 3, (3, 4)),
    (256, 3, (3, 6, 12, 24, 48, 96, 66)),
])
def test_shell_profile(n, k, shells):
    assert shell_profile(n, k).shell_sizes == shells


@pytest.mark.parametrize("n, k, value", [
    (16, 4, Fraction(26, 15)),
    (32, 4, Fraction(73, 31)),
    (256, 3, Fraction(1425, 255)),
    (8, 3, Fraction(11, 7)),
])
def test_mpl_lower_bound(n, k, value):
    assert mpl_lower_bound(n, k) == value


# (16,4): 1 + 4 + 12 = 17 >= 16 vertices fit within two shells
@pytest.mark.parametrize("n, k, d", [(16, 4, 2), (256, 6, 4), (256, 8, 3), (256, 4, 5), (256, 3, 7), (16, 2, 8)])
def test_diameter_lower_bound(n, k, d):
    assert diameter_lower_bound(n, k) == d


def test_gap_report_examples():
    rep = gap_report(generate("wagner:8"))
    assert (rep.mpl_gap, rep.diameter_gap) == (0, 0)
    rep = gap_report(generate("ring:16"))
    assert rep.diameter_lower == 8 and rep.diameter_gap == 0 and rep.mpl_gap == 0
    petersen = build_graph(10, 3, list(nx.petersen_graph().edges()))
    rep = gap_report(petersen)
    assert (rep.mpl_gap, rep.diameter_gap) == (0, 0)


@pytest.mark.parametrize("n, k", [(3, 3), (5, 3), (1, 2), (8, 1)])
def test_bad_params(n, k):
    with pytest.raises(BadParams):
        mpl_lower_bound(n, k)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([(10, 3), (12, 3), (16, 4), (20, 5), (24, 3), (30, 4)]), st.integers(0, 10_000))
def test_bounds_never_exceed_achieved(nk, seed):
    n, k = nk
    h = nx.random_regular_graph(k, n, seed=seed)
    if not nx.is_connected(h):
        return
    rep = gap_report(build_graph(n, k, list(h.edges())))
    assert rep.mpl_gap >= 0 and rep.diameter_gap >= 0


@pytest.mark.parametrize("spec", ["ring:32", "wagner:32", "torus:4x8", "chvatal", "dragonfly:4,2", "hypercube:6"])
def test_bounds_below_known_graphs(spec):
    g = generate(spec)
    m = compute_metrics(g)
    assert mpl_lower_bound(g.n, g.k) <= m.mpl_exact
    assert diameter_lower_bound(g.n, g.k) <= m.diameter
