import math
import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import bfs_connected, power_iteration, random_graph
from swarmcast.errors import DomainError
from swarmcast.graph import Graph, Kind, build_topology
from swarmcast.spectral import (
    adjacency_spectrum,
    laplacian_spectrum,
    max_stable_delay,
    power_iteration_lambda_max,
    spectral_summary,
)


def star(leaves, offset=0):
    return [(offset, offset + i) for i in range(1, leaves + 1)]


def complete(n):
    return [(u, v) for u in range(n) for v in range(u + 1, n)]


def cycle(n):
    return [(i, (i + 1) % n) if i < (i + 1) % n else ((i + 1) % n, i) for i in range(n)]


def test_star_k14():
    g = Graph.from_edges(5, star(4))
    assert adjacency_spectrum(g)[-1] == pytest.approx(2.0, abs=1e-8)
    s = spectral_summary(g)
    assert s.lambda_max_adj == pytest.approx(2.0, abs=1e-8)
    assert s.algebraic_connectivity == pytest.approx(1.0, abs=1e-8)
    assert s.tau_max == pytest.approx(math.pi / 4)


def test_cycle_c4():
    np.testing.assert_allclose(adjacency_spectrum(Graph.from_edges(4, cycle(4))), [-2, 0, 0, 2], atol=1e-8)


@pytest.mark.parametrize("n", [3, 5, 8, 13])
def test_cycle_closed_form(n):
    expected = sorted(2 * math.cos(2 * math.pi * j / n) for j in range(n))
    np.testing.assert_allclose(adjacency_spectrum(Graph.from_edges(n, cycle(n))), expected, atol=1e-8)


@pytest.mark.parametrize("n", [2, 4, 7])
def test_path_closed_form(n):
    g = Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])
    expected = sorted(2 * math.cos(math.pi * j / (n + 1)) for j in range(1, n + 1))
    np.testing.assert_allclose(adjacency_spectrum(g), expected, atol=1e-8)


def test_laplacian_examples():
    np.testing.assert_allclose(laplacian_spectrum(Graph.from_edges(2, [(0, 1)])), [0, 2], atol=1e-8)
    k4 = spectral_summary(Graph.from_edges(4, complete(4)))
    np.testing.assert_allclose(k4.laplacian_eigenvalues, [0, 4, 4, 4], atol=1e-8)
    assert k4.algebraic_connectivity == pytest.approx(4.0)
    isolated = spectral_summary(Graph.from_edges(2, []))
    assert isolated.laplacian_eigenvalues == (0.0, 0.0)
    assert isolated.algebraic_connectivity == 0.0


def test_single_node():
    s = spectral_summary(Graph.from_edges(1, []))
    assert s.lambda_max_adj == 0.0
    assert s.spectral_gap_adj == 0.0
    assert s.tau_max == math.inf


def test_gaps_are_top_differences():
    s = spectral_summary(Graph.from_edges(5, star(4)))
    # star adjacency: -2, 0, 0, 0, 2; Laplacian: 0, 1, 1, 1, 5
    assert s.spectral_gap_adj == pytest.approx(2.0)
    assert s.spectral_gap_lap == pytest.approx(4.0)


def test_disjoint_union_is_multiset_union():
    a = Graph.from_edges(5, star(4))
    b = Graph.from_edges(4, star(3))
    union = Graph.from_edges(9, star(4) + star(3, offset=5))
    np.testing.assert_allclose(
        adjacency_spectrum(union), np.sort(np.concatenate([adjacency_spectrum(a), adjacency_spectrum(b)])), atol=1e-8
    )
    np.testing.assert_allclose(
        laplacian_spectrum(union), np.sort(np.concatenate([laplacian_spectrum(a), laplacian_spectrum(b)])), atol=1e-8
    )


def _random_graphs(count, seed=11):
    rng = random.Random(seed)
    for _ in range(count):
        n = rng.randint(1, 12)
        yield Graph.from_edges(n, random_graph(rng, n, rng.uniform(0.05, 0.6)))


def test_trace_identities_and_bounds():
    for g in _random_graphs(200):
        adj = adjacency_spectrum(g)
        lap = laplacian_spectrum(g)
        assert abs(adj.sum()) <= 1e-6
        assert abs(lap.sum() - 2 * g.m) <= 1e-6 * max(g.m, 1)
        assert lap.min() >= -1e-9
        assert lap[0] == 0.0
        degrees = g.degrees
        assert degrees.mean() - 1e-9 <= adj[-1] <= degrees.max() + 1e-9


def test_algebraic_connectivity_detects_connectivity():
    for g in _random_graphs(200, seed=5):
        s = spectral_summary(g)
        assert (s.algebraic_connectivity > 0) == (bfs_connected(g.n, g.edges) and g.n > 1)


def test_power_iteration_cross_check():
    for g in _random_graphs(30, seed=2):
        a = g.adjacency_matrix()
        lam = adjacency_spectrum(g)[-1]
        assert power_iteration_lambda_max(a) == pytest.approx(lam, abs=1e-6)
        assert power_iteration(a.tolist()) == pytest.approx(lam, abs=1e-6)


@pytest.mark.parametrize("kind", list(Kind))
def test_generated_topologies(kind):
    g = build_topology(kind, 100, 140, seed=1)
    s = spectral_summary(g)
    assert s.lambda_max_adj >= 2 * g.m / g.n
    assert power_iteration(g.adjacency_matrix().tolist()) == pytest.approx(s.lambda_max_adj, abs=1e-6)
    assert s.algebraic_connectivity > 0


def test_galaxy_exceeds_small_world():
    galaxy = spectral_summary(build_topology("galaxy", 100, 140, seed=1))
    sw = spectral_summary(build_topology("small_world", 100, 140, seed=1))
    assert galaxy.lambda_max_adj > sw.lambda_max_adj
    assert 7.0 <= galaxy.lambda_max_adj <= 9.5


def test_summary_dict_keys():
    d = spectral_summary(Graph.from_edges(5, star(4))).to_dict()
    assert set(d) == {"lambda_max_adj", "spectral_gap_adj", "spectral_gap_lap", "algebraic_connectivity", "tau_max"}


@pytest.mark.parametrize(
    "lam,tau",
    [(2.0, 0.7854), (7.9426, 0.1978), (3.3473, 0.4693), (5.1077, 0.3075), (3.9286, 0.3998), (3.4687, 0.4528)],
)
def test_max_stable_delay_values(lam, tau):
    assert max_stable_delay(lam).tau_max == pytest.approx(tau, abs=5e-5)


@pytest.mark.parametrize("bad", [0.0, -1.0, float("nan")])
def test_max_stable_delay_domain(bad):
    with pytest.raises(DomainError):
        max_stable_delay(bad)


@given(st.floats(1e-6, 1e6), st.floats(1e-6, 1e6))
def test_max_stable_delay_strictly_decreasing(a, b):
    if a == b:
        return
    lo, hi = sorted((a, b))
    assert max_stable_delay(lo).tau_max > max_stable_delay(hi).tau_max
