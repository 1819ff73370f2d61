"""Acceptance criteria, one test each, at their stated tolerances and time limits.

Run alone with ``pytest tests/test_acceptance.py -v``; the terminal summary
lists one PASS/FAIL line per criterion.
"""

import math
import random
import time

import numpy as np
import pytest

from conftest import criterion
from oracles import bfs_connected, brute_force_betweenness, earliest_arrival, random_graph, residual_radius
from swarmcast.broadcast import run_broadcast, run_seeds, simulate_horizons
from swarmcast.cli import main
from swarmcast.delays import Scenario, ScenarioConfig, instantiate_links, sample_truncated_gaussian
from swarmcast.experiment import METHODS, TOPOLOGIES, TOPOLOGY_SEEDS, compute_savings, run_experiment
from swarmcast.graph import Graph, Kind, build_topology, graph_stats
from swarmcast.selection import AllocationPlan, betweenness_scores, select, select_spectral
from swarmcast.spectral import adjacency_spectrum, laplacian_spectrum, max_stable_delay, spectral_summary
from tables import PRINTED


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def generated():
    return {kind: build_topology(kind, 100, 140, seed=TOPOLOGY_SEEDS[kind]) for kind in TOPOLOGIES}


@criterion(1, "topology contract: n=100, m=140, connected, average degree 2.8")
def test_criterion_01_topology_contract():
    with Timer() as t:
        graphs = generated()
    assert t.elapsed < 1.0
    assert set(graphs) == set(Kind)
    for kind, g in graphs.items():
        stats = graph_stats(g)
        assert (stats["n"], stats["m"]) == (100, 140), kind
        assert stats["is_connected"] and bfs_connected(g.n, g.edges), kind
        assert stats["avg_degree"] == 2.8, kind


@criterion(2, "spectral arithmetic: traces, connectivity, closed forms")
def test_criterion_02_spectral_arithmetic():
    with Timer() as t:
        rng = random.Random(2)
        for _ in range(200):
            n = rng.randint(1, 14)
            g = Graph.from_edges(n, random_graph(rng, n, rng.uniform(0.05, 0.5)))
            adj, lap = adjacency_spectrum(g), laplacian_spectrum(g)
            assert abs(adj.sum()) <= 1e-6
            assert abs(lap.sum() - 2 * g.m) <= 1e-6 * max(g.m, 1)
            lam2 = spectral_summary(g).algebraic_connectivity
            assert (lam2 > 0) == (n > 1 and bfs_connected(n, g.edges))
        star = Graph.from_edges(5, [(0, i) for i in range(1, 5)])
        k4 = Graph.from_edges(4, [(u, v) for u in range(4) for v in range(u + 1, 4)])
        c4 = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
        assert abs(adjacency_spectrum(star)[-1] - 2.0) <= 1e-8
        assert np.allclose(laplacian_spectrum(k4), [0, 4, 4, 4], rtol=0, atol=1e-8)
        assert np.allclose(adjacency_spectrum(c4), [-2, 0, 0, 2], rtol=0, atol=1e-8)
    assert t.elapsed < 10.0


@criterion(3, "spectral ordering: galaxy has the largest lambda_max and adjacency gap")
def test_criterion_03_spectral_ordering():
    with Timer() as t:
        spectra = {kind: spectral_summary(g) for kind, g in generated().items()}
    assert t.elapsed < 5.0
    galaxy = spectra.pop(Kind.GALAXY)
    assert 7.0 <= galaxy.lambda_max_adj <= 9.5
    assert all(galaxy.lambda_max_adj > s.lambda_max_adj for s in spectra.values())
    assert all(galaxy.spectral_gap_adj > s.spectral_gap_adj for s in spectra.values())


@criterion(4, "stability bound pi/(2 lambda) on the five tabulated lambda_max values")
def test_criterion_04_stability_bound():
    table = {7.9426: 0.1978, 5.1077: 0.3075, 3.9286: 0.3998, 3.4687: 0.4528, 3.3473: 0.4693}
    for lam, tau in table.items():
        got = max_stable_delay(lam).tau_max
        assert got == math.pi / (2 * lam)
        assert float(f"{got:.4g}") == tau


@criterion(5, "saving convention reproduces every printed percentage within 0.5 points")
def test_criterion_05_savings_convention():
    misses = []
    for (topo, scen), (baseline, means, printed) in PRINTED.items():
        got = compute_savings(baseline, means)
        for method, pct in printed.items():
            if abs(got[method].pct - pct) > 0.5:
                misses.append(f"{topo}/{scen}/{method}: computed {got[method].pct:+.2f}, printed {pct:+g}")
    assert not misses, "; ".join(misses)


@criterion(6, "event simulator equals the earliest-arrival oracle on 100 graphs")
def test_criterion_06_oracle_equivalence():
    rng = random.Random(6)
    with Timer() as t:
        for i in range(100):
            n = rng.randint(1, 10)
            g = Graph.from_edges(n, random_graph(rng, n, rng.uniform(0.2, 0.8), connected=True))
            cfg = ScenarioConfig(
                scenario=Scenario.II, mu_lo=0.5, mu_hi=3.5, sigma_lo=0.0, sigma_hi=0.0,
                distance_lo_m=150.0, distance_hi_m=150.0, p_on=1.0, skip_sender=i % 2 == 1,
            )
            plan = select(g, "random", rng.randint(0, n), 0.1, seed=i)
            links = instantiate_links(g, cfg, plan, seed=i)

            def delay(u, v):
                link = links[u, v]
                return link.alpha_out * (link.mu + link.distance_lo_m / cfg.sound_speed_mps)

            out = run_broadcast(g, links, cfg, run_seed=i)
            times, _ = earliest_arrival(n, g.edges, delay, 0, cfg.skip_sender)
            assert out.knowledge_horizon_s == max(times.values())
            assert out.first_reception_s.tolist() == [times[v] for v in range(n)]
    assert t.elapsed < 30.0


@criterion(7, "Brandes betweenness equals shortest-path enumeration on 50 graphs")
def test_criterion_07_betweenness_oracle():
    rng = random.Random(7)
    with Timer() as t:
        for _ in range(50):
            n = rng.randint(2, 8)
            edges = random_graph(rng, n, rng.uniform(0.25, 0.7), connected=True)
            got = betweenness_scores(Graph.from_edges(n, edges))
            want = brute_force_betweenness(n, edges)
            assert all(abs(got[v] - want[v]) <= 1e-9 for v in range(n))
    assert t.elapsed < 30.0


@criterion(8, "spectral selection at k=1 equals brute-force removal on 50 graphs")
def test_criterion_08_spectral_selection_oracle():
    rng = random.Random(8)
    with Timer() as t:
        for _ in range(50):
            n = rng.randint(2, 12)
            edges = random_graph(rng, n, rng.uniform(0.15, 0.6))
            radii = [residual_radius(n, edges, {v}) for v in range(n)]
            expected = min(v for v in range(n) if radii[v] <= min(radii) + 1e-7)
            assert select_spectral(Graph.from_edges(n, edges), 1).selected == (expected,)
    assert t.elapsed < 60.0


@criterion(9, "truncated Gaussian (0, 1): mean 0.7979 +- 0.01 over 1e6 draws, all positive")
def test_criterion_09_truncated_gaussian():
    from swarmcast import _kernels

    with Timer() as t:
        x = sample_truncated_gaussian(0.0, 1.0, np.random.default_rng(9), size=10**6)
        y = _kernels.stream_trunc_normal_samples(0.0, 1.0, np.uint64(9), 10**6)
    assert t.elapsed < 10.0
    for s in (x, y):
        assert s.size == 10**6
        assert (s > 0).all()
        assert abs(s.mean() - 0.7979) <= 0.01


@pytest.fixture(scope="module")
def default_grid():
    return run_experiment(ScenarioConfig(), TOPOLOGIES, METHODS, k=10, alpha=0.1, runs=1000,
                          master_seed=42, scenarios=["I", "II"])


@criterion(10, "headline ordering at defaults: degree on galaxy, random worst, all beat baseline")
def test_criterion_10_headline(default_grid):
    rep = default_grid
    for scen in ("I", "II"):
        cells = rep.cells(scen)
        saving = {
            (r.topology, r.method): (rep.baselines[(r.topology, scen)].mean_delay_s - r.mean_delay_s)
            / rep.baselines[(r.topology, scen)].mean_delay_s
            for r in cells
        }
        top = saving[("galaxy", "degree")]
        assert top >= max(saving.values())
        assert top >= 0.5
        for topo in {r.topology for r in cells}:
            rnd = rep.row(topo, scen, "random")
            for r in cells:
                if r.topology == topo and r.method != "random":
                    assert rnd.mean_delay_s >= r.mean_delay_s - 2 * math.hypot(rnd.stderr_s, r.stderr_s)
        for r in cells:
            assert r.mean_delay_s < rep.baselines[(r.topology, scen)].mean_delay_s


@criterion(11, "coupling: alpha=0.5 horizon <= alpha=1.0 horizon on 100 paired runs")
def test_criterion_11_monotone_coupling():
    with Timer() as t:
        seeds = run_seeds(11, 100)
        for kind, g in generated().items():
            for scen in Scenario:
                cfg = ScenarioConfig(scenario=scen)
                base = instantiate_links(g, cfg, seed=3)
                slow, _ = simulate_horizons(g, base, cfg, 0, seeds)
                for method in METHODS:
                    plan = select(g, method, 10, 0.5, seed=1)
                    assert isinstance(plan, AllocationPlan) and plan.speedup_factor == 0.5
                    fast, _ = simulate_horizons(g, base.with_plan(plan), cfg, 0, seeds)
                    assert (fast <= slow).all(), (kind, scen, method)
    assert t.elapsed < 60.0


@criterion(12, "determinism: repeated report invocation gives byte-identical CSV and JSON")
def test_criterion_12_report_determinism(tmp_path):
    outputs = []
    for i in range(2):
        csv_path, json_path = tmp_path / f"report{i}.csv", tmp_path / f"report{i}.json"
        code = main(["report", "--topologies", "all", "--methods", "all", "--scenarios", "I,II",
                     "--k", "10", "--alpha", "0.1", "--runs", "1000", "--seed", "42",
                     "--out", str(csv_path), "--json", str(json_path)])
        assert code == 0
        outputs.append((csv_path.read_bytes(), json_path.read_bytes()))
    assert outputs[0] == outputs[1]
    assert len(outputs[0][0].splitlines()) == 1 + 50
