"""Gossip broadcast simulation and Monte Carlo aggregation of the knowledge horizon."""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import _kernels
from .delays import LinkTable, ScenarioConfig
from .errors import AggregationError, ParameterError
from .graph import Graph


class Contact(NamedTuple):
    """One attempt: delivery time if it succeeded, attempt time otherwise."""

    time_s: float
    sender: int
    receiver: int
    success: bool


@dataclass(frozen=True)
class BroadcastOutcome:
    first_reception_s: np.ndarray  # inf for nodes never reached
    parent: np.ndarray  # node each one first heard from, -1 for source/unreached
    knowledge_horizon_s: float
    informed_count: int
    contact_log: list[Contact] | None = None

    @property
    def covered(self) -> bool:
        return self.informed_count == self.first_reception_s.size


@dataclass(frozen=True)
class MonteCarloResult:
    mean_delay_s: float
    variance_s2: float
    runs: int
    coverage_failures: int
    samples: np.ndarray = field(repr=False, compare=False)

    @property
    def completed(self) -> int:
        return self.runs - self.coverage_failures

    @property
    def stderr_s(self) -> float:
        return float(np.sqrt(self.variance_s2 / self.completed))

    def half_sample_gap(self) -> float:
        """Relative difference of the means of the two halves of the runs."""
        if self.samples.size < 2:
            return 0.0
        half = self.samples.size // 2
        a, b = self.samples[:half].mean(), self.samples[half:].mean()
        return float(abs(a - b) / max(abs(a), abs(b)))

    def is_stable(self, tol: float = 0.02) -> bool:
        return self.half_sample_gap() < tol

    def to_dict(self) -> dict:
        return {
            "mean_delay_s": self.mean_delay_s,
            "variance_s2": self.variance_s2,
            "runs": self.runs,
            "coverage_failures": self.coverage_failures,
        }


def _kernel_args(links: LinkTable, cfg: ScenarioConfig):
    g = links.graph
    indptr, indices = g.csr
    d_lo, d_hi = cfg.distance_bounds()
    return (
        indptr, indices, links.mu, links.sigma, links.alpha,
        cfg.scenario.code, cfg.uniform_lo, cfg.uniform_hi, cfg.p_on, d_lo, d_hi,
        cfg.sound_speed_mps, cfg.inter_pass_gap_s, cfg.max_passes, cfg.skip_sender,
    )


def _check_source(g: Graph, source: int) -> None:
    if not 0 <= source < g.n:
        raise ParameterError(f"source {source} out of range for n={g.n}")


def run_broadcast(
    g: Graph,
    links: LinkTable,
    cfg: ScenarioConfig,
    source: int = 0,
    run_seed: int = 0,
    keep_log: bool = False,
) -> BroadcastOutcome:
    """Simulate one broadcast from ``source``.

    A run that ends before reaching every node (too many link failures
    within ``cfg.max_passes``) is reported through ``informed_count``.
    """
    _check_source(g, source)
    if links.graph is not g and links.graph != g:
        raise ParameterError("link table was instantiated for another graph")
    first_rx = np.empty(g.n)
    parent = np.empty(g.n, dtype=np.int64)
    cap = 2 * g.m * cfg.max_passes if keep_log else 0
    log_t = np.empty(cap)
    log_from = np.empty(cap, dtype=np.int64)
    log_to = np.empty(cap, dtype=np.int64)
    log_ok = np.empty(cap, dtype=np.bool_)
    nlog = _kernels.run_once(
        *_kernel_args(links, cfg), source, np.uint64(run_seed),
        first_rx, parent, log_t, log_from, log_to, log_ok, keep_log,
    )
    reached = np.isfinite(first_rx)
    log = None
    if keep_log:
        log = [
            Contact(float(log_t[i]), int(log_from[i]), int(log_to[i]), bool(log_ok[i]))
            for i in range(nlog)
        ]
        log.sort(key=lambda c: (c.time_s, c.sender, c.receiver))
    return BroadcastOutcome(
        first_reception_s=first_rx,
        parent=parent,
        knowledge_horizon_s=float(first_rx[reached].max()),
        informed_count=int(reached.sum()),
        contact_log=log,
    )


def run_seeds(master_seed: int, n_runs: int) -> np.ndarray:
    """Per-run seeds; run ``i`` gets the same seed whatever ``n_runs`` is."""
    return np.random.SeedSequence(master_seed).generate_state(n_runs, dtype=np.uint64)


def simulate_horizons(
    g: Graph, links: LinkTable, cfg: ScenarioConfig, source: int, seeds: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Knowledge horizon and informed count for each run seed."""
    _check_source(g, source)
    kh = np.empty(seeds.size)
    informed = np.empty(seeds.size, dtype=np.int64)
    _kernels.run_many(*_kernel_args(links, cfg), source, seeds, kh, informed)
    return kh, informed


def monte_carlo(
    g: Graph,
    links: LinkTable,
    cfg: ScenarioConfig,
    source: int = 0,
    n_runs: int = 1000,
    master_seed: int = 0,
) -> MonteCarloResult:
    """Mean and unbiased variance of the knowledge horizon over ``n_runs``.

    Runs that fail to cover the graph are counted, not averaged.  Run seeds
    depend only on ``master_seed`` and the run index, so two plans simulated
    with the same master seed share every random draw.
    """
    if n_runs < 1:
        raise ParameterError("n_runs must be at least 1")
    kh, informed = simulate_horizons(g, links, cfg, source, run_seeds(master_seed, n_runs))
    ok = kh[informed == g.n]
    if ok.size == 0:
        raise AggregationError(f"none of the {n_runs} runs reached all {g.n} nodes")
    var = float(ok.var(ddof=1)) if ok.size > 1 else 0.0
    return MonteCarloResult(float(ok.mean()), var, n_runs, int(n_runs - ok.size), ok)


def reachability_check(g: Graph, contact_log, source: int = 0) -> bool:
    """Whether the successful contacts form a time-respecting spanning tree from ``source``.

    Successful contacts are replayed in time order; a contact informs its
    receiver only if the sender was already informed by then.
    """
    _check_source(g, source)
    informed_at = np.full(g.n, np.inf)
    informed_at[source] = 0.0
    for c in sorted(contact_log, key=lambda c: (c.time_s, c.sender, c.receiver)):
        if c.success and informed_at[c.sender] <= c.time_s and c.time_s < informed_at[c.receiver]:
            informed_at[c.receiver] = c.time_s
    return bool(np.isfinite(informed_at).all())


def write_contact_log(contact_log, path: str | os.PathLike) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["time_s", "from", "to", "success"])
        for c in contact_log:
            writer.writerow([repr(c.time_s), c.sender, c.receiver, int(c.success)])


def read_contact_log(path: str | os.PathLike) -> list[Contact]:
    with open(path, newline="", encoding="utf-8") as fh:
        return [
            Contact(float(r["time_s"]), int(r["from"]), int(r["to"]), r["success"] in ("1", "True", "true"))
            for r in csv.DictReader(fh)
        ]
