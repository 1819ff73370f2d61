"""Topology x method grid of Monte Carlo runs and the saving-percentage table.

Percentages follow the tables they are compared with: the best method of a
topology is expressed against the unoptimized baseline (negative means a
saving) and every other method against that best method.
"""

from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from .broadcast import MonteCarloResult, monte_carlo
from .delays import Scenario, ScenarioConfig, instantiate_links
from .errors import ExperimentError, ParameterError, SwarmcastError
from .graph import Kind, build_topology
from .selection import DEFAULT_ALPHA, DEFAULT_K, Method, baseline_plan, select
from .spectral import spectral_summary

TOPOLOGIES = (Kind.ERDOS_RENYI, Kind.SMALL_WORLD, Kind.GALAXY, Kind.GRID, Kind.CLUSTER)
METHODS = (Method.SPECTRAL, Method.DEGREE, Method.BETWEENNESS, Method.RANDOM)
# construction seeds are fixed so every experiment sees the same graphs
TOPOLOGY_SEEDS = {kind: 1 for kind in Kind}
CSV_COLUMNS = ("topology", "scenario", "method", "mean_delay_s", "variance_s2", "is_best", "pct")


class Saving(NamedTuple):
    pct: float
    is_best: bool


def compute_savings(baseline_mean: float, method_means: Mapping[str, float]) -> dict[str, Saving]:
    """Percent figures for each method of one (topology, scenario) cell.

    The best method (lowest mean, ties to the earlier key) gets
    ``100 (best - baseline) / baseline``; the others get their excess over the
    best, ``100 (mean - best) / best``.
    """
    if not baseline_mean > 0:
        raise ParameterError("baseline mean must be positive")
    if any(not v > 0 for v in method_means.values()):
        raise ParameterError("method means must be positive")
    if not method_means:
        return {}
    best_name = min(method_means, key=lambda name: method_means[name])
    best = method_means[best_name]
    out = {}
    for name, mean in method_means.items():
        if name == best_name:
            out[name] = Saving(100.0 * (best - baseline_mean) / baseline_mean, True)
        else:
            out[name] = Saving(100.0 * (mean - best) / best, False)
    return out


@dataclass(frozen=True)
class ReportRow:
    topology: str
    scenario: str
    method: str
    mean_delay_s: float
    variance_s2: float
    is_best: bool
    pct: float
    runs: int
    coverage_failures: int

    @property
    def stderr_s(self) -> float:
        return float(np.sqrt(self.variance_s2 / (self.runs - self.coverage_failures)))


@dataclass(frozen=True)
class ExperimentReport:
    rows: list[ReportRow]
    baselines: dict[tuple[str, str], MonteCarloResult]
    metadata: dict
    samples: dict[tuple[str, str, str], np.ndarray] = field(default_factory=dict, compare=False, repr=False)

    def row(self, topology: str, scenario: str, method: str) -> ReportRow:
        for r in self.rows:
            if (r.topology, r.scenario, r.method) == (topology, scenario, method):
                return r
        raise KeyError((topology, scenario, method))

    def cells(self, scenario: str | None = None) -> list[ReportRow]:
        return [r for r in self.rows if r.method != Method.NONE.value and scenario in (None, r.scenario)]


def derive_seed(master_seed: int, *keys: int) -> int:
    return int(np.random.SeedSequence(master_seed, spawn_key=keys).generate_state(1, np.uint64)[0])


def _as_list(values, parse) -> list:
    return [parse(v) for v in values]


def run_experiment(
    cfg: ScenarioConfig,
    topologies: Iterable = TOPOLOGIES,
    methods: Iterable = METHODS,
    k: int = DEFAULT_K,
    alpha: float = DEFAULT_ALPHA,
    runs: int = 1000,
    master_seed: int = 42,
    *,
    scenarios: Sequence | None = None,
    n: int = 100,
    m: int = 140,
    source: int = 0,
) -> ExperimentReport:
    """Baseline plus one optimized run set per method, for every topology.

    All plans of one (topology, scenario) share the Monte Carlo master seed,
    so methods are compared under common random numbers.
    """
    topologies = _as_list(topologies, Kind.parse)
    methods = _as_list(methods, Method.parse)
    scenarios = _as_list(scenarios or [cfg.scenario], Scenario.parse)
    if not topologies or not methods:
        raise ParameterError("topologies and methods must be non-empty")
    if Method.NONE in methods:
        raise ParameterError("the baseline is always run; do not list it as a method")
    if runs < 1:
        raise ParameterError("runs must be at least 1")

    rows: list[ReportRow] = []
    baselines: dict[tuple[str, str], MonteCarloResult] = {}
    samples: dict[tuple[str, str, str], np.ndarray] = {}
    meta_sel: dict[str, dict[str, list[int]]] = {}
    meta_spec: dict[str, dict] = {}
    meta_stab: dict[str, float] = {}

    graphs, plans = {}, {}
    for ti, kind in enumerate(topologies):
        try:
            g = build_topology(kind, n, m, seed=TOPOLOGY_SEEDS[kind])
            graphs[kind] = g
            plans[kind] = {
                meth: select(g, meth, k, alpha, seed=derive_seed(master_seed, ti, 1)) for meth in methods
            }
        except SwarmcastError as exc:
            raise ExperimentError(f"topology {kind.value}: {exc}") from exc
        meta_sel[kind.value] = {meth.value: list(p.selected) for meth, p in plans[kind].items()}
        meta_spec[kind.value] = spectral_summary(g).to_dict()

    for si, scen in enumerate(scenarios):
        scfg = cfg.with_scenario(scen)
        for ti, kind in enumerate(topologies):
            g = graphs[kind]
            links = instantiate_links(g, scfg, seed=derive_seed(master_seed, ti, 0, si))
            mc_seed = derive_seed(master_seed, ti, 2, si)
            results: dict[Method, MonteCarloResult] = {}
            for meth in [Method.NONE, *methods]:
                plan = baseline_plan() if meth is Method.NONE else plans[kind][meth]
                try:
                    results[meth] = monte_carlo(g, links.with_plan(plan), scfg, source, runs, mc_seed)
                except SwarmcastError as exc:
                    raise ExperimentError(f"cell ({kind.value}, {scen.value}, {meth.value}): {exc}") from exc
                samples[(kind.value, scen.value, meth.value)] = results[meth].samples
                meta_stab[f"{scen.value}/{kind.value}/{meth.value}"] = results[meth].half_sample_gap()
            base = results.pop(Method.NONE)
            baselines[(kind.value, scen.value)] = base
            rows.append(ReportRow(kind.value, scen.value, Method.NONE.value, base.mean_delay_s,
                                  base.variance_s2, False, 0.0, base.runs, base.coverage_failures))
            ranked = sorted(results, key=list(Method).index)
            savings = compute_savings(base.mean_delay_s, {mt.value: results[mt].mean_delay_s for mt in ranked})
            for meth, res in results.items():
                s = savings[meth.value]
                rows.append(ReportRow(kind.value, scen.value, meth.value, res.mean_delay_s, res.variance_s2,
                                      s.is_best, s.pct, res.runs, res.coverage_failures))

    spread = {}
    for scen in scenarios:
        means = [baselines[(kind.value, scen.value)].mean_delay_s for kind in topologies]
        spread[scen.value] = max(means) - min(means)
    metadata = {
        "master_seed": master_seed,
        "k": k,
        "alpha": alpha,
        "runs": runs,
        "source": source,
        "n": n,
        "m": m,
        "topologies": [t.value for t in topologies],
        "methods": [mt.value for mt in methods],
        "scenarios": [s.value for s in scenarios],
        "topology_seeds": {t.value: TOPOLOGY_SEEDS[t] for t in topologies},
        "config": {s.value: cfg.with_scenario(s).to_dict() for s in scenarios},
        "selections": meta_sel,
        "spectra": meta_spec,
        "half_sample_gap": meta_stab,
        "stable": all(v < 0.02 for v in meta_stab.values()),
        "baseline_spread_s": spread,
        "baselines_within_0_2s": {s: v <= 0.4 for s, v in spread.items()},
    }
    return ExperimentReport(rows, baselines, metadata, samples)


def _fmt_bool(b: bool) -> str:
    return "true" if b else "false"


def report_to_csv(report: ExperimentReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in report.rows:
        writer.writerow([r.topology, r.scenario, r.method, repr(r.mean_delay_s), repr(r.variance_s2),
                         _fmt_bool(r.is_best), repr(r.pct)])
    return buf.getvalue()


def report_to_json(report: ExperimentReport) -> str:
    data = {
        "metadata": report.metadata,
        "rows": [
            {
                "topology": r.topology,
                "scenario": r.scenario,
                "method": r.method,
                "mean_delay_s": r.mean_delay_s,
                "variance_s2": r.variance_s2,
                "is_best": r.is_best,
                "pct": r.pct,
                "runs": r.runs,
                "coverage_failures": r.coverage_failures,
            }
            for r in report.rows
        ],
        "baselines": [
            {"topology": t, "scenario": s, **res.to_dict()} for (t, s), res in report.baselines.items()
        ],
    }
    return json.dumps(data, indent=2) + "\n"


def report_from_json(text: str) -> ExperimentReport:
    data = json.loads(text)
    rows = [ReportRow(**r) for r in data["rows"]]
    baselines = {
        (b["topology"], b["scenario"]): MonteCarloResult(
            b["mean_delay_s"], b["variance_s2"], b["runs"], b["coverage_failures"], np.empty(0)
        )
        for b in data["baselines"]
    }
    return ExperimentReport(rows, baselines, data["metadata"])


def plot_data_csv(report: ExperimentReport, cells: Iterable[tuple[str, str, str]] | None = None) -> str:
    """Per-run knowledge horizons, one row per completed run."""
    keys = list(report.samples) if cells is None else list(cells)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["topology", "scenario", "method", "run", "kh_s"])
    for key in keys:
        for i, value in enumerate(report.samples[key]):
            writer.writerow([*key, i, repr(float(value))])
    return buf.getvalue()


def emit_report(report: ExperimentReport, format: str, sink: str | os.PathLike) -> None:
    if format == "csv":
        text = report_to_csv(report)
    elif format == "json":
        text = report_to_json(report)
    elif format == "plot":
        text = plot_data_csv(report)
    else:
        raise ParameterError(f"unknown report format {format!r}")
    with open(sink, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
