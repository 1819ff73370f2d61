"""Knowledge-horizon simulator for gossip broadcast in underwater swarms."""

__version__ = "0.1.0"

from .broadcast import BroadcastOutcome, MonteCarloResult, monte_carlo, reachability_check, run_broadcast
from .delays import (
    ContactSample,
    LinkModel,
    LinkTable,
    Scenario,
    ScenarioConfig,
    instantiate_links,
    load_config,
    parse_config,
    propagation_delay,
    sample_contact,
    sample_truncated_gaussian,
)
from .experiment import ExperimentReport, compute_savings, emit_report, run_experiment
from .graph import (
    Graph,
    Kind,
    build_topology,
    graph_stats,
    load_graph,
    normalize_edge_count,
    save_graph,
)
from .selection import (
    AllocationPlan,
    Method,
    betweenness_scores,
    select,
    select_by_betweenness,
    select_by_degree,
    select_random,
    select_spectral,
    selection_overlap,
)
from .spectral import (
    SpectrumSummary,
    StabilityBound,
    adjacency_spectrum,
    laplacian_spectrum,
    max_stable_delay,
    spectral_summary,
)
