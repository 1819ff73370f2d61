"""Command line entry point: ``swarmcast <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .broadcast import monte_carlo, run_broadcast, write_contact_log
from .delays import ScenarioConfig, instantiate_links, load_config
from .errors import SwarmcastError
from .experiment import METHODS, TOPOLOGIES, emit_report, run_experiment
from .graph import Kind, build_topology, graph_stats, load_graph, save_graph
from .selection import DEFAULT_ALPHA, DEFAULT_K, Method, load_plan, save_plan, select
from .spectral import spectral_summary


def _write_json(data, path):
    text = json.dumps(data, indent=2) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _config(path) -> ScenarioConfig:
    return load_config(path) if path else ScenarioConfig()


def cmd_generate(args):
    params = {}
    for name in ("rows", "cols", "hubs", "leaves", "core_degree", "rings", "ring_size"):
        value = getattr(args, name)
        if value is not None:
            params[name] = value
    g = build_topology(args.kind, args.nodes, args.edges, seed=args.seed, **params)
    if args.out in (None, "-"):
        save_graph(g, sys.stdout)
    else:
        save_graph(g, args.out)
    stats = graph_stats(g)
    print(
        f"{Kind.parse(args.kind).value}: n={stats['n']} m={stats['m']} "
        f"avg_degree={stats['avg_degree']:.3f} diameter={stats['diameter']}",
        file=sys.stderr,
    )


def cmd_spectra(args):
    g = load_graph(args.graph)
    _write_json(spectral_summary(g).to_dict(), args.out)


def cmd_select(args):
    g = load_graph(args.graph)
    plan = select(g, args.method, args.k, args.alpha, seed=args.seed)
    if args.out in (None, "-"):
        _write_json(plan.to_dict(), None)
    else:
        save_plan(plan, args.out)


def cmd_simulate(args):
    g = load_graph(args.graph)
    cfg = _config(args.config)
    plan = load_plan(args.plan) if args.plan else None
    links = instantiate_links(g, cfg, plan, seed=args.link_seed)
    result = monte_carlo(g, links, cfg, args.source, args.runs, args.seed)
    _write_json(result.to_dict(), args.out)
    if args.log:
        # contact log of the first run of the batch
        from .broadcast import run_seeds

        outcome = run_broadcast(g, links, cfg, args.source, int(run_seeds(args.seed, 1)[0]), keep_log=True)
        write_contact_log(outcome.contact_log, args.log)


def _split(value: str, universe, parse):
    if value.strip().lower() == "all":
        return list(universe)
    return [parse(v) for v in value.split(",") if v.strip()]


def cmd_report(args):
    cfg = _config(args.config)
    scenarios = args.scenarios.split(",") if args.scenarios else None
    report = run_experiment(
        cfg,
        _split(args.topologies, TOPOLOGIES, Kind.parse),
        _split(args.methods, METHODS, Method.parse),
        k=args.k,
        alpha=args.alpha,
        runs=args.runs,
        master_seed=args.seed,
        scenarios=scenarios,
        source=args.source,
    )
    emit_report(report, "csv", args.out)
    if args.json:
        emit_report(report, "json", args.json)
    if args.plot_data:
        emit_report(report, "plot", args.plot_data)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="swarmcast", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="build a normalized topology and write its edge list")
    p.add_argument("--kind", required=True, choices=[k.value for k in Kind] + ["er", "sw"])
    p.add_argument("--nodes", type=int, default=100)
    p.add_argument("--edges", type=int, default=140)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out")
    for name in ("rows", "cols", "hubs", "leaves", "core-degree", "rings", "ring-size"):
        p.add_argument(f"--{name}", type=int)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("spectra", help="spectral indicators and delay bound of a graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_spectra)

    p = sub.add_parser("select", help="choose the nodes that get fast transceivers")
    p.add_argument("--graph", required=True)
    p.add_argument("--method", required=True, choices=[m.value for m in METHODS] + ["av11", "bc"])
    p.add_argument("--k", type=int, default=DEFAULT_K)
    p.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("simulate", help="Monte Carlo knowledge horizon of one graph and plan")
    p.add_argument("--graph", required=True)
    p.add_argument("--config")
    p.add_argument("--plan")
    p.add_argument("--runs", type=int, default=1000)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--link-seed", type=int, default=0, help="seed for per-link scenario II parameters")
    p.add_argument("--source", type=int, default=0)
    p.add_argument("--out")
    p.add_argument("--log", help="CSV contact log of the first run")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("report", help="run the topology x method grid")
    p.add_argument("--config")
    p.add_argument("--topologies", default="all")
    p.add_argument("--methods", default="all")
    p.add_argument("--scenarios", help="comma list, e.g. I,II (default: the config's scenario)")
    p.add_argument("--k", type=int, default=DEFAULT_K)
    p.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    p.add_argument("--runs", type=int, default=1000)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--source", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--json")
    p.add_argument("--plot-data")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (SwarmcastError, OSError) as exc:
        print(f"swarmcast {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
