"""Time the broadcast kernels under numba and under the plain-Python fallback.

Each backend runs in its own interpreter because the choice is made at
import time from ``SWARMCAST_DISABLE_NUMBA``.

    python benchmarks/bench_kernels.py --runs 200
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
from swarmcast import _kernels
from swarmcast.broadcast import monte_carlo
from swarmcast.delays import ScenarioConfig, instantiate_links
from swarmcast.graph import build_topology

runs, kinds, scenarios = int(sys.argv[1]), sys.argv[2].split(","), sys.argv[3].split(",")
rows = []
for kind in kinds:
    g = build_topology(kind, 100, 140, seed=1)
    for scen in scenarios:
        cfg = ScenarioConfig(scenario=scen)
        links = instantiate_links(g, cfg)
        t0 = time.perf_counter()
        monte_carlo(g, links, cfg, n_runs=1, master_seed=0)  # compile or warm up
        warm = time.perf_counter() - t0
        t0 = time.perf_counter()
        res = monte_carlo(g, links, cfg, n_runs=runs, master_seed=0)
        rows.append({"kind": kind, "scenario": scen, "warmup_s": warm,
                     "elapsed_s": time.perf_counter() - t0, "mean_kh_s": res.mean_delay_s})
json.dump({"backend": _kernels.BACKEND, "rows": rows}, sys.stdout)
"""


def run_backend(disable: bool, runs: int, kinds: str, scenarios: str) -> dict:
    env = dict(os.environ)
    env.pop("SWARMCAST_DISABLE_NUMBA", None)
    if disable:
        env["SWARMCAST_DISABLE_NUMBA"] = "1"
    out = subprocess.run(
        [sys.executable, "-c", WORKER, str(runs), kinds, scenarios],
        env=env, capture_output=True, text=True, check=True,
    )
    return json.loads(out.stdout)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--runs", type=int, default=200)
    parser.add_argument("--kinds", default="galaxy,grid,erdos_renyi")
    parser.add_argument("--scenarios", default="I,II")
    args = parser.parse_args(argv)

    jit = run_backend(False, args.runs, args.kinds, args.scenarios)
    py = run_backend(True, args.runs, args.kinds, args.scenarios)
    print(f"{'topology':<12} {'scen':<4} {'numba ms/run':>13} {'python ms/run':>14} {'speedup':>8}  same result")
    for a, b in zip(jit["rows"], py["rows"]):
        per_a = 1e3 * a["elapsed_s"] / args.runs
        per_b = 1e3 * b["elapsed_s"] / args.runs
        same = a["mean_kh_s"] == b["mean_kh_s"]
        print(f"{a['kind']:<12} {a['scenario']:<4} {per_a:13.3f} {per_b:14.3f} {per_b / per_a:8.1f}  {same}")
    print(f"backends: {jit['backend']} vs {py['backend']}; numba first-call warmup "
          f"{max(r['warmup_s'] for r in jit['rows']):.2f}s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
