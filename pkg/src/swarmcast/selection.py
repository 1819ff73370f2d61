"""Choosing which nodes receive fast transceivers.

Four rankings are available: degree, shortest-path betweenness, greedy
spectral-radius reduction and a uniform random draw.  Every ranking breaks
ties by the lowest node id.
"""

from __future__ import annotations

import enum
import json
import os
from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .graph import Graph

DEFAULT_K = 10
DEFAULT_ALPHA = 0.1
# scores closer than this are treated as tied
_TIE_TOL = 1e-9


class Method(str, enum.Enum):
    # declaration order doubles as the tie-break order between equal means
    DEGREE = "degree"
    BETWEENNESS = "betweenness"
    SPECTRAL = "spectral"
    RANDOM = "random"
    NONE = "none"

    @classmethod
    def parse(cls, value: "str | Method") -> "Method":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        key = {"av11": "spectral", "bc": "betweenness", "baseline": "none"}.get(key, key)
        try:
            return cls(key)
        except ValueError:
            raise ParameterError(f"unknown selection method {value!r}") from None


@dataclass(frozen=True)
class AllocationPlan:
    """Nodes whose departing links are sped up by ``speedup_factor``."""

    selected: tuple[int, ...]
    speedup_factor: float = DEFAULT_ALPHA
    method: Method = Method.NONE

    def __post_init__(self):
        if not 0.0 < self.speedup_factor <= 1.0:
            raise ParameterError(f"speedup factor must lie in (0, 1], got {self.speedup_factor}")
        if len(set(self.selected)) != len(self.selected):
            raise ParameterError("selected nodes must be distinct")
        if any(v < 0 for v in self.selected):
            raise ParameterError("node ids must be non-negative")
        if self.method is Method.NONE and self.selected:
            raise ParameterError("a baseline plan selects no nodes")

    @property
    def k(self) -> int:
        return len(self.selected)

    def validate_for(self, g: Graph) -> None:
        bad = [v for v in self.selected if v >= g.n]
        if bad:
            raise ParameterError(f"plan nodes {bad} out of range for n={g.n}")

    def to_dict(self) -> dict:
        return {
            "method": self.method.value,
            "k": self.k,
            "alpha": self.speedup_factor,
            "selected": list(self.selected),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AllocationPlan":
        selected = tuple(int(v) for v in data.get("selected", []))
        if "k" in data and int(data["k"]) != len(selected):
            raise ParameterError("plan k does not match the selected list")
        return cls(selected, float(data.get("alpha", DEFAULT_ALPHA)), Method.parse(data.get("method", "none")))


def baseline_plan() -> AllocationPlan:
    return AllocationPlan((), 1.0, Method.NONE)


def save_plan(plan: AllocationPlan, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(plan.to_dict(), fh, indent=2)
        fh.write("\n")


def load_plan(path: str | os.PathLike) -> AllocationPlan:
    with open(path, encoding="utf-8") as fh:
        return AllocationPlan.from_dict(json.load(fh))


def _check_k(g: Graph, k: int) -> None:
    if not 0 <= k <= g.n:
        raise ParameterError(f"k={k} must lie in [0, {g.n}]")


def top_k(scores, k: int) -> tuple[int, ...]:
    """Indices of the ``k`` largest scores, ties to the lowest index."""
    scores = np.asarray(scores, dtype=float)
    order = sorted(range(len(scores)), key=lambda v: (-round(scores[v] / _TIE_TOL), v))
    return tuple(order[:k])


def select_by_degree(g: Graph, k: int = DEFAULT_K, alpha: float = DEFAULT_ALPHA) -> AllocationPlan:
    _check_k(g, k)
    return AllocationPlan(top_k(g.degrees, k), alpha, Method.DEGREE)


def betweenness_scores(g: Graph) -> dict[int, float]:
    """Unnormalized shortest-path betweenness over unordered pairs.

    Brandes' dependency accumulation: one BFS per source, then predecessors
    are credited in reverse BFS order.  Each unordered pair is seen from both
    endpoints, hence the final halving.
    """
    n = g.n
    cb = np.zeros(n)
    for s in range(n):
        sigma = np.zeros(n)
        dist = np.full(n, -1, dtype=np.int64)
        preds: list[list[int]] = [[] for _ in range(n)]
        sigma[s] = 1.0
        dist[s] = 0
        order = []
        queue = deque([s])
        while queue:
            v = queue.popleft()
            order.append(v)
            for w in g.neighbors(v):
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        delta = np.zeros(n)
        for w in reversed(order):
            coeff = (1.0 + delta[w]) / sigma[w]
            for v in preds[w]:
                delta[v] += sigma[v] * coeff
            if w != s:
                cb[w] += delta[w]
    return {v: float(cb[v] / 2.0) for v in range(n)}


def select_by_betweenness(g: Graph, k: int = DEFAULT_K, alpha: float = DEFAULT_ALPHA) -> AllocationPlan:
    _check_k(g, k)
    scores = betweenness_scores(g)
    return AllocationPlan(top_k([scores[v] for v in range(g.n)], k), alpha, Method.BETWEENNESS)


def residual_lambda_max(a: np.ndarray, removed) -> float:
    """Largest adjacency eigenvalue after deleting the ``removed`` nodes."""
    keep = np.ones(a.shape[0], dtype=bool)
    keep[list(removed)] = False
    if not keep.any():
        return 0.0
    sub = a[np.ix_(keep, keep)]
    return float(np.linalg.eigvalsh(sub)[-1])


def select_spectral(g: Graph, k: int = DEFAULT_K, alpha: float = DEFAULT_ALPHA) -> AllocationPlan:
    """Greedy spectral-radius reduction.

    At each step the node whose deletion leaves the smallest largest
    adjacency eigenvalue is taken.  This is a node analogue of the link
    removal heuristics for lowering the spectral radius.
    """
    _check_k(g, k)
    a = g.adjacency_matrix()
    chosen: list[int] = []
    for _ in range(k):
        best, best_val = -1, np.inf
        for v in range(g.n):
            if v in chosen:
                continue
            val = residual_lambda_max(a, chosen + [v])
            if val < best_val - _TIE_TOL:
                best, best_val = v, val
        chosen.append(best)
    return AllocationPlan(tuple(chosen), alpha, Method.SPECTRAL)


def select_random(g: Graph, k: int = DEFAULT_K, seed: int = 0, alpha: float = DEFAULT_ALPHA) -> AllocationPlan:
    _check_k(g, k)
    rng = np.random.default_rng(seed)
    picks = rng.choice(g.n, size=k, replace=False)
    return AllocationPlan(tuple(int(v) for v in picks), alpha, Method.RANDOM)


def select(
    g: Graph, method: Method | str, k: int = DEFAULT_K, alpha: float = DEFAULT_ALPHA, seed: int = 0
) -> AllocationPlan:
    method = Method.parse(method)
    if method is Method.DEGREE:
        return select_by_degree(g, k, alpha)
    if method is Method.BETWEENNESS:
        return select_by_betweenness(g, k, alpha)
    if method is Method.SPECTRAL:
        return select_spectral(g, k, alpha)
    if method is Method.RANDOM:
        return select_random(g, k, seed, alpha)
    return baseline_plan()


def selection_overlap(a: AllocationPlan, b: AllocationPlan) -> int:
    return len(set(a.selected) & set(b.selected))
