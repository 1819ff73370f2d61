"""Swarm communication graphs: construction, edge-count normalization and I/O.

Five base recipes are provided (Erdos-Renyi, small-world, cluster, grid and
galaxy).  Each recipe is followed by :func:`normalize_edge_count`, so that all
topologies can be compared at the same node and edge counts.
"""

from __future__ import annotations

import enum
import heapq
import io
import math
import os
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, TextIO

import numpy as np

from .errors import ConstructionError, GraphParseError, NormalizationError, ParameterError

NOMINAL_DISTANCE_M = 150.0


class Kind(str, enum.Enum):
    ERDOS_RENYI = "erdos_renyi"
    SMALL_WORLD = "small_world"
    CLUSTER = "cluster"
    GRID = "grid"
    GALAXY = "galaxy"

    @classmethod
    def parse(cls, value: "str | Kind") -> "Kind":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("-", "_")
        aliases = {"er": "erdos_renyi", "sw": "small_world", "smallworld": "small_world"}
        key = aliases.get(key, key)
        try:
            return cls(key)
        except ValueError:
            raise ParameterError(f"unknown topology kind {value!r}") from None


@dataclass(frozen=True)
class Graph:
    """Immutable undirected simple graph on nodes ``0..n-1``.

    ``edges`` holds ``(u, v)`` pairs with ``u < v`` in lexicographic order and
    ``distances`` the nominal link length in meters for each edge.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    distances: tuple[float, ...]

    def __post_init__(self):
        if self.n < 0:
            raise ParameterError("node count must be non-negative")
        if len(self.edges) != len(self.distances):
            raise ParameterError("one distance per edge is required")
        prev = None
        for u, v in self.edges:
            if not (0 <= u < v < self.n):
                raise ParameterError(f"edge ({u}, {v}) is not a normalized pair in range")
            if prev is not None and (u, v) <= prev:
                raise ParameterError("edges must be sorted and unique")
            prev = (u, v)

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[tuple[int, int]],
        distance_m: float | Iterable[float] = NOMINAL_DISTANCE_M,
    ) -> "Graph":
        edges = [(int(u), int(v)) for u, v in edges]
        if isinstance(distance_m, (int, float)):
            dists = [float(distance_m)] * len(edges)
        else:
            dists = [float(d) for d in distance_m]
            if len(dists) != len(edges):
                raise ParameterError("one distance per edge is required")
        table: dict[tuple[int, int], float] = {}
        for (u, v), d in zip(edges, dists):
            if u == v:
                raise ParameterError(f"self-loop on node {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ParameterError(f"edge ({u}, {v}) out of range for n={n}")
            key = (u, v) if u < v else (v, u)
            if key in table:
                raise ParameterError(f"duplicate edge {key}")
            table[key] = d
        keys = sorted(table)
        return cls(n, tuple(keys), tuple(table[k] for k in keys))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def _adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(sorted(a)) for a in adj)

    def neighbors(self, v: int) -> tuple[int, ...]:
        """Neighbors of ``v`` in ascending order (the contact order)."""
        return self._adjacency[v]

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.array([len(a) for a in self._adjacency], dtype=np.int64)

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        """``(indptr, indices)`` with ascending neighbors.

        Position ``e`` in ``indices`` identifies the directed edge
        ``u -> indices[e]`` for ``indptr[u] <= e < indptr[u + 1]``.
        """
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        indptr[1:] = np.cumsum(self.degrees)
        indices = np.fromiter(
            (w for a in self._adjacency for w in a), dtype=np.int64, count=2 * self.m
        )
        indptr.flags.writeable = False
        indices.flags.writeable = False
        return indptr, indices

    def directed_edge_id(self, u: int, v: int) -> int:
        indptr, indices = self.csr
        lo, hi = indptr[u], indptr[u + 1]
        pos = lo + int(np.searchsorted(indices[lo:hi], v))
        if pos >= hi or indices[pos] != v:
            raise KeyError((u, v))
        return int(pos)

    def distance(self, u: int, v: int) -> float:
        key = (u, v) if u < v else (v, u)
        return self._distance_map[key]

    @cached_property
    def _distance_map(self) -> dict[tuple[int, int], float]:
        return dict(zip(self.edges, self.distances))

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        if self.m:
            e = np.asarray(self.edges)
            a[e[:, 0], e[:, 1]] = 1.0
            a[e[:, 1], e[:, 0]] = 1.0
        return a

    def laplacian_matrix(self) -> np.ndarray:
        a = self.adjacency_matrix()
        return np.diag(a.sum(axis=1)) - a

    def components(self) -> list[list[int]]:
        seen = [False] * self.n
        comps = []
        for start in range(self.n):
            if seen[start]:
                continue
            seen[start] = True
            comp = [start]
            queue = deque([start])
            while queue:
                u = queue.popleft()
                for w in self._adjacency[u]:
                    if not seen[w]:
                        seen[w] = True
                        comp.append(w)
                        queue.append(w)
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    def with_edges(self, edges: Iterable[tuple[int, int]], distance_m: float = NOMINAL_DISTANCE_M) -> "Graph":
        """Copy with ``edges`` added (new edges get ``distance_m``)."""
        table = dict(self._distance_map)
        for u, v in edges:
            key = (u, v) if u < v else (v, u)
            table.setdefault(key, distance_m)
        keys = sorted(table)
        return Graph.from_edges(self.n, keys, [table[k] for k in keys])

    def without_edges(self, edges: Iterable[tuple[int, int]]) -> "Graph":
        drop = {(u, v) if u < v else (v, u) for u, v in edges}
        keep = [(e, d) for e, d in zip(self.edges, self.distances) if e not in drop]
        return Graph(self.n, tuple(e for e, _ in keep), tuple(d for _, d in keep))


def _bfs_depths(g: Graph, source: int) -> list[int]:
    depth = [-1] * g.n
    depth[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in g.neighbors(u):
            if depth[w] < 0:
                depth[w] = depth[u] + 1
                queue.append(w)
    return depth


def graph_stats(g: Graph) -> dict:
    """Basic counts plus the diameter of the largest component."""
    if g.n == 0:
        return {"n": 0, "m": 0, "avg_degree": 0.0, "max_degree": 0, "is_connected": True, "diameter": 0}
    comps = g.components()
    largest = max(comps, key=len)
    diameter = 0
    for s in largest:
        diameter = max(diameter, max(_bfs_depths(g, s)))
    return {
        "n": g.n,
        "m": g.m,
        "avg_degree": 2.0 * g.m / g.n,
        "max_degree": int(g.degrees.max()),
        "is_connected": len(comps) == 1,
        "diameter": diameter,
    }


def bridges(g: Graph) -> set[tuple[int, int]]:
    """Edges whose removal disconnects their component (iterative Tarjan)."""
    disc = [-1] * g.n
    low = [0] * g.n
    found: set[tuple[int, int]] = set()
    timer = 0
    for root in range(g.n):
        if disc[root] >= 0:
            continue
        disc[root] = low[root] = timer
        timer += 1
        stack = [(root, -1, iter(g.neighbors(root)))]
        while stack:
            u, parent, it = stack[-1]
            advanced = False
            for w in it:
                if w == parent:
                    continue
                if disc[w] < 0:
                    disc[w] = low[w] = timer
                    timer += 1
                    stack.append((w, u, iter(g.neighbors(w))))
                    advanced = True
                    break
                low[u] = min(low[u], disc[w])
            if not advanced:
                stack.pop()
                if parent >= 0:
                    low[parent] = min(low[parent], low[u])
                    if low[u] > disc[parent]:
                        found.add((parent, u) if parent < u else (u, parent))
    return found


def normalize_edge_count(
    g: Graph, m_target: int, seed: int = 0, distance_m: float = NOMINAL_DISTANCE_M
) -> Graph:
    """Add or remove edges until ``g`` has exactly ``m_target`` edges.

    Additions are drawn uniformly from the absent pairs.  Removals are drawn
    one at a time among the non-bridge edges, so the graph never disconnects.
    Candidates are kept in lexicographic order, which makes the result a pure
    function of ``seed``.
    """
    if not g.is_connected():
        raise NormalizationError("input graph must be connected")
    max_edges = g.n * (g.n - 1) // 2
    if m_target < g.n - 1 or m_target > max_edges:
        raise NormalizationError(f"m_target={m_target} infeasible for a connected graph on {g.n} nodes")
    rng = np.random.default_rng(seed)
    if m_target > g.m:
        present = set(g.edges)
        absent = [(u, v) for u in range(g.n) for v in range(u + 1, g.n) if (u, v) not in present]
        picks = rng.choice(len(absent), size=m_target - g.m, replace=False)
        return g.with_edges((absent[i] for i in picks), distance_m)
    while g.m > m_target:
        cut = bridges(g)
        candidates = [e for e in g.edges if e not in cut]
        if not candidates:
            raise NormalizationError(f"stuck at {g.m} edges: every remaining edge is a bridge")
        g = g.without_edges([candidates[int(rng.integers(len(candidates)))]])
    return g


def _largest_divisor_at_most(n: int, bound: float) -> int:
    best = 1
    for d in range(1, int(math.isqrt(n)) + 1):
        if n % d == 0 and d <= bound:
            best = d
    return best


def _random_tree(n: int, rng: np.random.Generator) -> list[tuple[int, int]]:
    """Uniform random labeled tree from a random Pruefer sequence."""
    if n < 2:
        return []
    if n == 2:
        return [(0, 1)]
    seq = [int(x) for x in rng.integers(0, n, size=n - 2)]
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    leaves = [v for v in range(n) if degree[v] == 1]
    heapq.heapify(leaves)
    edges = []
    for x in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, x))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, x)
    edges.append((heapq.heappop(leaves), heapq.heappop(leaves)))
    return edges


def _circulant_offsets(h: int, degree: int) -> list[int]:
    if not 0 <= degree <= h - 1:
        raise ParameterError(f"core degree {degree} impossible with {h} hubs")
    offsets = list(range(1, degree // 2 + 1))
    if degree % 2:
        if h % 2:
            raise ParameterError("odd core degree needs an even hub count")
        offsets.append(h // 2)
    return offsets


def default_core_degree(hubs: int) -> int:
    # complete core minus the hub ring; complete below 6 hubs so the core stays connected
    return hubs - 3 if hubs >= 6 else hubs - 1


def base_topology(
    kind: Kind | str,
    n: int,
    *,
    seed: int = 0,
    rows: int | None = None,
    cols: int | None = None,
    hubs: int | None = None,
    leaves: int | None = None,
    core_degree: int | None = None,
    rings: int | None = None,
    ring_size: int | None = None,
    lattice_degree: int = 2,
    distance_m: float = NOMINAL_DISTANCE_M,
) -> Graph:
    """Un-normalized base construction for ``kind``.

    Labeling is fixed per recipe: galaxy hubs take the lowest ids, cluster
    rings are numbered consecutively, grids are row-major.
    """
    kind = Kind.parse(kind)
    if n < 2:
        raise ParameterError("at least two nodes are required")
    edges: set[tuple[int, int]] = set()

    def link(u, v):
        if u != v:
            edges.add((u, v) if u < v else (v, u))

    if kind is Kind.GRID:
        if rows is None and cols is None:
            rows = _largest_divisor_at_most(n, math.sqrt(n))
        if rows is None:
            rows = n // cols if cols else 0
        if cols is None:
            cols = n // rows if rows else 0
        if rows < 1 or cols < 1 or rows * cols != n:
            raise ParameterError(f"grid {rows}x{cols} does not factor n={n}")
        for r in range(rows):
            for c in range(cols):
                v = r * cols + c
                if c + 1 < cols:
                    link(v, v + 1)
                if r + 1 < rows:
                    link(v, v + cols)
    elif kind is Kind.GALAXY:
        if hubs is None and leaves is None:
            hubs = _largest_divisor_at_most(n, math.sqrt(n))
        if hubs is None:
            hubs = n // (leaves + 1)
        if leaves is None:
            leaves = n // hubs - 1
        if hubs < 1 or leaves < 0 or hubs * (leaves + 1) != n:
            raise ParameterError(f"galaxy with {hubs} hubs x {leaves} leaves does not give n={n}")
        if core_degree is None:
            core_degree = default_core_degree(hubs)
        for off in _circulant_offsets(hubs, core_degree):
            for i in range(hubs):
                link(i, (i + off) % hubs)
        for i in range(hubs):
            for j in range(leaves):
                link(i, hubs + i * leaves + j)
    elif kind is Kind.CLUSTER:
        if rings is None and ring_size is None:
            rings = _largest_divisor_at_most(n, math.sqrt(n))
        if rings is None:
            rings = n // ring_size
        if ring_size is None:
            ring_size = n // rings
        if rings < 1 or ring_size < 1 or rings * ring_size != n:
            raise ParameterError(f"{rings} rings of {ring_size} do not give n={n}")
        for r in range(rings):
            base = r * ring_size
            for j in range(ring_size):
                link(base + j, base + (j + 1) % ring_size)
        if rings > 1:
            for r in range(rings):
                nxt = (r + 1) % rings
                link(r * ring_size + ring_size - 1, nxt * ring_size)
    elif kind is Kind.SMALL_WORLD:
        if lattice_degree < 2 or lattice_degree % 2:
            raise ParameterError("lattice degree must be a positive even number")
        for v in range(n):
            for off in range(1, lattice_degree // 2 + 1):
                link(v, (v + off) % n)
    elif kind is Kind.ERDOS_RENYI:
        for u, v in _random_tree(n, np.random.default_rng(seed)):
            link(u, v)
    return Graph.from_edges(n, sorted(edges), distance_m)


def build_topology(
    kind: Kind | str,
    n: int,
    m_target: int,
    seed: int = 0,
    **params,
) -> Graph:
    """Base recipe for ``kind`` normalized to exactly ``m_target`` edges.

    Keyword ``params`` are forwarded to :func:`base_topology`.
    """
    if n < 2:
        raise ParameterError("at least two nodes are required")
    if m_target < n - 1 or m_target > n * (n - 1) // 2:
        raise ConstructionError(f"m_target={m_target} infeasible for a connected graph on {n} nodes")
    base = base_topology(kind, n, seed=seed, **params)
    if not base.is_connected():
        # only reachable for kinds whose parameters leave isolated parts
        raise ConstructionError(f"{Kind.parse(kind).value} base construction is disconnected")
    distance_m = params.get("distance_m", NOMINAL_DISTANCE_M)
    return normalize_edge_count(base, m_target, seed=seed, distance_m=distance_m)


def save_graph(g: Graph, sink: str | os.PathLike | TextIO) -> None:
    if isinstance(sink, (str, os.PathLike)):
        with open(sink, "w", encoding="utf-8") as fh:
            save_graph(g, fh)
        return
    sink.write(f"nodes {g.n}\n")
    for (u, v), d in zip(g.edges, g.distances):
        sink.write(f"{u} {v} {d:.17g}\n")


def dumps_graph(g: Graph) -> str:
    buf = io.StringIO()
    save_graph(g, buf)
    return buf.getvalue()


def load_graph(source: str | os.PathLike | TextIO) -> Graph:
    if isinstance(source, (str, os.PathLike)):
        with open(source, encoding="utf-8") as fh:
            return load_graph(fh)
    n = None
    edges: list[tuple[int, int]] = []
    dists: list[float] = []
    seen: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(source, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 2 or parts[0] != "nodes":
                raise GraphParseError("expected header 'nodes <N>'", lineno)
            try:
                n = int(parts[1])
            except ValueError:
                raise GraphParseError(f"bad node count {parts[1]!r}", lineno) from None
            if n < 0:
                raise GraphParseError("node count must be non-negative", lineno)
            continue
        if len(parts) != 3:
            raise GraphParseError(f"expected '<u> <v> <distance_m>', got {line!r}", lineno)
        try:
            u, v, d = int(parts[0]), int(parts[1]), float(parts[2])
        except ValueError:
            raise GraphParseError(f"malformed edge {line!r}", lineno) from None
        if u == v:
            raise GraphParseError(f"self-loop on node {u}", lineno)
        if not (0 <= u < n and 0 <= v < n):
            raise GraphParseError(f"node id out of range for n={n} in {line!r}", lineno)
        if not math.isfinite(d) or d < 0:
            raise GraphParseError(f"bad distance {parts[2]!r}", lineno)
        key = (u, v) if u < v else (v, u)
        if key in seen:
            raise GraphParseError(f"duplicate edge {key}", lineno)
        seen.add(key)
        edges.append(key)
        dists.append(d)
    if n is None:
        raise GraphParseError("missing 'nodes <N>' header")
    return Graph.from_edges(n, edges, dists)


def loads_graph(text: str) -> Graph:
    return load_graph(io.StringIO(text))
