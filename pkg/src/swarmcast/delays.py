"""Stochastic link model: availability, MAC delay and acoustic propagation.

Scenario I draws every MAC delay from one shared uniform distribution over a
fixed 150 m link.  Scenario II gives each directed link its own Gaussian
restricted to positive values and re-draws the link length in 150-200 m on
each attempt.  Links leaving a node of the allocation plan have their whole
contact delay multiplied by the plan's speedup factor.
"""

from __future__ import annotations

import dataclasses
import enum
import math
import os
from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from . import _kernels
from .errors import ConfigError, DomainError
from .graph import Graph
from .selection import AllocationPlan, baseline_plan


class Scenario(str, enum.Enum):
    I = "I"  # noqa: E741
    II = "II"

    @classmethod
    def parse(cls, value) -> "Scenario":
        if isinstance(value, cls):
            return value
        key = str(value).strip().upper()
        key = {"1": "I", "2": "II"}.get(key, key)
        try:
            return cls(key)
        except ValueError:
            raise ConfigError(f"unknown scenario {value!r}") from None

    @property
    def code(self) -> int:
        return _kernels.SCENARIO_UNIFORM if self is Scenario.I else _kernels.SCENARIO_GAUSSIAN


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: Scenario = Scenario.I
    uniform_lo: float = 0.5
    uniform_hi: float = 3.5
    mu_lo: float = 1.0
    mu_hi: float = 3.0
    sigma_lo: float = 0.3
    sigma_hi: float = 1.0
    p_on: float = 0.9
    distance_fixed_m: float = 150.0
    distance_lo_m: float = 150.0
    distance_hi_m: float = 200.0
    sound_speed_mps: float = 1500.0
    message_bits: int = 256 * 8
    inter_pass_gap_s: float = 1.0
    max_passes: int = 50
    # skipping the sender makes a node's schedule depend on who reached it
    # first, which breaks monotonicity of arrival times in the link delays
    skip_sender: bool = False

    def __post_init__(self):
        object.__setattr__(self, "scenario", Scenario.parse(self.scenario))
        if not 0.0 < self.uniform_lo <= self.uniform_hi:
            raise ConfigError("need 0 < uniform_lo <= uniform_hi")
        if not 0.0 <= self.sigma_lo <= self.sigma_hi:
            raise ConfigError("need 0 <= sigma_lo <= sigma_hi")
        if not (math.isfinite(self.mu_lo) and math.isfinite(self.mu_hi) and self.mu_lo <= self.mu_hi):
            raise ConfigError("need finite mu_lo <= mu_hi")
        if self.sigma_lo == 0.0 and self.mu_lo <= 0.0:
            raise ConfigError("sigma may be 0, so every mu must be positive")
        if not 0.0 < self.p_on <= 1.0:
            raise ConfigError("p_on must lie in (0, 1]")
        if not self.sound_speed_mps > 0:
            raise ConfigError("sound speed must be positive")
        if self.distance_fixed_m < 0 or not 0 <= self.distance_lo_m <= self.distance_hi_m:
            raise ConfigError("distances must be non-negative with lo <= hi")
        if self.message_bits <= 0:
            raise ConfigError("message_bits must be positive")
        if self.inter_pass_gap_s < 0 or self.max_passes < 1:
            raise ConfigError("need inter_pass_gap_s >= 0 and max_passes >= 1")

    def with_scenario(self, scenario) -> "ScenarioConfig":
        return dataclasses.replace(self, scenario=Scenario.parse(scenario))

    def distance_bounds(self) -> tuple[float, float]:
        if self.scenario is Scenario.I:
            return self.distance_fixed_m, self.distance_fixed_m
        return self.distance_lo_m, self.distance_hi_m

    def to_dict(self) -> dict:
        out = dataclasses.asdict(self)
        out["scenario"] = self.scenario.value
        return out


_FIELD_TYPES = {f.name: f.type for f in dataclasses.fields(ScenarioConfig)}


def _parse_bool(value: str) -> bool:
    low = value.lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(value)


def parse_config(text: str) -> ScenarioConfig:
    """Parse ``key=value`` lines; ``#`` starts a comment, unknown keys fail."""
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _FIELD_TYPES:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        try:
            if key == "scenario":
                values[key] = Scenario.parse(value)
            elif key in ("message_bits", "max_passes"):
                values[key] = int(value)
            elif key == "skip_sender":
                values[key] = _parse_bool(value)
            else:
                values[key] = float(value)
        except ValueError:
            raise ConfigError(f"line {lineno}: bad value {value!r} for {key}") from None
    return ScenarioConfig(**values)


def load_config(path: str | os.PathLike) -> ScenarioConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def dump_config(cfg: ScenarioConfig) -> str:
    return "".join(f"{k}={v}\n" for k, v in cfg.to_dict().items())


@dataclass(frozen=True)
class LinkModel:
    source: int
    target: int
    mu: float
    sigma: float
    alpha_out: float
    distance_lo_m: float
    distance_hi_m: float

    @property
    def distance_fixed(self) -> bool:
        return self.distance_lo_m == self.distance_hi_m


@dataclass(frozen=True)
class ContactSample:
    available: bool
    delay_s: float | None = None


@dataclass(frozen=True, eq=False)
class LinkTable(Mapping):
    """Per-direction link parameters aligned with ``graph.csr``.

    Behaves as a read-only mapping ``(u, v) -> LinkModel``; the arrays are
    what the simulator kernels consume.
    """

    graph: Graph
    cfg: ScenarioConfig
    plan: AllocationPlan
    mu: np.ndarray = field(repr=False)
    sigma: np.ndarray = field(repr=False)
    alpha: np.ndarray = field(repr=False)

    def __getitem__(self, key: tuple[int, int]) -> LinkModel:
        u, v = key
        e = self.graph.directed_edge_id(u, v)
        lo, hi = self.cfg.distance_bounds()
        return LinkModel(u, v, float(self.mu[e]), float(self.sigma[e]), float(self.alpha[e]), lo, hi)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        indptr, indices = self.graph.csr
        for u in range(self.graph.n):
            for e in range(indptr[u], indptr[u + 1]):
                yield (u, int(indices[e]))

    def __len__(self) -> int:
        return 2 * self.graph.m

    def with_plan(self, plan: AllocationPlan) -> "LinkTable":
        """Same drawn (mu, sigma) with the speedups of another plan."""
        return dataclasses.replace(self, plan=plan, alpha=_alpha_out(self.graph, plan))


def _alpha_out(g: Graph, plan: AllocationPlan) -> np.ndarray:
    plan.validate_for(g)
    indptr, _ = g.csr
    node_alpha = np.ones(g.n)
    node_alpha[list(plan.selected)] = plan.speedup_factor
    alpha = np.repeat(node_alpha, np.diff(indptr))
    alpha.flags.writeable = False
    return alpha


def instantiate_links(
    g: Graph, cfg: ScenarioConfig, plan: AllocationPlan | None = None, seed: int = 0
) -> LinkTable:
    """Draw per-direction link parameters once.

    Scenario II takes ``mu`` and ``sigma`` uniformly from the configured
    ranges, independently per direction.  Scenario I links share the
    config's uniform distribution, so their ``mu``/``sigma`` stay zero.
    """
    plan = plan or baseline_plan()
    size = 2 * g.m
    if cfg.scenario is Scenario.II:
        rng = np.random.default_rng(seed)
        mu = rng.uniform(cfg.mu_lo, cfg.mu_hi, size=size)
        sigma = rng.uniform(cfg.sigma_lo, cfg.sigma_hi, size=size)
    else:
        mu = np.zeros(size)
        sigma = np.zeros(size)
    mu.flags.writeable = False
    sigma.flags.writeable = False
    return LinkTable(g, cfg, plan, mu, sigma, _alpha_out(g, plan))


def propagation_delay(distance_m: float, sound_speed_mps: float = 1500.0) -> float:
    if distance_m < 0 or not sound_speed_mps > 0:
        raise DomainError("need distance >= 0 and speed > 0")
    return distance_m / sound_speed_mps


def sample_truncated_gaussian(mu: float, sigma: float, rng: np.random.Generator, size=None):
    """Gaussian(mu, sigma) conditioned on positive values.

    Vectorized rejection: normal proposals when the cut is near or below the
    mean, Robert's translated-exponential proposals in the upper tail.
    ``sigma == 0`` returns ``mu`` when it is positive.
    """
    if sigma < 0:
        raise DomainError("sigma must be non-negative")
    if sigma == 0:
        if mu <= 0:
            raise DomainError("degenerate distribution at a non-positive value")
        return mu if size is None else np.full(size, float(mu))
    count = 1 if size is None else int(np.prod(size))
    a = -mu / sigma
    out = np.empty(count)
    filled = 0
    if a < 0.45:
        while filled < count:
            batch = max(64, int(1.2 * (count - filled)))
            x = mu + sigma * rng.standard_normal(batch)
            x = x[x > 0][: count - filled]
            out[filled:filled + x.size] = x
            filled += x.size
    else:
        root = a * (1.0 + math.sqrt(1.0 + 4.0 / (a * a)))
        lam, shift = 0.5 * root, -2.0 / root
        while filled < count:
            batch = max(64, int(1.5 * (count - filled)))
            w = rng.exponential(1.0 / lam, batch)
            keep = rng.random(batch) <= np.exp(-0.5 * (shift + w) ** 2)
            # sigma * w equals mu + sigma * z without the cancellation
            x = np.maximum(sigma * w[keep], 5e-324)[: count - filled]
            out[filled:filled + x.size] = x
            filled += x.size
    if size is None:
        return float(out[0])
    return out.reshape(size)


def sample_contact(
    link: LinkModel, cfg: ScenarioConfig, rng: np.random.Generator, pass_index: int = 0
) -> ContactSample:
    """One contact attempt on ``link``, through the simulator's own sampler."""
    seed = int(rng.integers(0, 2**63))
    lo, hi = link.distance_lo_m, link.distance_hi_m
    ok, delay = _kernels.contact(
        0, pass_index, np.uint64(seed), link.mu, link.sigma, link.alpha_out, cfg.scenario.code,
        cfg.uniform_lo, cfg.uniform_hi, cfg.p_on, lo, hi, cfg.sound_speed_mps,
    )
    return ContactSample(True, float(delay)) if ok else ContactSample(False)
