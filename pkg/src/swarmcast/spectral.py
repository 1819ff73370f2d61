"""Adjacency/Laplacian spectra and the delay bound for consensus stability."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import DomainError
from .graph import Graph


@dataclass(frozen=True)
class SpectrumSummary:
    lambda_max_adj: float
    spectral_gap_adj: float
    spectral_gap_lap: float
    algebraic_connectivity: float
    adjacency_eigenvalues: tuple[float, ...]
    laplacian_eigenvalues: tuple[float, ...]

    @property
    def tau_max(self) -> float:
        return max_stable_delay(self.lambda_max_adj).tau_max if self.lambda_max_adj > 0 else math.inf

    def to_dict(self) -> dict:
        return {
            "lambda_max_adj": self.lambda_max_adj,
            "spectral_gap_adj": self.spectral_gap_adj,
            "spectral_gap_lap": self.spectral_gap_lap,
            "algebraic_connectivity": self.algebraic_connectivity,
            "tau_max": self.tau_max,
        }


@dataclass(frozen=True)
class StabilityBound:
    tau_max: float

    def to_dict(self) -> dict:
        return asdict(self)


def adjacency_spectrum(g: Graph) -> np.ndarray:
    """Eigenvalues of the 0/1 adjacency matrix, ascending."""
    return np.linalg.eigvalsh(g.adjacency_matrix())


def laplacian_spectrum(g: Graph) -> np.ndarray:
    """Eigenvalues of ``L = D - A``, ascending.

    The smallest eigenvalue is exactly zero for every graph; it is pinned to
    0.0 to remove rounding noise of order 1e-15.
    """
    ev = np.linalg.eigvalsh(g.laplacian_matrix())
    if ev.size:
        ev[0] = 0.0
    return ev


def _top_gap(ev: np.ndarray) -> float:
    return float(ev[-1] - ev[-2]) if ev.size >= 2 else 0.0


def algebraic_connectivity(lap_ev: np.ndarray) -> float:
    if lap_ev.size < 2:
        return 0.0
    lam2 = float(lap_ev[1])
    # a zero eigenvalue of multiplicity > 1 shows up as +-1e-15 noise
    if abs(lam2) <= 1e-9 * max(1.0, float(lap_ev[-1])):
        return 0.0
    return lam2


def spectral_summary(g: Graph) -> SpectrumSummary:
    adj = adjacency_spectrum(g)
    lap = laplacian_spectrum(g)
    return SpectrumSummary(
        lambda_max_adj=float(adj[-1]) if adj.size else 0.0,
        spectral_gap_adj=_top_gap(adj),
        spectral_gap_lap=_top_gap(lap),
        algebraic_connectivity=algebraic_connectivity(lap),
        adjacency_eigenvalues=tuple(float(x) for x in adj),
        laplacian_eigenvalues=tuple(float(x) for x in lap),
    )


def power_iteration_lambda_max(a: np.ndarray, tol: float = 1e-12, max_iter: int = 100_000) -> float:
    """Spectral radius of a non-negative symmetric matrix by power iteration.

    Iterates on ``A + I`` so bipartite graphs (eigenvalues +-r) converge.
    Used as a cross-check of the dense eigensolver.
    """
    n = a.shape[0]
    if n == 0 or not a.any():
        return 0.0
    shifted = a + np.eye(n)
    x = np.ones(n) / math.sqrt(n)
    est = 0.0
    for _ in range(max_iter):
        y = shifted @ x
        new = float(x @ y)
        norm = np.linalg.norm(y)
        x = y / norm
        if abs(new - est) <= tol * max(1.0, abs(new)):
            est = new
            break
        est = new
    return est - 1.0


def max_stable_delay(lambda_max: float) -> StabilityBound:
    """Largest uniform delay ``pi / (2 lambda_max)`` keeping consensus stable."""
    if not lambda_max > 0:
        raise DomainError(f"lambda_max must be positive, got {lambda_max}")
    return StabilityBound(math.pi / (2.0 * lambda_max))
