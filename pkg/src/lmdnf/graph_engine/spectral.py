"""Normalized Laplacian spectrum of a multigraph with self-loops."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .multigraph import MultiGraph

SPECTRUM_MAX_N = 500
RESIDUAL_TOL = 1e-8


class EigenSolverError(RuntimeError):
    pass


@dataclass(frozen=True)
class SpectralSummary:
    """Ascending eigenvalues lambda_1 <= ... <= lambda_N."""

    eigenvalues: np.ndarray

    def lam(self, k: int) -> float:
        """The k-th smallest eigenvalue, 1-based."""
        if not 1 <= k <= len(self.eigenvalues):
            raise IndexError(f"k={k} outside 1..{len(self.eigenvalues)}")
        return float(self.eigenvalues[k - 1])

    @property
    def lambda2(self) -> float:
        return self.lam(2)


def normalized_laplacian(G: MultiGraph) -> np.ndarray:
    deg = G.degrees.astype(float)
    if (deg == 0).any():
        raise ValueError("zero-degree vertex")
    s = 1.0 / np.sqrt(deg)
    return np.eye(G.N) - s[:, None] * G.adjacency() * s[None, :]


def normalized_laplacian_spectrum(G: MultiGraph) -> SpectralSummary:
    if G.N > SPECTRUM_MAX_N:
        raise ValueError(f"N={G.N} exceeds {SPECTRUM_MAX_N}")
    L = normalized_laplacian(G)
    vals, vecs = np.linalg.eigh(L)
    resid = np.linalg.norm(L @ vecs - vecs * vals, axis=0)
    if resid.max(initial=0.0) > RESIDUAL_TOL:
        raise EigenSolverError(f"eigenpair residual {resid.max():.3g} above {RESIDUAL_TOL}")
    # the null vector D^{1/2} 1 is exact; clean rounding noise around it
    vals = np.clip(vals, 0.0, 2.0)
    return SpectralSummary(vals)
