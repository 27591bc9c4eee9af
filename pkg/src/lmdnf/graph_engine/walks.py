"""Random walk evolution on explicit multigraphs.

The walk matrix is W = A D^-1 with self-loops on the diagonal of A, so a
distribution is a column vector and one step maps x to W x.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .multigraph import MultiGraph
from .tv import tv

MIXING_MAX_N = 200


def walk_matrix(G: MultiGraph) -> np.ndarray:
    deg = G.degrees
    if (deg == 0).any():
        raise ValueError("zero-degree vertex")
    return G.adjacency() / deg[None, :].astype(float)


def point_mass(N: int, v: int) -> np.ndarray:
    x = np.zeros(N)
    x[v] = 1.0
    return x


def walk_distribution(G: MultiGraph, x0, t: int) -> np.ndarray:
    """W^t x0."""
    W = walk_matrix(G)
    x = np.asarray(x0, dtype=float)
    if x.shape != (G.N,):
        raise ValueError("start distribution has the wrong length")
    if t < 0:
        raise ValueError("t must be nonnegative")
    if t > 4 * G.N:
        return np.linalg.matrix_power(W, t) @ x
    for _ in range(t):
        x = W @ x
    return x


def walk_distributions(G: MultiGraph, x0, t_max: int) -> np.ndarray:
    """Rows are W^t x0 for t = 0 .. t_max."""
    W = walk_matrix(G)
    out = np.empty((t_max + 1, G.N))
    out[0] = x0
    for t in range(1, t_max + 1):
        out[t] = W @ out[t - 1]
    return out


def stationary(G: MultiGraph) -> np.ndarray:
    if not G.is_connected():
        raise ValueError("stationary distribution needs a connected graph")
    deg = G.degrees.astype(float)
    return deg / deg.sum()


def mixing_time_exact(G: MultiGraph, eps: float = 0.25, t_max: int = 100_000) -> int:
    """Least t with max_v TV(W^t e_v, pi) <= eps."""
    if G.N > MIXING_MAX_N:
        raise ValueError(f"N={G.N} exceeds {MIXING_MAX_N}")
    pi = stationary(G)
    W = walk_matrix(G)
    P = np.eye(G.N)
    for t in range(t_max + 1):
        worst = 0.5 * np.abs(P - pi[:, None]).sum(axis=0).max()
        if worst <= eps:
            return t
        P = W @ P
    raise RuntimeError(f"walk did not mix within {t_max} steps")


def restricted_stationary(G: MultiGraph, S: Iterable[int]) -> list[Fraction]:
    """pi conditioned on S, as exact fractions over all N vertices."""
    S = sorted(set(S))
    deg = G.degrees
    v = int(deg[S].sum())
    if v == 0:
        raise ValueError("S has zero volume")
    out = [Fraction(0)] * G.N
    for u in S:
        out[u] = Fraction(int(deg[u]), v)
    return out


def escape_probability(G: MultiGraph, S: Iterable[int], start: Sequence, t: int, exact: bool = True):
    """Probability that X_0, ..., X_t all stay inside S.

    Computed by powering the substochastic block of W on S. With
    ``exact=True`` the arithmetic is rational and a Fraction is returned.
    """
    S = sorted(set(int(v) for v in S))
    if len(start) != G.N:
        raise ValueError("start distribution has the wrong length")
    inside = set(S)
    if any(start[u] != 0 for u in range(G.N) if u not in inside):
        raise ValueError("start distribution has mass outside S")
    if t < 0:
        raise ValueError("t must be nonnegative")
    deg = G.degrees
    if (deg[S] == 0).any():
        raise ValueError("zero-degree vertex")
    A = G.adjacency()[np.ix_(S, S)]
    if not exact:
        Q = A / deg[S][None, :].astype(float)
        x = np.array([float(start[u]) for u in S])
        for _ in range(t):
            x = Q @ x
        return float(x.sum())
    cols = [[(i, Fraction(int(A[i, j]), int(deg[S[j]]))) for i in range(len(S)) if A[i, j]] for j in range(len(S))]
    x = [Fraction(start[u]) for u in S]
    for _ in range(t):
        y = [Fraction(0)] * len(S)
        for j, xj in enumerate(x):
            if xj:
                for i, w in cols[j]:
                    y[i] += w * xj
        x = y
    return sum(x, Fraction(0))


# -- Monte Carlo on explicit graphs ---------------------------------------


class WalkSampler:
    """Vectorised random walk simulation on a fixed multigraph."""

    def __init__(self, G: MultiGraph):
        A = G.adjacency()
        self.N = G.N
        rows, cols = np.nonzero(A.T)  # row = current vertex, col = neighbour
        weights = A.T[rows, cols]
        self.targets = cols
        self.cum = np.cumsum(weights)
        self.base = np.concatenate(([0], np.cumsum(G.degrees)))[:-1]
        self.deg = G.degrees
        if (self.deg == 0).any():
            raise ValueError("zero-degree vertex")

    def step(self, pos: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        r = self.base[pos] + (rng.random(pos.shape) * self.deg[pos]).astype(np.int64)
        return self.targets[np.searchsorted(self.cum, r, side="right")]

    def endpoints(self, start: int, t: int, n_walks: int, rng: np.random.Generator) -> np.ndarray:
        pos = np.full(n_walks, start, dtype=np.int64)
        for _ in range(t):
            pos = self.step(pos, rng)
        return pos


def empirical_distribution(endpoints: np.ndarray, N: int) -> np.ndarray:
    return np.bincount(endpoints, minlength=N) / max(len(endpoints), 1)


def empirical_tv(endpoints: np.ndarray, exact: np.ndarray) -> float:
    return tv(empirical_distribution(endpoints, len(exact)), exact)
