"""Exact set and graph conductance.

All values here are ``fractions.Fraction`` because the graph data is integral
and several inequalities checked against them are tight.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable

import numpy as np

from .multigraph import MultiGraph

BRUTEFORCE_MAX_N = 22


class GraphTooLarge(ValueError):
    """Exhaustive cut enumeration refused; use ``cheeger_interval`` instead."""


def _as_set(G: MultiGraph, S: Iterable[int]) -> list[int]:
    idx = sorted(set(int(v) for v in S))
    if idx and (idx[0] < 0 or idx[-1] >= G.N):
        raise ValueError("vertex index out of range")
    return idx


def _proper(G: MultiGraph, S) -> list[int]:
    idx = _as_set(G, S)
    if not idx or len(idx) == G.N:
        raise ValueError("set must be nonempty and proper")
    return idx


def vol(G: MultiGraph, S: Iterable[int]) -> int:
    return int(G.degrees[_as_set(G, S)].sum())


def psi(G: MultiGraph, S: Iterable[int], within: Iterable[int] | None = None) -> Fraction:
    """One-sided conductance |E(S, V-S)| / vol(S).

    With ``within=T`` the quantity is computed on the induced graph G[T],
    where ``S`` must be a subset of ``T`` (given in G's vertex ids).
    """
    if within is not None:
        G, S = _relabel(G, S, within)
    idx = _proper(G, S)
    v = vol(G, idx)
    if v == 0:
        raise ValueError("set has zero volume")
    return Fraction(G.cut_size(idx), v)


def phi_set(G: MultiGraph, S: Iterable[int], within: Iterable[int] | None = None) -> Fraction:
    """Two-sided conductance max(psi(S), psi(V-S))."""
    if within is not None:
        G, S = _relabel(G, S, within)
    idx = _proper(G, S)
    rest = sorted(set(range(G.N)) - set(idx))
    return max(psi(G, idx), psi(G, rest))


def _relabel(G: MultiGraph, S, T):
    T = sorted(set(int(v) for v in T))
    pos = {v: i for i, v in enumerate(T)}
    try:
        S = [pos[int(v)] for v in S]
    except KeyError as exc:
        raise ValueError("S must be contained in T") from exc
    return G.induced(T), S


def _subset_bits(start: int, stop: int, n: int) -> np.ndarray:
    masks = np.arange(start, stop, dtype=np.int64)
    return ((masks[:, None] >> np.arange(n, dtype=np.int64)) & 1).astype(np.int64)


def phi_graph_bruteforce(G: MultiGraph, chunk: int = 1 << 15) -> Fraction:
    """Conductance of G by enumerating all 2^(N-1) - 1 cuts.

    Each cut is visited once by keeping the last vertex outside S. Float
    ratios locate the near-minimal cuts, which are then compared exactly.
    """
    N = G.N
    if N < 2:
        raise ValueError("conductance needs at least two vertices")
    if N > BRUTEFORCE_MAX_N:
        raise GraphTooLarge(f"N={N} exceeds {BRUTEFORCE_MAX_N}; use the spectral bound")
    deg = G.degrees
    if (deg == 0).any():
        raise ValueError("zero-degree vertex")
    M = G.multiplicity[: N - 1, : N - 1]
    edeg = G.edge_degrees[: N - 1]
    d = deg[: N - 1]
    total = int(deg.sum())
    best = None
    best_rows: list[tuple[int, int]] = []
    total_masks = 1 << (N - 1)
    for start in range(1, total_masks, chunk):
        b = _subset_bits(start, min(start + chunk, total_masks), N - 1)
        inside = ((b @ M) * b).sum(axis=1)
        cut = b @ edeg - inside
        vs = b @ d
        small = np.minimum(vs, total - vs)
        ratio = cut / small
        lo = float(ratio.min())
        if best is None or lo < best * (1 - 1e-9):
            best = lo
            best_rows = []
        if lo <= best * (1 + 1e-9) + 1e-300:
            near = np.flatnonzero(ratio <= best * (1 + 1e-9) + 1e-300)
            best_rows.extend(zip(cut[near].tolist(), small[near].tolist()))
    return min(Fraction(c, v) for c, v in best_rows)


def cheeger_interval(lambda2: float) -> tuple[float, float]:
    """Bounds [lambda2/2, sqrt(2 lambda2)] on the graph conductance."""
    return lambda2 / 2.0, math.sqrt(2.0 * max(lambda2, 0.0))
