"""Endpoint-event lower bound on local mixing, plus its Monte Carlo replay.

For the walk distribution mu_t started at v and a set A_i, the event
"accept X_t = u in A_i with probability min_{A_i} mu_t / mu_t(u)" has
probability p_i = |A_i| min_{u in A_i} mu_t(u), and conditioned on it X_t is
exactly uniform on A_i. The oracle reports the best such set.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .covers import Cover
from .multigraph import MultiGraph
from .tv import tv
from .walks import WalkSampler, point_mass, walk_distribution, walk_distributions


@dataclass(frozen=True)
class LocalMixingResult:
    t: int
    index: int
    p_star: float
    tv_at_best: float
    p_per_set: tuple[float, ...]


@dataclass(frozen=True)
class ReplayResult:
    acceptance: float
    tv_uniform: float
    accepted: int
    n_walks: int


def _require_nice(G: MultiGraph) -> None:
    if not G.is_nice():
        raise ValueError("local mixing analysis expects a nice graph")


def _score(mu: np.ndarray, C: Cover, t: int) -> LocalMixingResult:
    p = tuple(float(len(A) * mu[list(A)].min()) for A in C.sets)
    best = int(np.argmax(p))
    A = list(C.sets[best])
    if p[best] > 0:
        weights = mu[A].min() * np.ones(len(A))
        accepted = weights / weights.sum()
        gap = tv(accepted, np.full(len(A), 1.0 / len(A)))
    else:
        gap = 1.0
    return LocalMixingResult(t, best, p[best], gap, p)


def local_mixing_oracle(G: MultiGraph, C: Cover, v: int, t: int) -> LocalMixingResult:
    _require_nice(G)
    return _score(walk_distribution(G, point_mass(G.N, v), t), C, t)


def local_mixing_curve(G: MultiGraph, C: Cover, v: int, t_max: int) -> list[LocalMixingResult]:
    """Oracle results for every t = 0 .. t_max."""
    _require_nice(G)
    mus = walk_distributions(G, point_mass(G.N, v), t_max)
    return [_score(mu, C, t) for t, mu in enumerate(mus)]


def replay_local_mixing(
    G: MultiGraph,
    C: Cover,
    v: int,
    t: int,
    index: int,
    n_walks: int,
    rng: np.random.Generator,
) -> ReplayResult:
    """Simulate walks and the accept/reject event for set ``index``.

    Returns the acceptance frequency and the TV distance of the accepted
    endpoints from uniform on the set.
    """
    _require_nice(G)
    mu = walk_distribution(G, point_mass(G.N, v), t)
    A = np.array(C.sets[index])
    floor = mu[A].min()
    accept_prob = np.zeros(G.N)
    if floor > 0:
        accept_prob[A] = floor / mu[A]
    ends = WalkSampler(G).endpoints(v, t, n_walks, rng)
    ok = rng.random(n_walks) < accept_prob[ends]
    kept = ends[ok]
    if len(kept) == 0:
        return ReplayResult(0.0, 1.0, 0, n_walks)
    hist = np.bincount(kept, minlength=G.N)[A] / len(kept)
    return ReplayResult(len(kept) / n_walks, tv(hist, np.full(len(A), 1.0 / len(A))), int(len(kept)), n_walks)
