"""Prune, Expand, Noise and popular coordinates."""
from __future__ import annotations

import math
from itertools import combinations, product
from typing import Iterable, Sequence

import numpy as np

from ..dnf_core import MembershipOracle, Term, all_terms, count_terms, dedup, terms_to_arrays
from .config import LearnerConfig


class ExpandTooLarge(RuntimeError):
    """The expanded list would exceed the configured cap: radius too large."""


class NoiseFailed(RuntimeError):
    pass


# -- prune --------------------------------------------------------------------


def prune(oracle: MembershipOracle, L: Sequence[Term], k: int, cfg: LearnerConfig, rng: np.random.Generator) -> list[Term]:
    """Keep the width-k terms whose uniform satisfiers all satisfy f in
    ``prune_trials`` draws; a term is dropped at its first failing draw.

    Terms are tested side by side in rounds of doubling size (1, 1, 2, 4, ...
    draws per term), so a dropped term costs at most twice the draws of a
    one-at-a-time check; surviving terms cost exactly ``prune_trials`` queries.
    """
    n = oracle.n
    trials = cfg.prune_trials(n)
    cand = [t for t in dedup(L) if t.width == k]
    if not cand:
        return []
    masks, values = terms_to_arrays(cand)
    alive = np.ones(len(cand), dtype=bool)
    done = 0
    size = 1
    while done < trials and alive.any():
        c = min(size, trials - done)
        idx = np.flatnonzero(alive)
        free = rng.integers(0, 1 << n, size=(len(idx), c), dtype=np.int64)
        z = (free & ~masks[idx, None]) | values[idx, None]
        ok = oracle.query_batch(z).all(axis=1)
        alive[idx[~ok]] = False
        done += c
        if done > 1:
            size *= 2
    return [t for t, a in zip(cand, alive) if a]


# -- expand -------------------------------------------------------------------


def ball_size_bound(n: int, k: int, r: int) -> int:
    """Upper bound on the width-k terms within term distance r of one term."""
    return sum(math.comb(k, j) * math.comb(n - k + j, j) * 2**j for j in range(min(r, k) + 1))


def _ball(t: Term, n: int, r: int) -> Iterable[Term]:
    lits = t.literals
    k = len(lits)
    for j in range(min(r, k) + 1):
        for drop in combinations(range(k), j):
            keep = [lits[i] for i in range(k) if i not in drop]
            used = {abs(l) for l in keep}
            free = [v for v in range(1, n + 1) if v not in used]
            for vars_ in combinations(free, j):
                for signs in product((1, -1), repeat=j):
                    yield Term(tuple(keep) + tuple(s * v for s, v in zip(signs, vars_)))


def expand(L: Sequence[Term], k: int, cfg: LearnerConfig, n: int, radius: int | None = None) -> list[Term]:
    """L plus every width-k term within term distance ``expand_radius`` (or
    ``radius`` when given) of a member of L, in first-found order with L's
    members first."""
    r = cfg.expand_radius if radius is None else radius
    L = dedup(L)
    if any(t.width != k for t in L):
        raise ValueError("expand needs width-k terms")
    if r == 0 or not L:
        return list(L)
    total = count_terms(n, k)
    predicted = len(L) * ball_size_bound(n, k, r)
    if min(predicted, total) > cfg.expand_cap:
        raise ExpandTooLarge(f"expansion would produce up to {min(predicted, total)} terms (cap {cfg.expand_cap})")
    if predicted < total:
        return dedup(list(L) + [u for t in L for u in _ball(t, n, r)])
    space = list(all_terms(n, k))
    sm, sv = terms_to_arrays(space)
    lm, lv = terms_to_arrays(L)
    keep = np.zeros(len(space), dtype=bool)
    for m, v in zip(lm, lv):
        common = np.bitwise_count(sm & m & ~(sv ^ v))
        keep |= (k - common) <= r
    return dedup(list(L) + [t for t, q in zip(space, keep) if q])


# -- noise ------------------------------------------------------------------------


def noise_flip_probability(k: int, frozen: int, cfg: LearnerConfig) -> float:
    return min(0.5, cfg.noise_rate_scale / (k - frozen))


def noise(
    oracle: MembershipOracle,
    y: int,
    F: Iterable[int],
    k: int,
    cfg: LearnerConfig,
    rng: np.random.Generator,
) -> int | None:
    """Randomly flip coordinates outside F until the point satisfies f.

    F holds 1-based coordinates that stay equal to y. Returns None after
    ``noise_budget`` failed attempts. Raises ValueError when |F| exceeds
    k - noise_margin.
    """
    F = set(F)
    if len(F) > k - cfg.noise_margin:
        raise ValueError(f"|F|={len(F)} exceeds k - margin = {k - cfg.noise_margin}")
    n = oracle.n
    p = noise_flip_probability(k, len(F), cfg)
    frozen = 0
    for i in F:
        frozen |= 1 << (i - 1)
    weights = np.left_shift(np.int64(1), np.arange(n, dtype=np.int64))
    for _ in range(cfg.noise_budget):
        flips = int(((rng.random(n) < p) * weights).sum()) & ~frozen
        z = y ^ flips
        if oracle.query(z):
            return z
    return None


# -- popularity -------------------------------------------------------------------


def literal_counts(y: int, W: Sequence[Term], n: int) -> np.ndarray:
    """For each coordinate i (0-based), how many terms of W contain y's literal on i."""
    masks, values = terms_to_arrays(W)
    agree = masks & ~(values ^ np.int64(y))
    return ((agree[:, None] >> np.arange(n, dtype=np.int64)) & 1).sum(axis=0)


def popular_coordinates(y: int, W: Sequence[Term], frac: float, n: int | None = None) -> set[int]:
    """1-based coordinates whose y-literal appears in at least frac * |W| terms."""
    if not W:
        raise ValueError("popularity needs a nonempty term set")
    if n is None:
        n = max(max(t.variables, default=0) for t in W)
    counts = literal_counts(y, W, n)
    need = frac * len(W)
    return {i + 1 for i in range(n) if counts[i] > 0 and counts[i] >= need}
