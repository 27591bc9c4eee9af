"""Recursive search for a satisfying point far from every term of a list.

A far point for the list L is a y with f(y) = 1 and sat_distance(y, L) >=
far_point_threshold. The search keeps a worry set W of terms of L that y
might still be close to, a set S of coordinates believed to belong to the
term y satisfies, and a set A of coordinates already flipped away.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterator, Sequence

import numpy as np

from ..dnf_core import MembershipOracle, Term, induced_term, sat_distance, sample_term_satisfying
from .config import LearnerConfig
from .primitives import literal_counts, noise


class FarPointDepthExceeded(RuntimeError):
    """Recursion went deeper than depth_guard: the configuration is inconsistent."""


@dataclass
class FarPointSearchState:
    y: int
    W: list[Term]
    S: frozenset[int]
    A: frozenset[int]

    def __post_init__(self):
        if self.S & self.A:
            raise ValueError("S and A must be disjoint")


@dataclass
class _Search:
    oracle: MembershipOracle
    L: Sequence[Term]
    k: int
    cfg: LearnerConfig
    rng: np.random.Generator
    nodes: int = 0
    stats: dict = field(default_factory=lambda: {"noise_calls": 0, "bruteforce_terms": 0})

    @property
    def n(self) -> int:
        return self.oracle.n

    def is_far(self, z: int, known_satisfying: bool = False) -> bool:
        if sat_distance(z, self.L) < self.cfg.far_point_threshold:
            return False
        return known_satisfying or bool(self.oracle.query(z))

    def free_coords(self, S, A) -> list[int]:
        return [i for i in range(1, self.n + 1) if i not in S and i not in A]

    def popular(self, y: int, W, S, A, frac: float) -> list[int]:
        if not W:
            return []
        counts = literal_counts(y, W, self.n)
        need = frac * len(W)
        return [i for i in self.free_coords(S, A) if counts[i - 1] > 0 and counts[i - 1] >= need]

    def nearby_terms(self, y: int, S) -> Iterator[Term]:
        """Width-k terms within term distance S_bruteforce_gap of T_y(S), nearest first."""
        base = induced_term(y, S).literals
        gap = self.cfg.S_bruteforce_gap
        seen: set[Term] = set()
        for j in range(min(gap, len(base)) + 1):
            for drop in combinations(range(len(base)), j):
                keep = [base[i] for i in range(len(base)) if i not in drop]
                extra = self.k - len(keep)
                if extra < 0:
                    continue
                used = {abs(l) for l in keep}
                free = [v for v in range(1, self.n + 1) if v not in used]
                for vars_ in combinations(free, extra):
                    for signs in product((1, -1), repeat=extra):
                        t = Term(tuple(keep) + tuple(s * v for s, v in zip(signs, vars_)))
                        if t not in seen:
                            seen.add(t)
                            yield t

    def run(self, y: int, W: list[Term], S: frozenset, A: frozenset, depth: int) -> int | None:
        if depth > self.cfg.max_depth(self.n):
            raise FarPointDepthExceeded(f"recursion depth {depth} exceeds guard")
        self.nodes += 1
        if self.nodes > self.cfg.node_budget:
            return None
        cfg = self.cfg

        # Step 1: S already pins down most of the term.
        if len(S) >= self.k - cfg.S_bruteforce_gap:
            for t in self.nearby_terms(y, S):
                self.stats["bruteforce_terms"] += 1
                z = int(sample_term_satisfying(t, self.n, self.rng))
                if self.is_far(z):
                    return z
            return None

        # Steps 2 and 3: forget terms y is far from or has mostly left.
        W = [t for t in W if t.falsified_count(y) < cfg.W_drop_distance]
        if A:
            amask = 0
            for i in A:
                amask |= 1 << (i - 1)
            W = [t for t in W if ((t.value ^ y) & t.mask & amask).bit_count() <= cfg.covered_coord_cap]

        # Step 4
        if not W:
            return y if self.is_far(y, known_satisfying=True) else None

        # Step 5: no popular coordinate, so add noise until popularity appears.
        pop = self.popular(y, W, S, A, cfg.popular_frac)
        if not pop:
            F = S | A
            if len(F) > self.k - cfg.noise_margin:
                return None
            for _ in range(cfg.noise_outer_budget):
                self.stats["noise_calls"] += 1
                z = noise(self.oracle, y, F, self.k, cfg, self.rng)
                if z is None:
                    continue
                W2 = [t for t in W if t.falsified_count(z) < cfg.W_drop_distance]
                if W2:
                    sup = self.popular(z, W2, S, A, cfg.super_popular_frac)
                    if len(sup) < cfg.superpop_required_frac * (self.k - len(S)):
                        continue
                out = self.run(z, W2, S, A, depth + 1)
                if out is not None:
                    return out
                if self.nodes > cfg.node_budget:
                    return None
            return None

        # Steps 6 to 9: branch on the lowest popular coordinate.
        i = pop[0]
        out = self.run(y, W, S | {i}, A, depth + 1)
        if out is not None:
            return out
        yi = y ^ (1 << (i - 1))
        if not self.oracle.query(yi):
            return None
        return self.run(yi, W, S, A | {i}, depth + 1)


@dataclass(frozen=True)
class FarPointResult:
    point: int | None
    nodes: int
    noise_calls: int
    bruteforce_terms: int


def find_far_point(
    oracle: MembershipOracle,
    y: int,
    L: Sequence[Term],
    k: int,
    cfg: LearnerConfig,
    rng: np.random.Generator,
    W: Sequence[Term] | None = None,
    S=frozenset(),
    A=frozenset(),
) -> FarPointResult:
    """Search for a far point from the satisfying start y.

    The top-level call uses W = L and empty S and A. ``point`` is None on
    FAIL. Any returned point satisfies f and lies at sat_distance at least
    ``far_point_threshold`` from L.
    """
    state = FarPointSearchState(y, list(L if W is None else W), frozenset(S), frozenset(A))
    search = _Search(oracle, list(L), k, cfg, rng)
    z = search.run(state.y, state.W, state.S, state.A, 0)
    if z is not None:
        assert sat_distance(z, L) >= cfg.far_point_threshold, "far point contract broken"
    return FarPointResult(z, search.nodes, search.stats["noise_calls"], search.stats["bruteforce_terms"])


def is_far_point(oracle: MembershipOracle, z: int, L: Sequence[Term], threshold: int) -> bool:
    return sat_distance(z, L) >= threshold and bool(oracle.query(z))


def far_from_list(targets: Sequence[Term], L: Sequence[Term], threshold: int) -> bool:
    """True when every target term missing from L is at term distance >= threshold from all of L."""
    from ..dnf_core import term_distance

    rest = [t for t in targets if t not in set(L)]
    return bool(rest) and all(min((term_distance(t, u) for u in L), default=math.inf) >= threshold for t in rest)
