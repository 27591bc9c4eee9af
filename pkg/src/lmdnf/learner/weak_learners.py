"""Weak term learners built from walks, Prune, Expand and the far-point search."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from ..dnf_core import (
    Dnf,
    MembershipOracle,
    TargetTooSparse,
    Term,
    default_delta,
    dedup,
    hoeffding_size,
    rejection_sample,
    weak_term_decisions,
)
from ..walker import SatWalkOracle, WalkConfig, generate_list_of_terms
from .config import LearnerConfig
from .far_point import FarPointDepthExceeded, find_far_point
from .primitives import ExpandTooLarge, expand, prune

FOUND, SPARSE, FAIL = "found", "sparse", "fail"


@dataclass
class WeakResult:
    """Outcome of one weak-learner call.

    ``status`` is "found" with a term, "sparse" when Pr[f=1] was estimated
    to be at most eps/2 (the caller should output the empty hypothesis), or
    "fail".
    """

    status: str
    term: Term | None = None
    iterations: int = 0
    list_size: int = 0
    queries: int = 0
    notes: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status == FOUND


def _sparse_check(oracle, d, eps, delta, rng) -> bool:
    m = hoeffding_size(eps / 2, delta)
    xs = d.sample(rng, m)
    return float(oracle.query_batch(xs).mean()) <= eps / 2


def _draw_satisfying(oracle, d, rng, cfg: LearnerConfig) -> int:
    pts, _ = rejection_sample(d, oracle.query_batch, 1, rng, max_draws=math.ceil(1 / cfg.positive_floor), chunk=64)
    return int(pts[0])


def _first_weak(L, oracle, d, eps, s, rng, cfg) -> Term | None:
    if not L:
        return None
    decisions = weak_term_decisions(L, oracle, d, eps, s, rng, cfg.delta, cfg.positive_floor)
    for t, dec in zip(L, decisions):
        if dec.accept:
            return t
    return None


def _grow(oracle, L, new, k, cfg, rng, notes) -> list[Term]:
    L = dedup(list(L) + prune(oracle, new, k, cfg, rng))
    try:
        L = dedup(L + prune(oracle, expand(L, k, cfg, oracle.n), k, cfg, rng))
    except ExpandTooLarge:
        notes["expand_skipped"] = notes.get("expand_skipped", 0) + 1
    return L


def simple_learning(
    oracle: MembershipOracle,
    d,
    eps: float,
    k: int,
    cfg: LearnerConfig,
    rng: np.random.Generator,
    walk_cfg: WalkConfig | None = None,
    s: int = 1,
) -> WeakResult:
    """Grow a pruned term list from walks and expansions until it stops
    growing; return the first eps-weak term found."""
    if not 0 < eps <= 0.5:
        raise ValueError("eps must lie in (0, 1/2]")
    before = oracle.query_count
    delta = cfg.delta or default_delta(eps, s)
    if _sparse_check(oracle, d, eps, delta, rng):
        return WeakResult(SPARSE, queries=oracle.query_count - before)
    walk_cfg = walk_cfg or WalkConfig()
    w = SatWalkOracle(oracle)
    L: list[Term] = []
    last = -1
    it = 0
    notes: dict = {"sizes": []}
    while len(L) > last:
        it += 1
        last = len(L)
        y = _draw_satisfying(oracle, d, rng, cfg)
        new = generate_list_of_terms(w, y, walk_cfg, rng).terms
        L = _grow(oracle, L, new, k, cfg, rng, notes)
        notes["sizes"].append(len(L))
        t = _first_weak(L, oracle, d, eps, s, rng, cfg)
        if t is not None:
            return WeakResult(FOUND, t, it, len(L), oracle.query_count - before, notes)
    return WeakResult(FAIL, None, it, len(L), oracle.query_count - before, notes)


def exact_learn(
    oracle: MembershipOracle,
    d,
    eps: float,
    k: int,
    s: int,
    cfg: LearnerConfig,
    rng: np.random.Generator,
    walk_cfg: WalkConfig | None = None,
) -> WeakResult:
    """Weak term learner for exact-k targets.

    Each iteration draws a satisfying y, moves to a far point z of the
    current list when one can be found (otherwise walks from y), and grows
    the list with pruned walk terms and pruned expansions.
    """
    if not 0 < eps <= 0.5:
        raise ValueError("eps must lie in (0, 1/2]")
    before = oracle.query_count
    delta = cfg.delta or default_delta(eps, s)
    if _sparse_check(oracle, d, eps, delta, rng):
        return WeakResult(SPARSE, queries=oracle.query_count - before)
    walk_cfg = walk_cfg or WalkConfig()
    w = SatWalkOracle(oracle)
    L: list[Term] = []
    notes: dict = {"far_fail": 0, "far_found": 0}
    for it in range(1, cfg.iterations(eps) + 1):
        y = _draw_satisfying(oracle, d, rng, cfg)
        try:
            z = find_far_point(oracle, y, L, k, cfg, rng).point
        except FarPointDepthExceeded:
            notes["depth_exceeded"] = notes.get("depth_exceeded", 0) + 1
            z = None
        if z is None:
            notes["far_fail"] += 1
            z = y
        else:
            notes["far_found"] += 1
        new = generate_list_of_terms(w, z, walk_cfg, rng).terms
        L = _grow(oracle, L, new, k, cfg, rng, notes)
        t = _first_weak(L, oracle, d, eps, s, rng, cfg)
        if t is not None:
            return WeakResult(FOUND, t, it, len(L), oracle.query_count - before, notes)
    return WeakResult(FAIL, None, cfg.iterations(eps), len(L), oracle.query_count - before, notes)


# -- adapters to the booster's weak learner interface ----------------------------

WeakLearner = Callable[[MembershipOracle, object, float, np.random.Generator], WeakResult]


def plugin_weak_learner(k: int, s: int, cfg: LearnerConfig, walk_cfg: WalkConfig | None = None) -> WeakLearner:
    """exact_learn with gamma as its eps."""

    def run(oracle, dist, gamma, rng):
        return exact_learn(oracle, dist, gamma, k, s, cfg, rng, walk_cfg)

    return run


def cheat_weak_learner(target: Dnf) -> WeakLearner:
    """Reads the target: returns the true term carrying the most positive
    mass not yet covered by the booster's hypothesis, computed exactly.

    Only meant as a reference weak learner for testing the booster.
    """

    def run(oracle, dist, gamma, rng):
        base = getattr(dist, "base", dist)
        covered = getattr(dist, "hypothesis", None)
        pts, probs = base.table()
        fx = target.eval_batch(pts)
        live = fx & ~(covered.eval_batch(pts) if covered is not None and covered.terms else False)
        best, best_mass = None, -1.0
        for t in target.terms:
            mass = float(probs[live & ((pts & t.mask) == t.value)].sum())
            if mass > best_mass:
                best, best_mass = t, mass
        return WeakResult(FOUND, best)

    return run


def fixed_weak_learner(term: Term) -> WeakLearner:
    def run(oracle, dist, gamma, rng):
        return WeakResult(FOUND, term)

    return run
