"""Boosting a weak term learner into a DNF hypothesis."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..dnf_core import Dnf, MembershipOracle, Term, hoeffding_size, rejection_sample
from .config import LearnerConfig
from .weak_learners import SPARSE, WeakLearner, WeakResult


class BoostingFailed(RuntimeError):
    pass


class PositiveNegativeMixture:
    """Equal mixture of D | f=0 and D | (h=0 and f=1), sampled by rejection.

    Each component gets ``budget_factor / gamma`` raw draws per requested
    point; running out raises TargetTooSparse.
    """

    kind = "mixture"

    def __init__(self, base, oracle: MembershipOracle, hypothesis: Dnf, gamma: float, budget_factor: float = 64.0):
        self.base = base
        self.n = base.n
        self.oracle = oracle
        self.hypothesis = hypothesis
        self.per_point = budget_factor / gamma

    def _component(self, accept, count, rng):
        if count == 0:
            return np.zeros(0, np.int64)
        pts, _ = rejection_sample(self.base, accept, count, rng, max_draws=math.ceil(count * self.per_point))
        return pts

    def sample(self, rng: np.random.Generator, size: int | None = None):
        m = 1 if size is None else size
        pos = int(rng.binomial(m, 0.5))
        h = self.hypothesis

        def negative(xs):
            return ~self.oracle.query_batch(xs)

        def uncovered_positive(xs):
            out = np.zeros(len(xs), dtype=bool)
            open_ = ~h.eval_batch(xs)
            if open_.any():
                out[open_] = self.oracle.query_batch(xs[open_])
            return out

        pts = np.concatenate([self._component(negative, m - pos, rng), self._component(uncovered_positive, pos, rng)])
        pts = pts[rng.permutation(m)]
        return int(pts[0]) if size is None else pts


@dataclass
class BoostResult:
    hypothesis: Dnf
    iterations: int
    queries: int
    uncovered_estimates: list[float] = field(default_factory=list)
    weak_results: list[WeakResult] = field(default_factory=list)


def _uncovered_positive_mass(oracle, d, h: Dnf, m: int, rng) -> float:
    xs = d.sample(rng, m)
    open_ = ~h.eval_batch(xs)
    if not open_.any():
        return 0.0
    return float(oracle.query_batch(xs[open_]).sum()) / m


def dnf_learn(
    oracle: MembershipOracle,
    d,
    weak: WeakLearner,
    gamma: float,
    s: int,
    rng: np.random.Generator,
    cfg: LearnerConfig | None = None,
    estimate_fail: float = 1e-3,
) -> BoostResult:
    """Call the weak learner on reweighted distributions and OR the returned
    terms until the estimated uncovered positive mass drops below gamma/2.

    The first call sees D itself; later calls see the equal mixture of
    D | f=0 and D | (h=0, f=1). Raises BoostingFailed when the weak learner
    fails or after C_cap * s * ln(1/gamma) iterations.
    """
    if not 0 < gamma <= 0.5:
        raise ValueError("gamma must lie in (0, 1/2]")
    cfg = cfg or LearnerConfig()
    before = oracle.query_count
    cap = max(1, math.floor(cfg.C_cap * s * math.log(1 / gamma)))
    m = hoeffding_size(gamma / 4, estimate_fail)
    terms: list[Term] = []
    h = Dnf(oracle.n, terms)
    estimates: list[float] = []
    results: list[WeakResult] = []
    dist = d
    while True:
        est = _uncovered_positive_mass(oracle, d, h, m, rng)
        estimates.append(est)
        if est < gamma / 2:
            break
        if len(results) >= cap:
            raise BoostingFailed(f"iteration cap {cap} reached with uncovered mass {est:.3f}")
        res = weak(oracle, dist, gamma, rng)
        results.append(res)
        if res.status == SPARSE:
            break
        if not res.ok:
            raise BoostingFailed(f"weak learner failed at iteration {len(results)}")
        if res.term not in terms:
            terms.append(res.term)
        h = Dnf(oracle.n, terms)
        dist = PositiveNegativeMixture(d, oracle, h, gamma, cfg.rejection_budget_factor)
    return BoostResult(h, len(results), oracle.query_count - before, estimates, results)
