"""Small-k and large-k corner cases, error estimation and parameter guessing."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..dnf_core import Dnf, MembershipOracle, SampleDistribution, Term, all_terms, count_terms, hoeffding_size, terms_to_arrays
from ..dnf_core.distributions import EXHAUSTIVE_MAX_N

SMALL_K_CAP = 3


class ModelViolation(RuntimeError):
    """Some positive example is not covered by any term consistent with the negatives."""


class BudgetExceeded(RuntimeError):
    pass


# -- error estimation ---------------------------------------------------------------


def estimate_error(
    h: Dnf,
    oracle: MembershipOracle,
    d,
    mode: str = "exhaustive",
    budget: int = 1 << EXHAUSTIVE_MAX_N,
    rng: np.random.Generator | None = None,
    fail: float = 1e-3,
) -> float:
    """Pr_{x ~ d}[h(x) != f(x)].

    ``exhaustive`` queries every support point of d (needs n <= 20 and at
    most ``budget`` points). ``sampled`` draws ``budget`` points; the result
    is then within sqrt(ln(2/fail) / (2 budget)) of the truth except with
    probability ``fail``.
    """
    if mode == "exhaustive":
        pts, probs = d.table()
        if len(pts) > budget:
            raise BudgetExceeded(f"{len(pts)} support points exceed budget {budget}")
        wrong = h.eval_batch(pts) != oracle.query_batch(pts)
        return float(probs[wrong].sum())
    if mode == "sampled":
        if rng is None:
            raise ValueError("sampled mode needs an rng")
        xs = d.sample(rng, budget)
        return float((h.eval_batch(xs) != oracle.query_batch(xs)).mean())
    raise ValueError(f"unknown mode {mode!r}")


def sampled_error_radius(budget: int, fail: float = 1e-3) -> float:
    return math.sqrt(math.log(2 / fail) / (2 * budget))


# -- small k: greedy cover over width-k meta-variables ----------------------------


def small_k_sample_size(n: int, k: int, s: int, eps: float, delta: float) -> int:
    N = count_terms(n, k)
    return math.ceil((s * math.ceil(math.log2(2 / eps)) * math.log(N) + math.log(1 / delta)) / eps)


@dataclass
class SmallKResult:
    hypothesis: Dnf
    samples: int
    positives: int
    queries: int


def learn_small_k(
    oracle: MembershipOracle,
    d,
    n: int,
    k: int,
    s: int,
    eps: float,
    delta: float,
    rng: np.random.Generator,
    k_cap: int = SMALL_K_CAP,
) -> SmallKResult:
    """Greedy disjunction learning over the C(n,k) 2^k width-k terms.

    Only terms falsified by every negative example are candidates; the
    greedy loop adds the candidate covering most still-uncovered positives,
    for at most s * ceil(log2(2/eps)) picks.
    """
    if k > k_cap:
        raise ValueError(f"k={k} above the small-k cap {k_cap}")
    before = oracle.query_count
    m = small_k_sample_size(n, k, s, eps, delta)
    xs = d.sample(rng, m)
    ys = oracle.query_batch(xs)
    terms = list(all_terms(n, k))
    masks, values = terms_to_arrays(terms)
    neg = xs[~ys]
    pos = np.unique(xs[ys])
    consistent = np.ones(len(terms), dtype=bool)
    for chunk in np.array_split(neg, max(1, len(neg) // 2048)):
        if len(chunk):
            consistent &= ~((chunk[:, None] & masks) == values).any(axis=0)
    cand = np.flatnonzero(consistent)
    cover = (pos[:, None] & masks[cand]) == values[cand]  # (positives, candidates)
    if len(pos) and not cover.any(axis=1).all():
        raise ModelViolation("a positive example has no consistent width-k term")
    limit = s * math.ceil(math.log2(2 / eps))
    chosen: list[Term] = []
    open_ = np.ones(len(pos), dtype=bool)
    while open_.any() and len(chosen) < limit:
        gain = cover[open_].sum(axis=0)
        best = int(np.argmax(gain))
        chosen.append(terms[cand[best]])
        open_ &= ~cover[:, best]
    return SmallKResult(Dnf(n, chosen), m, int(ys.sum()), oracle.query_count - before)


# -- large k: pad with dummy variables ---------------------------------------------


class PaddedTarget:
    """f over 2n variables that ignores the top n bits."""

    def __init__(self, oracle: MembershipOracle):
        self.inner = oracle
        self.n = 2 * oracle.n
        self._low = (1 << oracle.n) - 1

    def eval(self, x: int) -> int:
        return self.inner.query(int(x) & self._low)

    def eval_batch(self, xs):
        return self.inner.query_batch(np.asarray(xs, dtype=np.int64) & self._low)


class PaddedDistribution:
    """Draws from d over the low n bits and uniform bits above them."""

    kind = "padded"

    def __init__(self, d, n: int):
        self.base = d
        self.inner_n = n
        self.n = 2 * n

    def sample(self, rng, size=None):
        low = self.base.sample(rng, size)
        if size is None:
            return int(low) | (int(rng.integers(0, 1 << self.inner_n)) << self.inner_n)
        high = rng.integers(0, 1 << self.inner_n, size=size, dtype=np.int64)
        return np.asarray(low, dtype=np.int64) | (high << self.inner_n)


class _ChargeThrough(MembershipOracle):
    """Oracle over the padded target whose own counter mirrors the inner one."""

    def __init__(self, padded: PaddedTarget):
        super().__init__(padded, padded.n)
        self.padded = padded

    def query(self, x):
        x = int(x)
        if x < 0 or x >> self.n:
            raise ValueError(f"assignment does not fit in n={self.n} bits")
        return 1 if self.padded.eval(x) else 0

    __call__ = query

    def query_batch(self, xs):
        return np.asarray(self.padded.eval_batch(xs), dtype=bool)

    @property
    def query_count(self) -> int:
        return self.padded.inner.query_count


def restrict_dnf(h: Dnf, n: int, fixed_high: int) -> Dnf:
    """Set variables n+1..2n of h to the bits of ``fixed_high`` and drop them."""
    hi_mask = ((1 << n) - 1) << n
    point = fixed_high << n
    out = []
    for t in h.terms:
        if (point & t.mask & hi_mask) != (t.value & hi_mask):
            continue
        out.append(Term.from_mask(t.mask & ~hi_mask, t.value & ~hi_mask))
    return Dnf(n, out)


@dataclass
class LargeKResult:
    hypothesis: Dnf
    padded_hypothesis: Dnf
    fixing: int
    measured_error: float
    queries: int


def large_k_reduction(
    oracle: MembershipOracle,
    d,
    n: int,
    k: int,
    inner_learner: Callable[[MembershipOracle, object, np.random.Generator], Dnf],
    rng: np.random.Generator,
    fixings: int = 100,
    check_samples: int = 2000,
) -> LargeKResult:
    """Learn at dimension 2n with n ignored dummy variables, then fix the
    dummies to the best of ``fixings`` uniform assignments, judged by the
    sampled error against f on one shared check sample."""
    if oracle.n != n:
        raise ValueError("oracle dimension does not match n")
    before = oracle.query_count
    wrapped = _ChargeThrough(PaddedTarget(oracle))
    H = inner_learner(wrapped, PaddedDistribution(d, n), rng)
    xs = d.sample(rng, check_samples)
    fx = oracle.query_batch(xs)
    best = None
    for _ in range(fixings):
        a = int(rng.integers(0, 1 << n))
        h = restrict_dnf(H, n, a)
        err = float((h.eval_batch(xs) != fx).mean())
        if best is None or err < best[0]:
            best = (err, h, a)
        if err == 0.0:
            break
    err, h, a = best
    return LargeKResult(h, H, a, err, oracle.query_count - before)


# -- guessing k and s ----------------------------------------------------------------


@dataclass
class GuessResult:
    hypothesis: Dnf | None
    k: int | None
    s: int | None
    tried: list[tuple[int, int, float]]


def guess_k_and_s(
    oracle: MembershipOracle,
    d,
    eps: float,
    learn: Callable[[int, int], Dnf],
    rng: np.random.Generator,
    s_max: int = 16,
    check_samples: int = 4000,
) -> GuessResult:
    """Sweep k = 1..n and s = 1, 2, 4, ... <= s_max; accept the first
    hypothesis whose sampled error is at most eps."""
    tried = []
    for k in range(1, oracle.n + 1):
        s = 1
        while s <= s_max:
            try:
                h = learn(k, s)
            except Exception:  # a failed guess is just a rejected guess
                tried.append((k, s, math.nan))
                s *= 2
                continue
            err = estimate_error(h, oracle, d, "sampled", check_samples, rng)
            tried.append((k, s, err))
            if err <= eps:
                return GuessResult(h, k, s, tried)
            s *= 2
    return GuessResult(None, None, None, tried)
