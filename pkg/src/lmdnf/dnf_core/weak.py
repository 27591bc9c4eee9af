"""Sampling test for gamma-weak terms.

A term T is gamma-weak for an s-term target f under D when
Pr[T=1 and f=0] <= gamma / (s ln(1/gamma)) and Pr[T=1 | f=1] >= 1/(2s).
The test estimates both quantities with Hoeffding-sized samples and
compares them against midpoint thresholds.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .distributions import TargetTooSparse, rejection_sample
from .oracle import MembershipOracle
from .terms import Term, terms_to_arrays

DEFAULT_POSITIVE_FLOOR = 2.0**-20


def hoeffding_size(err: float, fail: float) -> int:
    """Samples so that a [0,1] mean is within ``err`` except w.p. ``fail``."""
    return math.ceil(math.log(2.0 / fail) / (2.0 * err * err))


def default_delta(gamma: float, s: int) -> float:
    return 1.0 / (100.0 * s * math.log(1.0 / gamma))


@dataclass(frozen=True)
class WeakTermDecision:
    accept: bool
    p_false_positive: float
    p_given_positive: float
    threshold_false_positive: float
    threshold_given_positive: float


def weak_thresholds(gamma: float, s: int) -> tuple[float, float, float, float]:
    """(err1, thr1, err2, thr2) for the two estimates."""
    if not 0 < gamma <= 0.5:
        raise ValueError("gamma must lie in (0, 1/2]")
    if s < 1:
        raise ValueError("s must be >= 1")
    scale = s * math.log(1.0 / gamma)
    return gamma / (4 * scale), gamma / (2 * scale), 1.0 / (8 * s), 3.0 / (8 * s)


def weak_term_decisions(
    terms: Sequence[Term],
    oracle: MembershipOracle,
    dist,
    gamma: float,
    s: int,
    rng: np.random.Generator,
    delta: float | None = None,
    positive_floor: float = DEFAULT_POSITIVE_FLOOR,
) -> list[WeakTermDecision]:
    """Run the weak-term test on every term, sharing one pair of samples.

    Each individual decision carries the single-term guarantee; the shared
    samples only save queries.
    """
    if delta is None:
        delta = default_delta(gamma, s)
    err1, thr1, err2, thr2 = weak_thresholds(gamma, s)
    if not terms:
        return []
    masks, values = terms_to_arrays(terms)

    m1 = hoeffding_size(err1, delta / 2)
    xs = np.asarray(dist.sample(rng, m1), dtype=np.int64)
    sat = (xs[:, None] & masks) == values
    covered = sat.any(axis=1)
    labels = np.zeros(m1, dtype=bool)
    if covered.any():
        labels[covered] = oracle.query_batch(xs[covered])
    p1 = (sat & ~labels[:, None]).sum(axis=0) / m1

    m2 = hoeffding_size(err2, delta / 2)
    pos, _ = rejection_sample(
        dist, oracle.query_batch, m2, rng, max_draws=math.ceil(m2 / positive_floor)
    )
    p2 = ((pos[:, None] & masks) == values).sum(axis=0) / m2

    return [
        WeakTermDecision(bool(a <= thr1 and b >= thr2), float(a), float(b), thr1, thr2)
        for a, b in zip(p1, p2)
    ]


def is_weak_term(
    term: Term,
    oracle: MembershipOracle,
    dist,
    gamma: float,
    s: int,
    rng: np.random.Generator,
    delta: float | None = None,
    positive_floor: float = DEFAULT_POSITIVE_FLOOR,
) -> WeakTermDecision:
    return weak_term_decisions([term], oracle, dist, gamma, s, rng, delta, positive_floor)[0]


def first_weak_term(terms, oracle, dist, gamma, s, rng, delta=None, positive_floor=DEFAULT_POSITIVE_FLOOR):
    """First term of ``terms`` that passes the weak test, or None."""
    for term, dec in zip(terms, weak_term_decisions(terms, oracle, dist, gamma, s, rng, delta, positive_floor)):
        if dec.accept:
            return term
    return None


__all__ = [
    "TargetTooSparse",
    "WeakTermDecision",
    "hoeffding_size",
    "is_weak_term",
    "weak_term_decisions",
    "first_weak_term",
    "default_delta",
]
