"""Lazy random walks on the satisfying assignments of a target, driven only
by membership queries, and the walk-based term list generator.

The canonical chain is the walk on the nice graph over f^-1(1): stay with
probability 1/2, otherwise move to a uniformly chosen satisfying Hamming
neighbour (staying put when there is none). Finding the neighbours costs n
queries per step. A cheaper ``uniform`` mode flips one uniformly chosen
coordinate when the result still satisfies f; its stationary law is uniform
on f^-1(1) instead of degree-proportional.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dnf_core import MembershipOracle, SampleDistribution, Term, TargetTooSparse, largest_common_terms_batch, rejection_sample

WALK_MODES = ("nice", "uniform")


class NotSatisfying(ValueError):
    """A walk was asked to start from a point outside f^-1(1)."""


class SatWalkOracle:
    def __init__(self, oracle: MembershipOracle, n: int | None = None):
        self.oracle = oracle
        self.n = oracle.n if n is None else int(n)
        self._flips = np.left_shift(np.int64(1), np.arange(self.n, dtype=np.int64))

    @property
    def query_count(self) -> int:
        return self.oracle.query_count

    def require_satisfying(self, y: int) -> None:
        if not self.oracle.query(y):
            raise NotSatisfying(f"start point {y:#x} does not satisfy the target")

    def neighbour_mask(self, ys: np.ndarray) -> np.ndarray:
        """(B, n) booleans: does flipping coordinate i of ys[b] still satisfy f."""
        return self.oracle.query_batch(ys[:, None] ^ self._flips)


def default_samples_per_probe(n: int) -> int:
    return max(2, math.ceil(2 * math.log2(max(n, 2))))


@dataclass(frozen=True)
class WalkConfig:
    outer_len: int = 64
    inner_len_max: int = 64
    samples_per_probe: int | None = None
    repeats: int = 1
    seed: int | None = None
    mode: str = "nice"

    def __post_init__(self):
        for name in ("outer_len", "inner_len_max", "repeats"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.samples_per_probe is not None and self.samples_per_probe < 2:
            raise ValueError("samples_per_probe must be at least 2")
        if self.mode not in WALK_MODES:
            raise ValueError(f"mode must be one of {WALK_MODES}")

    def probes(self, n: int) -> int:
        return self.samples_per_probe or default_samples_per_probe(n)

    @classmethod
    def from_dict(cls, data: dict) -> "WalkConfig":
        known = {k: data[k] for k in cls.__dataclass_fields__ if k in data}
        extra = set(data) - set(known)
        if extra:
            raise ValueError(f"unknown walk config keys: {sorted(extra)}")
        return cls(**known)


# -- single walks ----------------------------------------------------------


def sat_neighbors(w: SatWalkOracle, y: int, validate: bool = True) -> set[int]:
    """1-based coordinates whose flip keeps y satisfying.

    Exactly n queries, plus one to check y itself when ``validate``.
    """
    if validate:
        w.require_satisfying(y)
    row = w.neighbour_mask(np.array([y], dtype=np.int64))[0]
    return {int(i) + 1 for i in np.flatnonzero(row)}


def step_nice(w: SatWalkOracle, y: int, rng: np.random.Generator, validate: bool = True) -> int:
    if validate:
        w.require_satisfying(y)
    nbrs = sorted(sat_neighbors(w, y, validate=False))
    if rng.random() < 0.5 or not nbrs:
        return y
    return y ^ (1 << (nbrs[int(rng.integers(len(nbrs)))] - 1))


def step_uniform(w: SatWalkOracle, y: int, rng: np.random.Generator) -> int:
    if rng.random() < 0.5:
        return y
    z = y ^ (1 << int(rng.integers(w.n)))
    return z if w.oracle.query(z) else y


def walk(w: SatWalkOracle, y: int, t: int, rng: np.random.Generator, mode: str = "nice", record: bool = False):
    """Endpoint of a t-step walk from y (and the trajectory when ``record``).

    Costs one query to check the start plus n per nice step.
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    w.require_satisfying(y)
    path = [y]
    for _ in range(t):
        y = step_nice(w, y, rng, validate=False) if mode == "nice" else step_uniform(w, y, rng)
        if record:
            path.append(y)
    return (y, path) if record else y


# -- batched walks -----------------------------------------------------------


def _batch_step(w: SatWalkOracle, pos: np.ndarray, rng: np.random.Generator, mode: str) -> np.ndarray:
    B = len(pos)
    stay = rng.random(B) < 0.5
    if mode == "uniform":
        move = np.flatnonzero(~stay)
        cand = pos[move] ^ (np.int64(1) << rng.integers(0, w.n, size=len(move)).astype(np.int64))
        ok = w.oracle.query_batch(cand)
        out = pos.copy()
        out[move[ok]] = cand[ok]
        return out
    sat = w.neighbour_mask(pos)
    counts = sat.sum(axis=1)
    pick = np.floor(rng.random(B) * counts).astype(np.int64)
    choice = np.argmax(np.cumsum(sat, axis=1) > pick[:, None], axis=1)
    move = ~stay & (counts > 0)
    out = pos.copy()
    out[move] ^= np.int64(1) << choice[move].astype(np.int64)
    return out


def batch_walks(w: SatWalkOracle, starts, lengths, rng: np.random.Generator, mode: str = "nice") -> np.ndarray:
    """Independent walks of the given lengths, all advanced together.

    Starts are assumed to satisfy f already.
    """
    pos = np.array(starts, dtype=np.int64)
    remaining = np.broadcast_to(np.asarray(lengths, dtype=np.int64), pos.shape).copy()
    for _ in range(int(remaining.max(initial=0))):
        idx = np.flatnonzero(remaining > 0)
        pos[idx] = _batch_step(w, pos[idx], rng, mode)
        remaining[idx] -= 1
    return pos


def walk_endpoints(w: SatWalkOracle, y: int, t: int, count: int, rng: np.random.Generator, mode: str = "nice") -> np.ndarray:
    w.require_satisfying(y)
    return batch_walks(w, np.full(count, y, dtype=np.int64), t, rng, mode)


# -- term lists ------------------------------------------------------------------


@dataclass(frozen=True)
class Discovery:
    """Where a term was first produced: outer step t, inner length ell, repeat."""

    term: Term
    t: int
    ell: int
    repeat: int
    endpoints: tuple[int, ...] = field(repr=False)


@dataclass
class TermList:
    terms: list[Term]
    discoveries: list[Discovery]
    queries: int
    starts: list[int] = field(default_factory=list)
    outer_walks: list[list[int]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.terms)

    def merge(self, other: "TermList") -> None:
        seen = set(self.terms)
        for d in other.discoveries:
            if d.term not in seen:
                seen.add(d.term)
                self.terms.append(d.term)
                self.discoveries.append(d)
        self.queries += other.queries
        self.starts += other.starts
        self.outer_walks += other.outer_walks


def generate_list_of_terms(
    w: SatWalkOracle, y: int, cfg: WalkConfig, rng: np.random.Generator, repeat: int = 0
) -> TermList:
    """Outer walk Y_0..Y_M from y; from every Y_t (t >= 1) and every inner
    length ell, run r independent walks and keep the largest term satisfied by
    all r endpoints. Returns the de-duplicated list in discovery order.

    All M * L * r inner walks are advanced together as one batch.
    """
    before = w.query_count
    w.require_satisfying(y)
    M, L, r = cfg.outer_len, cfg.inner_len_max, cfg.probes(w.n)
    outer = [y]
    pos = np.array([y], dtype=np.int64)
    for _ in range(M):
        pos = _batch_step(w, pos, rng, cfg.mode)
        outer.append(int(pos[0]))
    ys = np.array(outer[1:], dtype=np.int64)
    # walker index = ((t-1) * L + (ell-1)) * r + probe
    starts = np.repeat(ys, L * r)
    lengths = np.tile(np.repeat(np.arange(1, L + 1, dtype=np.int64), r), M)
    ends = batch_walks(w, starts, lengths, rng, cfg.mode).reshape(M, L, r)
    masks, values = largest_common_terms_batch(ends, w.n)

    terms: list[Term] = []
    found: list[Discovery] = []
    seen: set[tuple[int, int]] = set()
    for t in range(M):
        for ell in range(L):
            key = (int(masks[t, ell]), int(values[t, ell]))
            if key in seen:
                continue
            seen.add(key)
            term = Term.from_mask(*key)
            terms.append(term)
            found.append(Discovery(term, t + 1, ell + 1, repeat, tuple(int(e) for e in ends[t, ell])))
    return TermList(terms, found, w.query_count - before, [y], [outer])


def list_decode(
    w: SatWalkOracle,
    d: SampleDistribution,
    cfg: WalkConfig,
    outer_repeats: int,
    rng: np.random.Generator,
    max_start_draws: int = 100_000,
) -> TermList:
    """Draw a satisfying start from d, then union ``outer_repeats`` term lists.

    Raises TargetTooSparse if no satisfying start turns up within the budget.
    """
    if outer_repeats < 1:
        raise ValueError("outer_repeats must be positive")
    before = w.query_count
    pts, _ = rejection_sample(d, w.oracle.query_batch, 1, rng, max_draws=max_start_draws, chunk=64)
    y = int(pts[0])
    out = TermList([], [], 0)
    for rep in range(outer_repeats):
        child = np.random.default_rng(rng.integers(0, 2**63))
        out.merge(generate_list_of_terms(w, y, cfg, child, repeat=rep))
    out.queries = w.query_count - before
    return out


__all__ = [
    "NotSatisfying",
    "SatWalkOracle",
    "WalkConfig",
    "Discovery",
    "TermList",
    "TargetTooSparse",
    "batch_walks",
    "default_samples_per_probe",
    "generate_list_of_terms",
    "list_decode",
    "sat_neighbors",
    "step_nice",
    "step_uniform",
    "walk",
    "walk_endpoints",
]
