"""Sample distributions over {0,1}^n and labelled rejection sampling."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .terms import assignment, bits_of

EXHAUSTIVE_MAX_N = 20


class TargetTooSparse(RuntimeError):
    """Rejection sampling ran out of draws before finding enough accepted points."""


def _pack_bits(bits: np.ndarray) -> np.ndarray:
    weights = np.left_shift(np.int64(1), np.arange(bits.shape[-1], dtype=np.int64))
    return (bits.astype(np.int64) * weights).sum(axis=-1)


@dataclass(frozen=True)
class SampleDistribution:
    """Uniform, product or explicit distribution over n-bit assignments.

    ``biases[i]`` is Pr[x_{i+1} = 1] for the product kind; ``support`` and
    ``weights`` describe the explicit kind.
    """

    kind: str
    n: int
    biases: tuple[float, ...] = ()
    support: tuple[int, ...] = ()
    weights: tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind not in ("uniform", "product", "explicit"):
            raise ValueError(f"unknown distribution kind {self.kind!r}")
        if self.kind == "product":
            if len(self.biases) != self.n:
                raise ValueError("product distribution needs one bias per coordinate")
            if any(not 0.0 <= b <= 1.0 for b in self.biases):
                raise ValueError("product biases must lie in [0, 1]")
        if self.kind == "explicit":
            if len(self.support) != len(self.weights) or not self.support:
                raise ValueError("explicit distribution needs matching support and weights")
            if any(w < 0 for w in self.weights):
                raise ValueError("explicit weights must be nonnegative")
            if abs(math.fsum(self.weights) - 1.0) > 1e-12:
                raise ValueError("explicit weights must sum to 1")
            if any(x < 0 or x >> self.n for x in self.support):
                raise ValueError("explicit support point does not fit in n bits")

    @classmethod
    def uniform(cls, n: int) -> "SampleDistribution":
        return cls("uniform", n)

    @classmethod
    def product(cls, biases: Sequence[float]) -> "SampleDistribution":
        return cls("product", len(biases), biases=tuple(float(b) for b in biases))

    @classmethod
    def explicit(cls, n: int, points: Sequence[int], weights: Sequence[float]) -> "SampleDistribution":
        return cls("explicit", n, support=tuple(int(p) for p in points), weights=tuple(float(w) for w in weights))

    @classmethod
    def point_mass(cls, n: int, x: int) -> "SampleDistribution":
        return cls.explicit(n, [x], [1.0])

    def sample(self, rng: np.random.Generator, size: int | None = None):
        m = 1 if size is None else size
        if self.kind == "uniform":
            out = rng.integers(0, 1 << self.n, size=m, dtype=np.int64) if self.n else np.zeros(m, np.int64)
        elif self.kind == "product":
            bits = rng.random((m, self.n)) < np.asarray(self.biases)
            out = _pack_bits(bits)
        else:
            idx = rng.choice(len(self.support), size=m, p=np.asarray(self.weights))
            out = np.asarray(self.support, dtype=np.int64)[idx]
        return int(out[0]) if size is None else out

    def table(self) -> tuple[np.ndarray, np.ndarray]:
        """Exact ``(points, probabilities)`` over the support."""
        if self.kind == "explicit":
            return np.asarray(self.support, dtype=np.int64), np.asarray(self.weights)
        if self.n > EXHAUSTIVE_MAX_N:
            raise ValueError(f"exhaustive table needs n <= {EXHAUSTIVE_MAX_N}")
        points = np.arange(1 << self.n, dtype=np.int64)
        if self.kind == "uniform":
            return points, np.full(points.shape, 2.0**-self.n)
        bits = (points[:, None] >> np.arange(self.n)) & 1
        b = np.asarray(self.biases)
        probs = np.where(bits == 1, b, 1.0 - b).prod(axis=1)
        return points, probs

    def to_json(self) -> dict:
        if self.kind == "uniform":
            return {"type": "uniform", "n": self.n}
        if self.kind == "product":
            return {"type": "product", "n": self.n, "biases": list(self.biases)}
        return {
            "type": "explicit",
            "n": self.n,
            "support": [[bits_of(x, self.n), w] for x, w in zip(self.support, self.weights)],
        }

    @classmethod
    def from_json(cls, data: dict) -> "SampleDistribution":
        kind = data.get("type")
        if kind == "uniform":
            return cls.uniform(int(data["n"]))
        if kind == "product":
            return cls.product(data["biases"])
        if kind == "explicit":
            pts, ws = zip(*data["support"])
            n = int(data.get("n", len(pts[0])))
            return cls.explicit(n, [assignment(p) for p in pts], ws)
        raise ValueError(f"unknown distribution type {kind!r}")


def read_distribution(path) -> SampleDistribution:
    with open(path) as fh:
        return SampleDistribution.from_json(json.load(fh))


def write_distribution(d: SampleDistribution, path) -> None:
    with open(path, "w") as fh:
        json.dump(d.to_json(), fh, indent=2)


def rejection_sample(
    dist,
    accept: Callable[[np.ndarray], np.ndarray],
    count: int,
    rng: np.random.Generator,
    max_draws: int,
    chunk: int = 4096,
) -> tuple[np.ndarray, int]:
    """Draw from ``dist`` until ``count`` points pass ``accept``.

    ``accept`` maps a batch of points to a boolean mask (it may issue
    membership queries). Returns the accepted points and the number of raw
    draws. Raises ``TargetTooSparse`` once ``max_draws`` is exceeded.
    """
    got: list[np.ndarray] = []
    have = 0
    draws = 0
    rate = None
    while have < count:
        if draws >= max_draws:
            raise TargetTooSparse(f"only {have}/{count} accepted after {draws} draws")
        need = count - have
        size = need if rate is None else int(need / max(rate, 1e-9) * 1.1) + 8
        size = max(min(size, max_draws - draws, max(chunk, need)), 1)
        batch = np.asarray(dist.sample(rng, size), dtype=np.int64)
        draws += size
        ok = np.asarray(accept(batch), dtype=bool)
        kept = batch[ok]
        got.append(kept[:need])
        have += min(len(kept), need)
        total_ok = have
        rate = total_ok / draws if total_ok else 0.5 / draws
    return np.concatenate(got) if got else np.zeros(0, np.int64), draws
