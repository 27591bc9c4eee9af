"""Total variation distance helpers."""
from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np


def tv(p, q) -> float:
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise ValueError("distributions have different support sizes")
    return float(0.5 * np.abs(p - q).sum())


def coarsen(p, partition: Sequence[Iterable[int]]) -> np.ndarray:
    """Mass of ``p`` on each block of ``partition``."""
    p = np.asarray(p, dtype=float)
    blocks = [list(b) for b in partition]
    flat = sorted(i for b in blocks for i in b)
    if flat != list(range(len(p))):
        raise ValueError("partition must cover every index exactly once")
    return np.array([p[b].sum() for b in blocks])


def tv_conditioning_check(p, q, event: Iterable[int]) -> tuple[float, float]:
    """Both sides of TV(p|E, q|E) <= 2 TV(p, q) / p(E).

    When q(E) = 0 the conditional q|E is undefined and the left side is
    reported as 1, the largest possible distance.
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise ValueError("distributions have different support sizes")
    E = sorted(set(event))
    pe = p[E].sum()
    if pe <= 0:
        raise ValueError("p(E) must be positive")
    rhs = 2.0 * tv(p, q) / pe
    qe = q[E].sum()
    lhs = 1.0 if qe <= 0 else tv(p[E] / pe, q[E] / qe)
    return lhs, rhs
