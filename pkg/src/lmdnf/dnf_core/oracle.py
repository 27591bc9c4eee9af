from __future__ import annotations

import threading
from typing import Callable

import numpy as np


class MembershipOracle:
    """Black-box access to a Boolean target with exact query accounting.

    ``target`` is either an object exposing ``eval``/``eval_batch`` (such as
    :class:`~lmdnf.dnf_core.terms.Dnf`) or a plain callable on int
    assignments. Every evaluated point costs one query, batched or not.
    """

    def __init__(self, target, n: int | None = None):
        if n is None:
            n = getattr(target, "n", None)
        if n is None:
            raise ValueError("dimension n is required for a plain callable target")
        self.n = int(n)
        self._target = target
        self._scalar: Callable[[int], object] = getattr(target, "eval", target)
        self._batch = getattr(target, "eval_batch", None)
        self._lock = threading.Lock()
        self._count = 0

    @property
    def query_count(self) -> int:
        return self._count

    def _charge(self, k: int) -> None:
        with self._lock:
            self._count += k

    def query(self, x: int) -> int:
        x = int(x)
        if x < 0 or x >> self.n:
            raise ValueError(f"assignment does not fit in n={self.n} bits")
        self._charge(1)
        return 1 if self._scalar(x) else 0

    __call__ = query

    def query_batch(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.int64)
        self._charge(int(xs.size))
        if self._batch is not None:
            return np.asarray(self._batch(xs), dtype=bool)
        flat = np.fromiter((bool(self._scalar(int(x))) for x in xs.ravel()), dtype=bool, count=xs.size)
        return flat.reshape(xs.shape)
