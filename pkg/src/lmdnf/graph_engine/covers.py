"""Covers, disjointification, thick graphs and revealed conductance.

Cover set indices are 0-based in the Python API and 1-based in files.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .conductance import phi_graph_bruteforce
from .multigraph import MultiGraph


class Cover:
    def __init__(self, parent: MultiGraph, sets: Iterable[Iterable[int]]):
        self.parent = parent
        self.sets: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(set(int(v) for v in A))) for A in sets)
        if not self.sets or any(not A for A in self.sets):
            raise ValueError("cover needs at least one nonempty set")
        seen = set().union(*self.sets)
        if seen != set(range(parent.N)):
            raise ValueError("sets do not cover the vertex set")
        self.disjoint = sum(len(A) for A in self.sets) == parent.N

    @property
    def s(self) -> int:
        return len(self.sets)

    def __len__(self) -> int:
        return self.s

    def __iter__(self):
        return iter(self.sets)

    def __getitem__(self, i: int) -> tuple[int, ...]:
        return self.sets[i]

    def union(self, I: Iterable[int]) -> list[int]:
        return sorted(set().union(*(self.sets[i] for i in I)))

    def sizes(self) -> list[int]:
        return [len(A) for A in self.sets]

    def is_sorted(self) -> bool:
        z = self.sizes()
        return all(a >= b for a, b in zip(z, z[1:]))

    def sorted_by_size(self) -> tuple["Cover", list[int]]:
        """Sets by size descending, ties kept in original order.

        Returns the new cover and the original index of each new position.
        """
        order = sorted(range(self.s), key=lambda i: -len(self.sets[i]))
        return Cover(self.parent, [self.sets[i] for i in order]), order

    def theta(self) -> Fraction:
        """min_i Phi(G[A_i]) by exhaustive cut enumeration."""
        return min(phi_graph_bruteforce(self.parent.induced(A)) for A in self.sets)

    def sets_containing(self, v: int) -> list[int]:
        return [i for i, A in enumerate(self.sets) if v in A]


def parse_cover(text: str, G: MultiGraph) -> Cover:
    sets = [[int(tok) - 1 for tok in ln.split()] for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    return Cover(G, sets)


def format_cover(C: Cover) -> str:
    return "".join(" ".join(str(v + 1) for v in A) + "\n" for A in C.sets)


def read_cover(path, G: MultiGraph) -> Cover:
    with open(path) as fh:
        return parse_cover(fh.read(), G)


def write_cover(C: Cover, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_cover(C))


# -- disjointification -----------------------------------------------------


def disjointify(G: MultiGraph, C: Cover) -> tuple[MultiGraph, Cover]:
    """Turn an overlapping cover into a disjoint one on an s-fold copy of G.

    Copy c of vertex v is vertex ``v * s + c`` of H. Every original u-v edge
    becomes one edge between each of the s^2 copy pairs, and each copy gets
    s * deg_G(v) self-loops, so each copy has degree 2 s deg_G(v) when G is
    nice. The copies of v are dealt round-robin to the sets containing v.
    """
    if C.parent is not G and C.parent != G:
        raise ValueError("cover belongs to a different graph")
    s, N = C.s, G.N
    Mh = np.kron(G.multiplicity, np.ones((s, s), dtype=np.int64))
    loops = np.repeat(s * G.degrees, s)
    H = MultiGraph(Mh, loops)
    blocks: list[list[int]] = [[] for _ in range(s)]
    for v in range(N):
        owners = C.sets_containing(v)
        for c in range(s):
            blocks[owners[c % len(owners)]].append(v * s + c)
    return H, Cover(H, blocks)


# -- thick graphs ------------------------------------------------------------


def cross_edge_counts(G: MultiGraph, C: Cover) -> np.ndarray:
    """|E(A_i, A_j)| for every pair of sets; the diagonal is zeroed."""
    ind = np.zeros((C.s, G.N), dtype=np.int64)
    for i, A in enumerate(C.sets):
        ind[i, list(A)] = 1
    w = ind @ G.multiplicity @ ind.T
    np.fill_diagonal(w, 0)
    return w


@dataclass(frozen=True)
class ThickGraph:
    level: int
    lam: Fraction
    threshold: Fraction
    weights: np.ndarray
    present: np.ndarray

    @property
    def s(self) -> int:
        return len(self.weights)

    def edges(self) -> list[tuple[int, int, int]]:
        return [(i, j, int(self.weights[i, j])) for i in range(self.s) for j in range(i + 1, self.s) if self.present[i, j]]


def _check_disjoint_sorted(C: Cover) -> None:
    if not C.disjoint:
        raise ValueError("thick graphs need a disjoint cover")
    if not C.is_sorted():
        raise ValueError("cover sets must be sorted by size, largest first")


def thick_graph(G: MultiGraph, C: Cover, level: int, lam) -> ThickGraph:
    """Meta-graph on the cover sets with an edge where |E(A_i,A_j)| >= lam^level |A_1|."""
    _check_disjoint_sorted(C)
    lam = Fraction(lam)
    if lam <= 0:
        raise ValueError("lambda must be positive")
    threshold = lam**level * len(C.sets[0])
    w = cross_edge_counts(G, C)
    present = np.array([[i != j and w[i, j] >= threshold for j in range(C.s)] for i in range(C.s)], dtype=bool)
    return ThickGraph(level, lam, threshold, w, present)


def thick_component(TG: ThickGraph, i: int) -> set[int]:
    seen = {i}
    queue = deque([i])
    while queue:
        u = queue.popleft()
        for v in np.flatnonzero(TG.present[u]):
            if int(v) not in seen:
                seen.add(int(v))
                queue.append(int(v))
    return seen


def revealed_conductance(G: MultiGraph, C: Cover, level: int, lam, I: Iterable[int]) -> Fraction:
    """Thick cross weight plus lam^level |A_1| per non-thick cross pair, over |A_I|."""
    I = sorted(set(I))
    if not I:
        raise ValueError("index set must be nonempty")
    TG = thick_graph(G, C, level, lam)
    rest = [j for j in range(C.s) if j not in set(I)]
    num = Fraction(0)
    for i in I:
        for j in rest:
            num += int(TG.weights[i, j]) if TG.present[i, j] else TG.threshold
    return num / sum(len(C.sets[i]) for i in I)


def lambda_param(s, d_max, theta, N, eps, base_const: float = 1000.0, exponent: float = 1000.0) -> float:
    """(base_const * s * d_max / theta * ln N * ln(1/eps)) ** -exponent."""
    if not 0 < eps < 0.5:
        raise ValueError("eps must lie in (0, 1/2)")
    if min(s, d_max, theta, N, base_const) <= 0:
        raise ValueError("arguments must be positive")
    x = base_const * s * d_max / float(theta) * math.log(N) * math.log(1.0 / eps)
    if exponent == 0:
        return 1.0
    return math.exp(-exponent * math.log(x))
