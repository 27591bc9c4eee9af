"""Small explicit undirected multigraphs with self-loops.

Vertices are ``0 .. N-1`` in the Python API and 1-based in the text format.
Each self-loop adds one to its vertex's degree.
"""
from __future__ import annotations

from collections import deque
from itertools import product
from typing import Iterable, Sequence

import numpy as np


class MultiGraph:
    def __init__(self, multiplicity: np.ndarray, loops: Sequence[int] | np.ndarray | None = None):
        m = np.array(multiplicity, dtype=np.int64)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("multiplicity must be a square matrix")
        if (m != m.T).any():
            raise ValueError("multiplicity matrix must be symmetric")
        if (m < 0).any():
            raise ValueError("edge multiplicities must be nonnegative")
        if np.diag(m).any():
            raise ValueError("self-loops go in `loops`, not on the diagonal")
        self.N = m.shape[0]
        self.multiplicity = m
        self.loops = np.zeros(self.N, np.int64) if loops is None else np.array(loops, dtype=np.int64)
        if self.loops.shape != (self.N,) or (self.loops < 0).any():
            raise ValueError("loops must be N nonnegative counts")
        self.multiplicity.setflags(write=False)
        self.loops.setflags(write=False)

    # -- construction ----------------------------------------------------

    @classmethod
    def from_edges(cls, N: int, edges: Iterable[tuple[int, int]], loops=None) -> "MultiGraph":
        m = np.zeros((N, N), np.int64)
        for u, v in edges:
            if u == v:
                raise ValueError("use `loops` for self-loops")
            m[u, v] += 1
            m[v, u] += 1
        return cls(m, loops)

    @classmethod
    def cycle(cls, N: int) -> "MultiGraph":
        return cls.from_edges(N, [(i, (i + 1) % N) for i in range(N)])

    @classmethod
    def complete(cls, N: int) -> "MultiGraph":
        return cls.from_edges(N, [(i, j) for i in range(N) for j in range(i + 1, N)])

    @classmethod
    def hypercube(cls, r: int) -> "MultiGraph":
        N = 1 << r
        return cls.from_edges(N, [(x, x ^ (1 << i)) for x in range(N) for i in range(r) if x < x ^ (1 << i)])

    # -- basic quantities ------------------------------------------------

    @property
    def edge_degrees(self) -> np.ndarray:
        """Non-loop degree of every vertex."""
        return self.multiplicity.sum(axis=1)

    @property
    def degrees(self) -> np.ndarray:
        return self.edge_degrees + self.loops

    @property
    def d_max(self) -> int:
        return int(self.degrees.max()) if self.N else 0

    @property
    def num_edges(self) -> int:
        """Edges counting each self-loop once."""
        return int(self.multiplicity.sum() // 2 + self.loops.sum())

    def adjacency(self) -> np.ndarray:
        """Adjacency matrix with loop counts on the diagonal."""
        a = self.multiplicity.copy()
        a[np.diag_indices(self.N)] = self.loops
        return a

    def is_nice(self) -> bool:
        return bool((self.loops == self.edge_degrees).all())

    def make_nice(self) -> "MultiGraph":
        return MultiGraph(self.multiplicity, self.edge_degrees)

    def induced(self, vertices: Iterable[int]) -> "MultiGraph":
        """G[T]: keeps the edges inside T and every self-loop of T's vertices."""
        idx = sorted(set(int(v) for v in vertices))
        return MultiGraph(self.multiplicity[np.ix_(idx, idx)], self.loops[idx])

    def cut_size(self, S: Iterable[int], T: Iterable[int] | None = None) -> int:
        """|E(S, T)|, with T defaulting to the complement of S."""
        s = self._indicator(S)
        t = ~s if T is None else self._indicator(T)
        return int(self.multiplicity[np.ix_(s, t)].sum())

    def _indicator(self, S: Iterable[int]) -> np.ndarray:
        ind = np.zeros(self.N, dtype=bool)
        ind[list(S)] = True
        return ind

    def components(self) -> list[list[int]]:
        """Connected components of the loop-free graph."""
        seen = np.zeros(self.N, dtype=bool)
        comps = []
        for root in range(self.N):
            if seen[root]:
                continue
            seen[root] = True
            comp, queue = [], deque([root])
            while queue:
                u = queue.popleft()
                comp.append(u)
                for w in np.flatnonzero(self.multiplicity[u]):
                    if not seen[w]:
                        seen[w] = True
                        queue.append(w)
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        return self.N > 0 and len(self.components()) == 1

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MultiGraph)
            and np.array_equal(self.multiplicity, other.multiplicity)
            and np.array_equal(self.loops, other.loops)
        )

    def __repr__(self) -> str:
        return f"MultiGraph(N={self.N}, edges={int(self.multiplicity.sum() // 2)}, loops={int(self.loops.sum())})"


def hypercube_vertices(r: int):
    return list(product((0, 1), repeat=r))


# -- text format ---------------------------------------------------------


def format_graph(G: MultiGraph) -> str:
    lines = [str(G.N)]
    for u in range(G.N):
        for v in range(u + 1, G.N):
            if G.multiplicity[u, v]:
                lines.append(f"{u + 1} {v + 1} {G.multiplicity[u, v]}")
    for v in range(G.N):
        if G.loops[v]:
            lines.append(f"loop {v + 1} {G.loops[v]}")
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> MultiGraph:
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows:
        raise ValueError("empty graph file")
    N = int(rows[0][0])
    m = np.zeros((N, N), np.int64)
    loops = np.zeros(N, np.int64)
    for row in rows[1:]:
        if row[0] == "loop":
            v, c = int(row[1]) - 1, int(row[2])
            loops[v] += c
        else:
            u, v, c = int(row[0]) - 1, int(row[1]) - 1, int(row[2]) if len(row) > 2 else 1
            if u == v:
                loops[u] += c
            else:
                m[u, v] += c
                m[v, u] += c
    return MultiGraph(m, loops)


def read_graph(path) -> MultiGraph:
    with open(path) as fh:
        return parse_graph(fh.read())


def write_graph(G: MultiGraph, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_graph(G))
