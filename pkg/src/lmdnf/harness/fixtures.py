"""Instance generators: random exact DNFs, random covered graphs and the
two-trees-into-two-hypercubes fixture."""
from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from ..dnf_core import Dnf, Term
from ..graph_engine import Cover, MultiGraph

WACKY_MAX_VERTICES = 2000


def gen_random_exact_dnf(n: int, k: int, s: int, rng: np.random.Generator) -> Dnf:
    """s distinct width-k terms, variable sets and signs uniform."""
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    if s < 1:
        raise ValueError("need s >= 1")
    if s > math.comb(n, k) * 2**k:
        raise ValueError(f"only {math.comb(n, k) * 2**k} distinct width-{k} terms exist")
    terms: list[Term] = []
    seen = set()
    while len(terms) < s:
        vars_ = rng.choice(n, size=k, replace=False) + 1
        signs = rng.integers(0, 2, size=k) * 2 - 1
        t = Term(tuple(int(v * g) for v, g in zip(vars_, signs)))
        if t not in seen:
            seen.add(t)
            terms.append(t)
    return Dnf(n, terms)


def gen_wacky_fixture(tree_depth: int, expander_dims: Sequence[int]) -> tuple[MultiGraph, Cover]:
    """A root with two disjoint trees hanging into two disjoint hypercubes.

    Both trees have depth ``tree_depth`` and branching 2^(r1/depth), so each
    has 2^r1 leaves. Tree 1's leaves are the vertices of Q_{r1}; tree 2's
    leaves are the 2^r1 vertices of Q_{r2} whose top r2 - r1 coordinates are
    zero. Vertex 0 is the root. The graph is made nice, and the cover is
    {tree1 + cube1, tree2 + cube2}, both containing the root.
    """
    r1, r2 = (int(r) for r in expander_dims)
    if tree_depth < 1 or r1 < 1 or r2 < r1 or r1 % tree_depth:
        raise ValueError("need depth >= 1, 1 <= r1 <= r2 and depth dividing r1")
    b = 1 << (r1 // tree_depth)
    internal = sum(b**d for d in range(1, tree_depth))  # non-root, non-leaf nodes per tree
    N = 1 + 2 * internal + (1 << r1) + (1 << r2)
    if N > WACKY_MAX_VERTICES:
        raise ValueError(f"fixture would have {N} vertices, cap is {WACKY_MAX_VERTICES}")

    edges: list[tuple[int, int]] = []
    next_id = 1
    sets = []
    cube_offset = 1 + 2 * internal
    for side, r in enumerate((r1, r2)):
        base = cube_offset if side == 0 else cube_offset + (1 << r1)
        members = [0]
        level = [0]
        for d in range(1, tree_depth + 1):
            nxt = []
            for parent in level:
                for c in range(b):
                    if d == tree_depth:
                        child = base + len(nxt)
                    else:
                        child = next_id
                        next_id += 1
                    edges.append((parent, child))
                    nxt.append(child)
            if d < tree_depth:
                members += nxt
            level = nxt
        for x in range(1 << r):
            for i in range(r):
                y = x ^ (1 << i)
                if x < y:
                    edges.append((base + x, base + y))
        members += list(range(base, base + (1 << r)))
        sets.append(members)
    G = MultiGraph.from_edges(N, edges).make_nice()
    return G, Cover(G, sets)


def two_expanders_fixture(r: int = 3) -> tuple[MultiGraph, Cover]:
    """Two disjoint nice r-cubes; the cover is the pair of cubes."""
    Q = MultiGraph.hypercube(r)
    N = Q.N
    M = np.zeros((2 * N, 2 * N), np.int64)
    M[:N, :N] = Q.multiplicity
    M[N:, N:] = Q.multiplicity
    G = MultiGraph(M).make_nice()
    return G, Cover(G, [range(N), range(N, 2 * N)])


# -- random graphs and covers ---------------------------------------------------


def random_connected_graph(rng: np.random.Generator, N: int, p: float = 0.4, max_mult: int = 2, nice: bool = True) -> MultiGraph:
    """Random spanning tree plus independent extra edges, multiplicities in 1..max_mult."""
    M = np.zeros((N, N), np.int64)
    perm = rng.permutation(N)
    for i in range(1, N):
        u, v = perm[i], perm[rng.integers(i)]
        M[u, v] = M[v, u] = rng.integers(1, max_mult + 1)
    for u in range(N):
        for v in range(u + 1, N):
            if M[u, v] == 0 and rng.random() < p:
                M[u, v] = M[v, u] = rng.integers(1, max_mult + 1)
    G = MultiGraph(M)
    return G.make_nice() if nice else G


def _grow_connected(G: MultiGraph, rng, start: int, size: int) -> set[int]:
    S = {start}
    while len(S) < size:
        nb = sorted({int(w) for u in S for w in np.flatnonzero(G.multiplicity[u]) if int(w) not in S})
        if not nb:
            break
        S.add(int(rng.choice(nb)))
    return S


def random_cover(G: MultiGraph, rng: np.random.Generator, max_sets: int = 3, min_size: int = 2, max_tries: int = 100) -> Cover:
    """Overlapping cover by connected sets of at least ``min_size`` vertices.

    Each new set is grown from a still-uncovered vertex; at least two sets.
    """
    for _ in range(max_tries):
        sets: list[set[int]] = []
        covered: set[int] = set()
        while covered != set(range(G.N)) or len(sets) < 2:
            left = sorted(set(range(G.N)) - covered)
            start = int(rng.choice(left)) if left else int(rng.integers(G.N))
            size = int(rng.integers(min_size, max(min_size + 1, G.N // 2 + 2)))
            S = _grow_connected(G, rng, start, size)
            if len(S) < min_size:
                break
            sets.append(S)
            covered |= S
            if len(sets) > max_sets:
                break
        else:
            return Cover(G, sets)
    raise RuntimeError("could not build a cover within the retry budget")


def random_partition_cover(G: MultiGraph, rng: np.random.Generator, parts: int) -> Cover:
    """Disjoint cover with ``parts`` nonempty random blocks, sorted largest first."""
    labels = np.concatenate([np.arange(parts), rng.integers(0, parts, G.N - parts)])
    labels = rng.permutation(labels)
    C = Cover(G, [np.flatnonzero(labels == i) for i in range(parts)])
    return C.sorted_by_size()[0]
