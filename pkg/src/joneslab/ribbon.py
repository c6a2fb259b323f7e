"""Spanning subgraphs of the all-A ribbon graph and the subgraph expansion.

A spanning subgraph H is an int bitmask over crossings (= edges of G_A).
Its face count is the number of state circles of the state that takes the
B-resolution exactly on the included edges.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Dict, Iterator, List, Tuple

import numpy as np

from .bracket import DEFAULT_NAIVE_LIMIT, TooLarge, bivariate_to_poly
from .diagram import Diagram
from .poly import DELTA, LaurentPoly, exact_div
from .states import circle_counts_batch, count_circles, resolve


class ParityError(AssertionError):
    pass


@dataclass(frozen=True)
class SubgraphStats:
    v: int
    e: int
    f: int
    k: int
    g: int

    @property
    def rank(self) -> int:
        return self.v - self.k


class AllAGraph:
    """Vertices (A-circles) and edge endpoints of G_A, computed once per diagram."""

    def __init__(self, D: Diagram):
        self.D = D
        sg = resolve(D, 0)
        self.v = sg.num_circles
        self.ends: List[Tuple[int, int]] = [(p[0], q[0]) for p, q in sg.edges]
        self.state_graph = sg

    def components(self, H: int) -> int:
        parent = list(range(self.v))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        k = self.v
        for i, (a, b) in enumerate(self.ends):
            if H >> i & 1:
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[ra] = rb
                    k -= 1
        return k

    def loops(self) -> List[int]:
        return [i for i, (a, b) in enumerate(self.ends) if a == b]


def stats(D: Diagram, H: int, graph: AllAGraph = None) -> SubgraphStats:
    G = graph or AllAGraph(D)
    e = bin(H).count("1")
    k = G.components(H)
    f = count_circles(D, H)
    twice_g = 2 * k - G.v + e - f
    if twice_g % 2 or twice_g < 0:
        raise ParityError(f"2g = {twice_g} for subgraph {H:#x}")
    return SubgraphStats(G.v, e, f, k, twice_g // 2)


def contribution(D: Diagram, H: int) -> LaurentPoly:
    e = bin(H).count("1")
    f = count_circles(D, H)
    return DELTA ** (f - 1) * LaurentPoly.monomial(D.c - 2 * e)


def contribution_from(c: int, e: int, f: int) -> LaurentPoly:
    return DELTA ** (f - 1) * LaurentPoly.monomial(c - 2 * e)


def _popcount(arr: np.ndarray) -> np.ndarray:
    out = np.zeros(arr.shape, dtype=np.int64)
    x = arr.copy()
    while np.any(x):
        out += x & 1
        x >>= 1
    return out


def subgraph_bracket(D: Diagram, naive_limit: int = DEFAULT_NAIVE_LIMIT,
                     chunk: int = 1 << 16) -> LaurentPoly:
    """Sum of X_H over all 2^c spanning subgraphs (vectorized state sum)."""
    c = D.c
    if c > naive_limit:
        raise TooLarge(f"{c} crossings exceeds the naive limit {naive_limit}")
    hist = np.zeros((c + 1, c + 3 + D.unknots), dtype=np.int64)
    total = 1 << c
    for lo in range(0, total, chunk):
        states = np.arange(lo, min(total, lo + chunk), dtype=np.int64)
        f = circle_counts_batch(D, states)
        e = _popcount(states)
        np.add.at(hist, (e, f), 1)
    # sum over f of delta^(f-1): shift loop index down by one via exact division
    u = bivariate_to_poly(hist, c)
    return exact_div(u, DELTA)


def enumerate_low_rank(D: Diagram, r: int, graph: AllAGraph = None) -> Iterator[int]:
    """All spanning subgraphs with v - k <= r, without scanning all 2^e subsets.

    A subgraph of rank <= r is a choice of disjoint vertex blocks with
    sum(|B| - 1) <= r, a connected spanning edge set inside each block, and
    any set of loop edges.
    """
    if r < 0:
        return
    G = graph or AllAGraph(D)
    loops = G.loops()
    nonloop: Dict[frozenset, List[int]] = {}
    adj: Dict[int, set] = {i: set() for i in range(G.v)}
    for i, (a, b) in enumerate(G.ends):
        if a != b:
            nonloop.setdefault(frozenset((a, b)), []).append(i)
            adj[a].add(b)
            adj[b].add(a)
    # connected vertex sets of size 2..r+1
    blocks = set()
    frontier = {frozenset((a,)) for a in range(G.v)}
    for size in range(2, r + 2):
        grown = set()
        for S in frontier:
            for a in S:
                for b in adj[a]:
                    if b not in S:
                        grown.add(S | {b})
        blocks |= grown
        frontier = grown
    blocks = sorted(blocks, key=lambda S: (len(S), sorted(S)))

    conn_cache: Dict[frozenset, List[int]] = {}

    def connected_edge_sets(S: frozenset) -> List[int]:
        if S in conn_cache:
            return conn_cache[S]
        edges = [i for pair, ids in nonloop.items() if pair <= S for i in ids]
        verts = sorted(S)
        out = []
        for m in range(1, 1 << len(edges)):
            parent = {x: x for x in verts}

            def find(x):
                while parent[x] != x:
                    x = parent[x]
                return x

            comps = len(verts)
            mask = 0
            for j, ei in enumerate(edges):
                if m >> j & 1:
                    mask |= 1 << ei
                    a, b = G.ends[ei]
                    ra, rb = find(a), find(b)
                    if ra != rb:
                        parent[ra] = rb
                        comps -= 1
            if comps == 1:
                out.append(mask)
        conn_cache[S] = out
        return out

    def partitions(start: int, used: frozenset, budget: int):
        yield []
        for i in range(start, len(blocks)):
            S = blocks[i]
            cost = len(S) - 1
            if cost > budget or S & used:
                continue
            for rest in partitions(i + 1, used | S, budget - cost):
                yield [S] + rest

    loop_masks = []
    for m in range(1 << len(loops)):
        mask = 0
        for j, ei in enumerate(loops):
            if m >> j & 1:
                mask |= 1 << ei
        loop_masks.append(mask)

    for part in partitions(0, frozenset(), r):
        base_sets = [0]
        for S in part:
            base_sets = [b | x for b in base_sets for x in connected_edge_sets(S)]
        for b in base_sets:
            for lm in loop_masks:
                yield b | lm


def brute_low_rank(D: Diagram, r: int) -> List[int]:
    """Reference filter over all 2^c subsets (small diagrams only)."""
    G = AllAGraph(D)
    return [H for H in range(1 << D.c) if G.v - G.components(H) <= r]
