"""Kauffman states, state circles and state graphs.

A state is an int bitmask over crossings; bit i set means crossing i takes
the B-resolution.  With slots numbered counterclockwise from the incoming
under-strand, the A-resolution joins slots (0,1) and (2,3), the B-resolution
joins (0,3) and (1,2).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .diagram import Diagram

A_PAIRS = ((0, 1), (2, 3))
B_PAIRS = ((1, 2), (3, 0))
# partner slot under each resolution
_PARTNER = {0: (1, 0, 3, 2), 1: (3, 2, 1, 0)}


@dataclass(frozen=True)
class KauffmanState:
    bits: int
    c: int

    def is_B(self, i: int) -> bool:
        return bool(self.bits >> i & 1)

    def __iter__(self):
        return (self.bits >> i & 1 for i in range(self.c))


def all_A(D: Diagram) -> KauffmanState:
    return KauffmanState(0, D.c)


def all_B(D: Diagram) -> KauffmanState:
    return KauffmanState((1 << D.c) - 1, D.c)


def dual(s: KauffmanState) -> KauffmanState:
    return KauffmanState(~s.bits & ((1 << s.c) - 1), s.c)


def _bits(sigma) -> int:
    return sigma.bits if isinstance(sigma, KauffmanState) else int(sigma)


def circle_darts(D: Diagram, sigma) -> List[List[Tuple[int, int]]]:
    """State circles as cyclic lists of darts (crossing, slot).

    Each circle is listed once, as the orbit of "cross the arc, then jump to
    the smoothing partner".  Every dart lies on exactly one listed orbit or on
    the reversed orbit of the same circle; only one direction is kept.
    """
    bits = _bits(sigma)
    seen = set()
    out = []
    for ci in range(D.c):
        for s in range(4):
            if (ci, s) in seen:
                continue
            orbit = []
            d = (ci, s)
            while d not in seen:
                seen.add(d)
                orbit.append(d)
                y, t = D.other_end(*d)
                d = (y, _PARTNER[bits >> y & 1][t])
            # mark the reverse traversal (the arc ends we arrived at)
            for d in orbit:
                seen.add(D.other_end(*d))
            out.append(orbit)
    return out


def count_circles(D: Diagram, sigma) -> int:
    bits = _bits(sigma)
    parent = list(range(4 * D.c))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    comps = 4 * D.c
    for (c0, s0), (c1, s1) in D.ends.values():
        a, b = find(4 * c0 + s0), find(4 * c1 + s1)
        if a != b:
            parent[a] = b
            comps -= 1
    for ci in range(D.c):
        pairs = B_PAIRS if bits >> ci & 1 else A_PAIRS
        for s, t in pairs:
            a, b = find(4 * ci + s), find(4 * ci + t)
            if a != b:
                parent[a] = b
                comps -= 1
    return comps + D.unknots


def circle_counts_batch(D: Diagram, states: np.ndarray) -> np.ndarray:
    """Circle counts for an array of state bitmasks, vectorized.

    Counts orbits of the dart permutation with pointer doubling; each circle
    gives two orbits (one per direction).
    """
    c = D.c
    states = np.asarray(states, dtype=np.int64)
    if c == 0:
        return np.full(states.shape, D.unknots, dtype=np.int64)
    nd = 4 * c
    alpha = np.empty(nd, dtype=np.int64)
    for (c0, s0), (c1, s1) in D.ends.values():
        alpha[4 * c0 + s0] = 4 * c1 + s1
        alpha[4 * c1 + s1] = 4 * c0 + s0
    pa = np.array(_PARTNER[0])
    pb = np.array(_PARTNER[1])
    # perm[b, d] = partner(alpha(d)) under state b
    tgt = alpha  # dart reached after crossing the arc
    tc = tgt // 4
    ts = tgt % 4
    bit = (states[:, None] >> tc[None, :]) & 1
    perm = 4 * tc[None, :] + np.where(bit == 1, pb[ts][None, :], pa[ts][None, :])
    m = np.broadcast_to(np.arange(nd), perm.shape).copy()
    f = perm
    steps = 1
    while steps < nd:
        m = np.minimum(m, np.take_along_axis(m, f, axis=1))
        f = np.take_along_axis(f, f, axis=1)
        steps *= 2
    orbits = (m == np.arange(nd)[None, :]).sum(axis=1)
    return orbits // 2 + D.unknots


@dataclass
class StateGraph:
    """State circles plus one edge per crossing.

    circles[k] is the cyclic list of attachment points met along circle k,
    each attachment point being (crossing, side) with side 0 for the
    smoothing arc through slot 0 and side 1 for the other one.  edges[i]
    gives ((circle, position), (circle, position)) for crossing i.
    """

    bits: int
    circles: List[List[Tuple[int, int]]]
    edges: List[Tuple[Tuple[int, int], Tuple[int, int]]]
    circle_of: Dict[Tuple[int, int], int]
    free_circles: int = 0

    @property
    def num_circles(self) -> int:
        return len(self.circles) + self.free_circles

    def loop_edges(self) -> List[int]:
        return [i for i, (p, q) in enumerate(self.edges) if p[0] == q[0]]

    def to_json(self) -> dict:
        return {
            "state": self.bits,
            "circles": [[list(p) for p in c] for c in self.circles],
            "free_circles": self.free_circles,
            "edges": [[list(p), list(q)] for p, q in self.edges],
        }


def side_of(bits: int, ci: int, s: int) -> int:
    """Which smoothing arc of crossing ci contains slot s (0 = the one through slot 0)."""
    if bits >> ci & 1:
        return 0 if s in (3, 0) else 1
    return 0 if s in (0, 1) else 1


def resolve(D: Diagram, sigma) -> StateGraph:
    bits = _bits(sigma)
    circles = []
    circle_of: Dict[Tuple[int, int], int] = {}
    for k, orbit in enumerate(circle_darts(D, bits)):
        seq = []
        for (ci, s) in orbit:
            # entering the smoothing arc of crossing y through slot t
            y, t = D.other_end(ci, s)
            p = (y, side_of(bits, y, t))
            seq.append(p)
            circle_of[p] = k
        circles.append(seq)
    edges = []
    pos = {}
    for k, seq in enumerate(circles):
        for j, p in enumerate(seq):
            pos[p] = (k, j)
    for ci in range(D.c):
        edges.append((pos[(ci, 0)], pos[(ci, 1)]))
    return StateGraph(bits, circles, edges, circle_of, D.unknots)


def is_A_adequate(D: Diagram) -> Tuple[bool, Optional[int]]:
    """(True, None) or (False, witness crossing whose all-A edge is a loop)."""
    g = resolve(D, 0)
    loops = g.loop_edges()
    return (not loops, loops[0] if loops else None)


def is_B_adequate(D: Diagram) -> Tuple[bool, Optional[int]]:
    g = resolve(D, (1 << D.c) - 1)
    loops = g.loop_edges()
    return (not loops, loops[0] if loops else None)


def sA(D: Diagram) -> int:
    return count_circles(D, 0)


def sB(D: Diagram) -> int:
    return count_circles(D, (1 << D.c) - 1)


# planar map of a state graph ------------------------------------------------
# Vertices are attachment points; each carries three darts: two slot darts
# (shared naming with the diagram) and one edge dart ("e", crossing, side).
# Rotation is counterclockwise.

def _rotation(bits: int, ci: int):
    e0, e1 = ("e", ci, 0), ("e", ci, 1)
    if bits >> ci & 1:
        # side 0 = arc through (3,0), side 1 = arc through (1,2)
        return {e0: (ci, 3), (ci, 3): (ci, 0), (ci, 0): e0,
                e1: (ci, 1), (ci, 1): (ci, 2), (ci, 2): e1}
    return {e0: (ci, 0), (ci, 0): (ci, 1), (ci, 1): e0,
            e1: (ci, 2), (ci, 2): (ci, 3), (ci, 3): e1}


def state_map_faces(D: Diagram, sigma, include_edges=None) -> List[list]:
    """Faces of the plane graph formed by the state circles and the crossing edges.

    include_edges, if given, restricts the crossing edges drawn (a set of
    crossing indices); the faces are then those of circles plus those edges.
    """
    bits = _bits(sigma)
    rot = {}
    for ci in range(D.c):
        r = _rotation(bits, ci)
        if include_edges is not None and ci not in include_edges:
            # drop the edge dart: slot darts rotate directly into each other
            for side in (0, 1):
                ed = ("e", ci, side)
                prev = next(k for k, v in r.items() if v == ed)
                r[prev] = r.pop(ed)
        rot.update(r)

    def alpha(d):
        if d[0] == "e":
            return ("e", d[1], 1 - d[2])
        return D.other_end(*d)

    seen = set()
    faces = []
    for d0 in rot:
        if d0 in seen:
            continue
        face = []
        d = d0
        while d not in seen:
            seen.add(d)
            face.append(d)
            d = rot[alpha(d)]
        faces.append(face)
    return faces
