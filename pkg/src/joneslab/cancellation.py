"""Cancellation machinery on cables of non-A-adequate diagrams.

Given a crossing e whose all-A edge is a loop on a state circle S, the n^2
crossings of e's cable are labelled by region (between consecutive parallel
copies S_0..S_{n-1} of S), by side (L or R of a curve through the loops on
S_0) and by a number.  From these labels each low-rank spanning subgraph H
of the all-A ribbon graph of D^n gets a set a(H) of loops, a starting edge
s_a, alternating sequences {t^j}/{b^j} and a set G(H) of free edges.
Subgraphs differing only on free edges form classes whose contributions to
the bracket cancel in the top n-1 coefficients.

Edges are crossings of D^n (int ids); a subgraph is an int bitmask.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Dict, FrozenSet, List, Optional, Tuple

import numpy as np

from .bracket import fast_bracket
from .diagram import Cable, Diagram, cable_with_map
from .poly import DELTA, LaurentPoly
from .ribbon import AllAGraph, contribution_from, enumerate_low_rank, stats
from .states import (circle_counts_batch, count_circles, is_A_adequate, resolve,
                     sA, side_of, state_map_faces)


class NotApplicable(ValueError):
    pass


class LabelingInconsistent(AssertionError):
    pass


class WitnessMissing(AssertionError):
    pass


class PartitionError(AssertionError):
    pass


class BoundViolation(AssertionError):
    def __init__(self, message, cls=None):
        super().__init__(message)
        self.cls = cls


def binomial_cancellation(c: int, d: int, k: int) -> LaurentPoly:
    """sum_i C(k,i) A^(c-2i) delta^(d+i); its max degree is at most c + 2d - 4k."""
    if d < 0 or k < 0:
        raise ValueError("d and k must be non-negative")
    total = LaurentPoly()
    for i in range(k + 1):
        total = total + DELTA ** (d + i) * LaurentPoly.monomial(c - 2 * i, comb(k, i))
    return total


# labelling ------------------------------------------------------------------

Label = Tuple[int, str, int]  # (region index, side 'L'/'R'/'C', number)


@dataclass
class CableLabeling:
    base: Diagram
    n: int
    cable: Cable
    violating_crossing: int
    circles: List[int]                 # circle ids of S_0..S_{n-1} in the all-A state of D^n
    region_of: List[int]               # per crossing of D^n: 0..n-1 for Omega_i, n for the outside
    labels: Dict[int, Label]           # crossing of e^n -> label
    loops: List[int]                   # e^n_l ordered by number 1, 3, ..., 2n-1
    num_regions: int = 0
    by_label: Dict[Label, int] = field(default_factory=dict)
    he_reading: str = "union"
    k0_reading: str = "literal"

    @property
    def diagram(self) -> Diagram:
        return self.cable.diagram

    @property
    def e_n(self) -> List[int]:
        return sorted(self.labels)

    def number(self, x: int) -> int:
        return self.labels[x][2]

    def side(self, x: int) -> str:
        return self.labels[x][1]

    def region(self, x: int) -> int:
        return self.labels[x][0]

    def edges_in(self, i: int, side: str) -> List[int]:
        """e^n edges of side Omega_i sorted by number; Omega_0 is shared by both sides."""
        if i < 0 or i >= self.n:
            return []
        s = "C" if i == 0 else side
        out = [x for x, (r, sd, _) in self.labels.items() if r == i and sd == s]
        return sorted(out, key=self.number)

    def region_edges(self, i: int) -> List[int]:
        """All crossings of D^n (in e^n or not) embedded in Omega_i."""
        return [x for x, r in enumerate(self.region_of) if r == i]

    def name(self, x: int) -> str:
        r, s, m = self.labels[x]
        return str(m) if r == 0 else f"{s}{m}"

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "violating_crossing": self.violating_crossing,
            "circles": self.circles,
            "loops": self.loops,
            "labels": {str(x): [r, s, m] for x, (r, s, m) in sorted(self.labels.items())},
        }


def choose_violating_crossing(D: Diagram) -> int:
    """Loop edge of H_A(D) one of whose adjacent faces holds no other loop edge."""
    sg = resolve(D, 0)
    loops = sg.loop_edges()
    if not loops:
        raise NotApplicable("diagram is A-adequate")
    faces = state_map_faces(D, 0)
    loopset = set(loops)
    for x in loops:
        for f in faces:
            darts = [d for d in f if d[0] == "e"]
            if ("e", x, 0) in f or ("e", x, 1) in f:
                others = {d[1] for d in darts} & loopset - {x}
                if not others:
                    return x
    return loops[0]


class _UF:
    def __init__(self, n):
        self.p = list(range(n))

    def find(self, i):
        p = self.p
        while p[i] != i:
            p[i] = p[p[i]]
            i = p[i]
        return i

    def union(self, a, b):
        a, b = self.find(a), self.find(b)
        if a != b:
            self.p[a] = b


def _circle_uf(D: Diagram, bits: int) -> _UF:
    uf = _UF(4 * D.c)
    for (c0, s0), (c1, s1) in D.ends.values():
        uf.union(4 * c0 + s0, 4 * c1 + s1)
    for ci in range(D.c):
        if bits >> ci & 1:
            uf.union(4 * ci + 1, 4 * ci + 2)
            uf.union(4 * ci + 3, 4 * ci)
        else:
            uf.union(4 * ci, 4 * ci + 1)
            uf.union(4 * ci + 2, 4 * ci + 3)
    return uf


def _ends_split(uf: _UF, x: int) -> bool:
    """True if the two ends of edge x lie on distinct circles (slot 0 and slot 2 are on opposite sides)."""
    return uf.find(4 * x) != uf.find(4 * x + 2)


HE_READINGS = ("intersection", "union")
K0_READINGS = ("literal", "skip")


def label_cable(D: Diagram, n: int, crossing: Optional[int] = None,
                reverse: bool = False, swap_sides: bool = False,
                he_reading: str = "union", k0_reading: str = "literal") -> CableLabeling:
    """Label the cable of the violating crossing in D^n.

    ``reverse`` numbers the loops from the other end and ``swap_sides``
    exchanges L and R; both are conventions the labelling leaves open.

    ``he_reading`` fixes which edges are dropped to form H^e when choosing
    s_a: "intersection" drops the cable edges lying in Omega_(n-1), "union"
    drops every cable edge and every edge in Omega_(n-1).  ``k0_reading``
    "literal" lets k = 0 be chosen; "skip" starts the search at k = 1.
    """
    if he_reading not in HE_READINGS:
        raise ValueError(f"he_reading must be one of {HE_READINGS}")
    if k0_reading not in K0_READINGS:
        raise ValueError(f"k0_reading must be one of {K0_READINGS}")
    if not isinstance(n, int) or n < 2:
        raise NotApplicable("cable order must be at least 2")
    adequate, _ = is_A_adequate(D)
    if adequate:
        raise NotApplicable("diagram is A-adequate")
    e = choose_violating_crossing(D) if crossing is None else crossing
    cb = cable_with_map(D, n)
    Dn = cb.diagram
    sg = resolve(Dn, 0)
    en = cb.crossings_over(e)
    loops = [x for x in en if sg.circle_of[(x, 0)] == sg.circle_of[(x, 1)]]
    if len(loops) != n:
        raise LabelingInconsistent(f"expected {n} loops in the cable of crossing {e}, found {len(loops)}")
    s0 = {sg.circle_of[(x, 0)] for x in loops}
    if len(s0) != 1:
        raise LabelingInconsistent("loops of e^n lie on different circles")
    S0 = s0.pop()

    # regions of the circle complement: faces of the full state map merged across edges
    faces = state_map_faces(Dn, 0)
    face_of = {d: fi for fi, f in enumerate(faces) for d in f}
    uf = _UF(len(faces))
    for x in range(Dn.c):
        uf.union(face_of[("e", x, 0)], face_of[("e", x, 1)])
    sides: Dict[int, set] = {}
    for x in range(Dn.c):
        for s in range(4):
            circ = sg.circle_of[(x, side_of(0, x, s))]
            r1 = uf.find(face_of[(x, s)])
            r2 = uf.find(face_of[Dn.other_end(x, s)])
            sides.setdefault(circ, set()).update((r1, r2))
    for circ, rs in sides.items():
        if len(rs) != 2:
            raise LabelingInconsistent(f"circle {circ} does not separate two regions")
    cable_circles = {sg.circle_of[(x, sd)] for x in en for sd in (0, 1)}
    if len(cable_circles) != n:
        raise LabelingInconsistent(f"e^n touches {len(cable_circles)} circles, expected {n}")
    # merge across every circle that is not a copy of S
    big = _UF(len(faces))
    for circ, rs in sides.items():
        if circ not in cable_circles:
            a, b = rs
            big.union(a, b)

    def cls(r):
        return big.find(r)

    edge_region = [cls(uf.find(face_of[("e", x, 0)])) for x in range(Dn.c)]
    omega = [edge_region[loops[0]]]
    if any(edge_region[x] != omega[0] for x in loops):
        raise LabelingInconsistent("loops of e^n lie in different regions")
    order = [S0]
    remaining = set(cable_circles) - {S0}
    cur = S0
    for i in range(1, n + 1):
        a, b = (cls(r) for r in sides[cur])
        nxt_region = b if a == omega[-1] else a
        if omega[-1] not in (a, b) or nxt_region == omega[-1]:
            raise LabelingInconsistent(f"S_{i - 1} does not bound Omega_{i - 1}")
        omega.append(nxt_region)
        if i == n:
            break
        cand = [c for c in remaining if omega[-1] in {cls(r) for r in sides[c]}]
        if len(cand) != 1:
            raise LabelingInconsistent(f"cannot identify S_{i}")
        cur = cand[0]
        order.append(cur)
        remaining.discard(cur)
    if len(set(omega)) != n + 1:
        raise LabelingInconsistent("copies of S do not cut the sphere into n+1 regions")
    index = {r: i for i, r in enumerate(omega)}
    region_of = [index.get(r, -1) for r in edge_region]
    if -1 in region_of:
        raise LabelingInconsistent("an edge lies outside the n+1 regions")

    # numbers and sides on Omega_0: loops are parallel chords of S_0
    seq = sg.circles[S0]
    loopset = set(loops)
    pts = [p for p in seq if p[0] in loopset]
    # an extreme chord has its two ends adjacent in the restricted cyclic order
    extremes = [x for x in loops
                if any(pts[j][0] == x and pts[(j + 1) % len(pts)][0] == x for j in range(len(pts)))]
    if len(extremes) != 2:
        raise LabelingInconsistent("loops on S_0 are not parallel chords")
    first = min(extremes, key=lambda x: cb.crossing_map[x][1:])
    if reverse:
        first = max(extremes, key=lambda x: cb.crossing_map[x][1:])
    # rotate so the list starts right after the gap cut off by chord `first`
    j0 = next(j for j in range(len(pts))
              if pts[j][0] == first and pts[(j + 1) % len(pts)][0] == first)
    pts = pts[j0 + 1:] + pts[:j0 + 1]
    half = len(pts) // 2
    sideA, sideB = ("L", "R") if swap_sides else ("R", "L")
    tags: Dict[Tuple[int, int], Tuple[int, str]] = {}
    labels: Dict[int, Label] = {}
    ordered_loops = []
    for k in range(half):
        x = pts[k][0]
        if pts[len(pts) - 1 - k][0] != x:
            raise LabelingInconsistent("loops on S_0 are not parallel chords")
        m = 2 * k + 1
        labels[x] = (0, "C", m)
        ordered_loops.append(x)
        tags[pts[k]] = (m, sideA)
        tags[pts[len(pts) - 1 - k]] = (m, sideB)

    # rule (b): an Omega_i edge numbered m sits between m-1 and m+1 on S_{i-1}
    for i in range(1, n):
        inner, outer = order[i - 1], order[i]
        members = [x for x in en if region_of[x] == i]
        seq = sg.circles[inner]
        new_tags = {}
        for x in members:
            ends = {sg.circle_of[(x, sd)]: (x, sd) for sd in (0, 1)}
            if set(ends) != {inner, outer}:
                raise LabelingInconsistent(f"edge {x} in Omega_{i} does not join S_{i - 1} and S_{i}")
            p = ends[inner]
            j = seq.index(p)
            L = len(seq)
            before = next(seq[(j - t) % L] for t in range(1, L + 1) if seq[(j - t) % L] in tags)
            after = next(seq[(j + t) % L] for t in range(1, L + 1) if seq[(j + t) % L] in tags)
            (m1, s1), (m2, s2) = tags[before], tags[after]
            if s1 != s2 or abs(m1 - m2) != 2:
                raise LabelingInconsistent(
                    f"edge {x} in Omega_{i} sits between {s1}{m1} and {s2}{m2}")
            m = min(m1, m2) + 1
            labels[x] = (i, s1, m)
            new_tags[ends[outer]] = (m, s1)
        tags = new_tags
        for sd in ("L", "R"):
            got = sorted(m for x, (r, s, m) in labels.items() if r == i and s == sd)
            want = list(range(i + 1, 2 * n - i, 2))
            if got != want:
                raise LabelingInconsistent(f"{sd}Omega_{i} numbers {got}, expected {want}")
    if len(labels) != n * n:
        raise LabelingInconsistent(f"labelled {len(labels)} of {n * n} cable edges")
    by_label = {v: x for x, v in labels.items()}
    return CableLabeling(D, n, cb, e, order, region_of, labels, ordered_loops, n + 1, by_label,
                         he_reading, k0_reading)


# a(H), s_a, sequences, G(H), g_a(H) ------------------------------------------

def _mask(edges) -> int:
    m = 0
    for x in edges:
        m |= 1 << x
    return m


def a_of(L: CableLabeling, H: int) -> FrozenSet[int]:
    """Loops between the smallest and largest loop that H restricted to Omega_1 splits."""
    keep = _mask(L.region_edges(1))
    uf = _circle_uf(L.diagram, H & keep)
    split = [x for x in L.loops if _ends_split(uf, x)]
    if not split:
        return frozenset()
    lo, hi = L.number(split[0]), L.number(split[-1])
    return frozenset(x for x in L.loops if lo <= L.number(x) <= hi)


def _included(H: int, x: Optional[int]) -> bool:
    return x is not None and bool(H >> x & 1)


def s_a_of(L: CableLabeling, H: int, a: Optional[FrozenSet[int]] = None) -> int:
    if a is None:
        a = a_of(L, H)
    return _s_a(L, H, a)[0]


def _s_a(L: CableLabeling, H: int, a: FrozenSet[int]) -> Tuple[int, bool]:
    """(s_a, whether s_a joins G(H)).

    When 1 is in a(H), s_a is edge k+1 of ROmega_k unless edge k of
    ROmega_(k-1) is included; only the first choice is stable under
    toggling s_a, so only it is free.  For k = 0 s_a is the loop 1, which
    lies in a(H) and so never splits a circle; it is not free either.
    """
    if not a:
        raise ValueError("a(H) is empty")
    nums = sorted(L.number(x) for x in a)
    if nums[0] == 1:
        last = L.region_edges(L.n - 1)
        if L.he_reading == "union":
            drop = _mask(L.labels) | _mask(last)
        else:
            drop = _mask(x for x in last if x in L.labels)
        uf = _circle_uf(L.diagram, H & ~drop)
        # under the "skip" reading index 0 is never chosen
        start = 1 if L.k0_reading == "skip" else 0
        for k in range(start, L.n - 1):
            x = L.by_label[(k, "C" if k == 0 else "R", k + 1)]
            if not _ends_split(uf, x):
                if k == 0:
                    return x, False
                prev = L.by_label[(k - 1, "C" if k == 1 else "R", k)]
                return (prev, False) if _included(H, prev) else (x, True)
        raise WitnessMissing("no index k with edge k+1 of ROmega_k on one circle")
    m = nums[0]
    r = L.by_label[(1, "R", m - 1)]
    if _included(H, r):
        return r, False
    left = L.by_label[(1, "L", m - 1)]
    if not _included(H, left):
        raise WitnessMissing(f"neither R{m - 1} nor L{m - 1} is included")
    return left, False


@dataclass
class Sequences:
    """t[(side, i)] and b[(side, i)] as lists of non-empty terms."""
    k: int
    side: str
    M: int
    t: Dict[Tuple[str, int], List[int]]
    b: Dict[Tuple[str, int], List[int]]


def _other(side: str) -> str:
    return "L" if side == "R" else "R"


def sequences_of(L: CableLabeling, H: int, s_a: int, M: int) -> Sequences:
    n = L.n
    k = L.region(s_a)
    X = "R" if k == 0 else L.side(s_a)
    Y = _other(X)

    def smallest_included(i, side, above):
        for x in L.edges_in(i, side):
            m = L.number(x)
            if m > above and m <= M and _included(H, x):
                return x
        return None

    first: Dict[Tuple[str, int], Optional[int]] = {(X, k): s_a}
    for i in range(k + 1, n):
        ref = first[(X, i - 1)]
        first[(X, i)] = None if ref is None else smallest_included(i, X, L.number(ref))
    for i in range(k - 1, -1, -1):
        ref = first[(X, i + 1)]
        first[(X, i)] = None if ref is None else smallest_included(i, X, L.number(ref))
    first[(Y, 0)] = first[(X, 0)]
    for i in range(1, n):
        ref = first[(Y, i - 1)]
        first[(Y, i)] = None if ref is None else smallest_included(i, Y, L.number(ref))

    def run(side, i, step):
        x = first[(side, i)]
        out = []
        j = 0
        while x is not None:
            out.append(x)
            j += 1
            x = smallest_included(i + step * (j % 2), side, L.number(x))
        return out

    t = {}
    b = {}
    for side in (X, Y):
        for i in range(n):
            t[(side, i)] = run(side, i, +1)
    for side in (X, Y):
        for i in range(1, n):
            b[(side, i)] = run(side, i, -1)
    b[(X, 0)] = t[(Y, 0)]
    b[(Y, 0)] = t[(X, 0)]
    return Sequences(k, X, M, t, b)


def _window(L: CableLabeling, seq: List[int], i: int, side: str, M: int) -> set:
    """Edges of e^n in side Omega_i between seq[j] and seq[j+1] for even j."""
    out = set()
    nums = [L.number(x) for x in seq]
    for j in range(0, len(seq), 2):
        lo = nums[j]
        hi = nums[j + 1] if j + 1 < len(seq) else None
        for x in L.edges_in(i, side):
            m = L.number(x)
            if m > lo and (m < hi if hi is not None else m <= M):
                out.add(x)
    return out


@dataclass
class SubgraphData:
    H: int
    a: FrozenSet[int]
    s_a: Optional[int]
    seqs: Optional[Sequences]
    G: FrozenSet[int]

    @property
    def free(self) -> FrozenSet[int]:
        return self.G | self._rest

    _rest: FrozenSet[int] = frozenset()


def analyse(L: CableLabeling, H: int) -> SubgraphData:
    """a(H), s_a, the sequences and G(H) together."""
    a = a_of(L, H)
    rest = frozenset(L.loops) - a
    if not a:
        return SubgraphData(H, a, None, None, frozenset(), rest)
    s, s_free = _s_a(L, H, a)
    M = max(L.number(x) for x in a)
    seqs = sequences_of(L, H, s, M)
    G = set()
    for side in ("L", "R"):
        for i in range(0, L.n - 1):
            ti = _window(L, seqs.t[(side, i)], i, side, M)
            bi = _window(L, seqs.b[(side, i)], i, side, M)
            G |= ti & bi
    if s_free:
        G.add(s)
    return SubgraphData(H, a, s, seqs, frozenset(G), rest)


def G_of(L: CableLabeling, H: int) -> FrozenSet[int]:
    return analyse(L, H).G


def _between_count(L, xs: List[int], ys: List[int]) -> int:
    """Number of even-indexed terms of xs lying strictly between ys[j], ys[j+1] for some even j."""
    cnt = 0
    for l in range(0, len(xs), 2):
        v = L.number(xs[l])
        for j in range(0, len(ys) - 1, 2):
            if L.number(ys[j]) < v < L.number(ys[j + 1]):
                cnt += 1
                break
    return cnt


def g_a_of(L: CableLabeling, H: int) -> int:
    data = analyse(L, H)
    if not data.a:
        raise ValueError("a(H) is empty")
    sq = data.seqs
    X, Y, k, n = sq.side, _other(sq.side), sq.k, L.n
    total = 0
    for i in range(0, k + 1):
        if i == k:
            total += len(sq.b[(X, k)]) // 2
        else:
            total += _between_count(L, sq.b[(X, i)], sq.t[(X, i)])
    for i in range(k, n - 1):
        total += _between_count(L, sq.t[(X, i)], sq.b[(X, i)])
    for i in range(1, n - 1):
        total += _between_count(L, sq.t[(Y, i)], sq.b[(Y, i)])
    return total


# equivalence classes ---------------------------------------------------------

@dataclass
class ClassDescriptor:
    a_set: FrozenSet[int]
    G_set: FrozenSet[int]
    base: int
    free_set: FrozenSet[int]
    members: List[int] = field(default_factory=list)

    @property
    def size(self) -> int:
        return len(self.members)

    def to_json(self, L: Optional[CableLabeling] = None) -> dict:
        name = (lambda x: L.name(x)) if L else str
        return {
            "a": sorted(name(x) for x in self.a_set),
            "G": sorted(name(x) for x in self.G_set),
            "base": self.base,
            "free": sorted(name(x) for x in self.free_set),
            "size": self.size,
        }


def partition_classes(D: Diagram, n: int, L: Optional[CableLabeling] = None) -> List[ClassDescriptor]:
    """Group all rank <= n-2 spanning subgraphs of G_A(D^n) into classes.

    Raises PartitionError unless each class is exactly base + (any subset of free_set).
    """
    if L is None:
        L = label_cable(D, n)
    graph = AllAGraph(L.diagram)
    groups: Dict[tuple, ClassDescriptor] = {}
    seen = set()
    for H in enumerate_low_rank(L.diagram, n - 2, graph):
        if H in seen:
            raise PartitionError(f"subgraph {H:#x} enumerated twice")
        seen.add(H)
        d = analyse(L, H)
        free = d.free
        base = H & ~_mask(free)
        key = (d.a, d.G, base)
        cd = groups.get(key)
        if cd is None:
            cd = groups[key] = ClassDescriptor(d.a, d.G, base, free)
        cd.members.append(H)
    out = []
    for key in sorted(groups, key=lambda k: (k[2], sorted(k[0]), sorted(k[1]))):
        cd = groups[key]
        fm = sorted(cd.free_set)
        want = set()
        for sub in range(1 << len(fm)):
            want.add(cd.base | _mask(x for j, x in enumerate(fm) if sub >> j & 1))
        if set(cd.members) != want or len(cd.members) != len(want):
            raise PartitionError(
                f"class with base {cd.base:#x} has {len(cd.members)} members, expected {len(want)}")
        cd.members.sort()
        out.append(cd)
    return out


@dataclass
class ClassCheck:
    descriptor: ClassDescriptor
    rho0: int          # v - k + g of the base
    max_deg: Optional[int]
    bound: int
    g_inequality: Optional[bool]   # None when the base has v-k+g > n-2


@dataclass
class DegreeDropReport:
    n: int
    M: int
    bound: int
    dA_star: Optional[int]
    classes: int
    subgraphs: int
    max_class_deg: Optional[int]
    full_sum_checked: bool
    triples: Optional[TripleReport]
    checks: List[ClassCheck] = field(default_factory=list, repr=False)

    @property
    def ok(self) -> bool:
        return self.dA_star is None or self.dA_star <= self.bound

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "M_Dn": self.M,
            "bound": self.bound,
            "dA_star": self.dA_star,
            "gap": None if self.dA_star is None else self.M - self.dA_star,
            "classes": self.classes,
            "subgraphs": self.subgraphs,
            "max_class_deg": self.max_class_deg,
            "full_sum_checked": self.full_sum_checked,
            "triples": None if self.triples is None else self.triples.to_json(),
            "ok": self.ok,
        }


def check_class(L: CableLabeling, cd: ClassDescriptor, graph: AllAGraph) -> ClassCheck:
    """Face increments, the G/genus inequality and the degree bound for one class."""
    Dn = L.diagram
    n = L.n
    s0 = stats(Dn, cd.base, graph)
    rho0 = s0.rank + s0.g
    fm = sorted(cd.free_set)
    total = LaurentPoly()
    for H in cd.members:
        extra = bin(H & ~cd.base).count("1")
        s = stats(Dn, H, graph)
        if s.f != s0.f + extra or s.rank + s.g != rho0:
            raise BoundViolation(
                f"member {H:#x}: f={s.f}, expected {s0.f + extra}; "
                f"v-k+g={s.rank + s.g}, expected {rho0}", cd)
        total = total + contribution_from(Dn.c, s.e, s.f)
    M = Dn.c + 2 * graph.v - 2
    bound = M - 4 * (n - 1)
    deg = total.max_deg()
    if deg is not None and deg > bound:
        raise BoundViolation(f"class with base {cd.base:#x} reaches degree {deg} > {bound}", cd)
    ok_g = None
    if rho0 <= n - 2:
        ok_g = len(cd.G_set) + rho0 >= len(cd.a_set) - 1
        if not ok_g:
            raise BoundViolation(
                f"|G|+v-k+g = {len(cd.G_set) + rho0} < |a|-1 = {len(cd.a_set) - 1}", cd)
    return ClassCheck(cd, rho0, deg, bound, ok_g)


@dataclass
class TripleReport:
    """Outcome of the two-edge genus increment check over a set of subgraphs."""
    checked: int = 0
    held: int = 0
    failures: List[str] = field(default_factory=list)   # first few only

    @property
    def failed(self) -> int:
        return self.checked - self.held

    def to_json(self) -> dict:
        return {"checked": self.checked, "held": self.held, "failed": self.failed,
                "examples": self.failures}


def genus_triples(L: CableLabeling, subgraphs, graph: AllAGraph = None, limit: int = 0,
                       strict: bool = False, keep: int = 5) -> TripleReport:
    """Check that v-k+g grows by exactly one for every admissible (e1, e2, e3) triple.

    e1 in ZOmega_i included, e2 in ZOmega_i and e3 in ZOmega_(i+1) excluded,
    e1 < e2 < e3, and no included cable edge in the windows the hypotheses
    name.  With ``strict`` two further conditions are imposed which the
    stated hypotheses leave out: no included edge outside e^n in
    Omega_0..Omega_(i+1), and for i = 0 (where Omega_0 is shared) no included
    edge of the opposite Omega_1 with number in [e1, e3].
    """
    Dn = L.diagram
    graph = graph or AllAGraph(Dn)
    rep = TripleReport()
    for H in subgraphs:
        base = None
        for side in ("L", "R"):
            for i in range(0, L.n - 1):
                if strict and any(_included(H, x) for r in range(i + 2)
                                  for x in L.region_edges(r) if x not in L.labels):
                    continue
                here = L.edges_in(i, side)
                up = L.edges_in(i + 1, side)
                down = L.edges_in(i - 1, side)
                across = L.edges_in(1, _other(side)) if (strict and i == 0) else []
                for e1 in here:
                    if not _included(H, e1):
                        continue
                    n1 = L.number(e1)
                    for e2 in here:
                        n2 = L.number(e2)
                        if n2 <= n1 or _included(H, e2):
                            continue
                        for e3 in up:
                            n3 = L.number(e3)
                            if n3 <= n2 or _included(H, e3):
                                continue
                            bad = any(_included(H, x) and n1 < L.number(x) < n3
                                      for x in here + down)
                            bad = bad or any(_included(H, x) and (n1 < L.number(x) < n2 or n2 < L.number(x) < n3)
                                             for x in up)
                            bad = bad or any(_included(H, x) and n1 <= L.number(x) <= n3 for x in across)
                            if bad:
                                continue
                            if base is None:
                                st = stats(Dn, H, graph)
                                base = st.rank + st.g
                            s2 = stats(Dn, H | 1 << e2 | 1 << e3, graph)
                            rep.checked += 1
                            if s2.rank + s2.g == base + 1:
                                rep.held += 1
                            elif len(rep.failures) < keep:
                                rep.failures.append(
                                    f"({L.name(e1)},{L.name(e2)},{L.name(e3)}) on {H:#x}: "
                                    f"v-k+g {base} -> {s2.rank + s2.g}")
                            if limit and rep.checked >= limit:
                                return rep
    return rep


def _high_rank_sum(Dn: Diagram, graph: AllAGraph, r: int) -> LaurentPoly:
    """Sum of X_H over subgraphs with v - k > r (all 2^c states, vectorised circle counts)."""
    c = Dn.c
    total = LaurentPoly()
    hist = np.zeros((c + 1, c + 3 + Dn.unknots), dtype=np.int64)
    states = np.arange(1 << c, dtype=np.int64)
    # components via union-find per state is too slow in Python; v - k of a
    # subgraph only depends on its non-loop edges, so group states by them.
    nonloop = [i for i, (a, b) in enumerate(graph.ends) if a != b]
    rank_of = {}
    for m in range(1 << len(nonloop)):
        H = _mask(x for j, x in enumerate(nonloop) if m >> j & 1)
        rank_of[H] = graph.v - graph.components(H)
    nl_mask = _mask(nonloop)
    keys = states & nl_mask
    ranks = np.array([rank_of[int(h)] for h in np.unique(keys)])
    uniq = np.unique(keys)
    rk = ranks[np.searchsorted(uniq, keys)]
    sel = states[rk > r]
    for lo in range(0, len(sel), 1 << 16):
        chunk = sel[lo:lo + (1 << 16)]
        f = circle_counts_batch(Dn, chunk)
        e = np.array([bin(int(x)).count("1") for x in chunk], dtype=np.int64)
        np.add.at(hist, (e, f), 1)
    for e in range(c + 1):
        for f in range(hist.shape[1]):
            if hist[e, f]:
                total = total + contribution_from(c, e, f) * int(hist[e, f])
    return total


def verify_degree_drop(D: Diagram, n: int, full_sum_limit: int = 18,
                       L: Optional[CableLabeling] = None,
                       triples: bool = True) -> DegreeDropReport:
    """Check the class bounds and d*<D^n> <= M(D^n) - 4(n-1).  Raises BoundViolation."""
    if L is None:
        L = label_cable(D, n)
    Dn = L.diagram
    graph = AllAGraph(Dn)
    classes = partition_classes(D, n, L)
    checks = [check_class(L, cd, graph) for cd in classes]
    M = n * n * D.c + 2 * n * sA(D) - 2
    if M != Dn.c + 2 * graph.v - 2:
        raise BoundViolation(f"M(D^n) mismatch: {M} vs {Dn.c + 2 * graph.v - 2}")
    bound = M - 4 * (n - 1)
    full = fast_bracket(Dn)
    dA = full.max_deg()
    if dA is not None and dA > bound:
        raise BoundViolation(f"d*<D^{n}> = {dA} exceeds M(D^{n}) - {4 * (n - 1)} = {bound}")
    checked = False
    if Dn.c <= full_sum_limit:
        low = LaurentPoly()
        for ch in checks:
            for H in ch.descriptor.members:
                s = bin(H).count("1")
                low = low + contribution_from(Dn.c, s, count_circles(Dn, H))
        if low + _high_rank_sum(Dn, graph, n - 2) != full:
            raise BoundViolation("class sums plus high-rank subgraphs do not reproduce <D^n>")
        checked = True
    inst = None
    if triples:
        inst = genus_triples(L, (H for cd in classes for H in cd.members), graph)
    degs = [c.max_deg for c in checks if c.max_deg is not None]
    return DegreeDropReport(n, M, bound, dA, len(classes), sum(cd.size for cd in classes),
                            max(degs) if degs else None, checked, inst, checks)


# table-style rows -------------------------------------------------------------

def _fmt_set(L, xs) -> str:
    if not xs:
        return "{}"
    return "{" + ", ".join(L.name(x) for x in sorted(xs, key=lambda x: (L.number(x), L.name(x)))) + "}"


def _fmt_seq(L, xs) -> str:
    return "{" + ", ".join(L.name(x) for x in xs) + "}"


def _swap(s: str) -> str:
    return s.translate(str.maketrans("LR", "RL"))


def table_row(L: CableLabeling, H: int, graph: AllAGraph = None) -> tuple:
    """(a, loops outside a, b RO1, t RO0, t LO0, b LO1, G, v-k, g) for n = 3.

    Rows whose s_a lies on the L side are reflected so that s_a is on R.
    """
    if L.n != 3:
        raise ValueError("table rows are defined for n = 3")
    graph = graph or AllAGraph(L.diagram)
    d = analyse(L, H)
    s = stats(L.diagram, H, graph)
    if not d.a:
        row = ("{}", _fmt_set(L, d._rest), "{}", "{}", "{}", "{}", "{}", s.rank, s.g)
        return row
    sq = d.seqs
    row = (_fmt_set(L, d.a), _fmt_set(L, d._rest),
           _fmt_seq(L, sq.b[("R", 1)]), _fmt_seq(L, sq.t[("R", 0)]),
           _fmt_seq(L, sq.t[("L", 0)]), _fmt_seq(L, sq.b[("L", 1)]),
           _fmt_set(L, d.G), s.rank, s.g)
    if sq.side == "L":
        r = [_swap(x) if isinstance(x, str) else x for x in row]
        row = (r[0], r[1], r[5], r[4], r[3], r[2], r[6], r[7], r[8])
    return row


def table_rows(D: Diagram, n: int = 3, L: Optional[CableLabeling] = None) -> List[tuple]:
    if L is None:
        L = label_cable(D, n)
    graph = AllAGraph(L.diagram)
    rows = {table_row(L, H, graph) for H in enumerate_low_rank(L.diagram, n - 2, graph)}
    return sorted(rows, key=lambda r: tuple(str(v) for v in r))
