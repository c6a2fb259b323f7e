"""Kauffman bracket evaluators.

``skein_bracket`` is the small-diagram oracle; ``fast_bracket`` contracts
crossings one at a time into a boundary state (a Temperley-Lieb style
frontier), which is what makes 27-36 crossing cables tractable.

All evaluators are normalised so that the one-circle diagram has bracket 1.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .diagram import Diagram
from .poly import DELTA, LaurentPoly, ONE, exact_div

DEFAULT_NAIVE_LIMIT = 22
DEFAULT_FRONTIER_CAP = 20


class TooLarge(ValueError):
    pass


class FrontierTooWide(ValueError):
    def __init__(self, width, cap):
        super().__init__(f"frontier width {width} exceeds cap {cap}")
        self.width = width
        self.cap = cap


def bivariate_to_poly(counts, c: int, offset_loops: int = 0) -> LaurentPoly:
    """Sum counts[b, l] * A^(c-2b) * delta^(l+offset_loops).

    Works in t = A^2: row l is R_l(t) = sum_b counts[b, l] t^-b and the sum
    is evaluated by Horner's rule in delta = -t - 1/t.
    """
    counts = np.asarray(counts)
    B, L = counts.shape
    small = counts.dtype != object and c + L + offset_loops < 56
    dtype = np.int64 if small else object
    cols = counts.astype(dtype)[::-1, :]        # index B-1-b holds t^-b
    acc = np.zeros(B, dtype=dtype)
    delta = np.array([-1, 0, -1], dtype=dtype)
    k = 0
    for l in range(L - 1, -1, -1):
        if k or acc.any():
            acc = np.convolve(acc, delta)
            k += 1
            acc[k:k + B] += cols[:, l]
        else:
            acc = acc + cols[:, l]
    for _ in range(offset_loops):
        acc = np.convolve(acc, delta)
        k += 1
    lo = -(B - 1) - k                            # t-exponent of acc[0]
    nz = np.nonzero(acc)[0]
    return LaurentPoly._raw({c + 2 * (lo + int(i)): int(acc[i]) for i in nz})


# skein recursion ------------------------------------------------------------

def _canon(crossings: Tuple[Tuple[int, ...], ...]):
    relabel: Dict[int, int] = {}
    out = []
    for x in crossings:
        row = []
        for a in x:
            if a not in relabel:
                relabel[a] = len(relabel) + 1
            row.append(relabel[a])
        out.append(tuple(row))
    return tuple(out)


def _splice(crossings, i, pairs):
    x = crossings[i]
    rest = crossings[:i] + crossings[i + 1:]
    parent: Dict[int, int] = {}

    def find(a):
        while parent.get(a, a) != a:
            a = parent[a]
        return a

    for s, t in pairs:
        ra, rb = find(x[s]), find(x[t])
        if ra != rb:
            parent[ra] = rb
    # classes with no surviving endpoint are closed loops
    live = {find(a) for y in rest for a in y}
    loops = len({find(a) for a in x} - live)
    new = tuple(tuple(find(a) for a in y) for y in rest)
    return new, loops


@lru_cache(maxsize=200_000)
def _skein_unreduced(crossings) -> LaurentPoly:
    # unreduced bracket of the crossing part (empty diagram = 1); crossings canonical
    if not crossings:
        return ONE
    total = LaurentPoly()
    for pairs, w in ((((0, 1), (2, 3)), 1), (((1, 2), (3, 0)), -1)):
        new, loops = _splice(crossings, 0, pairs)
        sub = _skein_unreduced(_canon(new))
        if loops:
            sub = sub * DELTA ** loops
        total = total + sub.shift(w)
    return total


def skein_bracket(D: Diagram, naive_limit: int = DEFAULT_NAIVE_LIMIT) -> LaurentPoly:
    if D.c > naive_limit:
        raise TooLarge(f"{D.c} crossings exceeds the naive limit {naive_limit}")
    u = _skein_unreduced(_canon(D.crossings)) * DELTA ** D.unknots
    return exact_div(u, DELTA)


# frontier contraction -------------------------------------------------------

def _frontier_widths(D: Diagram, order: Sequence[int]) -> List[int]:
    open_: set = set()
    widths = []
    for ci in order:
        for a in D.crossings[ci]:
            if a in open_:
                open_.remove(a)
            else:
                open_.add(a)
        widths.append(len(open_))
    return widths


def _greedy_from(D: Diagram, start: int) -> List[int]:
    c = D.c
    done = [False] * c
    order = [start]
    done[start] = True
    open_ = set()
    for a in D.crossings[start]:
        open_ ^= {a}
    for _ in range(c - 1):
        best, best_key = -1, None
        for ci in range(c):
            if done[ci]:
                continue
            labels = D.crossings[ci]
            shared = sum(1 for a in labels if a in open_)
            if shared == 0 and best_key is not None:
                continue
            # most shared arcs first, then the smallest resulting frontier
            key = (-shared, ci)
            if best_key is None or key < best_key:
                best, best_key = ci, key
        order.append(best)
        done[best] = True
        for a in D.crossings[best]:
            open_ ^= {a}
    return order


def choose_order(D: Diagram) -> List[int]:
    """Greedy crossing order; the start crossing minimising peak width wins."""
    if D.c == 0:
        return []
    best = None
    for s in range(D.c):
        order = _greedy_from(D, s)
        peak = max(_frontier_widths(D, order))
        key = (peak, sum(_frontier_widths(D, order)), s)
        if best is None or key < best[0]:
            best = (key, order)
    return best[1]


def peak_width(D: Diagram, order=None) -> int:
    if D.c == 0:
        return 0
    return max(_frontier_widths(D, choose_order(D) if order is None else order))


_RES = (((0, 1), (2, 3)), ((1, 2), (3, 0)))  # A then B


@lru_cache(maxsize=1 << 16)
def _transition(width, matching, pattern):
    """Apply one crossing to one matching, in positional form.

    width: number of open endpoints; matching: tuple of partner indices;
    pattern[s] is ("f", i) when slot s closes frontier position i, ("k", t)
    when slots s and t are joined by a kink arc (t < s), else ("n", s).
    Returns, for the A and B resolutions, (list of new endpoint pairs as
    ("f", i)/("n", s) tokens, number of closed loops).  Pairs not touching the
    crossing are left to the caller.
    """
    touched = {p[1] for p in pattern if p[0] == "f"}
    # edges shared by both resolutions: arc links and matching links
    base = []
    for s, p in enumerate(pattern):
        if p[0] == "f":
            base.append((("s", s), ("f", p[1])))
        elif p[0] == "k":
            base.append((("s", s), ("s", p[1])))
    for i in touched:
        j = matching[i]
        if j not in touched or i < j:
            base.append((("f", i), ("f", j)))
    out = []
    for pairs in _RES:
        edges = base + [(("s", s), ("s", t)) for s, t in pairs]
        adj: Dict[tuple, list] = {}
        for k, (u, v) in enumerate(edges):
            adj.setdefault(u, []).append((v, k))
            adj.setdefault(v, []).append((u, k))
        used = set()
        new_pairs = []

        def token(u):
            return ("n", u[1]) if u[0] == "s" else u

        for u, nb in adj.items():
            if len(nb) != 1 or nb[0][1] in used:
                continue
            cur, prev_edge = u, None
            while True:
                step = [(v, k) for v, k in adj[cur] if k != prev_edge]
                if not step:
                    break
                v, k = step[0]
                used.add(k)
                cur, prev_edge = v, k
            new_pairs.append((token(u), token(cur)))
        # remaining edges form closed cycles
        loops = 0
        for k0 in range(len(edges)):
            if k0 in used:
                continue
            loops += 1
            start = edges[k0][0]
            cur, prev_edge = start, None
            while True:
                v, k = next((v, k) for v, k in adj[cur] if k != prev_edge and k not in used)
                used.add(k)
                cur, prev_edge = v, k
                if cur == start:
                    break
        out.append((tuple(new_pairs), loops))
    return tuple(out)


class TangleState:
    """Boundary labels plus amplitude per matching.

    Amplitudes are stored as a 3-d int64 array counts[m, b, l]: number of
    partial states with matching m, b B-smoothings and l closed loops.  The
    counts are nonnegative and bounded by 2^c, so int64 is exact for c < 63;
    larger diagrams use object arrays of Python ints.
    """

    def __init__(self, frontier, matchings, counts, done):
        self.frontier = frontier
        self.matchings = matchings  # list of tuples of partner indices
        self.counts = counts
        self.done = done

    @property
    def boundary(self):
        return self.frontier

    def amplitude(self) -> Dict[tuple, LaurentPoly]:
        out = {}
        for mi, m in enumerate(self.matchings):
            out[m] = bivariate_to_poly(self.counts[mi], self.done)
        return out


def _absorb(state: TangleState, x: Tuple[int, int, int, int]) -> TangleState:
    frontier = state.frontier
    fset = set(frontier)
    closing = {a for a in x if a in fset}
    counts_here: Dict[int, int] = {}
    for a in x:
        counts_here[a] = counts_here.get(a, 0) + 1
    new_labels = {a for a, k in counts_here.items() if k == 1 and a not in fset}
    new_frontier = tuple([a for a in frontier if a not in closing] +
                         [a for a in x if a in new_labels])
    npos = {l: i for i, l in enumerate(new_frontier)}
    fpos = {l: i for i, l in enumerate(frontier)}
    pattern = []
    first_slot: Dict[int, int] = {}
    for s, a in enumerate(x):
        if a in closing:
            pattern.append(("f", fpos[a]))
        elif a in first_slot:
            pattern.append(("k", first_slot[a]))
        else:
            first_slot[a] = s
            pattern.append(("n", s))
    pattern = tuple(pattern)
    touched_idx = {fpos[a] for a in closing}
    # new-frontier index of each token
    where = {("f", i): npos.get(a) for i, a in enumerate(frontier)}
    where.update({("n", s): npos.get(a) for s, a in enumerate(x)})
    carry = [(npos[frontier[i]], i) for i in range(len(frontier)) if i not in touched_idx]
    index: Dict[tuple, int] = {}
    new_matchings = []
    groups: Dict[Tuple[int, int], Tuple[list, list]] = {}
    for mi, m in enumerate(state.matchings):
        res = _transition(len(frontier), m, pattern)
        for r, (pairs, loops) in enumerate(res):
            # untouched pairs carry over
            partner = [0] * len(new_frontier)
            for ni, i in carry:
                j = m[i]
                if j not in touched_idx:
                    partner[ni] = npos[frontier[j]]
            for a, b in pairs:
                ia, ib = where[a], where[b]
                partner[ia] = ib
                partner[ib] = ia
            key = tuple(partner)
            ni = index.get(key)
            if ni is None:
                ni = index[key] = len(new_matchings)
                new_matchings.append(key)
            rows, cols = groups.setdefault((r, loops), ([], []))
            rows.append(ni)
            cols.append(mi)
    old = state.counts
    M, B, L = old.shape
    max_dl = max((dl for _, dl in groups), default=0)
    new = np.zeros((len(new_matchings), B + 1, L + max_dl), dtype=old.dtype)
    flat = old.reshape(M, B * L)
    for (db, dl), (rows, cols) in groups.items():
        rows = np.asarray(rows)
        cols = np.asarray(cols)
        if len(rows) == 1:
            new[rows[0], db:db + B, dl:dl + L] += old[cols[0]]
            continue
        order = np.argsort(rows, kind="stable")
        rows, cols = rows[order], cols[order]
        starts = np.flatnonzero(np.r_[True, rows[1:] != rows[:-1]])
        summed = np.add.reduceat(old[cols], starts, axis=0)
        new[rows[starts], db:db + B, dl:dl + L] += summed
    return TangleState(new_frontier, new_matchings, new, state.done + 1)


def fast_bracket(D: Diagram, frontier_cap: int = DEFAULT_FRONTIER_CAP, order=None,
                 unreduced: bool = False) -> LaurentPoly:
    if order is None:
        order = choose_order(D)
    widths = _frontier_widths(D, order)
    if widths and max(widths) > frontier_cap:
        raise FrontierTooWide(max(widths), frontier_cap)
    # counts are bounded by 2^c; past 62 crossings fall back to Python ints
    dtype = np.int64 if D.c < 63 else object
    st = TangleState((), [()], np.ones((1, 1, 1), dtype=dtype), 0)
    for ci in order:
        st = _absorb(st, D.crossings[ci])
    assert st.frontier == () and len(st.matchings) == 1
    u = bivariate_to_poly(st.counts[0], D.c, offset_loops=D.unknots)
    return u if unreduced else exact_div(u, DELTA)


ENGINES = ("skein", "subgraph", "fast")


def bracket(D: Diagram, engine: str = "fast", naive_limit: int = DEFAULT_NAIVE_LIMIT,
            frontier_cap: int = DEFAULT_FRONTIER_CAP) -> LaurentPoly:
    if engine == "skein":
        return skein_bracket(D, naive_limit)
    if engine == "subgraph":
        from .ribbon import subgraph_bracket
        return subgraph_bracket(D, naive_limit)
    if engine == "fast":
        return fast_bracket(D, frontier_cap)
    raise ValueError(f"unknown engine {engine!r}")


def unreduced_bracket(D: Diagram, frontier_cap: int = DEFAULT_FRONTIER_CAP) -> LaurentPoly:
    """delta * <D>, the normalisation with the empty diagram equal to 1."""
    return fast_bracket(D, frontier_cap, unreduced=True)
