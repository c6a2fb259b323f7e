"""Oriented link diagrams in PD notation.

Convention (Knot Atlas): ``X[a,b,c,d]`` lists the four arcs at a crossing
counterclockwise, starting from the incoming under-strand.  The under-strand
runs a -> c.  The over-strand joins b and d; the crossing is positive when it
runs d -> b.

Crossing-free unknot components are declared with a ``U<count>`` token in
front of the PD list, e.g. ``U1 PD[]``.
"""
from __future__ import annotations

import json
import re
from typing import Dict, Iterable, List, Optional, Sequence, Tuple


class PDSyntaxError(ValueError):
    pass


class ValidationError(ValueError):
    pass


class InvalidN(ValueError):
    pass


Slot = Tuple[int, int]  # (crossing index, slot 0..3)


class Diagram:
    """Immutable oriented diagram.

    crossings: tuple of 4-tuples of arc labels.  unknots: number of extra
    crossing-free circles.  Orientation and signs are derived in __init__.
    """

    __slots__ = (
        "crossings", "unknots", "arc_count", "signs", "ends", "arc_tail",
        "arc_head", "components", "_face_cache",
    )

    def __init__(self, crossings: Sequence[Sequence[int]], unknots: int = 0):
        self.crossings: Tuple[Tuple[int, int, int, int], ...] = tuple(
            tuple(int(v) for v in x) for x in crossings
        )
        self.unknots = int(unknots)
        self._face_cache = None
        if self.unknots < 0:
            raise ValidationError("negative unknot count")
        if not self.crossings and not self.unknots:
            raise ValidationError("empty diagram (declare unknots with a U<count> header)")
        for x in self.crossings:
            if len(x) != 4:
                raise ValidationError(f"crossing {x} does not have 4 slots")
        self._index_arcs()
        self._orient()
        self._check_planar()

    # construction --------------------------------------------------------
    def _index_arcs(self):
        ends: Dict[int, List[Slot]] = {}
        for ci, x in enumerate(self.crossings):
            for s, a in enumerate(x):
                if a < 1:
                    raise ValidationError(f"arc label {a} is not positive")
                ends.setdefault(a, []).append((ci, s))
        bad = {a: len(v) for a, v in ends.items() if len(v) != 2}
        if bad:
            a = min(bad)
            raise ValidationError(f"arc {a} used {bad[a]} times (must be exactly 2)")
        n = len(ends)
        if n and sorted(ends) != list(range(1, n + 1)):
            raise ValidationError("arc labels must be exactly 1..arc_count")
        self.arc_count = n
        self.ends = {a: tuple(v) for a, v in ends.items()}

    def other_end(self, ci: int, s: int) -> Slot:
        a = self.crossings[ci][s]
        e0, e1 = self.ends[a]
        # a kink arc can join two slots of one crossing
        return e1 if e0 == (ci, s) else e0

    def _orient(self):
        # strands: follow an arc into a crossing and straight through it
        c = len(self.crossings)
        seen = set()
        comps: List[List[Slot]] = []
        for ci in range(c):
            for s in range(4):
                if (ci, s) in seen:
                    continue
                # walk: dart (ci, s) means "we leave crossing ci through slot s"
                walk = []
                d = (ci, s)
                while d not in seen:
                    seen.add(d)
                    walk.append(d)
                    y, t = self.other_end(*d)
                    seen.add((y, t))
                    d = (y, (t + 2) % 4)
                comps.append(walk)
        # each walk is a cyclic list of exit darts; decide its direction
        out_slots = set()
        components = []
        for walk in comps:
            votes = set()
            for (ci, s) in walk:
                y, t = self.other_end(ci, s)
                # forward traversal leaves through s and enters y at t
                if s == 2 or t == 0:
                    votes.add(+1)
                if s == 0 or t == 2:
                    votes.add(-1)
            if votes == {+1, -1}:
                raise ValidationError("inconsistent orientation along a strand")
            if votes:
                forward = votes == {+1}
            else:
                forward = self._numbering_direction(walk)
            if not forward:
                walk = [self.other_end(ci, s) for (ci, s) in reversed(walk)]
            out_slots.update(walk)
            components.append(tuple(self.crossings[ci][s] for ci, s in walk))
        tail: Dict[int, Slot] = {}
        head: Dict[int, Slot] = {}
        for a, (e0, e1) in self.ends.items():
            if e0 in out_slots:
                tail[a], head[a] = e0, e1
            else:
                tail[a], head[a] = e1, e0
        self.arc_tail, self.arc_head = tail, head
        self.components = tuple(components)
        signs = []
        for ci, x in enumerate(self.crossings):
            if (ci, 1) in out_slots and (ci, 3) not in out_slots:
                signs.append(+1)
            elif (ci, 3) in out_slots and (ci, 1) not in out_slots:
                signs.append(-1)
            else:
                raise ValidationError(f"crossing {ci} has an ill-oriented over-strand")
            if (ci, 2) not in out_slots or (ci, 0) in out_slots:
                raise ValidationError(f"crossing {ci} has an ill-oriented under-strand")
        self.signs = tuple(signs)

    def _numbering_direction(self, walk) -> bool:
        # component that only passes over: follow increasing arc labels
        labels = [self.crossings[ci][s] for ci, s in walk]
        if len(labels) < 2:
            return True
        ups = sum(1 for p, q in zip(labels, labels[1:] + labels[:1]) if q == p + 1)
        downs = sum(1 for p, q in zip(labels, labels[1:] + labels[:1]) if p == q + 1)
        return ups >= downs

    def _check_planar(self):
        c = len(self.crossings)
        if not c:
            return
        faces = self.faces()
        # union-find on crossings to split into connected pieces
        parent = list(range(c))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for e0, e1 in self.ends.values():
            parent[find(e0[0])] = find(e1[0])
        nf: Dict[int, int] = {}
        nv: Dict[int, int] = {}
        for ci in range(c):
            nv[find(ci)] = nv.get(find(ci), 0) + 1
        for f in faces:
            r = find(f[0][0])
            nf[r] = nf.get(r, 0) + 1
        for r, v in nv.items():
            if v - 2 * v + nf[r] != 2:
                raise ValidationError("PD code is not planar")

    # derived data ---------------------------------------------------------
    def faces(self) -> List[List[Slot]]:
        """Faces of the projection, as cycles of darts (crossing, slot)."""
        if self._face_cache is None:
            seen = set()
            out = []
            for ci in range(len(self.crossings)):
                for s in range(4):
                    if (ci, s) in seen:
                        continue
                    face = []
                    d = (ci, s)
                    while d not in seen:
                        seen.add(d)
                        face.append(d)
                        y, t = self.other_end(*d)
                        d = (y, (t + 1) % 4)
                    out.append(face)
            self._face_cache = out
        return self._face_cache

    @property
    def c(self) -> int:
        return len(self.crossings)

    @property
    def num_components(self) -> int:
        return len(self.components) + self.unknots

    def is_knot(self) -> bool:
        return self.num_components == 1

    def __eq__(self, other):
        return (isinstance(other, Diagram) and self.crossings == other.crossings
                and self.unknots == other.unknots)

    def __hash__(self):
        return hash((self.crossings, self.unknots))

    def __repr__(self):
        return f"Diagram({render_pd(self)!r})"

    def to_json(self) -> dict:
        return {"crossings": [list(x) for x in self.crossings], "unknots": self.unknots}

    @classmethod
    def from_json(cls, data) -> "Diagram":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(data["crossings"], data.get("unknots", 0))


_X_RE = re.compile(r"X\[([^\[\]]*)\]")


def parse_pd(text: str) -> Diagram:
    s = "".join(text.split())
    unknots = 0
    m = re.match(r"^U(\d+)[;,]?", s)
    if m:
        unknots = int(m.group(1))
        s = s[m.end():]
    if not (s.startswith("PD[") and s.endswith("]")):
        raise PDSyntaxError(f"expected PD[...], got {text!r}")
    body = s[3:-1]
    crossings = []
    pos = 0
    while pos < len(body):
        mx = _X_RE.match(body, pos)
        if not mx:
            raise PDSyntaxError(f"bad crossing near {body[pos:]!r}")
        parts = mx.group(1).split(",")
        if len(parts) != 4 or not all(p.isdigit() for p in parts):
            raise PDSyntaxError(f"crossing X[{mx.group(1)}] needs 4 positive integers")
        crossings.append(tuple(int(p) for p in parts))
        pos = mx.end()
        if pos < len(body):
            if body[pos] != ",":
                raise PDSyntaxError(f"expected ',' near {body[pos:]!r}")
            pos += 1
            if pos == len(body):
                raise PDSyntaxError("trailing comma")
    return Diagram(crossings, unknots)


def render_pd(D: Diagram) -> str:
    body = ",".join("X[%d,%d,%d,%d]" % x for x in D.crossings)
    head = f"U{D.unknots} " if D.unknots else ""
    return f"{head}PD[{body}]"


def writhe(D: Diagram) -> int:
    return sum(D.signs)


def crossing_counts(D: Diagram) -> Tuple[int, int]:
    """(c_plus, c_minus)."""
    p = sum(1 for s in D.signs if s > 0)
    return p, len(D.signs) - p


def mirror(D: Diagram) -> Diagram:
    return switch_crossings(D, range(D.c))


def switch_crossings(D: Diagram, which: Iterable[int]) -> Diagram:
    """Exchange over and under at the given crossings, keeping orientations."""
    which = set(which)
    out = []
    for ci, ((a, b, c, d), sg) in enumerate(zip(D.crossings, D.signs)):
        if ci in which:
            out.append((d, a, b, c) if sg > 0 else (b, c, d, a))
        else:
            out.append((a, b, c, d))
    return Diagram(out, D.unknots)


# nugatory crossings ------------------------------------------------------------

def gauss_words(D: Diagram) -> List[List[int]]:
    """Crossing indices met along each component, in orientation order."""
    words = []
    for comp in D.components:
        w = []
        for a in comp:
            ci, _ = D.arc_head[a]
            w.append(ci)
        words.append(w)
    return words


def nugatory_crossings(D: Diagram) -> List[int]:
    words = gauss_words(D)
    where: Dict[int, List[Tuple[int, int]]] = {}
    for wi, w in enumerate(words):
        for pos, ci in enumerate(w):
            where.setdefault(ci, []).append((wi, pos))
    out = []
    for ci in range(D.c):
        (w0, p0), (w1, p1) = where[ci]
        if w0 != w1:
            continue
        w = words[w0]
        lo, hi = sorted((p0, p1))
        inner = set(range(lo + 1, hi))
        # grow the inside: positions strictly between the two visits, plus any
        # other component reached from it; fail if we reach the outside part
        inside_pos = {(w0, p) for p in inner}
        comps_in = set()
        frontier = [w[p] for p in inner]
        ok = True
        while frontier and ok:
            x = frontier.pop()
            for (wi, p) in where[x]:
                if wi == w0:
                    if (wi, p) not in inside_pos:
                        ok = False
                        break
                elif wi not in comps_in:
                    comps_in.add(wi)
                    frontier.extend(words[wi])
        if ok:
            out.append(ci)
    return out


def is_reduced(D: Diagram) -> bool:
    return not nugatory_crossings(D)


def nugatory_by_faces(D: Diagram) -> List[int]:
    """Face-based criterion: some face meets the crossing at two corners."""
    owner: Dict[Slot, int] = {}
    for fi, face in enumerate(D.faces()):
        for d in face:
            owner[d] = fi
    out = []
    for ci in range(D.c):
        fs = [owner[(ci, s)] for s in range(4)]
        if len(set(fs)) < 4:
            out.append(ci)
    return out


# cabling -------------------------------------------------------------------

class Cable:
    """Result of cabling: the diagram plus a crossing map.

    crossing_map[k] = (original crossing, i, j) where i indexes the copy of
    the under-strand and j the copy of the over-strand, both counted 1..n from
    the left of the strand's direction.
    """

    __slots__ = ("diagram", "n", "crossing_map", "base")

    def __init__(self, diagram, n, crossing_map, base):
        self.diagram = diagram
        self.n = n
        self.crossing_map = crossing_map
        self.base = base

    def crossings_over(self, ci: int) -> List[int]:
        return [k for k, (o, _, _) in enumerate(self.crossing_map) if o == ci]


def cable_with_map(D: Diagram, n: int) -> Cable:
    if not isinstance(n, int) or n < 1:
        raise InvalidN(f"cable order must be a positive integer, got {n!r}")
    if n == 1:
        return Cable(D, 1, [(ci, 1, 1) for ci in range(D.c)], D)
    # grid crossing (ci, col i, row r), rows counted from the incoming side
    # of the under-strand, columns from its left.
    gid: Dict[Tuple[int, int, int], int] = {}
    cmap = []
    for ci in range(D.c):
        for r in range(1, n + 1):
            for i in range(1, n + 1):
                gid[(ci, i, r)] = len(cmap)
                cmap.append((ci, i, 0))  # j filled below
    # over copy j at row r: left of the over direction is toward slot 2
    # when it runs 3 -> 1 (positive), toward slot 0 otherwise
    def over_copy(ci, r):
        return n + 1 - r if D.signs[ci] > 0 else r

    for (ci, i, r), k in gid.items():
        cmap[k] = (ci, i, over_copy(ci, r))
    link: Dict[Slot, Slot] = {}

    def join(p, q):
        link[p] = q
        link[q] = p

    def boundary(ci, s, q):
        if s == 0:
            return (gid[(ci, q, 1)], 0)
        if s == 2:
            return (gid[(ci, q, n)], 2)
        r = n + 1 - q if D.signs[ci] > 0 else q
        if s == 3:
            return (gid[(ci, 1, r)], 3)
        return (gid[(ci, n, r)], 1)

    for ci in range(D.c):
        for r in range(1, n + 1):
            for i in range(1, n + 1):
                k = gid[(ci, i, r)]
                if r < n:
                    join((k, 2), (gid[(ci, i, r + 1)], 0))
                if i < n:
                    join((k, 1), (gid[(ci, i + 1, r)], 3))
    for a, t in D.arc_tail.items():
        h = D.arc_head[a]
        for q in range(1, n + 1):
            join(boundary(t[0], t[1], q), boundary(h[0], h[1], q))
    # outgoing slots in the cable: 2 always, 1 for positive, 3 for negative
    ncross = len(cmap)

    def is_out(k, s):
        if s == 2:
            return True
        if s == 0:
            return False
        sg = D.signs[cmap[k][0]]
        return (s == 1) == (sg > 0)

    labels = [[0] * 4 for _ in range(ncross)]
    arc = 0
    # walk components in a deterministic order, labelling consecutively
    for k in range(ncross):
        for s in (2, 1, 3):
            if not is_out(k, s) or labels[k][s]:
                continue
            d = (k, s)
            while not labels[d[0]][d[1]]:
                arc += 1
                y, t = link[d]
                labels[d[0]][d[1]] = arc
                labels[y][t] = arc
                d = (y, (t + 2) % 4)
    cd = Diagram([tuple(x) for x in labels], D.unknots * n)
    return Cable(cd, n, cmap, D)


def cable(D: Diagram, n: int) -> Diagram:
    return cable_with_map(D, n).diagram
