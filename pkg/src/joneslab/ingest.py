"""Knot tables: CSV loading, small-diagram search, and a JSON-lines result store.

CSV columns are ``name,pd_code,notes``.  The result store is a newline
delimited JSON file; its path comes from the ``--store`` flag or the
``JONESLAB_STORE`` environment variable.
"""
from __future__ import annotations

import csv
import datetime as _dt
import io
import json
import os
from dataclasses import dataclass, field
from importlib import resources
from itertools import product

import numpy as np
from typing import Dict, Iterator, List, Optional, Tuple

from . import __version__
from .diagram import (Diagram, PDSyntaxError, ValidationError, cable, is_reduced, parse_pd,
                      switch_crossings)
from .poly import LaurentPoly
from .states import is_A_adequate

STORE_ENV = "JONESLAB_STORE"


class DuplicateName(ValueError):
    pass


class StoreMismatch(AssertionError):
    pass


@dataclass
class TableEntry:
    name: str
    pd: Diagram
    provenance: str = ""
    notes: str = ""


@dataclass
class RowError:
    line: int
    name: str
    message: str


@dataclass
class Table:
    entries: List[TableEntry]
    errors: List[RowError] = field(default_factory=list)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def get(self, name: str) -> TableEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def names(self) -> List[str]:
        return [e.name for e in self.entries]


def _read_rows(text: str, source: str) -> Table:
    entries: List[TableEntry] = []
    errors: List[RowError] = []
    names = set()
    reader = csv.DictReader(io.StringIO(text))
    missing = {"name", "pd_code"} - set(reader.fieldnames or [])
    if missing:
        raise ValueError(f"{source}: missing CSV columns {sorted(missing)}")
    for row in reader:
        line = reader.line_num
        name = (row.get("name") or "").strip()
        if not name or name.startswith("#"):
            continue
        if name in names:
            raise DuplicateName(f"{source}:{line}: duplicate name {name!r}")
        names.add(name)
        try:
            D = parse_pd(row["pd_code"])
        except (PDSyntaxError, ValidationError) as exc:
            errors.append(RowError(line, name, str(exc)))
            continue
        entries.append(TableEntry(name, D, source, (row.get("notes") or "").strip()))
    return Table(entries, errors)


def load_table(path) -> Table:
    with open(path, newline="") as fh:
        return _read_rows(fh.read(), os.fspath(path))


def load_fixtures() -> Table:
    text = resources.files("joneslab").joinpath("data/fixtures.csv").read_text()
    return _read_rows(text, "fixtures.csv")


def fixture(name: str) -> Diagram:
    return load_fixtures().get(name).pd


# small diagram search --------------------------------------------------------

def _chord_words(c: int) -> Iterator[Tuple[int, ...]]:
    """Double-occurrence words on 0..c-1 with labels introduced in order."""
    word = [-1] * (2 * c)

    def rec(pos, nxt, open_):
        if pos == 2 * c:
            yield tuple(word)
            return
        if word[pos] != -1:
            yield from rec(pos + 1, nxt, open_)
            return
        # start a new chord at pos, closing it at any later free position
        if nxt < c:
            for q in range(pos + 1, 2 * c):
                if word[q] == -1:
                    word[pos] = word[q] = nxt
                    yield from rec(pos + 1, nxt + 1, open_)
                    word[pos] = word[q] = -1

    yield from rec(0, 0, 0)


def _shadow_rotation(word, eps):
    """ccw dart order per crossing: entries are ('i'|'o', passage 0|1)."""
    rot = []
    for x in range(len(word) // 2):
        if eps[x]:
            rot.append((("i", 0), ("o", 1), ("o", 0), ("i", 1)))
        else:
            rot.append((("i", 0), ("i", 1), ("o", 0), ("o", 1)))
    return rot


def _is_planar(word, eps) -> bool:
    n2 = len(word)
    c = n2 // 2
    occ: Dict[int, List[int]] = {}
    for p, x in enumerate(word):
        occ.setdefault(x, []).append(p)
    rot = _shadow_rotation(word, eps)
    idx = [{d: j for j, d in enumerate(r)} for r in rot]

    def passage(p):
        return 0 if occ[word[p]][0] == p else 1

    # alpha: out-dart of passage at p joins in-dart of passage at p+1
    alpha = {}
    for p in range(n2):
        q = (p + 1) % n2
        a = (word[p], idx[word[p]][("o", passage(p))])
        b = (word[q], idx[word[q]][("i", passage(q))])
        alpha[a] = b
        alpha[b] = a
    seen = set()
    faces = 0
    for x in range(c):
        for j in range(4):
            if (x, j) in seen:
                continue
            faces += 1
            d = (x, j)
            while d not in seen:
                seen.add(d)
                y, t = alpha[d]
                d = (y, (t + 1) % 4)
    return faces == c + 2


def _pd_from(word, eps, under) -> Diagram:
    n2 = len(word)
    c = n2 // 2
    occ: Dict[int, List[int]] = {}
    for p, x in enumerate(word):
        occ.setdefault(x, []).append(p)
    rot = _shadow_rotation(word, eps)
    crossings = []
    for x in range(c):
        p = occ[x]
        label = {("i", k): (p[k] - 1) % n2 + 1 for k in (0, 1)}
        label.update({("o", k): p[k] + 1 for k in (0, 1)})
        r = list(rot[x])
        start = r.index(("i", under[x]))
        r = r[start:] + r[:start]
        crossings.append(tuple(label[d] for d in r))
    return Diagram(crossings)


def signed_gauss_key(D: Diagram) -> tuple:
    """Canonical signed Gauss code of a knot diagram (rotation, reversal, relabel)."""
    (comp,) = D.components
    seq = []
    for a in comp:
        ci, s = D.arc_head[a]
        seq.append((ci, "U" if s == 0 else "O", D.signs[ci]))
    return _min_rotation(seq)


def _shadow_key(word, eps) -> tuple:
    """Canonical key of a shadow: per passage, the label and whether the other
    strand crosses from right to left.  Minimised over base point and
    direction; a reflection of the sphere gives a different key."""
    seen_first = set()
    seq = []
    for x in word:
        first = x not in seen_first
        seen_first.add(x)
        t = 1 if eps[x] == 0 else -1
        seq.append((x, t if first else -t))
    return _min_rotation(seq)


def _planar_eps(word) -> List[tuple]:
    """All rotation choices eps making the shadow of ``word`` planar.

    Vectorised over the 2^c choices: the face permutation is traced with
    pointer doubling and faces are counted as orbit minima.
    """
    n2 = len(word)
    c = n2 // 2
    E = 1 << c
    eps = (np.arange(E)[:, None] >> np.arange(c)[None, :]) & 1  # (E, c)
    first = {}
    passage = []
    for p, x in enumerate(word):
        passage.append(0 if x not in first else 1)
        first.setdefault(x, p)
    # position of a dart inside its crossing's ccw list; only passage 1 moves
    def pos(kind, k, x):
        if k == 0:
            return np.full(E, 0 if kind == "i" else 2)
        e = eps[:, x]
        return np.where(e == 0, 1 if kind == "i" else 3, 3 if kind == "i" else 1)

    alpha = np.empty((E, 4 * c), dtype=np.int64)
    for p in range(n2):
        q = (p + 1) % n2
        a = 4 * word[p] + pos("o", passage[p], word[p])
        b = 4 * word[q] + pos("i", passage[q], word[q])
        rows = np.arange(E)
        alpha[rows, a] = b
        alpha[rows, b] = a
    phi = 4 * (alpha // 4) + (alpha % 4 + 1) % 4
    m = np.broadcast_to(np.arange(4 * c), phi.shape).copy()
    f = phi
    steps = 1
    while steps < 4 * c:
        m = np.minimum(m, np.take_along_axis(m, f, axis=1))
        f = np.take_along_axis(f, f, axis=1)
        steps *= 2
    faces = (m == np.arange(4 * c)[None, :]).sum(axis=1)
    return [tuple(int(v) for v in eps[i]) for i in np.nonzero(faces == c + 2)[0]]


def planar_shadows(c: int) -> List[Tuple[tuple, tuple]]:
    """One representative per shadow on the oriented sphere."""
    out = []
    seen = set()
    for word in _chord_words(c):
        for eps in _planar_eps(word):
            key = _shadow_key(word, eps)
            if key in seen:
                continue
            seen.add(key)
            out.append((word, eps))
    return out


def _signed_key(word, eps, under) -> tuple:
    # sign is positive when the over-strand crosses the under-strand from
    # its left to its right
    seen_first = set()
    seq = []
    for x in word:
        k = 1 if x in seen_first else 0
        seen_first.add(x)
        t0 = 1 if eps[x] == 0 else -1
        t_under = t0 if under[x] == 0 else -t0
        seq.append((x, "U" if under[x] == k else "O", -t_under))
    return _min_rotation(seq)


def _min_rotation(seq) -> tuple:
    n = len(seq)
    if not n:
        return ()
    # every key starts with label 0, so only starts carrying the smallest
    # payload can win; candidates stop as soon as they exceed the best key
    payload = [tuple(item[1:]) for item in seq]
    head = min(payload)
    best = None
    for base, pay in ((seq, payload), (seq[::-1], payload[::-1])):
        for sh in range(n):
            if pay[sh] != head:
                continue
            relabel: Dict[int, int] = {}
            key = []
            tie = best is not None
            for j in range(n):
                k = (sh + j) % n
                x = base[k][0]
                if x not in relabel:
                    relabel[x] = len(relabel)
                item = (relabel[x],) + pay[k]
                if tie:
                    if item > best[j]:
                        break
                    if item < best[j]:
                        tie = False
                key.append(item)
            else:
                if best is None or tuple(key) < best:
                    best = tuple(key)
    return best


def generate_knot_diagrams(max_c: int, min_c: int = 1) -> List[Diagram]:
    """All one-component diagrams with min_c..max_c crossings, up to relabelling,
    orientation reversal and choice of base point.  Deterministic order."""
    out: List[Diagram] = []
    for c in range(min_c, max_c + 1):
        for word, eps in planar_shadows(c):
            seen = set()
            for under in product((0, 1), repeat=c):
                key = _signed_key(word, eps, under)
                if key in seen:
                    continue
                seen.add(key)
                out.append(_pd_from(word, eps, under))
    return out


def random_corpus(rng, count: int, max_c: int = 12) -> List[Diagram]:
    """Diagrams with at most max_c crossings and random crossing changes.

    Bases are generator knots (3 to 5 crossings), 2-cables of the small
    ones and the shipped fixtures; each draw switches a random subset of
    the base's crossings.  rng is a random.Random.
    """
    bases = [D for D in generate_knot_diagrams(min(max_c, 5), 3)]
    bases += [cable(D, 2) for D in generate_knot_diagrams(min(3, max_c // 4))]
    bases += [e.pd for e in load_fixtures() if 0 < e.pd.c <= max_c]
    by_c: Dict[int, List[Diagram]] = {}
    for D in bases:
        if D.c <= max_c:
            by_c.setdefault(D.c, []).append(D)
    sizes = sorted(by_c)
    out = []
    for _ in range(count):
        # pick the crossing number first so large diagrams are not swamped
        D = rng.choice(by_c[rng.choice(sizes)])
        flips = [ci for ci in range(D.c) if rng.random() < 0.5]
        out.append(switch_crossings(D, flips))
    return out


def kinked_clasp() -> Diagram:
    """Seed candidate for a reduced, non-A-adequate diagram with few crossings.

    A clasp whose third crossing folds back over the first strand; its
    all-A state has one edge with both ends on the same circle.
    """
    return parse_pd("PD[X[6,3,1,4],X[1,5,2,4],X[2,5,3,6]]")


def search_small_nonadequate(max_c: int) -> List[TableEntry]:
    if max_c > 6:
        raise ValueError("search is limited to max_c <= 6")
    found = []
    for D in generate_knot_diagrams(max_c):
        if is_reduced(D) and not is_A_adequate(D)[0]:
            found.append(TableEntry(f"search_c{D.c}_{len(found)}", D, "search"))
    return found


# result store ---------------------------------------------------------------

class ResultStore:
    """Append-only NDJSON records; recomputations must agree exactly."""

    def __init__(self, path: Optional[str] = None):
        self.path = path or os.environ.get(STORE_ENV)
        if not self.path:
            raise ValueError(f"no store path (pass one or set {STORE_ENV})")

    def records(self) -> List[dict]:
        if not os.path.exists(self.path):
            return []
        with open(self.path) as fh:
            return [json.loads(line) for line in fh if line.strip()]

    def lookup(self, name: str, color: int, engine: str) -> Optional[dict]:
        for r in self.records():
            if r["name"] == name and r["color"] == color and r["engine"] == engine:
                return r
        return None

    def put(self, name: str, color: int, engine: str, poly: LaurentPoly,
            report: Optional[dict] = None) -> dict:
        old = self.lookup(name, color, engine)
        if old is not None:
            if LaurentPoly.from_json(old["polynomial"]) != poly:
                raise StoreMismatch(f"{name} color {color} ({engine}) disagrees with stored value")
            return old
        rec = {
            "name": name,
            "color": color,
            "engine": engine,
            "polynomial": poly.to_json(),
            "report": report,
            "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(),
            "version": __version__,
        }
        with open(self.path, "a") as fh:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")
        return rec

    def get_poly(self, name: str, color: int, engine: str) -> Optional[LaurentPoly]:
        r = self.lookup(name, color, engine)
        return None if r is None else LaurentPoly.from_json(r["polynomial"])
