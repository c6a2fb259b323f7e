"""Published class-table rows for the 3-cable of the worked example.

Columns: a(H) | loops outside a(H) | {b^j} R1 | {t^j} R0 | {t^j} L0 | {b^j} L1 | G(H) | v-k | g.
Set-valued columns (a, loops, G) are unordered; the four sequence columns are ordered.
"""

TABLE_1 = """
{} | {1,3,5} | {} | {} | {} | {} | {} | 0 | 0
{} | {1,3,5} | {} | {} | {} | {} | {} | 1 | 0
{1} | {3,5} | {} | {} | {} | {} | {} | 1 | 0
{1} | {3,5} | {} | {1} | {1} | {} | {} | 1 | 1
{3} | {1,5} | {R2} | {} | {} | {} | {} | 1 | 0
{3} | {1,5} | {R2,3} | {3} | {3} | {} | {} | 1 | 1
{5} | {1,3} | {R4} | {} | {} | {} | {} | 1 | 0
{5} | {1,3} | {R4,5} | {5} | {5} | {} | {} | 1 | 1
{1,3} | {5} | {R2} | {} | {} | {} | {R2} | 1 | 0
{1,3} | {5} | {R2,3} | {3} | {3} | {} | {R2} | 1 | 1
{1,3} | {5} | {} | {1} | {1} | {} | {} | 1 | 1
{1,3} | {5} | {} | {1} | {1,L2} | {L2} | {} | 1 | 1
{1,3} | {5} | {} | {1} | {1,L2,3} | {L2,3} | {} | 1 | 2
{1,3} | {5} | {R2} | {1,R2} | {1} | {} | {} | 1 | 1
{1,3} | {5} | {R2} | {1,R2} | {1,L2} | {L2} | {} | 1 | 1
{1,3} | {5} | {R2,3} | {1,R2,3} | {1} | {} | {} | 1 | 2
{1,3} | {5} | {R2,3} | {1,R2,3} | {1,L2,3} | {L2,3} | {} | 1 | 2
{3,5} | {1} | {R2} | {} | {} | {} | {R4} | 1 | 0
{3,5} | {1} | {R2,3} | {3} | {3} | {} | {5} | 1 | 1
{3,5} | {1} | {R2,3} | {3} | {3,L4} | {L4} | {} | 1 | 1
{3,5} | {1} | {R2,3} | {3} | {3,L4,5} | {L4,5} | {} | 1 | 2
{3,5} | {1} | {R2,5} | {5} | {5} | {} | {R4} | 1 | 1
{3,5} | {1} | {R2,3,R4} | {3,R4} | {3} | {} | {} | 1 | 1
{3,5} | {1} | {R2,3,R4} | {3,R4} | {3,L4} | {} | {} | 1 | 1
{3,5} | {1} | {R2,3,R4,5} | {3,R4,5} | {3} | {} | {} | 1 | 1
{3,5} | {1} | {R2,3,R4,5} | {3,R4,5} | {3,L4,5} | {} | {} | 1 | 2
"""

_T2 = [
    ("{}", "{1}", [("{1}", "{}", "{3,5}", 1), ("{1,L2}", "{L2}", "{L4}", 1), ("{1,L4}", "{L4}", "{3}", 1),
                   ("{1,L2,3}", "{L2,3}", "{5}", 2), ("{1,L2,5}", "{L2,5}", "{R4}", 2),
                   ("{1,L4,5}", "{L4,5}", "{3}", 2), ("{1,L2,3,L4}", "{L2,3,L4}", "{}", 2),
                   ("{1,L2,3,L4,5}", "{L2,3,L4,5}", "{}", 3)]),
    ("{R2}", "{1,R2}", [("{1}", "{}", "{R4}", 1), ("{1,L2}", "{L2}", "{R4,L4}", 1),
                        ("{1,L4}", "{L4}", "{R4}", 1)]),
    ("{R4}", "{1,R4}", [("{1}", "{}", "{3}", 1), ("{1,L2}", "{L2}", "{L4}", 1), ("{1,L4}", "{L4}", "{3}", 1),
                        ("{1,L2,3}", "{L2,3}", "{}", 2), ("{1,L2,3,L4}", "{L2,3,L4}", "{}", 2)]),
    ("{R2,3}", "{1,R2,3}", [("{1}", "{}", "{5}", 2), ("{1,L4}", "{L4}", "{}", 2),
                            ("{1,L2,3}", "{L2,3}", "{5}", 2), ("{1,L4,5}", "{L4,5}", "{}", 3),
                            ("{1,L2,3,L4}", "{L2,3,L4}", "{}", 2), ("{1,L2,3,L4,5}", "{L2,3,L4,5}", "{}", 3)]),
    ("{R2,5}", "{1,R2,5}", [("{1}", "{}", "{R4}", 2), ("{1,L2,5}", "{L2,5}", "{L4,R4}", 2),
                            ("{1,L4,5}", "{L4,5}", "{R4}", 2)]),
    ("{R4,5}", "{1,R4,5}", [("{1}", "{}", "{3}", 2), ("{1,L2,3}", "{L2,3}", "{}", 3),
                            ("{1,L2,5}", "{L2,5}", "{}", 2), ("{1,L4,5}", "{L4,5}", "{3}", 2),
                            ("{1,L2,3,L4,5}", "{L2,3,L4,5}", "{}", 3)]),
    ("{R2,3,R4}", "{1,R2,3,R4}", [("{1}", "{}", "{}", 2), ("{1,L4}", "{L4}", "{}", 2),
                                  ("{1,L2,3}", "{L2,3}", "{}", 2), ("{1,L2,3,L4}", "{L2,3,L4}", "{}", 2)]),
    ("{R2,3,R4,5}", "{1,R2,3,R4,5}", [("{1}", "{}", "{}", 3), ("{1,L2,3}", "{L2,3}", "{}", 3),
                                      ("{1,L4,5}", "{L4,5}", "{}", 3),
                                      ("{1,L2,3,L4,5}", "{L2,3,L4,5}", "{}", 3)]),
]

TABLE_2 = "\n".join(
    f"{{1,3,5}} | {{}} | {b} | {t} | {tl} | {bl} | {G} | 1 | {g}"
    for b, t, rows in _T2 for tl, bl, G, g in rows)


def _items(cell: str):
    cell = cell.strip()
    assert cell[0] == "{" and cell[-1] == "}", cell
    body = cell[1:-1].strip()
    return [x.strip() for x in body.split(",")] if body else []


def normalize(row):
    """Map a row (9 strings/ints) to a hashable canonical form."""
    cells = [str(c) for c in row]
    a, rest, b1, t0, tl0, bl1, G = (_items(c) for c in cells[:7])
    return (frozenset(a), frozenset(rest), tuple(b1), tuple(t0), tuple(tl0), tuple(bl1),
            frozenset(G), int(cells[7]), int(cells[8]))


def parse_rows(text: str):
    return [normalize(line.split("|")) for line in text.strip().splitlines() if line.strip()]


def reference_rows():
    return set(parse_rows(TABLE_1)) | set(parse_rows(TABLE_2))
