"""
Command line front end.

Subcommands
-----------
bracket   Kauffman bracket of a diagram (engines: skein, subgraph, fast).
jones     Colored Jones polynomial, degree report and tail.
adequacy  A-/B-adequacy with a witness crossing.
cable     n-cable of a diagram and its combinatorics.
classes   Class partition of low-rank subgraphs of the n-cable.
verify    Degree-drop check d*<D^n> <= M(D^n) - 4(n-1) plus the class checks.
tail      Stable coefficients beta_1..beta_k.
ingest    Load a CSV of PD codes and store brackets/Jones polynomials.
bench     Time the bracket engines.

The <file> argument is a CSV (name,pd_code,notes), a literal PD code, or
"fixtures.csv" for the shipped corpus when no such file exists.  Exit codes:
0 success, 1 a checked statement failed, 2 usage error.

Usage examples
--------------
  joneslab adequacy fixtures.csv --name trefoil
  joneslab jones fixtures.csv --name unknot --color 5
  joneslab verify fixtures.csv --name fig7 --n 3
  joneslab classes fixtures.csv --name fig7 --n 3 --table
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional

from . import __version__
from .bracket import (DEFAULT_FRONTIER_CAP, DEFAULT_NAIVE_LIMIT, ENGINES, FrontierTooWide,
                      TooLarge, bracket, peak_width)
from .cancellation import (BoundViolation, LabelingInconsistent, NotApplicable, PartitionError,
                           WitnessMissing, label_cable, partition_classes, table_rows,
                           verify_degree_drop)
from .diagram import (PDSyntaxError, ValidationError, cable, is_reduced, parse_pd, render_pd,
                      writhe)
from .ingest import (STORE_ENV, DuplicateName, ResultStore, StoreMismatch, TableEntry,
                     generate_knot_diagrams, load_fixtures, load_table)
from .jones import (DegreeMismatch, Settings, StabilityViolation, chi_A, colored_jones,
                    colored_jones_A, degree_report, tail, tail_series)
from .poly import NotDivisible, render, render_q
from .states import is_A_adequate, is_B_adequate, sA

# statements the program checks; any of these means exit 1
FALSIFIED = (BoundViolation, PartitionError, WitnessMissing, LabelingInconsistent,
             StabilityViolation, DegreeMismatch, NotDivisible, StoreMismatch)


class UsageError(Exception):
    pass


def _table(src: str):
    try:
        if os.path.exists(src):
            table = load_table(src)
        elif os.path.basename(src) == "fixtures.csv":
            table = load_fixtures()
        else:
            raise UsageError(f"no such file: {src}")
    except DuplicateName as exc:
        raise UsageError(str(exc))
    for err in table.errors:
        print(f"warning: {err.name} (line {err.line}): {err.message}", file=sys.stderr)
    return table


def _entries(args) -> List[TableEntry]:
    src = args.file
    if src.lstrip().startswith(("PD[", "U")) and not os.path.exists(src):
        try:
            return [TableEntry(args.name or "input", parse_pd(src), "argv")]
        except (PDSyntaxError, ValidationError) as exc:
            raise UsageError(str(exc))
    table = _table(src)
    if args.name:
        try:
            return [table.get(args.name)]
        except KeyError:
            raise UsageError(f"no entry named {args.name!r} (have: {', '.join(table.names())})")
    return list(table)


def _settings(args) -> Settings:
    return Settings(getattr(args, "engine", "fast") or "fast", args.naive_limit, args.frontier_cap)


def _emit(args, obj, text: str):
    if args.json:
        print(json.dumps(obj, sort_keys=True))
    else:
        print(text)


def _map(args, fn, items):
    """Apply fn over items with at most --threads workers; results keep input order."""
    k = max(1, args.threads)
    if k == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=k) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------

def cmd_bracket(args) -> int:
    def one(e):
        return e, bracket(e.pd, args.engine, args.naive_limit, args.frontier_cap)

    for e, p in _map(args, one, _entries(args)):
        _emit(args, {"name": e.name, "engine": args.engine, "bracket": p.to_json(),
                     "max_deg": p.max_deg()},
              f"{e.name}: {render(p)}")
    return 0


def cmd_jones(args) -> int:
    st = _settings(args)
    for e in _entries(args):
        out = {"name": e.name, "color": args.color}
        lines = []
        if args.report in ("poly", "all"):
            J = colored_jones(e.pd, args.color, st)
            out["jones"] = J.to_json()
            lines.append(render_q(J))
        if args.report in ("degrees", "all"):
            rep = degree_report(e.pd, args.color, st)
            out["degrees"] = rep.to_json()
            lines.append(f"d({args.color}) = {rep.d_n}, h_{args.color}(D) = {rep.h_n}, "
                         f"M(D^{args.color - 1}) = {rep.M_Dn}, d* = {rep.dA_star}")
        if args.report in ("tail", "all"):
            count = max(1, args.color - 2)
            rep = tail(e.pd, count, max(args.color, count + 2), st)
            out["tail"] = rep.to_json()
            lines.append(f"betas = {rep.betas} (stable up to {rep.stabilized_up_to})")
        if len(lines) == 1:
            text = lines[0] if args.name else f"{e.name}: {lines[0]}"
        else:
            text = f"{e.name}:\n  " + "\n  ".join(lines)
        _emit(args, out, text)
        if args.store:
            ResultStore(args.store).put(e.name, args.color, st.engine, colored_jones_A(e.pd, args.color, st),
                                        out.get("degrees"))
    return 0


def cmd_adequacy(args) -> int:
    for e in _entries(args):
        a, wa = is_A_adequate(e.pd)
        b, wb = is_B_adequate(e.pd)
        obj = {"name": e.name, "A_adequate": a, "A_witness": wa, "B_adequate": b,
               "B_witness": wb, "reduced": is_reduced(e.pd)}
        text = f"A-adequate: {str(a).lower()}"
        if not a:
            text += f" (loop at crossing {wa})"
        if args.name is None:
            text = f"{e.name}: {text}"
        _emit(args, obj, text)
    return 0


def cmd_cable(args) -> int:
    for e in _entries(args):
        Dn = cable(e.pd, args.n)
        obj = {"name": e.name, "n": args.n, "pd": render_pd(Dn), "crossings": Dn.c,
               "writhe": writhe(Dn), "sA": sA(Dn), "M": Dn.c + 2 * sA(Dn) - 2}
        text = (f"{e.name}^{args.n}: c = {Dn.c}, writhe = {obj['writhe']}, |s_A| = {obj['sA']}, "
                f"M = {obj['M']}\n{obj['pd']}")
        _emit(args, obj, text)
    return 0


def _labeling(args, D):
    return label_cable(D, args.n, reverse=args.reverse, swap_sides=args.swap_sides,
                       he_reading=args.he_reading, k0_reading=args.k0_reading)


def cmd_classes(args) -> int:
    for e in _entries(args):
        L = _labeling(args, e.pd)
        classes = partition_classes(e.pd, args.n, L)
        obj = {"name": e.name, "n": args.n, "labeling": L.to_json(),
               "classes": len(classes), "subgraphs": sum(c.size for c in classes),
               "by_a": {}}
        for cd in classes:
            key = ",".join(sorted((L.name(x) for x in cd.a_set), key=lambda s: (len(s), s))) or "-"
            obj["by_a"][key] = obj["by_a"].get(key, 0) + 1
        lines = [f"{e.name}: {obj['classes']} classes covering {obj['subgraphs']} subgraphs"]
        lines += [f"  a = {{{k}}}: {v} classes" for k, v in sorted(obj["by_a"].items())]
        if args.table:
            rows = table_rows(e.pd, args.n, L)
            obj["rows"] = [list(r) for r in rows]
            lines.append("a | loops | b R1 | t R0 | t L0 | b L1 | G | v-k | g")
            lines += [" | ".join(str(v) for v in r) for r in rows]
        _emit(args, obj, "\n".join(lines))
    return 0


def cmd_verify(args) -> int:
    status = 0
    for e in _entries(args):
        try:
            L = _labeling(args, e.pd)
        except NotApplicable as exc:
            print(f"{e.name}: not applicable ({exc})", file=sys.stderr)
            return 2
        try:
            rep = verify_degree_drop(e.pd, args.n, L=L, triples=not args.no_triples)
        except (BoundViolation, WitnessMissing, PartitionError, LabelingInconsistent) as exc:
            _emit(args, {"name": e.name, "ok": False, "error": f"{type(exc).__name__}: {exc}"},
                  f"{e.name}: FAILED {exc}")
            status = 1
            continue
        obj = rep.to_json()
        obj["name"] = e.name
        gap = rep.M - rep.dA_star if rep.dA_star is not None else None
        text = (f"{e.name}: M(D^{args.n}) - d*<D^{args.n}> = {gap} >= {4 * (args.n - 1)}  "
                f"[{rep.classes} classes, {rep.subgraphs} subgraphs, "
                f"max class degree {rep.max_class_deg} <= {rep.bound}]")
        _emit(args, obj, text)
        if not rep.ok:
            status = 1
    return status


def cmd_tail(args) -> int:
    st = _settings(args)
    for e in _entries(args):
        rep = tail(e.pd, args.count, args.max_color, st)
        obj = rep.to_json()
        obj["name"] = e.name
        obj["JA"] = {str(k): v for k, v in tail_series(rep).items()}
        obj["chi_A"] = chi_A(e.pd)
        _emit(args, obj, f"{e.name}: betas = {rep.betas}, stable up to {rep.stabilized_up_to}, "
                         f"A-adequate = {str(rep.adequate).lower()}")
    return 0


def cmd_ingest(args) -> int:
    table = _table(args.file)
    entries = _entries(args) if args.name else list(table)
    store = ResultStore(args.store) if args.store or os.environ.get(STORE_ENV) else None
    st = _settings(args)

    def one(e):
        p = bracket(e.pd, st.engine, st.naive_limit, st.frontier_cap)
        J = colored_jones_A(e.pd, args.color, st) if args.color else None
        return e, p, J

    results = _map(args, one, entries)
    for e, p, J in results:      # single writer, input order
        if store:
            store.put(e.name, 1, st.engine, p)
            if J is not None:
                store.put(e.name, args.color, st.engine, J)
        _emit(args, {"name": e.name, "crossings": e.pd.c, "bracket": p.to_json()},
              f"{e.name}: c = {e.pd.c}, max_deg <D> = {p.max_deg()}")
    print(f"{len(table)} entries, {len(table.errors)} errors", file=sys.stderr)
    return 0


def cmd_bench(args) -> int:
    rng = random.Random(args.seed)
    if args.file == "random":
        pool = generate_knot_diagrams(args.max_c)
        items = [TableEntry(f"random_{i}", d, "generator") for i, d in
                 enumerate(rng.sample(pool, min(args.samples, len(pool))))]
    else:
        items = _entries(args)
    for e in items:
        row = {"name": e.name, "crossings": e.pd.c, "width": peak_width(e.pd)}
        for eng in ENGINES:
            t0 = time.perf_counter()
            try:
                bracket(e.pd, eng, args.naive_limit, args.frontier_cap)
                row[eng] = round(time.perf_counter() - t0, 4)
            except (TooLarge, FrontierTooWide):
                row[eng] = None
        _emit(args, row, " ".join(f"{k}={v}" for k, v in row.items()))
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("file", help="CSV of PD codes, a literal PD code, or fixtures.csv")
    common.add_argument("--name", help="table entry to use (default: all)")
    common.add_argument("--json", action="store_true", help="one JSON object per line")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--naive-limit", type=int, default=DEFAULT_NAIVE_LIMIT)
    common.add_argument("--frontier-cap", type=int, default=DEFAULT_FRONTIER_CAP)
    common.add_argument("--store", default=os.environ.get(STORE_ENV),
                        help=f"NDJSON result store (default ${STORE_ENV})")
    common.add_argument("--seed", type=int, default=0)

    engine = argparse.ArgumentParser(add_help=False)
    engine.add_argument("--engine", choices=ENGINES, default="fast")

    labels = argparse.ArgumentParser(add_help=False)
    labels.add_argument("--n", type=int, default=3)
    labels.add_argument("--reverse", action="store_true", help="number loops from the other end")
    labels.add_argument("--swap-sides", action="store_true", help="exchange L and R")
    labels.add_argument("--he-reading", choices=("union", "intersection"), default="union")
    labels.add_argument("--k0-reading", choices=("literal", "skip"), default="literal")

    p = argparse.ArgumentParser(prog="joneslab", description=__doc__.split("\n\n")[0].strip())
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("bracket", parents=[common, engine], help="Kauffman bracket")
    s.set_defaults(func=cmd_bracket)

    s = sub.add_parser("jones", parents=[common, engine], help="colored Jones polynomial")
    s.add_argument("--color", type=int, default=2)
    s.add_argument("--report", choices=("poly", "degrees", "tail", "all"), default="poly")
    s.set_defaults(func=cmd_jones)

    s = sub.add_parser("adequacy", parents=[common], help="A-/B-adequacy")
    s.set_defaults(func=cmd_adequacy)

    s = sub.add_parser("cable", parents=[common], help="n-cable")
    s.add_argument("--n", type=int, default=2)
    s.set_defaults(func=cmd_cable)

    s = sub.add_parser("classes", parents=[common, labels], help="class partition of the n-cable")
    s.add_argument("--table", action="store_true", help="print table-style rows (n = 3)")
    s.set_defaults(func=cmd_classes)

    s = sub.add_parser("verify", parents=[common, labels], help="degree-drop check")
    s.add_argument("--no-triples", action="store_true", help="skip the genus-increment triples")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("tail", parents=[common, engine], help="stable tail coefficients")
    s.add_argument("--count", type=int, default=2)
    s.add_argument("--max-color", type=int, default=None)
    s.set_defaults(func=cmd_tail)

    s = sub.add_parser("ingest", parents=[common, engine], help="load a CSV and store results")
    s.add_argument("--color", type=int, default=0, help="also store this color (0: bracket only)")
    s.set_defaults(func=cmd_ingest)

    s = sub.add_parser("bench", parents=[common], help="time the bracket engines")
    s.add_argument("--max-c", type=int, default=6, help="crossings for FILE=random")
    s.add_argument("--samples", type=int, default=5)
    s.set_defaults(func=cmd_bench)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "n", 1) is not None and getattr(args, "n", 1) < 1:
        print("error: --n must be positive", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except FALSIFIED as exc:
        print(f"FAILED: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (UsageError, NotApplicable, TooLarge, FrontierTooWide, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
