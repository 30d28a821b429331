"""Command-line front end.

    braidclass groups list
    braidclass classify center S3 --json
    braidclass classify gt A5 --subgroup order:12
    braidclass gaugings Q8

Exit status: 0 on success, 2 on invalid input, 3 when an enumeration bound
is exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
import time

from . import __version__
from .cache import DiskCache
from .catalog import CATALOG, parse_cycles, parse_group
from .center import enumerate_subcategory_triples, fpdim_triple, simple_objects_of_triple
from .chartab import CHARTAB_BOUND, character_table, set_disk_cache
from .classify import (CENTER_BOUND, classify_center, classify_group_theoretical,
                       classify_pointed, classify_rep, count_gaugings,
                       invertibles_of_center)
from .errors import BoundExceeded, BraidClassError, InvalidSubgroup, ParseError
from .groups import (GOURSAT_BOUND, FiniteGroup, Subgroup, all_subgroups,
                     generate_subgroup, goursat_subgroups)
from .pairings import TwoCocycle, load_cocycle

EXIT_OK, EXIT_INVALID, EXIT_BOUND = 0, 2, 3


# -- subgroup specifications -------------------------------------------------

def parse_subgroup(G: FiniteGroup, spec: str) -> Subgroup:
    """``whole``, ``trivial``, ``order:k`` (first subgroup of order k in
    canonical order), ``index:i`` (i-th subgroup), ``gens:a,b`` (generated
    by element indices), ``cycles:(1 2 3);(1 2)`` (generated by permutations,
    for permutation-built groups) or a bare list ``0,3,4`` of elements."""
    spec = spec.strip()
    kind, _, rest = spec.partition(":")
    try:
        if spec == "whole":
            return G.whole()
        if spec == "trivial":
            return G.trivial()
        if kind == "order":
            k = int(rest)
            for S in all_subgroups(G):
                if S.order == k:
                    return S
            raise InvalidSubgroup(f"no subgroup of order {k}")
        if kind == "index":
            subs = all_subgroups(G)
            i = int(rest)
            if not 0 <= i < len(subs):
                raise InvalidSubgroup(f"subgroup index {i} out of range 0..{len(subs) - 1}")
            return subs[i]
        if kind == "gens":
            return generate_subgroup(G, [G.check_element(int(x)) for x in rest.split(",") if x])
        if kind == "cycles":
            if G.names is None or not isinstance(G.names[0], tuple):
                raise ParseError("cycle notation needs a permutation group")
            lookup = {p: i for i, p in enumerate(G.names)}
            gens = []
            for text in rest.split(";"):
                perm = parse_cycles(text, len(G.names[0]))
                if perm not in lookup:
                    raise InvalidSubgroup(f"{text} is not an element of {G.label}")
                gens.append(lookup[perm])
            return generate_subgroup(G, gens)
        return Subgroup(G, [G.check_element(int(x)) for x in spec.split(",") if x])
    except ValueError as exc:
        if isinstance(exc, BraidClassError):
            raise
        raise ParseError(f"bad subgroup spec {spec!r}: {exc}") from exc


# -- commands ------------------------------------------------------------------

def _report_center(args, G):
    return classify_center(G, bound=args.bound or CENTER_BOUND).to_json()


def _report_rep(args, G):
    return classify_rep(G).to_json()


def _report_pointed(args, G):
    return classify_pointed(G).to_json()


def _report_gt(args, G):
    H = parse_subgroup(G, args.subgroup)
    mu = load_cocycle(args.cocycle, H)[0] if args.cocycle else TwoCocycle.zero(H)
    return classify_group_theoretical(G, H, mu).to_json()


def _report_subcats(args, G):
    bound = args.bound or CHARTAB_BOUND
    rows = []
    for t in enumerate_subcategory_triples(G):
        rows.append({"L": list(t.L.elements), "M": list(t.M.elements),
                     "B": t.B.matrix_strings(), "fpdim": str(fpdim_triple(t)),
                     "simples": len(simple_objects_of_triple(t, bound))})
    return {"input": _gin(G), "count": len(rows), "triples": rows}


def _report_gaugings(args, G):
    info = invertibles_of_center(G)
    return {"input": _gin(G), "gaugings": count_gaugings(G),
            "invertibles": info.invertible_count,
            "grading_group": list(info.divisors)}


def _report_chartab(args, G):
    return {"input": _gin(G), **character_table(G, args.bound or CHARTAB_BOUND).to_json()}


def _report_goursat(args, G, H):
    subs = goursat_subgroups(G, H, args.bound or GOURSAT_BOUND)
    by_order: dict[int, int] = {}
    for S in subs:
        by_order[S.order] = by_order.get(S.order, 0) + 1
    return {"input": {"left": _gin(G), "right": _gin(H)}, "count": len(subs),
            "by_order": {str(k): v for k, v in sorted(by_order.items())}}


def _gin(G: FiniteGroup) -> dict:
    return {"group": G.label, "order": G.order, "table_hash": G.table_hash}


def _render_table(report: dict) -> str:
    """Human-readable summary; no stability guarantee."""
    lines = []
    inp = report.get("input", {})
    if "group" in inp:
        lines.append(f"group {inp['group']} (order {inp['order']})")
    if "braidings" in report:
        lines.append(f"braidings: {report['count']}")
        for i, b in enumerate(report["braidings"]):
            tag = f"  [{b['label']}]" if "label" in b else ""
            lines.append(f"  {i:4d}  |L|={len(b['L'])} |M|={len(b['M'])} B={b['B']}{tag}")
        for d in report.get("diagnostics", []):
            lines.append(f"diagnostic: {d}")
    elif "triples" in report:
        lines.append(f"triples: {report['count']}")
        for i, t in enumerate(report["triples"]):
            lines.append(f"  {i:4d}  |L|={len(t['L'])} |M|={len(t['M'])} "
                         f"B={t['B']} FPdim={t['fpdim']} simples={t['simples']}")
    elif "gaugings" in report:
        lines.append(f"invertibles: {report['invertibles']}")
        lines.append(f"grading group: Z{' x Z'.join(map(str, report['grading_group'])) or '1'}")
        lines.append(f"gaugings: {report['gaugings']}")
    elif "characters" in report:
        lines.append("classes: " + "  ".join(f"{c['name'] or c['representative']}[{c['size']}]"
                                           for c in report["classes"]))
        lines.append("degrees: " + " ".join(map(str, report["degrees"])))
    elif "by_order" in report:
        lines.append(f"subgroups of {inp['left']['group']} x {inp['right']['group']}: {report['count']}")
        for k, v in report["by_order"].items():
            lines.append(f"  order {k}: {v}")
    return "\n".join(lines)


def _groups_list(args) -> int:
    rows = []
    for e in CATALOG:
        G = e.build()
        rows.append({"name": e.name, "order": G.order, "description": e.description})
    if args.json:
        print(json.dumps(rows, indent=2))
    else:
        for r in rows:
            print(f"{r['name']:<10} {r['order']:>4}  {r['description']}")
    return EXIT_OK


def _groups_show(args) -> int:
    G = parse_group(args.group)
    data = {"label": G.label, "order": G.order, "table": G.mul.tolist()}
    print(json.dumps(data) if args.json else "\n".join(" ".join(map(str, r)) for r in data["table"]))
    return EXIT_OK


# -- driver --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit the JSON report")
    common.add_argument("--no-cache", action="store_true", help="bypass the on-disk cache")
    common.add_argument("--bound", type=int, default=None, help="override the enumeration bound")

    p = argparse.ArgumentParser(prog="braidclass",
                                description="Classify braidings on group-theoretical fusion categories.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("groups", help="catalog groups").add_subparsers(dest="action", required=True)
    g.add_parser("list", parents=[common])
    show = g.add_parser("show", parents=[common])
    show.add_argument("group")

    c = sub.add_parser("classify", help="count braidings").add_subparsers(dest="kind", required=True)
    for kind in ("center", "rep", "pointed"):
        c.add_parser(kind, parents=[common]).add_argument("group")
    gt = c.add_parser("gt", parents=[common])
    gt.add_argument("group")
    gt.add_argument("--subgroup", required=True)
    gt.add_argument("--cocycle")

    for name in ("subcats", "gaugings", "chartab"):
        sub.add_parser(name, parents=[common]).add_argument("group")
    gs = sub.add_parser("goursat", parents=[common])
    gs.add_argument("group")
    gs.add_argument("other")
    return p


def _cache_parts(args, G, extra=()):
    parts = [args.cmd, getattr(args, "kind", None), G.table_hash, args.bound]
    if getattr(args, "subgroup", None):
        # resolved elements, since spec text can depend on element names
        parts.append(list(parse_subgroup(G, args.subgroup).elements))
    if getattr(args, "cocycle", None):
        with open(args.cocycle) as fh:
            parts.append(fh.read())
    return parts + list(extra)


def _relabel(report: dict, G: FiniteGroup, H: FiniteGroup | None = None) -> dict:
    """Entries are shared by equal tables, so names come from the caller."""
    inp = report.get("input", {})
    if H is not None:
        inp["left"]["group"], inp["right"]["group"] = G.label, H.label
    elif "group" in inp:
        inp["group"] = G.label
    if "classes" in report:
        report["group"] = G.label
        for c in report["classes"]:
            c["name"] = G.element_name(c["representative"])
    return report


def _run(args) -> int:
    if args.cmd == "groups":
        return _groups_list(args) if args.action == "list" else _groups_show(args)

    cache = None if args.no_cache else DiskCache()
    set_disk_cache(cache)
    start = time.perf_counter()
    G = parse_group(args.group)
    H = None
    if args.cmd == "goursat":
        H = parse_group(args.other)
        compute = lambda: _report_goursat(args, G, H)
        parts = _cache_parts(args, G, [H.table_hash])
    else:
        fn = {"subcats": _report_subcats, "gaugings": _report_gaugings,
              "chartab": _report_chartab}.get(args.cmd)
        if fn is None:
            fn = {"center": _report_center, "rep": _report_rep,
                  "pointed": _report_pointed, "gt": _report_gt}[args.kind]
        compute = lambda: fn(args, G)
        parts = _cache_parts(args, G)

    report = cache.get(parts) if cache else None
    status = "hit" if report is not None else ("miss" if cache else "off")
    if report is None:
        report = compute()
        report.pop("meta", None)
        if cache:
            cache.put(parts, report)
    _relabel(report, G, H)
    report["meta"] = {"version": __version__, "cache": status,
                      "elapsed_s": round(time.perf_counter() - start, 6)}
    if args.json:
        print(json.dumps(report, sort_keys=True, indent=1))
    else:
        print(_render_table(report))
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _run(args)
    except BoundExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BOUND
    except (BraidClassError, IndexError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    finally:
        set_disk_cache(None)


if __name__ == "__main__":
    sys.exit(main())
