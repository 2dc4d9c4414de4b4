"""Command-line front end and SVG renderer.

Every subcommand reads and writes the plain-text artifact formats
(.sge instances, .sgd drawings, .slt level trees, .plan sequencing
plans), so commands compose through files.  Exit codes: 0 clean,
1 violation / negative result, 2 usage or format error, 3 budget
exceeded.  All persisted artifacts stay exact rationals; decimal
rounding happens only inside SVG output (display only, 4 decimal
places, never re-imported).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from .analyzer import (
    TooFewJoints,
    classify_connections,
    compute_channels,
    detect_cuts,
    detect_passages,
    enumerate_doors,
)
from .counterexample import (
    CapExceeded,
    CounterexampleParams,
    InvalidParams,
    ScaleMode,
    SequencePlan,
    build_instance,
    compute_paper_parameters,
)
from .depth2 import DepthExceeded, embed_depth2
from .leveltree import (
    LevelStatus,
    RegionStatus,
    load_level_tree,
    region_candidates,
    search_level_planar,
    search_region_level_planar,
)
from .model import (
    FormatError,
    Role,
    dump_drawing,
    dump_instance,
    load_drawing,
    load_instance,
    tree_depth,
    validate_instance,
)
from .planarity import (
    SearchStatus,
    UndrawnVertex,
    check_simultaneous,
    search_embedding,
)
from .geom import Point

EXIT_CLEAN = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


# --- SVG rendering --------------------------------------------------------

@dataclass(frozen=True)
class RenderStyle:
    tree_stroke: str = "#9e9e9e"   # tree edges grey ...
    path_stroke: str = "#000000"   # ... below black path edges
    tree_width: str = "2.5"
    path_width: str = "1.2"
    vertex_radius: str = "2.0"
    vertex_fill: str = "#1a1a1a"
    padding: Fraction = Fraction(10)
    level_lines: bool = False


def _fmt(x) -> str:
    return f"{float(x):.4f}"


def render_svg(i, d, style: RenderStyle = RenderStyle()) -> str:
    for v in range(i.tree.n):
        if v not in d.pos:
            raise UndrawnVertex(f"vertex {v} is not drawn")
    pts = [d.point(v) for v in range(i.tree.n)]
    xs = [p.x for p in pts]
    ys = [p.y for p in pts]
    pad = style.padding
    x0, y1 = min(xs) - pad, max(ys) + pad
    w = max(xs) - min(xs) + 2 * pad
    h = max(ys) - min(ys) + 2 * pad

    def at(p: Point):
        # flip the y axis: SVG grows downward
        return _fmt(p.x - x0), _fmt(y1 - p.y)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'viewBox="0 0 {_fmt(w)} {_fmt(h)}">',
        f'<g stroke="{style.tree_stroke}" stroke-width="{style.tree_width}" '
        'stroke-linecap="round">',
    ]
    for u, v in i.tree.edges():
        (xa, ya), (xb, yb) = at(d.point(u)), at(d.point(v))
        out.append(f'<line x1="{xa}" y1="{ya}" x2="{xb}" y2="{yb}"/>')
    out.append('</g>')
    out.append(f'<g stroke="{style.path_stroke}" '
               f'stroke-width="{style.path_width}" stroke-linecap="round">')
    for u, v in i.path.edges():
        (xa, ya), (xb, yb) = at(d.point(u)), at(d.point(v))
        out.append(f'<line x1="{xa}" y1="{ya}" x2="{xb}" y2="{yb}"/>')
    out.append('</g>')
    out.append(f'<g fill="{style.vertex_fill}">')
    for v in range(i.tree.n):
        cx, cy = at(d.point(v))
        out.append(f'<circle cx="{cx}" cy="{cy}" r="{style.vertex_radius}"/>')
    out.append('</g>')
    out.append('</svg>')
    return "\n".join(out) + "\n"


# --- helpers --------------------------------------------------------------

def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _emit(args, record: dict, text: str) -> None:
    if args.format == "records":
        print(json.dumps(record, separators=(",", ":"), sort_keys=True))
    else:
        print(text)


# --- subcommands ----------------------------------------------------------

def cmd_generate(args) -> int:
    mode = ScaleMode.PaperSymbolic if args.mode == "symbolic" else ScaleMode.Desk
    kw = {}
    if mode is ScaleMode.Desk:
        # desk scale: small replication counts instead of the full-size
        # constants, so the instance fits in memory and in a .sge file
        kw = dict(formation_reps=args.formation_reps,
                  formation_outer=args.formation_outer,
                  sef_tuple=args.sef_tuple, sef_efs=args.sef_efs,
                  sef_reps=args.sef_reps)
    p = CounterexampleParams(s=args.s, x=args.x, y=args.y,
                             double_defects=args.double_defects,
                             scale_mode=mode, cap=args.cap, **kw)
    if mode is ScaleMode.PaperSymbolic:
        rep = build_instance(p)
        rec = {"joints": rep.joints, "cells_per_joint": rep.cells_per_joint,
               "cells_per_formation": rep.cells_per_formation,
               "head": list(rep.cell_head_counts),
               "tail": list(rep.cell_tail_counts),
               "stabilizers": rep.cell_stabilizers,
               "vertices_total": rep.vertices_total}
        _emit(args, rec, "\n".join(f"{k} = {v}" for k, v in rec.items()))
        return EXIT_CLEAN
    inst, plan = build_instance(p)
    _write(args.out + ".sge", dump_instance(inst))
    _write(args.out + ".plan", plan.to_json() + "\n")
    rec = {"n": inst.tree.n, "cells": len(plan.cells),
           "formations": len(plan.formations), "efs": len(plan.efs),
           "sge": args.out + ".sge", "plan": args.out + ".plan"}
    _emit(args, rec,
          f"wrote {rec['sge']} and {rec['plan']}: {rec['n']} vertices, "
          f"{rec['cells']} cells, {rec['formations']} formations, "
          f"{rec['efs']} EFs")
    return EXIT_CLEAN


def cmd_params(args) -> int:
    header = f"{'x':>12} {'r':>14} {'y':>24} {'degenerate':>10}"
    rows = []
    for x in args.x_values:
        pp = compute_paper_parameters(x)
        rec = {"x": pp.x, "r": pp.r, "y": pp.y, "s": pp.s, "l": pp.l,
               "t": pp.t, "degenerate": pp.degenerate}
        if args.format == "records":
            print(json.dumps(rec, separators=(",", ":"), sort_keys=True))
        else:
            rows.append(f"{pp.x:>12} {pp.r:>14} {pp.y:>24} "
                        f"{'yes' if pp.degenerate else 'no':>10}")
    if args.format != "records":
        print(header)
        for r in rows:
            print(r)
    return EXIT_CLEAN


def cmd_embed_depth2(args) -> int:
    inst = load_instance(_read(args.instance))
    try:
        d = embed_depth2(inst)
    except DepthExceeded:
        print(f"refused: tree has depth {tree_depth(inst.tree)}; the "
              "wedge construction only covers depth <= 2, and no "
              "construction can cover every tree: there is a depth-4 "
              "tree/path pair with no simultaneous straight-line "
              "embedding (see the generate subcommand)", file=sys.stderr)
        return EXIT_VIOLATION
    text = dump_drawing(d)
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_CLEAN


def cmd_check(args) -> int:
    inst = load_instance(_read(args.instance))
    d = load_drawing(_read(args.drawing))
    rep = validate_instance(inst)
    tr, pr = check_simultaneous(inst, d)
    clean = rep.valid and tr.planar and pr.planar
    rec = {"instance_valid": rep.valid,
           "violations": list(rep.violations),
           "tree_planar": tr.planar, "path_planar": pr.planar,
           "tree_crossings": len(tr.crossings),
           "path_crossings": len(pr.crossings),
           "tree_vertex_on_edge": len(tr.vertex_on_edge),
           "path_vertex_on_edge": len(pr.vertex_on_edge),
           "clean": clean}
    _emit(args, rec,
          ("clean" if clean else "VIOLATIONS") + ": "
          f"tree planar={tr.planar} ({rec['tree_crossings']} crossings), "
          f"path planar={pr.planar} ({rec['path_crossings']} crossings), "
          f"structure valid={rep.valid}")
    return EXIT_CLEAN if clean else EXIT_VIOLATION


def cmd_search(args) -> int:
    inst = load_instance(_read(args.instance))
    pts = [Point(x, y) for x in range(args.grid) for y in range(args.grid)]
    res = search_embedding(inst, pts, budget=args.budget)
    rec = {"status": res.status.name, "nodes": res.nodes}
    _emit(args, rec, f"{res.status.name} after {res.nodes} nodes")
    if res.status is SearchStatus.Found:
        if args.out:
            _write(args.out, dump_drawing(res.drawing))
        else:
            sys.stdout.write(dump_drawing(res.drawing))
        return EXIT_CLEAN
    if res.status is SearchStatus.BudgetExceeded:
        return EXIT_BUDGET
    return EXIT_VIOLATION


def cmd_level_search(args) -> int:
    lt, rs = load_level_tree(_read(args.leveltree))
    if rs is not None:
        grid = region_candidates(rs, per_axis=args.grid, span=args.grid)
        res = search_region_level_planar(lt, rs, grid, budget=args.budget)
        rec = {"status": res.status.name, "nodes": res.nodes,
               "metadata": {k: str(v) for k, v in (res.metadata or {}).items()}}
        _emit(args, rec, f"{res.status.name} after {res.nodes} nodes")
        if res.status is RegionStatus.Found:
            return EXIT_CLEAN
        if res.status is RegionStatus.BudgetExceeded:
            return EXIT_BUDGET
        return EXIT_VIOLATION
    res = search_level_planar(lt, grid_width=args.grid, budget=args.budget,
                              method=args.method)
    rec = {"status": res.status.name, "nodes": res.nodes, "note": res.note}
    _emit(args, rec, f"{res.status.name} after {res.nodes} nodes"
          + (f" ({res.note})" if res.note else ""))
    if res.status is LevelStatus.Found:
        return EXIT_CLEAN
    if res.status is LevelStatus.BudgetExceeded:
        return EXIT_BUDGET
    return EXIT_VIOLATION


def cmd_analyze(args) -> int:
    inst = load_instance(_read(args.instance))
    plan = SequencePlan.from_json(_read(args.plan))
    d = load_drawing(_read(args.drawing))
    records = []
    passages = detect_passages(inst, d, plan)
    for p in passages:
        records.append({"kind": "passage", "c1": p.c1, "c2": p.c2,
                        "c_sep": p.c_sep, "joint": p.joint,
                        "sep_joint": p.sep_joint,
                        "crossed_sep_edges": list(p.crossed_sep_edges)})
        for door in enumerate_doors(p, inst, d):
            records.append({"kind": "door", "passage": [p.c1, p.c2, p.c_sep],
                            "apex": door.apex, "base": list(door.base),
                            "status": door.status.value})
    joints = sorted(v for v in range(inst.tree.n)
                    if inst.tree.labels and inst.tree.role(v) is Role.Joint)
    channels = []
    if len(joints) >= 3:
        try:
            channels = compute_channels(inst, d, joints)
        except TooFewJoints:
            channels = []
    for ch in channels:
        records.append({"kind": "channel", "joint": ch.joint, "x": ch.x,
                        "segments": len(ch.segments)})
    if channels:
        for ev in detect_cuts(inst, d, channels, plan):
            records.append({"kind": "cut", "cut_kind": ev.kind.value,
                            "edge": list(ev.edge), "channel": ev.channel,
                            "segments": list(ev.segments),
                            "extremal": ev.extremal})
        for rep in classify_connections(channels, d):
            for (a, b), kind in sorted(rep.entries.items()):
                records.append({"kind": "connection", "joint": rep.joint,
                                "pair": [a, b], "connection": kind.value})
    if args.format == "records":
        for rec in records:
            print(json.dumps(rec, separators=(",", ":"), sort_keys=True))
    else:
        counts = {}
        for rec in records:
            counts[rec["kind"]] = counts.get(rec["kind"], 0) + 1
        print(f"passages={counts.get('passage', 0)} "
              f"doors={counts.get('door', 0)} "
              f"channels={counts.get('channel', 0)} "
              f"cuts={counts.get('cut', 0)} "
              f"connections={counts.get('connection', 0)}")
        for rec in records:
            print("  " + " ".join(f"{k}={v}" for k, v in sorted(rec.items())))
    return EXIT_CLEAN


def cmd_render(args) -> int:
    inst = load_instance(_read(args.instance))
    d = load_drawing(_read(args.drawing))
    svg = render_svg(inst, d, RenderStyle())
    if args.out:
        _write(args.out, svg)
    else:
        sys.stdout.write(svg)
    return EXIT_CLEAN


# --- argument parsing -----------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="simembed",
        description="simultaneous tree/path embedding toolkit")
    ap.add_argument("--seed", type=int, default=0,
                    help="seed for sampling operations (reserved)")
    ap.add_argument("--threads", type=int, default=1,
                    help="worker count; output is identical for any value")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="build a counterexample instance")
    g.add_argument("--s", type=int, required=True)
    g.add_argument("--x", type=int, required=True)
    g.add_argument("--y", type=int, required=True)
    g.add_argument("--mode", choices=("desk", "symbolic"), default="desk")
    g.add_argument("--double-defects", action="store_true")
    g.add_argument("--formation-reps", type=int, default=2)
    g.add_argument("--formation-outer", type=int, default=1)
    g.add_argument("--sef-tuple", type=int, default=2)
    g.add_argument("--sef-efs", type=int, default=2)
    g.add_argument("--sef-reps", type=int, default=4)
    g.add_argument("--cap", type=int, default=300_000)
    g.add_argument("--out", default="counterexample")
    g.add_argument("--format", choices=("text", "records"), default="text")
    g.set_defaults(func=cmd_generate)

    pp = sub.add_parser("params", help="full-scale parameter table")
    pp.add_argument("x_values", type=int, nargs="+")
    pp.add_argument("--format", choices=("text", "records"), default="text")
    pp.set_defaults(func=cmd_params)

    e = sub.add_parser("embed-depth2", help="embed a depth-<=2 instance")
    e.add_argument("instance")
    e.add_argument("--out")
    e.set_defaults(func=cmd_embed_depth2)

    c = sub.add_parser("check", help="verify a drawing of an instance")
    c.add_argument("instance")
    c.add_argument("drawing")
    c.add_argument("--format", choices=("text", "records"), default="text")
    c.set_defaults(func=cmd_check)

    s = sub.add_parser("search", help="exhaustive small-instance oracle")
    s.add_argument("instance")
    s.add_argument("--grid", type=int, default=4,
                   help="use the integer grid of this width as candidates")
    s.add_argument("--budget", type=int, default=10_000_000)
    s.add_argument("--out")
    s.add_argument("--format", choices=("text", "records"), default="text")
    s.set_defaults(func=cmd_search)

    ls = sub.add_parser("level-search", help="level/region planarity search")
    ls.add_argument("leveltree")
    ls.add_argument("--grid", type=int, default=6)
    ls.add_argument("--budget", type=int, default=10_000_000)
    ls.add_argument("--method", choices=("auto", "grid", "combinatorial"),
                    default="auto")
    ls.add_argument("--format", choices=("text", "records"), default="text")
    ls.set_defaults(func=cmd_level_search)

    a = sub.add_parser("analyze", help="structural analysis of a drawing")
    a.add_argument("instance")
    a.add_argument("plan")
    a.add_argument("drawing")
    a.add_argument("--format", choices=("text", "records"), default="text")
    a.set_defaults(func=cmd_analyze)

    r = sub.add_parser("render", help="render an instance drawing to SVG")
    r.add_argument("instance")
    r.add_argument("drawing")
    r.add_argument("--out")
    r.set_defaults(func=cmd_render)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (FormatError, InvalidParams, CapExceeded, UndrawnVertex,
            OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
