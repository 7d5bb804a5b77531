"""Command-line interface.

Exit codes: 0 success, 1 validation/computation failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional

from .core import INF, PlanarGraph, canonical_form, decode, dual, encode, generate, normalize
from .ddg_solver import shortest_cycle_ddg
from .dynamic_solver import DynamicStructure, normalize_for_dynamic
from .errors import PlancutError
from .oracles import oracle_shortest_cycle
from .static_solver import RunStats, min_cut, shortest_cycle_batched, shortest_cycle_cfn


def _read_graph(path: str) -> PlanarGraph:
    with open(path) as fh:
        return decode(fh.read())


def _fmt(val) -> str:
    return "inf" if val == INF else str(val)


def cmd_gen(args) -> int:
    if args.mode == "grid":
        g = generate("grid", rows=args.rows, cols=args.cols, weights=args.weights, seed=args.seed)
    else:
        g = generate("random_maximal", n=args.n, weights=args.weights, seed=args.seed)
    text = encode(g)
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w") as fh:
            fh.write(text)
    return 0


def _solve(g: PlanarGraph, algo: str, stats: RunStats):
    if algo == "oracle":
        return oracle_shortest_cycle(g), None
    nr = normalize(g)
    solver = {"cfn": shortest_cycle_cfn, "batched": shortest_cycle_batched, "ddg": shortest_cycle_ddg}[algo]
    val, cyc = solver(nr.graph, stats=stats)
    return (val, cyc), nr


def cmd_solve(args) -> int:
    g = _read_graph(args.input)
    stats = RunStats()
    (val, cyc), nr = _solve(g, args.algo, stats)
    print(_fmt(val))
    if cyc is None:
        print()
    else:
        darts = cyc.darts if nr is None else nr.map_cycle(cyc.darts)
        print(" ".join(str(d) for d in darts))
    if args.verbose:
        stats.emit()
    return 0


def cmd_mincut(args) -> int:
    g = _read_graph(args.input)
    stats = RunStats()
    val, cut = min_cut(g, algo=args.algo, stats=stats)
    print(_fmt(val))
    print(" ".join(str(e) for e in cut))
    if args.verbose:
        stats.emit()
    return 0


def cmd_validate(args) -> int:
    try:
        g = _read_graph(args.input)  # construction validates rotations and Euler
    except PlancutError as ex:
        print(f"invalid: {ex}")
        return 1
    dd = dual(dual(g).graph).graph
    if g.n <= 50 and canonical_form(dd) != canonical_form(g):
        print("invalid: dual of the dual is not isomorphic to the graph")
        return 1
    print(f"ok: n={g.n} m={g.m} faces={g.nfaces}")
    return 0


def cmd_dynamic(args) -> int:
    g = _read_graph(args.input)
    prepared, origin = normalize_for_dynamic(g)
    dyn = DynamicStructure(prepared)

    def find_raw_edge(u: int, v: int) -> int:
        best = -1
        for e in range(len(dyn.alive)):
            if not dyn.alive[e]:
                continue
            a, b = dyn.tail[2 * e], dyn.tail[2 * e + 1]
            ra = origin[a] if a < len(origin) else a
            rb = origin[b] if b < len(origin) else b
            if {ra, rb} == {u, v} and (best < 0 or e < best):
                best = e
        if best < 0:
            from .errors import NoSuchEdge

            raise NoSuchEdge(f"no edge between {u} and {v}")
        return best

    out = []
    with open(args.script) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            toks = line.split()
            try:
                if toks[0] == "insert" and len(toks) == 6:
                    u, v, w, au, av = map(int, toks[1:])
                    x = dyn.tail[au] if au >= 0 else u
                    y = dyn.tail[av] if av >= 0 else v
                    dyn.insert_edge(x, y, w, au, av)
                    out.append("ok")
                elif toks[0] == "delete" and len(toks) == 3:
                    dyn.delete_edge_id(find_raw_edge(int(toks[1]), int(toks[2])))
                    out.append("ok")
                elif toks[0] == "query" and len(toks) == 1:
                    out.append(_fmt(dyn.shortest_cycle()))
                elif toks[0] == "query-edge" and len(toks) == 3:
                    out.append(_fmt(dyn.cycle_through_edge_id(find_raw_edge(int(toks[1]), int(toks[2])))))
                else:
                    print(f"script line {lineno}: bad command {line!r}", file=sys.stderr)
                    return 2
            except PlancutError as ex:
                print(f"script line {lineno}: {ex}", file=sys.stderr)
                return 1
    print("\n".join(out))
    return 0


def cmd_bench(args) -> int:
    from .bench import bench_run, load_config

    rows = bench_run(load_config(args.config), verbose=args.verbose)
    if args.output == "-":
        print("\n".join(rows))
    else:
        with open(args.output, "w") as fh:
            fh.write("\n".join(rows) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="plancut", description="Shortest cycles and minimum cuts in planar graphs")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a graph")
    gsub = g.add_subparsers(dest="mode", required=True)
    gg = gsub.add_parser("grid")
    gg.add_argument("--rows", type=int, required=True)
    gg.add_argument("--cols", type=int, required=True)
    gr = gsub.add_parser("random")
    gr.add_argument("--n", type=int, required=True)
    for x in (gg, gr):
        x.add_argument("--weights", default="unit")
        x.add_argument("--seed", type=int, default=0)
        x.add_argument("-o", "--output", default="-")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("solve", help="shortest cycle")
    s.add_argument("--algo", choices=["oracle", "cfn", "batched", "ddg"], default="cfn")
    s.add_argument("-i", "--input", required=True)
    s.add_argument("-v", "--verbose", action="store_true")
    s.set_defaults(func=cmd_solve)

    mc = sub.add_parser("mincut", help="global minimum cut")
    mc.add_argument("--algo", choices=["oracle", "cfn", "batched", "ddg"], default="cfn")
    mc.add_argument("-i", "--input", required=True)
    mc.add_argument("-v", "--verbose", action="store_true")
    mc.set_defaults(func=cmd_mincut)

    dy = sub.add_parser("dynamic", help="run a dynamic update/query script")
    dy.add_argument("-i", "--input", required=True)
    dy.add_argument("--script", required=True)
    dy.set_defaults(func=cmd_dynamic)

    b = sub.add_parser("bench", help="benchmark harness")
    b.add_argument("--config", required=True)
    b.add_argument("-o", "--output", default="-")
    b.add_argument("-v", "--verbose", action="store_true")
    b.set_defaults(func=cmd_bench)

    v = sub.add_parser("validate", help="check a graph file")
    v.add_argument("-i", "--input", required=True)
    v.set_defaults(func=cmd_validate)
    return p


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as ex:
        return 2 if ex.code not in (0, None) else 0
    try:
        return args.func(args)
    except PlancutError as ex:
        print(f"error: {ex}", file=sys.stderr)
        return 1
    except OSError as ex:
        print(f"error: {ex}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
