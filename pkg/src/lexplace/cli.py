"""Command-line entry point. JSON goes to stdout, diagnostics to stderr."""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import hardness
from .decomposer import decompose
from .dp import solve
from .errors import InputError, InvariantViolation, LexPlaceError, ValidationError
from .generate import instance_hash, random_multitree
from .graph import (
    canonicalize,
    format_graph,
    is_multitree,
    is_untangled,
    read_graph,
    write_graph,
)
from .oracle import DEFAULT_CAP, brute_force_lsp


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=False) + "\n")


def _witness(w):
    return None if w is None else [str(x) for x in w]


def cmd_validate(args) -> int:
    g = read_graph(args.graph)
    mt = is_multitree(g)
    dag = g.topological_order is not None
    unt = is_untangled(g) if mt else None
    witnesses = {}
    if not mt:
        witnesses["multitree"] = {"kind": mt.kind, "vertices": _witness(mt.witness)}
    if unt is not None and not unt:
        witnesses["untangled"] = {"kind": unt.kind, "vertices": _witness(unt.witness)}
    _emit({
        "vertices": len(g),
        "edges": len(g.edges),
        "is_dag": dag,
        "is_multitree": bool(mt),
        "is_untangled": bool(unt) if unt is not None else False,
        "roots": [str(v) for v in g.ids(g.root_mask)],
        "leaves": [str(v) for v in g.ids(g.leaf_mask)],
        "connectors": [str(v) for v in g.ids(g.connector_mask)],
        "witnesses": witnesses,
    })
    return 0


def cmd_canonicalize(args) -> int:
    g = canonicalize(read_graph(args.graph))
    if args.output:
        write_graph(g, args.output)
        _emit({"output": str(args.output), "vertices": len(g), "edges": len(g.edges)})
    else:
        sys.stdout.write(format_graph(g))
    return 0


def cmd_decompose(args) -> int:
    g = read_graph(args.graph)
    tree = decompose(g)
    if args.json:
        Path(args.json).write_text(tree.to_json(indent=1) + "\n", encoding="utf-8")
        _emit({"output": str(args.json), "nodes": len(tree.nodes), "cases": tree.case_counts()})
    else:
        _emit(tree.to_dict())
    return 0


def cmd_solve(args) -> int:
    g = read_graph(args.graph)
    _emit(solve(g, args.rho).to_dict())
    return 0


def cmd_oracle(args) -> int:
    g = read_graph(args.graph)
    agg, argmins = brute_force_lsp(g, args.rho, cap=args.cap)
    _emit({
        "aggregate": list(agg),
        "argmins": [[str(v) for v in sorted(p, key=g.index.__getitem__)] for p in argmins],
        "count": len(argmins),
    })
    return 0


def cmd_reduce(args) -> int:
    cubic = hardness.read_undirected(args.graph)
    if args.coloring:
        coloring = hardness.read_coloring(args.coloring)
    else:
        coloring = hardness.brute_force_coloring(cubic)
        if coloring is None:
            raise InputError("graph has no proper 3-edge-colouring")
    h = hardness.build_reduction(cubic, coloring)
    if args.output:
        write_graph(h, args.output)
    else:
        sys.stderr.write(format_graph(h))
    ks = [args.k] if args.k is not None else list(range(1, cubic.number_of_nodes() // 2 + 1))
    _emit({
        "output": str(args.output) if args.output else None,
        "vertices": len(h),
        "edges": len(h.edges),
        "roots": [str(v) for v in h.ids(h.root_mask)],
        "bounds": {str(k): hardness.independence_bound(k).to_json() for k in ks},
    })
    return 0


def cmd_bench(args) -> int:
    for i in range(args.count):
        seed = args.seed + i
        g = random_multitree(args.k, args.n, seed)
        rho = min(args.rho, g.leaf_mask.bit_count() - 1)
        started = time.perf_counter()
        sol = solve(g, rho)
        elapsed = time.perf_counter() - started
        _emit({
            "k": args.k,
            "n": args.n,
            "rho": rho,
            "seed": seed,
            "hash": instance_hash(g),
            "connectors": g.connector_mask.bit_count(),
            "seconds": round(elapsed, 6),
            "tau_nodes": sol.stats["tau_nodes"],
            "table_cells": sol.stats["table_cells"],
        })
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lexplace", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="report multitree and untangledness checks")
    s.add_argument("graph")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("canonicalize", help="write the depth-two canonical model")
    s.add_argument("graph")
    s.add_argument("output", nargs="?")
    s.set_defaults(func=cmd_canonicalize)

    s = sub.add_parser("decompose", help="print the decomposition tree")
    s.add_argument("graph")
    s.add_argument("--json", metavar="OUT", help="write the tree here instead of stdout")
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("solve", help="exact lex-min placement by dynamic programming")
    s.add_argument("graph")
    s.add_argument("--rho", type=int, required=True)
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("oracle", help="exact lex-min placement by enumeration")
    s.add_argument("graph")
    s.add_argument("--rho", type=int, required=True)
    s.add_argument("--cap", type=int, default=DEFAULT_CAP, help="maximum subsets to enumerate")
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("reduce", help="build the 3-multitree for a cubic graph")
    s.add_argument("graph")
    s.add_argument("--coloring", help="file of 'u v c' lines; searched for when absent")
    s.add_argument("--k", type=int, help="report the bound vector for this k only")
    s.add_argument("-o", "--output", help="write the multitree here (stderr otherwise)")
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("bench", help="time the solver on generated instances")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--rho", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--count", type=int, default=3)
    s.set_defaults(func=cmd_bench)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as e:
        _emit({"error": e.check, "witness": _witness(e.witness), "message": str(e)})
        print(f"lexplace: {e}", file=sys.stderr)
        return e.exit_code
    except (InputError, InvariantViolation, LexPlaceError) as e:
        print(f"lexplace: {e}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        print(f"lexplace: {e}", file=sys.stderr)
        return InputError.exit_code
