"""Command-line entry point.

Exit codes: 0 success / yes, 1 decision no (verification failure, not
embeddable, unsatisfiable), 2 usage or input error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from gridtree.perfect import build_tile, embed_perfect_with_parent
from gridtree.reduction import (
    Assignment,
    UnsatisfiedError,
    brute_force_sat,
    decode_assignment,
    encode_embedding,
    format_meta,
    parse_dimacs,
    parse_meta,
    reduce,
)
from gridtree.render import SvgStyle, render_svg
from gridtree.solver import CapExceeded, SolveOptions, solve
from gridtree.tree import parse_tree, serialize_tree
from gridtree.verify import ALL_CHECKS, DEFAULT_CHECKS, GridDims, dims_of, format_embedding, parse_embedding, verify

EXIT_OK, EXIT_NO, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _write(path: str, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8", newline="\n")


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _pair(text: str) -> tuple[int, int]:
    try:
        x, y = (int(s) for s in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'x,y', got {text!r}") from None
    return x, y


def _checks(text: str) -> set[str]:
    names = {s.strip() for s in text.split(",") if s.strip()}
    unknown = names - set(ALL_CHECKS)
    if unknown:
        raise argparse.ArgumentTypeError(f"unknown checks: {', '.join(sorted(unknown))}")
    return names


def _dims(args: argparse.Namespace) -> Optional[GridDims]:
    if args.width is None and args.height is None:
        return None
    if args.width is None or args.height is None:
        raise UsageError("--width and --height go together")
    return GridDims(args.width, args.height)


def cmd_perfect(args: argparse.Namespace) -> int:
    if args.with_parent:
        tree, emb = embed_perfect_with_parent(args.k)
    else:
        tile = build_tile(args.tile, args.k)
        tree, emb = tile.tree, tile.embedding
    _write(args.tree, serialize_tree(tree) + "\n")
    _write(args.embedding, format_embedding(emb))
    if args.svg:
        _write(args.svg, render_svg(tree, emb))
    d = dims_of(emb)
    print(f"nodes {tree.size}")
    print(f"dims {d.width} {d.height}")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    tree = parse_tree(_read(args.tree))
    emb = parse_embedding(_read(args.embedding))
    flags = args.checks if args.checks is not None else set(DEFAULT_CHECKS)
    report = verify(tree, emb, _dims(args), flags, anchor=args.anchor, planarity=args.planarity)
    print(report.render())
    return EXIT_OK if report.passed else EXIT_NO


def cmd_reduce(args: argparse.Namespace) -> int:
    formula = parse_dimacs(_read(args.cnf))
    r = reduce(formula)
    _write(args.tree, serialize_tree(r.tree) + "\n")
    _write(args.meta, format_meta(r))
    print(f"dims {r.w} {r.h}")
    print(f"nodes {r.tree.size}")
    return EXIT_OK


def cmd_encode(args: argparse.Namespace) -> int:
    r = parse_meta(_read(args.meta))
    if args.assignment is not None:
        a = Assignment.parse(args.assignment)
        if len(a) != r.n:
            raise UsageError(f"assignment has {len(a)} values, formula has {r.n} variables")
    else:
        found = brute_force_sat(r.formula)
        if found is None:
            print("unsat")
            return EXIT_NO
        a = found
    try:
        emb = encode_embedding(r, a)
    except UnsatisfiedError:
        print("unsat-assignment")
        return EXIT_NO
    _write(args.embedding, format_embedding(emb))
    if args.tree:
        _write(args.tree, serialize_tree(r.tree) + "\n")
    if args.svg:
        _write(args.svg, render_svg(r.tree, emb))
    print(f"assignment {a.format()}")
    return EXIT_OK


def cmd_decode(args: argparse.Namespace) -> int:
    r = parse_meta(_read(args.meta))
    emb = parse_embedding(_read(args.embedding))
    a = decode_assignment(r, emb)
    sat = r.formula.satisfied_by(a.values)
    print(f"assignment {a.format()}")
    print(f"satisfies {'yes' if sat else 'no'}")
    return EXIT_OK if sat else EXIT_NO


def cmd_solve(args: argparse.Namespace) -> int:
    tree = parse_tree(_read(args.tree))
    dims = GridDims(args.width, args.height)
    opts = SolveOptions(
        mode=args.mode,
        respect_rotation=not args.no_rotation,
        forbid_edge_through_vertex=not args.allow_edge_through_vertex,
        count_all=args.count,
    )
    result = solve(tree, dims, opts, node_cap=args.node_cap, cell_cap=args.cell_cap)
    print(result.status)
    if result.count is not None:
        print(f"count {result.count}")
    print(result.stats_line())
    if result.embedding is not None and args.embedding:
        _write(args.embedding, format_embedding(result.embedding))
    return EXIT_OK if result.embeddable else EXIT_NO


def cmd_render(args: argparse.Namespace) -> int:
    emb = parse_embedding(_read(args.embedding))
    tree = parse_meta(_read(args.meta)).tree if args.meta else parse_tree(_read(args.tree))
    _write(args.svg, render_svg(tree, emb, SvgStyle(scale=args.scale, lattice=not args.no_lattice)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gridtree", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("perfect", help="draw a perfect binary tree on its square grid")
    p.add_argument("--k", type=int, required=True, help="odd height")
    p.add_argument("--tile", choices=("F", "G"), default="F")
    p.add_argument("--with-parent", action="store_true", help="add a parent above the root and fill the grid")
    p.add_argument("--tree", required=True)
    p.add_argument("--embedding", required=True)
    p.add_argument("--svg")
    p.set_defaults(func=cmd_perfect)

    p = sub.add_parser("verify", help="check a drawing")
    p.add_argument("--tree", required=True)
    p.add_argument("--embedding", required=True)
    p.add_argument("--width", type=int)
    p.add_argument("--height", type=int)
    p.add_argument("--checks", type=_checks)
    p.add_argument("--anchor", type=_pair, help="absolute bottom-left grid point x,y")
    p.add_argument("--planarity", choices=("naive", "bucket", "auto"), default="naive")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("reduce", help="build the gadget tree for a 3-CNF formula")
    p.add_argument("--cnf", required=True)
    p.add_argument("--tree", required=True)
    p.add_argument("--meta", required=True)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("encode", help="draw the gadget tree for a satisfying assignment")
    p.add_argument("--meta", required=True)
    p.add_argument("--assignment", help="comma-separated 0/1; default: first satisfying assignment")
    p.add_argument("--embedding", required=True)
    p.add_argument("--tree")
    p.add_argument("--svg")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="read the assignment off a drawing")
    p.add_argument("--meta", required=True)
    p.add_argument("--embedding", required=True)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("solve", help="exhaustive search on a small grid")
    p.add_argument("--tree", required=True)
    p.add_argument("--width", type=int, required=True)
    p.add_argument("--height", type=int, required=True)
    p.add_argument("--mode", choices=("upward", "weakly_upward", "general"), default="upward")
    p.add_argument("--no-rotation", action="store_true")
    p.add_argument("--allow-edge-through-vertex", action="store_true")
    p.add_argument("--count", action="store_true")
    p.add_argument("--node-cap", type=int)
    p.add_argument("--cell-cap", type=int)
    p.add_argument("--embedding")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("render", help="write an SVG")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--tree")
    src.add_argument("--meta", help="meta file of a reduction; colours gadget roles")
    p.add_argument("--embedding", required=True)
    p.add_argument("--svg", required=True)
    p.add_argument("--scale", type=int, default=20)
    p.add_argument("--no-lattice", action="store_true")
    p.set_defaults(func=cmd_render)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, ValueError, CapExceeded) as exc:
        print(f"gridtree {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
