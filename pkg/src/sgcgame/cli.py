"""Command-line front end.

Exit status: 0 on success, 1 when an audit refutes a claim, 2 on usage or
input errors. Output is plain text (no styling), so ``NO_COLOR`` is honored
trivially.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence, TextIO

from . import audit as audit_mod
from .core import NEG, POS, GraphError, components, cycle_rank, generate
from .game import (
    ANDJIGA,
    DEAD_VERTEX,
    MOVER_STUCK,
    ONGOING,
    PLAYERS,
    SALOME,
    SALOME_WIN,
    CircleParams,
    IllegalMove,
    apply_move,
    legal_moves,
    new_game,
    status,
)
from .graphio import GraphFormatError, read_graph, serialize_graph
from .solver import BoundError, Solver, best_move, chi_estimate, win_table
from .switching import (
    canonicalize,
    count_switching_classes,
    enumerate_classes_bruteforce,
    is_antibalanced,
    is_balanced,
    switching_equivalent,
)

SIGN_ALIASES = {"all+": "all_positive", "all-": "all_negative", "random": "random"}


class UsageError(Exception):
    pass


def _verts(xs) -> str:
    return " ".join(map(str, sorted(xs))) or "(none)"


def _witness(label: str, verdict, out: TextIO) -> None:
    print(f"{label}: {'yes' if verdict.holds else 'no'}", file=out)
    if verdict.holds:
        print(f"  switch: {_verts(verdict.switching)}", file=out)
    else:
        print(f"  cycle: {' '.join(map(str, verdict.cycle))}", file=out)


def cmd_info(args, out):
    g = read_graph(args.file)
    print(f"n: {g.n}", file=out)
    print(f"m: {g.m}", file=out)
    print(f"positive: {len(g.positive_edges)}", file=out)
    print(f"negative: {len(g.negative_edges)}", file=out)
    print(f"components: {len(components(g))}", file=out)
    print(f"cycle_rank: {cycle_rank(g)}", file=out)


def cmd_balance(args, out):
    g = read_graph(args.file)
    bal = is_balanced(g)
    print(f"classification: {bal.classification}", file=out)
    _witness("balanced", bal, out)
    _witness("antibalanced", is_antibalanced(g), out)


def cmd_canonical(args, out):
    cf = canonicalize(read_graph(args.file))
    print("forest: " + (" ".join(f"{u}-{v}" for u, v in cf.forest) or "(none)"), file=out)
    print(f"switch: {_verts(cf.switching)}", file=out)
    print("cotree: " + (" ".join(f"{u}-{v}{'+' if s == POS else '-'}" for (u, v), s in zip(cf.cotree_edges, cf.cotree_signs)) or "(none)"), file=out)
    print(serialize_graph(cf.graph), end="", file=out)


def cmd_equiv(args, out):
    g1, g2 = read_graph(args.file1), read_graph(args.file2)
    try:
        same = switching_equivalent(g1, g2)
    except GraphError as exc:
        raise UsageError(str(exc)) from exc
    print("equivalent" if same else "not equivalent", file=out)


def cmd_classes(args, out):
    g = read_graph(args.file)
    count = count_switching_classes(g)
    print(f"classes: {count} (2^{cycle_rank(g)})", file=out)
    if args.brute:
        found = len(enumerate_classes_bruteforce(g))
        print(f"brute force: {found} ({'agrees' if found == count else 'DISAGREES'})", file=out)


def _params(args) -> CircleParams:
    try:
        return CircleParams(args.p, args.d)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_solve(args, out):
    g = read_graph(args.file)
    solver = Solver(g, _params(args), args.rules, symmetry=not args.no_symmetry)
    won = solver.salome_wins(args.first)
    print(f"winner: {SALOME if won else ANDJIGA}", file=out)
    print(f"nodes: {solver.nodes}", file=out)


def cmd_table(args, out):
    g = read_graph(args.file)
    table = win_table(g, range(2, args.pmax + 1), range(1, args.dmax + 1), args.first, args.rules,
                      symmetry=not args.no_symmetry, threads=args.threads)
    if args.json:
        print(json.dumps(table.as_dict(timing=False), sort_keys=True), file=out)
        return
    print(f"# first={table.first} rules={table.rules}", file=out)
    print("d p winner nodes", file=out)
    for (p, d), cell in sorted(table.cells.items(), key=lambda kv: (kv[0][1], kv[0][0])):
        winner = cell.error or (SALOME if cell.salome_wins else ANDJIGA)
        print(f"{d} {p} {winner} {cell.nodes}", file=out)


def cmd_chi(args, out):
    g = read_graph(args.file)
    est = chi_estimate(g, args.dmax, args.pmax, args.first, args.rules, symmetry=not args.no_symmetry, threads=args.threads)
    if args.json:
        print(json.dumps(est.as_dict(), sort_keys=True), file=out)
        return
    print(f"estimate: {est.estimate}" + (" (lower bound)" if est.truncated else ""), file=out)
    print(f"truncated: {'yes' if est.truncated else 'no'}", file=out)
    print(f"monotone: {'yes' if est.monotone else 'no'}", file=out)
    for d, wins in sorted(est.per_d.items()):
        print(f"d={d}: wins at p = {' '.join(map(str, wins)) or '(none)'} (p <= {est.p_hi[d]})", file=out)


def _signature(spec: str):
    if spec in SIGN_ALIASES:
        return SIGN_ALIASES[spec]
    if spec and set(spec) <= {"+", "-"}:
        return [POS if ch == "+" else NEG for ch in spec]
    raise UsageError(f"--sign must be all+, all-, random or a +/- pattern, got {spec!r}")


def cmd_gen(args, out):
    try:
        g = generate(args.family, args.sizes, _signature(args.sign), args.seed)
    except GraphError as exc:
        raise UsageError(str(exc)) from exc
    text = serialize_graph(g)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        print(text, end="", file=out)


def cmd_audit(args, out):
    grid = audit_mod.Grid(d_values=tuple(range(1, args.dmax + 1)), ratio_max=args.ratio, p_max=args.pmax,
                          rules=args.rules)
    try:
        if args.out:
            with open(args.out, "w", encoding="utf-8") as sink:
                reports = audit_mod.run_suite(args.suite, args.nmax, grid, args.seed, sink, args.threads, args.timestamps)
        else:
            reports = audit_mod.run_suite(args.suite, args.nmax, grid, args.seed, out, args.threads, args.timestamps)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    summary = out if args.out else sys.stderr
    for r in reports:
        print(f"{r.claim.id}: {r.verdict} ({r.instances_tested} instances, {len(r.counterexamples)} counterexample cells)", file=summary)
    return 1 if audit_mod.any_refuted(reports) else 0


def _board(state, out) -> None:
    cells = " ".join(f"{v}:{'.' if c is None else c}" for v, c in enumerate(state.coloring))
    print(f"board [{cells}]  {state.to_move} to move", file=out)


def cmd_play(args, out, stdin: TextIO):
    g = read_graph(args.file)
    params = _params(args)
    solver = Solver(g, params, args.rules)
    state = new_game(g, params, args.first)
    human = args.as_
    while status(state, args.rules) == ONGOING:
        _board(state, out)
        if state.to_move == human:
            moves = legal_moves(state)
            print("legal: " + " ".join(f"{v},{c}" for v, c in moves), file=out)
            print("your move (vertex color)> ", end="", file=out, flush=True)
            line = stdin.readline()
            if not line:
                print("\ninput closed; game abandoned", file=out)
                return 2
            try:
                v, c = (int(x) for x in line.replace(",", " ").split())
                state = apply_move(state, v, c)
            except (ValueError, IllegalMove) as exc:
                print(f"illegal: {exc}", file=out)
        else:
            v, c = best_move(state, args.rules, solver)
            print(f"engine plays {v} {c}", file=out)
            state = apply_move(state, v, c)
    _board(state, out)
    print(f"result: {'salome wins' if status(state, args.rules) == SALOME_WIN else 'andjiga wins'}", file=out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sgcgame", description="Signed circular coloring game toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    def with_file(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("file")
        return sp

    def game_flags(sp, threads=True):
        sp.add_argument("--first", choices=PLAYERS, default=SALOME)
        sp.add_argument("--rules", choices=(MOVER_STUCK, DEAD_VERTEX), default=MOVER_STUCK)
        sp.add_argument("--no-symmetry", action="store_true", help="disable the dihedral color reduction")
        if threads:
            sp.add_argument("--threads", type=int, default=1)

    with_file("info", "vertex/edge counts, components and cycle rank")
    with_file("balance", "balance classification with witnesses")
    with_file("canonical", "spanning-forest canonical form")
    sp = sub.add_parser("equiv", help="switching equivalence of two signatures")
    sp.add_argument("file1")
    sp.add_argument("file2")
    sp = with_file("classes", "number of switching classes")
    sp.add_argument("--brute", action="store_true", help="cross-check by enumeration (at most 16 edges)")

    sp = with_file("solve", "winner under optimal play")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)
    game_flags(sp)
    for name in ("table", "chi"):
        sp = with_file(name, "win table" if name == "table" else "circular game chromatic number estimate")
        sp.add_argument("--pmax", type=int, required=True)
        sp.add_argument("--dmax", type=int, required=True)
        sp.add_argument("--json", action="store_true")
        game_flags(sp)

    sp = sub.add_parser("gen", help="generate a signed graph")
    sp.add_argument("family", choices=("path", "cycle", "complete", "complete_bipartite", "random_tree"))
    sp.add_argument("sizes", type=int, nargs="+")
    sp.add_argument("--sign", default="all+", help="all+, all-, random or a +/- pattern")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("-o", "--output")

    sp = sub.add_parser("audit", help="run claim audits")
    sp.add_argument("--suite", action="append", help=f"one of: {', '.join(audit_mod.SUITES)} (repeatable; default all)")
    sp.add_argument("--nmax", type=int, default=5)
    sp.add_argument("--dmax", type=int, default=3)
    sp.add_argument("--ratio", type=int, default=4, help="largest p/d tested")
    sp.add_argument("--pmax", type=int, default=None)
    sp.add_argument("--rules", choices=(MOVER_STUCK, DEAD_VERTEX), default=MOVER_STUCK)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")
    sp.add_argument("--threads", type=int, default=1)
    sp.add_argument("--timestamps", action="store_true", help="add runtime and timestamp (breaks byte-identical reruns)")

    sp = with_file("play", "play against the engine")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--as", dest="as_", choices=PLAYERS, default=SALOME)
    game_flags(sp, threads=False)
    return ap


COMMANDS = {
    "info": cmd_info,
    "balance": cmd_balance,
    "canonical": cmd_canonical,
    "equiv": cmd_equiv,
    "classes": cmd_classes,
    "solve": cmd_solve,
    "table": cmd_table,
    "chi": cmd_chi,
    "gen": cmd_gen,
    "audit": cmd_audit,
}


def main(argv: Sequence[str] | None = None, out: TextIO | None = None, stdin: TextIO | None = None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        if args.command == "play":
            return cmd_play(args, out, stdin or sys.stdin)
        return COMMANDS[args.command](args, out) or 0
    except (UsageError, GraphFormatError, GraphError, BoundError, OSError) as exc:
        print(f"sgcgame {args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
