"""Command-line interface.

Every command prints ``key: value`` records, one per line.  Exit status:
0 success / proven / ok, 1 refuted / not unique / verification failure,
2 inconclusive / unknown, 3 usage or parse error.
"""

from __future__ import annotations

import argparse
import os
import sys

from .board import BoardParams, Grid, cell_of, is_sudoku_grid
from .parser import ParseError, parse_formula, parse_prop_set
from .proof import ProofError, deduction_transform, format_proof, is_axiom, map_proof, parse_proof, verify
from .semantics import Entailment, entails
from .solver import Uniqueness, enumerate_solutions, unique_solution
from .transform import (
    NotAutomorphism,
    apply,
    automorphisms_of,
    essentially_different_census,
    gurth_eliminate,
    normal_form,
    parse_transform,
)

OK, REFUTED, INCONCLUSIVE, USAGE = 0, 1, 2, 3

EPILOG = """\
output records (one per line):
  solve         solution: <grid> ... count: N, exhausted: true|false
  unique        verdict: UNIQUE (hence deducible) | MULTIPLE | NONE
  entails       verdict: PROVEN | REFUTED | INCONCLUSIVE, nodes: N, counterexample: <grid>
  transform     grid: <grid>
  normal-form   transform, cell_map (image of each cell, row-major), relabel
  automorphisms count: N, automorphism: <chain>
  census        orbits, group_order, orbit_sizes, representative
  verify        verdict: OK | FAIL, step, reason
  deduce/map-proof  the resulting proof script
  gurth         count: N, elimination: rIcJ !~ d
  axiom         verdict: AXIOM | NOT_AXIOM | UNKNOWN, reason
grids print as puzzle strings when full, else as candidate rows joined by ' / '.
exit status: 0 ok/proven, 1 refuted/not unique/invalid, 2 inconclusive/unknown, 3 usage error.
"""


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        sys.exit(USAGE)


def _read(arg: str) -> str:
    """A file's contents, or the argument itself when it names no file."""
    if arg == "-":
        return sys.stdin.read()
    if os.path.isfile(arg):
        with open(arg) as fh:
            return fh.read()
    return arg


def _board(args) -> BoardParams:
    return BoardParams.from_name(args.board or "b3")


def _grid(args, text: str) -> Grid:
    try:
        grid = Grid.parse(_read(text))
    except ValueError as exc:
        raise UsageError(f"cannot read grid: {exc}") from None
    if args.board and grid.params.name != args.board:
        raise UsageError(f"grid is {grid.params.name} but --board is {args.board}")
    return grid


def _chain(text: str):
    try:
        return parse_transform(_read(text))
    except ValueError as exc:
        raise UsageError(f"cannot read transformation: {exc}") from None


def _emit(key, value):
    print(f"{key}: {value}")


def cmd_solve(args) -> int:
    grid = _grid(args, args.grid)
    cap = args.cap if args.cap is not None else (None if args.all else 1)
    res = enumerate_solutions(grid, cap_solutions=cap)
    for s in res.solutions:
        _emit("solution", s.to_puzzle())
    _emit("count", len(res.solutions))
    _emit("exhausted", str(res.exhausted).lower())
    if not res.solutions:
        print("error: the grid has no solution", file=sys.stderr)
        return REFUTED
    return OK


def cmd_unique(args) -> int:
    res = unique_solution(_grid(args, args.grid))
    if res.kind is Uniqueness.UNIQUE:
        _emit("verdict", "UNIQUE (hence deducible)")
        _emit("solution", res.solution.to_puzzle())
        return OK
    if res.kind is Uniqueness.MULTIPLE:
        _emit("verdict", "MULTIPLE")
        for s in res.solutions:
            _emit("solution", s.to_puzzle())
    else:
        _emit("verdict", "NONE")
    return REFUTED


def _props(args, text):
    try:
        return parse_prop_set(_read(text), _board(args))
    except ParseError as exc:
        raise UsageError(f"cannot read propositions: {exc}") from None


def cmd_entails(args) -> int:
    params = _board(args)
    premises = _props(args, args.premises)
    conclusions = _props(args, args.conclusions)
    v = entails(premises, conclusions, params, budget=args.budget)
    _emit("verdict", v.kind.name)
    _emit("nodes", v.nodes)
    if v.counterexample is not None:
        _emit("counterexample", v.counterexample.to_puzzle())
    return {Entailment.PROVEN: OK, Entailment.REFUTED: REFUTED, Entailment.INCONCLUSIVE: INCONCLUSIVE}[v.kind]


def cmd_transform(args) -> int:
    grid = _grid(args, args.grid)
    t = _chain(args.chain)
    try:
        out = apply(t, grid)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit("grid", out.to_line())
    return OK


def cmd_normal_form(args) -> int:
    params = _board(args)
    t = _chain(args.chain)
    try:
        nf = normal_form(t, params)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit("transform", str(t))
    _emit("cell_map", " ".join(str(cell_of(q, params)) for q in nf.cell_map))
    _emit("relabel", ",".join(map(str, nf.relabel)))
    return OK


def cmd_automorphisms(args) -> int:
    grid = _grid(args, args.grid)
    if not (grid.is_full and is_sudoku_grid(grid)):
        raise UsageError("automorphisms needs a full Sudoku grid")
    auts = automorphisms_of(grid, jobs=args.jobs)
    _emit("count", len(auts))
    for nf in auts:
        _emit("automorphism", str(nf.source) if nf.source is not None and nf.source.steps else "id")
    return OK


def cmd_census(args) -> int:
    params = BoardParams(args.b)
    if args.board and args.board != params.name:
        raise UsageError("--board conflicts with --b")
    try:
        c = essentially_different_census(params)
    except NotImplementedError as exc:
        raise UsageError(str(exc)) from None
    _emit("orbits", c.orbit_count)
    _emit("group_order", c.group_order)
    _emit("orbit_sizes", " ".join(map(str, c.orbit_sizes)))
    for g in c.representatives:
        _emit("representative", g.to_puzzle())
    return OK


def _proof(args):
    try:
        pr = parse_proof(_read(args.proof), BoardParams.from_name(args.board) if args.board else None)
    except ProofError as exc:
        raise UsageError(f"cannot read proof: {exc}") from None
    if args.board and pr.params.name != args.board:
        raise UsageError(f"proof is for {pr.params.name} but --board is {args.board}")
    return pr


def cmd_verify(args) -> int:
    pr = _proof(args)
    res = verify(pr, mode=args.mode, seed=args.seed)
    if res.ok:
        _emit("verdict", "OK")
        _emit("steps", len(pr))
        return OK
    _emit("verdict", "FAIL")
    _emit("step", res.step)
    _emit("reason", res.reason)
    return INCONCLUSIVE if res.unknown else REFUTED


def cmd_deduce(args) -> int:
    pr = _proof(args)
    try:
        alpha = parse_formula(_read(args.alpha), pr.params)
    except ParseError as exc:
        raise UsageError(f"cannot read alpha: {exc}") from None
    try:
        out = deduction_transform(pr, alpha, mode=args.mode)
    except ProofError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return REFUTED
    sys.stdout.write(format_proof(out))
    return OK


def cmd_map_proof(args) -> int:
    pr = _proof(args)
    t = _chain(args.chain)
    try:
        out = map_proof(t, pr, mode=args.mode)
    except ProofError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return REFUTED
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    sys.stdout.write(format_proof(out))
    return OK


def cmd_gurth(args) -> int:
    grid = _grid(args, args.grid)
    t = _chain(args.chain)
    try:
        elims = gurth_eliminate(grid, t)
    except NotAutomorphism as exc:
        raise UsageError(str(exc)) from None
    _emit("count", len(elims))
    for cell, d in elims:
        _emit("elimination", f"{cell} !~ {d}")
    return OK


def cmd_axiom(args) -> int:
    params = _board(args)
    try:
        f = parse_formula(_read(args.formula), params)
    except ParseError as exc:
        raise UsageError(f"cannot read formula: {exc}") from None
    v = is_axiom(f, params, args.mode, budget=args.budget, seed=args.seed)
    _emit("verdict", v.kind.name)
    _emit("reason", v.reason)
    if v.witness is not None:
        _emit("witness", v.witness.to_puzzle())
    return {"IS_AXIOM": OK, "NOT_AXIOM": REFUTED}.get(v.kind.name, INCONCLUSIVE)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--board", choices=("b2", "b3"), default=None,
                        help="board size; grids infer it from their length, formulas default to b3")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized paths")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for search")

    p = _Parser(prog="sudoku-logic", description=__doc__.splitlines()[0], epilog=EPILOG,
                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_, parents=[common])
        sp.set_defaults(fn=fn)
        return sp

    sp = add("solve", cmd_solve, "enumerate solutions of a grid")
    sp.add_argument("grid", help="puzzle string, grid text, or a file holding either")
    sp.add_argument("--all", action="store_true", help="enumerate every solution")
    sp.add_argument("--cap", type=int, default=None, help="stop after N solutions")

    sp = add("unique", cmd_unique, "decide whether a grid has exactly one solution")
    sp.add_argument("grid")

    sp = add("entails", cmd_entails, "decide premises |= conclusions for proposition sets")
    sp.add_argument("--premises", required=True, help="file or inline list of 'rIcJ !~ d'")
    sp.add_argument("--conclusions", required=True)
    sp.add_argument("--budget", type=int, default=None, help="search node budget")

    sp = add("transform", cmd_transform, "apply a transformation chain to a grid")
    sp.add_argument("--chain", required=True)
    sp.add_argument("grid")

    sp = add("normal-form", cmd_normal_form, "reduce a chain to cell map plus relabelling")
    sp.add_argument("--chain", required=True)

    sp = add("automorphisms", cmd_automorphisms, "list automorphisms of a full grid")
    sp.add_argument("grid")

    sp = add("census", cmd_census, "count essentially different full grids")
    sp.add_argument("--b", type=int, default=2, help="box size (only 2 is feasible)")

    for name, fn, help_ in (("verify", cmd_verify, "check a proof script"),
                            ("deduce", cmd_deduce, "apply the deduction theorem to a proof"),
                            ("map-proof", cmd_map_proof, "transport a proof along a transformation")):
        sp = add(name, fn, help_)
        sp.add_argument("--proof", required=True)
        sp.add_argument("--mode", choices=("exhaustive", "conservative"), default="conservative")
        if name == "deduce":
            sp.add_argument("--alpha", required=True)
        if name == "map-proof":
            sp.add_argument("--chain", required=True)

    sp = add("gurth", cmd_gurth, "eliminations from an automorphism of a uniquely solvable puzzle")
    sp.add_argument("--grid", required=True)
    sp.add_argument("--chain", required=True)

    sp = add("axiom", cmd_axiom, "classify a formula as a Sudoku axiom")
    sp.add_argument("formula")
    sp.add_argument("--mode", choices=("exhaustive", "conservative"), default="conservative")
    sp.add_argument("--budget", type=int, default=64)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
