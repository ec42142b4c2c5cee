"""Satisfaction: grid |= formula, |= formula, and entailment between proposition sets.

Entailment uses the reduction

    Phi |= Psi  iff  every full Sudoku grid S with S |= Phi satisfies Psi.

If S is a full Sudoku grid modelling Phi it is its own solution, which gives
one direction.  Conversely, a solution S of a Sudoku grid A |= Phi satisfies
Prop(A), and Prop(A) contains Phi, so S |= Phi.  The full Sudoku grids that
model a proposition set are exactly the completions of the grid whose cells
hold the digits the set does not exclude, so one bounded search decides it.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from typing import Iterable

from .board import BoardParams, Grid, Prop, bit, is_sudoku_grid, pos_of
from .formula import And, Atom, Formula, Iff, Implies, Not, Or, Top, eval_bits
from .solver import Search, _Stop, all_full_grids, random_full_grid


def models(grid: Grid, formula: Formula) -> bool:
    """``grid |= formula``, by structural recursion over the formula."""
    n = grid.params.side
    cells = grid.cells
    memo: dict[int, bool] = {}

    def ev(f: Formula) -> bool:
        t = type(f)
        if t is Atom:
            r, c = f.prop.cell
            d = f.prop.digit
            if not (1 <= r <= n and 1 <= c <= n and 1 <= d <= n):
                raise ValueError(f"{f.prop} is outside the {n}x{n} board")
            return not (cells[(r - 1) * n + c - 1] >> (d - 1)) & 1
        if t is Not:
            return not ev(f.arg)
        if t is And or t is Or:
            key = id(f)
            if key in memo:
                return memo[key]
            # walk the left spine iteratively; builder chains are very deep
            ops = []
            g = f
            while type(g) is t:
                ops.append(g.right)
                g = g.left
            ops.append(g)
            want = t is Or
            res = not want
            for g in reversed(ops):
                if ev(g) == want:
                    res = want
                    break
            memo[key] = res
            return res
        if t is Implies:
            return not ev(f.left) or ev(f.right)
        if t is Iff:
            return ev(f.left) == ev(f.right)
        return t is Top

    return ev(formula)


def models_all(grid: Grid, formulas: Iterable[Formula]) -> bool:
    return all(models(grid, f) for f in formulas)


class Validity(enum.Enum):
    VALID = "valid"
    INVALID = "invalid"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class ValidityResult:
    kind: Validity
    witness: Grid | None = None  # a full Sudoku grid falsifying the formula


def _batch_eval(formula: Formula, grids: list[Grid]) -> int:
    """Truth value of ``formula`` in each grid, as a bitset over grid indices."""
    params = grids[0].params
    width = (1 << len(grids)) - 1
    cache: dict[Prop, int] = {}

    def atom_bits(p: Prop) -> int:
        v = cache.get(p)
        if v is None:
            pos, b = pos_of(p.cell, params), bit(p.digit)
            v = 0
            for k, g in enumerate(grids):
                if not g.cells[pos] & b:
                    v |= 1 << k
            cache[p] = v
        return v

    return eval_bits(formula, atom_bits, width)


def valid_in_all_full(formula: Formula, params: BoardParams, budget: int = 1000, seed=0) -> ValidityResult:
    """Does ``formula`` hold in every full Sudoku grid?

    On the 4x4 board the answer is exact (all 288 grids).  On 9x9, ``budget``
    random full grids are tried; no falsification gives ``UNKNOWN``.
    """
    if params.box_size == 2:
        grids = list(all_full_grids(params))
    else:
        rng = random.Random(seed)
        grids = [random_full_grid(params, rng) for _ in range(budget)]
        if not grids:
            return ValidityResult(Validity.UNKNOWN)
    truth = _batch_eval(formula, grids)
    full = (1 << len(grids)) - 1
    if truth == full:
        return ValidityResult(Validity.VALID if params.box_size == 2 else Validity.UNKNOWN)
    bad = ((full & ~truth) & -(full & ~truth)).bit_length() - 1
    return ValidityResult(Validity.INVALID, grids[bad])


class Entailment(enum.Enum):
    PROVEN = "proven"
    REFUTED = "refuted"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class EntailmentVerdict:
    kind: Entailment
    counterexample: Grid | None = None
    nodes: int = 0


def constraint_grid(premises: Iterable[Prop], params: BoardParams) -> list[int] | None:
    """Cell masks of the grid allowing exactly what ``premises`` do not exclude.

    Returns None when some cell has every digit excluded.
    """
    cells = [params.full_mask] * params.n_cells
    for p in premises:
        _check_prop(p, params)
        cells[pos_of(p.cell, params)] &= ~bit(p.digit)
    if any(m == 0 for m in cells):
        return None
    return cells


def _check_prop(p: Prop, params: BoardParams):
    n = params.side
    if not (1 <= p.row <= n and 1 <= p.col <= n and 1 <= p.digit <= n):
        raise ValueError(f"{p} is outside the {n}x{n} board")


def entails(premises: Iterable[Prop], conclusions: Iterable[Prop], params: BoardParams, budget: int | None = None) -> EntailmentVerdict:
    """Decide ``premises |= conclusions`` by searching for a counterexample.

    A counterexample to ``rIcJ !~ d`` is a full Sudoku grid modelling the
    premises with ``d`` in ``rIcJ``; each conclusion gets its own search on
    the constraint grid with that cell fixed to ``d``.  ``budget`` caps the
    total number of search nodes; running out without a counterexample
    gives ``INCONCLUSIVE``.  Premises that empty a cell are modelled by no
    grid, so the entailment then holds vacuously.
    """
    conclusions = sorted(set(conclusions))
    for p in conclusions:
        _check_prop(p, params)
    base = constraint_grid(premises, params)
    if base is None:
        return EntailmentVerdict(Entailment.PROVEN)
    nodes = 0
    for p in conclusions:
        pos, b = pos_of(p.cell, params), bit(p.digit)
        if not base[pos] & b:
            continue
        cells = list(base)
        cells[pos] = b
        remaining = None if budget is None else budget - nodes
        if remaining is not None and remaining <= 0:
            return EntailmentVerdict(Entailment.INCONCLUSIVE, nodes=nodes)
        found: list[Grid] = []

        def first(masks):
            found.append(Grid(params, tuple(masks)))
            raise _Stop

        search = Search(params, remaining)
        exhausted = search.run(cells, first)
        nodes += search.nodes
        if found:
            return EntailmentVerdict(Entailment.REFUTED, found[0], nodes)
        if not exhausted:
            return EntailmentVerdict(Entailment.INCONCLUSIVE, nodes=nodes)
    return EntailmentVerdict(Entailment.PROVEN, nodes=nodes)


def in_theory(full_grid: Grid, formula: Formula) -> bool:
    """Membership of ``formula`` in the theory of a full Sudoku grid."""
    if not (full_grid.is_full and is_sudoku_grid(full_grid)):
        raise ValueError("the theory is only defined for full Sudoku grids")
    return models(full_grid, formula)


def full_grid_models_props(grid: Grid, props: Iterable[Prop]) -> bool:
    params = grid.params
    return all(not grid.cells[pos_of(p.cell, params)] & bit(p.digit) for p in props)

