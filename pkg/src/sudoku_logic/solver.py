"""Enumeration of full Sudoku completions.

Depth-first search with naked-single propagation at every node, branching
on the first undetermined cell of minimum candidate count, digits in
ascending order (or shuffled, for random generation).
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from functools import cache

from .board import (
    B2,
    BoardParams,
    Cell,
    Grid,
    bit,
    geometry,
    mask_digits,
    pos_of,
    propagate_masks,
)


class _NodeLimit(Exception):
    pass


class _Stop(Exception):
    pass


@dataclass
class EnumerationResult:
    solutions: list[Grid]
    exhausted: bool
    nodes: int


class Search:
    """One bounded search over the completions of a candidate grid."""

    def __init__(self, params: BoardParams, max_nodes: int | None = None, rng: random.Random | None = None):
        self.params = params
        self.max_nodes = max_nodes
        self.rng = rng
        self.nodes = 0
        self._peers = geometry(params).peers

    def run(self, cells: list[int], on_solution) -> bool:
        """Explore all completions; returns True iff the space was exhausted.

        ``on_solution(masks)`` may raise :class:`_Stop` to end the search early.
        """
        cells = list(cells)
        if not propagate_masks(cells, self.params):
            return True
        try:
            self._dfs(cells, on_solution)
        except (_NodeLimit, _Stop):
            return False
        return True

    def _dfs(self, cells: list[int], on_solution):
        self.nodes += 1
        if self.max_nodes is not None and self.nodes > self.max_nodes:
            raise _NodeLimit
        best = -1
        best_count = 99
        for p, m in enumerate(cells):
            if m & (m - 1):
                k = m.bit_count()
                if k < best_count:
                    best, best_count = p, k
                    if k == 2:
                        break
        if best < 0:
            on_solution(cells)
            return
        digits = mask_digits(cells[best])
        if self.rng is not None:
            self.rng.shuffle(digits)
        for d in digits:
            child = list(cells)
            child[best] = bit(d)
            if propagate_masks(child, self.params, [best]):
                self._dfs(child, on_solution)


def enumerate_solutions(grid: Grid, cap_solutions: int | None = None, cap_nodes: int | None = None) -> EnumerationResult:
    """All full Sudoku grids compatible with ``grid``, up to the given caps."""
    found: list[Grid] = []
    params = grid.params

    def collect(cells):
        found.append(Grid(params, tuple(cells)))
        if cap_solutions is not None and len(found) >= cap_solutions:
            raise _Stop

    search = Search(params, cap_nodes)
    exhausted = search.run(list(grid.cells), collect)
    return EnumerationResult(found, exhausted, search.nodes)


def count_solutions(grid: Grid, cap: int | None = None) -> tuple[int, bool]:
    count = 0

    def tally(cells):
        nonlocal count
        count += 1
        if cap is not None and count >= cap:
            raise _Stop

    exhausted = Search(grid.params).run(list(grid.cells), tally)
    return count, exhausted


class Uniqueness(enum.Enum):
    NONE = "none"
    UNIQUE = "unique"
    MULTIPLE = "multiple"


@dataclass
class UniqueResult:
    kind: Uniqueness
    solutions: list[Grid] = field(default_factory=list)

    @property
    def solution(self) -> Grid | None:
        return self.solutions[0] if self.kind is Uniqueness.UNIQUE else None


def unique_solution(grid: Grid) -> UniqueResult:
    """Classify ``grid`` by its number of solutions, stopping at two."""
    res = enumerate_solutions(grid, cap_solutions=2)
    if not res.solutions:
        return UniqueResult(Uniqueness.NONE)
    if len(res.solutions) == 1:
        return UniqueResult(Uniqueness.UNIQUE, res.solutions)
    return UniqueResult(Uniqueness.MULTIPLE, res.solutions)


def has_deducible_solution(grid: Grid) -> bool:
    """A grid has a logically deducible solution exactly when its solution is unique.

    Deducibility implies uniqueness by soundness, and the converse follows
    from completeness; the check is therefore the uniqueness decision.
    """
    return unique_solution(grid).kind is Uniqueness.UNIQUE


def random_full_grid(params: BoardParams, seed=None, grid: Grid | None = None) -> Grid:
    """A random full Sudoku grid, optionally a completion of ``grid``.

    ``seed`` may be an int or a :class:`random.Random`.  Raises ``ValueError``
    if ``grid`` has no completion.
    """
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    start = grid.cells if grid is not None else (params.full_mask,) * params.n_cells
    out: list[Grid] = []

    def first(cells):
        out.append(Grid(params, tuple(cells)))
        raise _Stop

    Search(params, rng=rng).run(list(start), first)
    if not out:
        raise ValueError("grid has no solution")
    return out[0]


@cache
def all_full_grids(params: BoardParams = B2) -> tuple[Grid, ...]:
    """Every full Sudoku grid on the board (b=2 only: there are 288)."""
    if params.box_size != 2:
        raise NotImplementedError("full-grid enumeration is only feasible for b=2")
    res = enumerate_solutions(Grid.full(params))
    assert res.exhausted
    return tuple(res.solutions)


def grid_with(grid: Grid, cell: Cell, digits) -> Grid | None:
    """``grid`` with the candidates of ``cell`` restricted to ``digits``, or None if that empties it."""
    m = 0
    for d in digits:
        m |= bit(d)
    cells = list(grid.cells)
    p = pos_of(cell, grid.params)
    cells[p] &= m
    if cells[p] == 0:
        return None
    return Grid(grid.params, tuple(cells))

