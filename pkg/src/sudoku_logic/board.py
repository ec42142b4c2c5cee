"""Board geometry and candidate grids.

Candidate sets are stored as bitmasks: bit ``d - 1`` is set when digit ``d``
is still possible in the cell.  Cells are addressed either by a
:class:`Cell` (1-based row/column) or by a 0-based row-major position.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cache
from typing import Iterable, Iterator, NamedTuple


class Contradiction(Exception):
    """Raised when elimination empties a candidate set."""


@dataclass(frozen=True)
class BoardParams:
    box_size: int = 3

    def __post_init__(self):
        if self.box_size not in (2, 3):
            raise ValueError(f"box_size must be 2 or 3, got {self.box_size}")

    @property
    def side(self) -> int:
        return self.box_size * self.box_size

    @property
    def n_cells(self) -> int:
        return self.side * self.side

    @property
    def digits(self) -> range:
        return range(1, self.side + 1)

    @property
    def full_mask(self) -> int:
        return (1 << self.side) - 1

    @property
    def name(self) -> str:
        return f"b{self.box_size}"

    @classmethod
    def from_name(cls, name: str) -> "BoardParams":
        if name not in ("b2", "b3"):
            raise ValueError(f"unknown board {name!r} (expected b2 or b3)")
        return cls(int(name[1]))

    @classmethod
    def for_side(cls, side: int) -> "BoardParams":
        for b in (2, 3):
            if b * b == side:
                return cls(b)
        raise ValueError(f"no board with side {side}")


B2 = BoardParams(2)
B3 = BoardParams(3)


class Cell(NamedTuple):
    row: int
    col: int

    def __str__(self):
        return f"r{self.row}c{self.col}"


class Prop(NamedTuple):
    """The Sudoku proposition ``r{row}c{col} !~ digit`` (the cell cannot hold ``digit``)."""

    cell: Cell
    digit: int

    @property
    def row(self) -> int:
        return self.cell.row

    @property
    def col(self) -> int:
        return self.cell.col

    def __str__(self):
        return f"{self.cell} !~ {self.digit}"


def bit(d: int) -> int:
    return 1 << (d - 1)


def mask_digits(mask: int) -> list[int]:
    out = []
    d = 1
    while mask:
        if mask & 1:
            out.append(d)
        mask >>= 1
        d += 1
    return out


def is_single(mask: int) -> bool:
    return mask != 0 and mask & (mask - 1) == 0


def check_cell(cell: Cell, params: BoardParams) -> Cell:
    n = params.side
    if not (1 <= cell.row <= n and 1 <= cell.col <= n):
        raise ValueError(f"cell {cell} outside a {n}x{n} board")
    return cell


def check_digit(d: int, params: BoardParams) -> int:
    if not 1 <= d <= params.side:
        raise ValueError(f"digit {d} outside 1..{params.side}")
    return d


def pos_of(cell: Cell, params: BoardParams) -> int:
    return (cell.row - 1) * params.side + (cell.col - 1)


def cell_of(pos: int, params: BoardParams) -> Cell:
    r, c = divmod(pos, params.side)
    return Cell(r + 1, c + 1)


def box_index(cell: Cell, params: BoardParams) -> int:
    """Row-major box number, 1 at the top-left."""
    check_cell(cell, params)
    b = params.box_size
    return b * ((cell.row - 1) // b) + (cell.col - 1) // b + 1


@dataclass(frozen=True)
class Geometry:
    units: tuple[tuple[int, ...], ...]  # rows, then columns, then boxes
    peers: tuple[tuple[int, ...], ...]


@cache
def geometry(params: BoardParams) -> Geometry:
    n, b = params.side, params.box_size
    rows = [tuple(r * n + c for c in range(n)) for r in range(n)]
    cols = [tuple(r * n + c for r in range(n)) for c in range(n)]
    boxes = []
    for br in range(b):
        for bc in range(b):
            boxes.append(tuple((br * b + i) * n + bc * b + j for i in range(b) for j in range(b)))
    units = tuple(rows + cols + boxes)
    peer_sets = [set() for _ in range(n * n)]
    for unit in units:
        for p in unit:
            peer_sets[p].update(unit)
    peers = tuple(tuple(sorted(s - {p})) for p, s in enumerate(peer_sets))
    return Geometry(units, peers)


def peers(cell: Cell, params: BoardParams) -> frozenset[Cell]:
    """Cells sharing a row, column or box with ``cell`` (excluding itself)."""
    check_cell(cell, params)
    return frozenset(cell_of(q, params) for q in geometry(params).peers[pos_of(cell, params)])


def all_props(params: BoardParams) -> Iterator[Prop]:
    n = params.side
    for r in range(1, n + 1):
        for c in range(1, n + 1):
            for d in range(1, n + 1):
                yield Prop(Cell(r, c), d)


@dataclass(frozen=True)
class Grid:
    """An n x n matrix of nonempty candidate sets, stored row-major as bitmasks."""

    params: BoardParams
    cells: tuple[int, ...]

    def __post_init__(self):
        if len(self.cells) != self.params.n_cells:
            raise ValueError(f"expected {self.params.n_cells} cells, got {len(self.cells)}")
        full = self.params.full_mask
        for p, m in enumerate(self.cells):
            if m == 0:
                raise ValueError(f"empty candidate set at {cell_of(p, self.params)}")
            if m & ~full:
                raise ValueError(f"digit out of range at {cell_of(p, self.params)}")

    @classmethod
    def full(cls, params: BoardParams = B3) -> "Grid":
        """The grid in which every cell allows every digit."""
        return cls(params, (params.full_mask,) * params.n_cells)

    @classmethod
    def from_sets(cls, rows: Iterable[Iterable[Iterable[int]]], params: BoardParams | None = None) -> "Grid":
        rows = [list(r) for r in rows]
        params = params or BoardParams.for_side(len(rows))
        cells = []
        for row in rows:
            if len(row) != params.side:
                raise ValueError("row length does not match board side")
            for s in row:
                m = 0
                for d in s:
                    m |= bit(check_digit(d, params))
                cells.append(m)
        return cls(params, tuple(cells))

    @classmethod
    def from_values(cls, values: Iterable[int], params: BoardParams) -> "Grid":
        """Build from a row-major sequence where 0 means "any digit"."""
        return cls(params, tuple(params.full_mask if v == 0 else bit(check_digit(v, params)) for v in values))

    @classmethod
    def from_puzzle(cls, text: str, params: BoardParams | None = None) -> "Grid":
        chars = "".join(text.split())
        if params is None:
            params = BoardParams.for_side(_isqrt_exact(len(chars)))
        if len(chars) != params.n_cells:
            raise ValueError(f"puzzle string needs {params.n_cells} characters, got {len(chars)}")
        values = []
        for ch in chars:
            if ch in ".0":
                values.append(0)
            elif ch.isdigit() and 1 <= int(ch) <= params.side:
                values.append(int(ch))
            else:
                raise ValueError(f"bad puzzle character {ch!r}")
        return cls.from_values(values, params)

    @classmethod
    def from_text(cls, text: str, params: BoardParams | None = None) -> "Grid":
        """Parse the candidate-grid text form: one line per row, one token per cell."""
        lines = [ln.split() for ln in text.strip().splitlines() if ln.strip()]
        params = params or BoardParams.for_side(len(lines))
        if len(lines) != params.side:
            raise ValueError(f"expected {params.side} rows, got {len(lines)}")
        return cls.from_sets([[[int(ch) for ch in tok] for tok in line] for line in lines], params)

    @classmethod
    def parse(cls, text: str, params: BoardParams | None = None) -> "Grid":
        """Accept the puzzle string or the candidate-grid text form (rows may be split by '/')."""
        text = "\n".join(ln.split("#", 1)[0] for ln in text.replace("/", "\n").splitlines())
        lines = [ln for ln in text.strip().splitlines() if ln.strip()]
        if any(len(ln.split()) > 1 for ln in lines):
            return cls.from_text(text, params)
        return cls.from_puzzle(text, params)

    def mask(self, cell: Cell) -> int:
        return self.cells[pos_of(cell, self.params)]

    def candidates(self, cell: Cell) -> frozenset[int]:
        return frozenset(mask_digits(self.mask(cell)))

    def value(self, cell: Cell) -> int | None:
        m = self.mask(cell)
        return m.bit_length() if is_single(m) else None

    @property
    def is_full(self) -> bool:
        return all(is_single(m) for m in self.cells)

    def replace(self, cell: Cell, digits: Iterable[int]) -> "Grid":
        m = 0
        for d in digits:
            m |= bit(check_digit(d, self.params))
        cells = list(self.cells)
        cells[pos_of(check_cell(cell, self.params), self.params)] = m
        return Grid(self.params, tuple(cells))

    def to_puzzle(self) -> str:
        """Puzzle string; non-singleton cells are written as '.'."""
        return "".join(str(m.bit_length()) if is_single(m) else "." for m in self.cells)

    def to_text(self) -> str:
        n = self.params.side
        return "\n".join(
            " ".join("".join(map(str, mask_digits(m))) for m in self.cells[r * n:(r + 1) * n])
            for r in range(n)
        )

    def to_line(self) -> str:
        """One-line form: the puzzle string if full, else text rows joined by ' / '."""
        return self.to_puzzle() if self.is_full else self.to_text().replace("\n", " / ")

    def __str__(self):
        return self.to_puzzle() if self.is_full else self.to_text()


def _isqrt_exact(k: int) -> int:
    r = int(round(k ** 0.5))
    if r * r != k:
        raise ValueError(f"puzzle length {k} is not a square board")
    return r


def is_full(grid: Grid) -> bool:
    return grid.is_full


def is_compatible(b_grid: Grid, a_grid: Grid) -> bool:
    """True iff every candidate set of ``b_grid`` is a subset of the matching one in ``a_grid``."""
    if b_grid.params != a_grid.params:
        raise ValueError("grids are on different boards")
    return all(bm & ~am == 0 for bm, am in zip(b_grid.cells, a_grid.cells))


def is_solution(s_grid: Grid, a_grid: Grid) -> bool:
    return s_grid.is_full and is_compatible(s_grid, a_grid)


def is_sudoku_grid(grid: Grid) -> bool:
    """No uniquely determined value occurs among the candidates of any peer."""
    cells = grid.cells
    for p, pe in enumerate(geometry(grid.params).peers):
        m = cells[p]
        if is_single(m):
            for q in pe:
                if cells[q] & m:
                    return False
    return True


def prop_of(grid: Grid) -> frozenset[Prop]:
    params = grid.params
    out = []
    for p, m in enumerate(grid.cells):
        cell = cell_of(p, params)
        for d in params.digits:
            if not m & bit(d):
                out.append(Prop(cell, d))
    return frozenset(out)


def propagate_masks(cells: list[int], params: BoardParams, queue: list[int] | None = None) -> bool:
    """Naked-single elimination in place; returns False on contradiction.

    ``queue`` lists positions whose singleton value still has to be removed
    from the peers; by default every singleton is queued.
    """
    pe = geometry(params).peers
    if queue is None:
        queue = [p for p, m in enumerate(cells) if is_single(m)]
    while queue:
        p = queue.pop()
        v = cells[p]
        for q in pe[p]:
            m = cells[q]
            if m & v:
                m &= ~v
                if m == 0:
                    return False
                cells[q] = m
                if m & (m - 1) == 0:
                    queue.append(q)
    return True


def propagate(grid: Grid) -> Grid:
    """Delete every uniquely determined value from all its peers, to a fixpoint.

    Raises :class:`Contradiction` if some candidate set becomes empty.
    """
    cells = list(grid.cells)
    if not propagate_masks(cells, grid.params):
        raise Contradiction("a candidate set became empty")
    return Grid(grid.params, tuple(cells))
