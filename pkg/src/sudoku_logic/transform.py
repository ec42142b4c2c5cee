"""Sudoku transformations: geometric moves, shuffles, relabellings.

A :class:`Transform` is a chain of elementary transformations composed like
functions, so ``Transform((t1, t2))`` applies ``t2`` first.  Every chain
reduces to a :class:`NormalForm`: a permutation of board positions and a
permutation of digits, which commute.

Position maps point forward: ``cell_map[p]`` is where the content of
position ``p`` ends up.  A shuffle with payload ``f`` builds
``B[i][j] = A[f(i)][j]``, so its forward map sends row ``f(i)`` to row ``i``.
"""

from __future__ import annotations

import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import permutations, product
from math import factorial

from .board import (
    BoardParams,
    Cell,
    Grid,
    Prop,
    bit,
    cell_of,
    geometry,
    is_single,
    is_sudoku_grid,
    mask_digits,
    pos_of,
    propagate_masks,
)
from .formula import Formula, map_atoms
from .solver import all_full_grids

GEOMETRIC = ("id", "delta", "chi", "chibar", "deltabar", "rot90", "rot180", "rot270")
_PERM_KINDS = ("rowshuffle", "colshuffle", "relabel")
_ALIASES = {
    "transpose": "delta",
    "reflect_main": "delta",
    "reflect_h": "chi",
    "reflect_v": "chibar",
    "reflect_anti": "deltabar",
    "rho1": "rot90",
    "rho2": "rot180",
    "rho3": "rot270",
}
_INVERSE_GEOM = {"rot90": "rot270", "rot270": "rot90"}


class NotAutomorphism(ValueError):
    pass


def respects_partition(f: tuple[int, ...], box_size: int) -> bool:
    """Does the bijection ``f`` (images of 1..n) keep the blocks of size ``box_size`` together?"""
    n = len(f)
    if sorted(f) != list(range(1, n + 1)) or n != box_size * box_size:
        return False
    block_of = [(v - 1) // box_size for v in f]
    for blk in range(box_size):
        images = {block_of[i] for i in range(blk * box_size, (blk + 1) * box_size)}
        if len(images) != 1:
            return False
    return len({block_of[i * box_size] for i in range(box_size)}) == box_size


def _invert(f: tuple[int, ...]) -> tuple[int, ...]:
    inv = [0] * len(f)
    for i, v in enumerate(f, 1):
        inv[v - 1] = i
    return tuple(inv)


@dataclass(frozen=True)
class Elementary:
    kind: str
    perm: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.kind in GEOMETRIC:
            if self.perm is not None:
                raise ValueError(f"{self.kind} takes no payload")
        elif self.kind in _PERM_KINDS:
            f = tuple(self.perm or ())
            object.__setattr__(self, "perm", f)
            n = len(f)
            if sorted(f) != list(range(1, n + 1)) or n not in (4, 9):
                raise ValueError(f"{self.kind} needs a permutation of 1..4 or 1..9, got {f}")
            if self.kind != "relabel" and not respects_partition(f, 2 if n == 4 else 3):
                raise ValueError(f"{self.kind}{f} does not respect the block partition")
        else:
            raise ValueError(f"unknown transformation {self.kind!r}")

    @property
    def moves_cells(self) -> bool:
        return self.kind not in ("id", "relabel")

    def inverse(self) -> "Elementary":
        if self.perm is not None:
            return Elementary(self.kind, _invert(self.perm))
        return Elementary(_INVERSE_GEOM.get(self.kind, self.kind))

    def position_map(self, n: int):
        """Forward map on 0-based (row, col)."""
        k = self.kind
        m = n - 1
        if k in ("id", "relabel"):
            return lambda r, c: (r, c)
        if k == "delta":
            return lambda r, c: (c, r)
        if k == "chi":
            return lambda r, c: (m - r, c)
        if k == "chibar":
            return lambda r, c: (r, m - c)
        if k == "deltabar":
            return lambda r, c: (m - c, m - r)
        if k == "rot90":
            return lambda r, c: (c, m - r)
        if k == "rot180":
            return lambda r, c: (m - r, m - c)
        if k == "rot270":
            return lambda r, c: (m - c, r)
        if len(self.perm) != n:
            raise ValueError(f"{self} does not fit a {n}x{n} board")
        inv = _invert(self.perm)
        if k == "rowshuffle":
            return lambda r, c: (inv[r] - 1, c)
        return lambda r, c: (r, inv[c] - 1)

    def __str__(self):
        if self.perm is None:
            return self.kind
        return f"{self.kind}({','.join(map(str, self.perm))})"


def row_shuffle(f) -> Elementary:
    return Elementary("rowshuffle", tuple(f))


def col_shuffle(f) -> Elementary:
    return Elementary("colshuffle", tuple(f))


def relabel(f) -> Elementary:
    return Elementary("relabel", tuple(f))


@dataclass(frozen=True)
class Transform:
    steps: tuple[Elementary, ...] = ()

    def __mul__(self, other: "Transform") -> "Transform":
        return compose(self, other)

    def __str__(self):
        return " * ".join(map(str, self.steps)) or "id"

    @property
    def has_relabel(self) -> bool:
        return any(s.kind == "relabel" for s in self.steps)

    @property
    def is_geometric(self) -> bool:
        return all(s.kind in GEOMETRIC for s in self.steps)


def chain(*steps) -> Transform:
    """Build a transform from elementary steps or names such as ``"rot90"``."""
    out = []
    for s in steps:
        if isinstance(s, Transform):
            out.extend(s.steps)
        elif isinstance(s, Elementary):
            out.append(s)
        else:
            out.append(Elementary(_ALIASES.get(s, s)))
    return Transform(tuple(out))


IDENTITY = Transform()

_STEP = re.compile(r"\s*([a-z_0-9]+)\s*(?:\(([^)]*)\))?\s*$")


def parse_transform(text: str) -> Transform:
    """Parse ``rot90 * rowshuffle(2,1,3,4,5,6,7,8,9) * relabel(...)``."""
    steps = []
    for part in text.split("*"):
        m = _STEP.match(part)
        if not m:
            raise ValueError(f"cannot parse transformation step {part.strip()!r}")
        name, args = m.group(1), m.group(2)
        name = _ALIASES.get(name, name)
        if args is None:
            steps.append(Elementary(name))
        else:
            steps.append(Elementary(name, tuple(int(a) for a in args.split(","))))
    return Transform(tuple(steps))


def compose(t1: Transform, t2: Transform) -> Transform:
    """``t1 o t2``: apply ``t2`` first."""
    return Transform(t1.steps + t2.steps)


def inverse(t: Transform) -> Transform:
    return Transform(tuple(s.inverse() for s in reversed(t.steps)))


@dataclass(frozen=True)
class NormalForm:
    """A cell permutation and a digit relabelling (the two commute)."""

    params: BoardParams
    cell_map: tuple[int, ...]
    relabel: tuple[int, ...]
    source: Transform | None = field(default=None, compare=False)

    @property
    def inverse_map(self) -> tuple[int, ...]:
        inv = [0] * len(self.cell_map)
        for p, q in enumerate(self.cell_map):
            inv[q] = p
        return tuple(inv)

    @property
    def is_identity(self) -> bool:
        return self.cell_map == tuple(range(len(self.cell_map))) and self.relabel == tuple(range(1, len(self.relabel) + 1))

    def map_cell(self, cell: Cell) -> Cell:
        return cell_of(self.cell_map[pos_of(cell, self.params)], self.params)

    def map_prop(self, p: Prop) -> Prop:
        return Prop(self.map_cell(p.cell), self.relabel[p.digit - 1])

    def relabel_mask(self, m: int) -> int:
        out = 0
        for d in mask_digits(m):
            out |= bit(self.relabel[d - 1])
        return out

    def apply(self, grid: Grid) -> Grid:
        if grid.params != self.params:
            raise ValueError("grid is on a different board")
        out = [0] * len(grid.cells)
        lab = self.relabel
        for p, m in enumerate(grid.cells):
            v = 0
            d = 1
            while m:
                if m & 1:
                    v |= 1 << (lab[d - 1] - 1)
                m >>= 1
                d += 1
            out[self.cell_map[p]] = v
        return Grid(grid.params, tuple(out))

    def compose(self, other: "NormalForm") -> "NormalForm":
        """``self o other``."""
        cm = tuple(self.cell_map[q] for q in other.cell_map)
        lab = tuple(self.relabel[d - 1] for d in other.relabel)
        return NormalForm(self.params, cm, lab)

    def __str__(self):
        if self.source is not None:
            return str(self.source)
        return f"cells{self.cell_map} relabel{self.relabel}"


def normal_form(transform: Transform, params: BoardParams) -> NormalForm:
    """Collapse a chain into one position permutation and one digit permutation."""
    n = params.side
    cell_map = list(range(n * n))
    lab = list(range(1, n + 1))
    for step in reversed(transform.steps):
        if step.kind == "relabel":
            if len(step.perm) != n:
                raise ValueError(f"{step} does not fit a {n}x{n} board")
            lab = [step.perm[d - 1] for d in lab]
        elif step.kind != "id":
            move = step.position_map(n)
            new = []
            for q in cell_map:
                r, c = move(*divmod(q, n))
                new.append(r * n + c)
            cell_map = new
    return NormalForm(params, tuple(cell_map), tuple(lab), transform)


def apply(transform: Transform, grid: Grid) -> Grid:
    return normal_form(transform, grid.params).apply(grid)


def apply_to_cell(transform: Transform, cell: Cell, params: BoardParams) -> Cell:
    """Where a cell transformation moves ``cell``."""
    if transform.has_relabel:
        raise ValueError("apply_to_cell needs a cell transformation (no relabelling)")
    return normal_form(transform, params).map_cell(cell)


def apply_to_formula(transform: Transform | NormalForm, formula: Formula, params: BoardParams) -> Formula:
    nf = transform if isinstance(transform, NormalForm) else normal_form(transform, params)
    return map_atoms(formula, nf.map_prop)


def apply_to_props(transform: Transform | NormalForm, props, params: BoardParams) -> frozenset[Prop]:
    nf = transform if isinstance(transform, NormalForm) else normal_form(transform, params)
    return frozenset(nf.map_prop(p) for p in props)


def is_automorphism(transform: Transform | NormalForm, grid: Grid) -> bool:
    nf = transform if isinstance(transform, NormalForm) else normal_form(transform, grid.params)
    return nf.apply(grid) == grid


# enumeration of the transformation group ----------------------------------

def block_bijections(box_size: int) -> list[tuple[int, ...]]:
    """All bijections of 1..n that respect the block partition, sorted."""
    b = box_size
    out = []
    for blocks in permutations(range(b)):
        for inner in product(permutations(range(b)), repeat=b):
            f = []
            for i in range(b):
                for j in range(b):
                    f.append(blocks[i] * b + inner[i][j] + 1)
            out.append(tuple(f))
    return sorted(out)


def cell_group_order(params: BoardParams) -> int:
    b = params.box_size
    return 2 * (factorial(b) * factorial(b) ** b) ** 2


def group_order(params: BoardParams) -> int:
    return cell_group_order(params) * factorial(params.side)


def cell_transforms(params: BoardParams):
    """Every cell transformation once, as ``shuffle_rows o shuffle_cols o delta^t``."""
    for t in (0, 1):
        for f in block_bijections(params.box_size):
            for g in block_bijections(params.box_size):
                steps = [row_shuffle(f), col_shuffle(g)]
                if t:
                    steps.append(Elementary("delta"))
                yield Transform(tuple(steps))


# automorphism search ----------------------------------------------------------

def _aut_branch(values, n, b, t, row_perms):
    """Automorphisms with a fixed transposition flag over the given row shuffles.

    ``values`` is the row-major digit list of the full grid; an automorphism
    ``(t, R, C, lam)`` satisfies ``lam(src[R[r]][C[c]]) == S[r][c]`` where
    ``src`` is the grid, transposed when ``t`` is set.
    """
    S = [values[r * n:(r + 1) * n] for r in range(n)]
    src = [list(col) for col in zip(*S)] if t else S
    found = []
    for R in row_perms:
        rows = [src[R[r]] for r in range(n)]
        lam = [0] * (n + 1)
        lam_inv = [0] * (n + 1)
        C = [0] * n
        used = [False] * n
        block_map = [-1] * b
        block_used = [False] * b

        def extend(c):
            if c == n:
                found.append((t, tuple(R), tuple(C), tuple(lam[1:])))
                return
            cb = c // b
            for x in range(n):
                if used[x]:
                    continue
                xb = x // b
                new_block = block_map[cb] == -1
                if new_block:
                    if block_used[xb]:
                        continue
                elif block_map[cb] != xb:
                    continue
                changed = []
                ok = True
                for r in range(n):
                    a, want = rows[r][x], S[r][c]
                    if lam[a]:
                        if lam[a] != want:
                            ok = False
                            break
                    elif lam_inv[want]:
                        ok = False
                        break
                    else:
                        lam[a] = want
                        lam_inv[want] = a
                        changed.append(a)
                if ok:
                    used[x] = True
                    C[c] = x
                    if new_block:
                        block_map[cb] = xb
                        block_used[xb] = True
                    extend(c + 1)
                    used[x] = False
                    if new_block:
                        block_map[cb] = -1
                        block_used[xb] = False
                for a in changed:
                    lam_inv[lam[a]] = 0
                    lam[a] = 0

        extend(0)
    return found


def automorphisms_of(full_grid: Grid, jobs: int = 1) -> list[NormalForm]:
    """All transformations fixing a full Sudoku grid, identity included.

    Each cell transformation is tried once; the relabelling it would need is
    read off the first mapped column and then checked on the rest.
    """
    if not (full_grid.is_full and is_sudoku_grid(full_grid)):
        raise ValueError("automorphisms_of needs a full Sudoku grid")
    params = full_grid.params
    n, b = params.side, params.box_size
    values = [m.bit_length() for m in full_grid.cells]
    row_perms = [tuple(v - 1 for v in f) for f in block_bijections(b)]
    if jobs > 1:
        chunks = [row_perms[i::jobs] for i in range(jobs)]
        with ProcessPoolExecutor(jobs) as ex:
            futs = [ex.submit(_aut_branch, values, n, b, t, ch) for t in (0, 1) for ch in chunks]
            raw = [a for fut in futs for a in fut.result()]
    else:
        raw = _aut_branch(values, n, b, 0, row_perms) + _aut_branch(values, n, b, 1, row_perms)
    out = []
    for t, R, C, lam in raw:
        steps = [row_shuffle(v + 1 for v in R), col_shuffle(v + 1 for v in C)]
        if t:
            steps.append(Elementary("delta"))
        steps.append(relabel(lam))
        chain_ = Transform(tuple(s for s in steps if not _is_trivial(s)))
        nf = normal_form(chain_, params)
        out.append(nf)
    out = sorted(set(out), key=lambda nf: (nf.cell_map, nf.relabel))
    return out


def _is_trivial(s: Elementary) -> bool:
    return s.perm is not None and s.perm == tuple(range(1, len(s.perm) + 1))


# valid partitions ---------------------------------------------------------------

def is_valid_partition(partition, params: BoardParams) -> bool:
    """Each class has n cells and meets every row, column and box exactly once.

    ``partition`` gives a class label in 1..n for every position, row-major.
    """
    labels = tuple(partition)
    n = params.side
    if len(labels) != params.n_cells or any(not (1 <= x <= n) for x in labels):
        raise ValueError("a partition needs one label in 1..n per cell")
    for unit in geometry(params).units:
        if len({labels[p] for p in unit}) != n:
            return False
    return True


def partition_of(full_grid: Grid) -> tuple[int, ...]:
    """Cells grouped by the digit they hold."""
    if not full_grid.is_full:
        raise ValueError("partition_of needs a full grid")
    return tuple(m.bit_length() for m in full_grid.cells)


def transform_partition(transform: Transform | NormalForm, partition, params: BoardParams) -> tuple[int, ...]:
    """Image of a partition under the positional part of a transformation."""
    nf = transform if isinstance(transform, NormalForm) else normal_form(transform, params)
    out = [0] * params.n_cells
    for p, lab in enumerate(partition):
        out[nf.cell_map[p]] = lab
    return tuple(out)


# census of essentially different grids ----------------------------------------

def _relabel_normalised(values: tuple[int, ...]) -> tuple[int, ...]:
    seen: dict[int, int] = {}
    out = []
    for v in values:
        if v not in seen:
            seen[v] = len(seen) + 1
        out.append(seen[v])
    return tuple(out)


def canonical_form(full_grid: Grid) -> tuple[int, ...]:
    """Lexicographically least digit sequence in the grid's orbit (b=2 only)."""
    params = full_grid.params
    if params.box_size != 2:
        raise NotImplementedError("canonical forms are only enumerated for b=2")
    values = [m.bit_length() for m in full_grid.cells]
    best = None
    for cm in _cell_maps(params):
        img = [0] * len(values)
        for p, q in enumerate(cm):
            img[q] = values[p]
        key = _relabel_normalised(tuple(img))
        if best is None or key < best:
            best = key
    return best


_CELL_MAPS: dict[BoardParams, list[tuple[int, ...]]] = {}


def _cell_maps(params: BoardParams) -> list[tuple[int, ...]]:
    if params not in _CELL_MAPS:
        _CELL_MAPS[params] = [normal_form(t, params).cell_map for t in cell_transforms(params)]
    return _CELL_MAPS[params]


@dataclass
class Census:
    orbit_count: int
    group_order: int
    representatives: list[Grid]
    orbit_sizes: list[int]


def essentially_different_census(params: BoardParams) -> Census:
    """Orbits of all full Sudoku grids under the transformation group (b=2 only)."""
    if params.box_size != 2:
        raise NotImplementedError("the 9x9 census is out of reach; use b=2")
    orbits: dict[tuple[int, ...], int] = {}
    for g in all_full_grids(params):
        key = canonical_form(g)
        orbits[key] = orbits.get(key, 0) + 1
    keys = sorted(orbits)
    reps = [Grid.from_values(k, params) for k in keys]
    return Census(len(keys), group_order(params), reps, [orbits[k] for k in keys])


# Gurth's symmetrical placement ------------------------------------------------------

def gurth_eliminate(grid: Grid, transform: Transform | NormalForm) -> list[tuple[Cell, int]]:
    """Candidates ruled out by an automorphism, assuming the solution is unique.

    If ``theta = xi o lam`` fixes the grid and the solution is unique, then
    ``theta`` fixes the solution too, so a cell fixed by ``xi`` must hold a
    digit fixed by ``lam``.  The eliminations are only sound under that
    uniqueness promise.
    """
    params = grid.params
    nf = transform if isinstance(transform, NormalForm) else normal_form(transform, params)
    if nf.apply(grid) != grid:
        raise NotAutomorphism(f"{transform} is not an automorphism of the grid")
    out = []
    for p, q in enumerate(nf.cell_map):
        if p != q:
            continue
        for d in mask_digits(grid.cells[p]):
            if nf.relabel[d - 1] != d:
                out.append((cell_of(p, params), d))
    return out


def fixed_cells(transform: Transform | NormalForm, params: BoardParams) -> list[Cell]:
    nf = transform if isinstance(transform, NormalForm) else normal_form(transform, params)
    return [cell_of(p, params) for p, q in enumerate(nf.cell_map) if p == q]


def geometric_transforms() -> list[Transform]:
    return [chain(k) for k in GEOMETRIC]


def is_single_valued(grid: Grid) -> bool:
    return all(is_single(m) for m in grid.cells)


def symmetric_completion(transform: Transform | NormalForm, params: BoardParams, grid: Grid | None = None,
                         seed=None, max_nodes: int = 200_000) -> Grid | None:
    """A full Sudoku grid fixed by ``transform``, completing ``grid`` if given.

    Placing ``d`` in ``p`` also places ``lam(d)`` in ``xi(p)`` and so on
    around the orbit, so every completion found is an automorphic one.
    Returns None if none exists or the node budget runs out.
    """
    import random

    nf = transform if isinstance(transform, NormalForm) else normal_form(transform, params)
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    start = list(grid.cells if grid is not None else (params.full_mask,) * params.n_cells)
    nodes = 0

    def place(cells, p, d):
        q, v = p, d
        touched = []
        while True:
            m = cells[q] & bit(v)
            if not m:
                return None
            cells[q] = m
            touched.append(q)
            q, v = nf.cell_map[q], nf.relabel[v - 1]
            if q == p:
                return touched if v == d else None

    def dfs(cells):
        nonlocal nodes
        nodes += 1
        if nodes > max_nodes:
            return None
        best = min((p for p, m in enumerate(cells) if m & (m - 1)), key=lambda p: cells[p].bit_count(), default=None)
        if best is None:
            out = Grid(params, tuple(cells))
            return out if nf.apply(out) == out else None
        digits = mask_digits(cells[best])
        rng.shuffle(digits)
        for d in digits:
            child = list(cells)
            touched = place(child, best, d)
            if touched is not None and propagate_masks(child, params, touched):
                res = dfs(child)
                if res is not None:
                    return res
        return None

    if not propagate_masks(start, params):
        return None
    return dfs(start)
