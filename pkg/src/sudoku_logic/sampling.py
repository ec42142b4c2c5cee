"""Seeded random objects for property tests and experiment scripts."""

from __future__ import annotations

import random

from .board import B3, BoardParams, Cell, Grid, Prop
from .formula import BOTTOM, TOP, And, Atom, Formula, Iff, Implies, Not, Or
from .solver import random_full_grid
from .transform import GEOMETRIC, Elementary, Transform, block_bijections


def _rng(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def random_prop(seed, params: BoardParams = B3) -> Prop:
    rng = _rng(seed)
    n = params.side
    return Prop(Cell(rng.randint(1, n), rng.randint(1, n)), rng.randint(1, n))


def random_formula(seed, params: BoardParams = B3, depth: int = 4) -> Formula:
    """A random tree over all seven node kinds."""
    rng = _rng(seed)

    def grow(d):
        if d == 0 or rng.random() < 0.25:
            r = rng.random()
            if r < 0.08:
                return TOP
            if r < 0.16:
                return BOTTOM
            return Atom(random_prop(rng, params))
        k = rng.randrange(5)
        if k == 0:
            return Not(grow(d - 1))
        cls = (And, Or, Implies, Iff)[k - 1]
        return cls(grow(d - 1), grow(d - 1))

    return grow(depth)


def random_grid(seed, params: BoardParams = B3, density: float = 0.5) -> Grid:
    """A random candidate grid: each digit kept with probability ``density``, never empty."""
    rng = _rng(seed)
    cells = []
    for _ in range(params.n_cells):
        m = 0
        for d in range(params.side):
            if rng.random() < density:
                m |= 1 << d
        cells.append(m or 1 << rng.randrange(params.side))
    return Grid(params, tuple(cells))


def random_elementary(seed, params: BoardParams = B3) -> Elementary:
    rng = _rng(seed)
    k = rng.randrange(len(GEOMETRIC) + 3)
    if k < len(GEOMETRIC):
        return Elementary(GEOMETRIC[k])
    if k == len(GEOMETRIC) + 2:
        f = list(range(1, params.side + 1))
        rng.shuffle(f)
        return Elementary("relabel", tuple(f))
    kind = "rowshuffle" if k == len(GEOMETRIC) else "colshuffle"
    return Elementary(kind, rng.choice(_bijections(params.box_size)))


_BIJ: dict[int, list] = {}


def _bijections(b: int):
    if b not in _BIJ:
        _BIJ[b] = block_bijections(b)
    return _BIJ[b]


def random_transform(seed, params: BoardParams = B3, length: int = 4, relabel: bool = True) -> Transform:
    rng = _rng(seed)
    steps = []
    target = rng.randint(1, length)
    while len(steps) < target:
        s = random_elementary(rng, params)
        if relabel or s.kind != "relabel":
            steps.append(s)
    return Transform(tuple(steps))


def random_puzzle(seed, params: BoardParams = B3, givens: int = 8) -> tuple[Grid, Grid]:
    """A puzzle made of ``givens`` cells of a random full grid, and that grid."""
    rng = _rng(seed)
    full = random_full_grid(params, rng)
    keep = set(rng.sample(range(params.n_cells), givens))
    cells = tuple(m if p in keep else params.full_mask for p, m in enumerate(full.cells))
    return Grid(params, cells), full
