"""Sudoku formulas and the shorthand builders.

Formulas are immutable trees over seven node kinds.  Shorthands (``==``,
``~``, ``||``, unit conditions, ...) are expanded into these core nodes when
they are built.  Big conjunctions are left-nested with operands in a fixed
order, so that building the same shorthand twice gives structurally equal
trees.

Conjunctions produced by the builders can be tens of thousands of nodes
deep, so every traversal here walks operator chains iteratively.
"""

from __future__ import annotations

from functools import cache
from itertools import combinations
from typing import Callable, Iterable, Iterator

from .board import (
    B3,
    BoardParams,
    Cell,
    Grid,
    Prop,
    check_cell,
    check_digit,
    geometry,
    cell_of,
)


class Formula:
    __slots__ = ("_hash",)
    children: tuple["Formula", ...] = ()

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Formula):
            return NotImplemented
        stack = [(self, other)]
        while stack:
            a, b = stack.pop()
            if a is b:
                continue
            if type(a) is not type(b) or a._hash != b._hash:
                return False
            if isinstance(a, Atom):
                if a.prop != b.prop:
                    return False
            else:
                stack.extend(zip(a.children, b.children))
        return True

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __hash__(self):
        return self._hash

    def __str__(self):
        from .parser import print_formula

        return print_formula(self)

    def __repr__(self):
        text = str(self)
        if len(text) > 200:
            text = text[:197] + "..."
        return f"<{type(self).__name__} {text}>"

    # operator sugar, handy in tests and scripts
    def __invert__(self):
        return Not(self)

    def __and__(self, other):
        return And(self, other)

    def __or__(self, other):
        return Or(self, other)

    def __rshift__(self, other):
        return Implies(self, other)


class _Const(Formula):
    __slots__ = ()

    def __init__(self):
        self._hash = hash(type(self).__name__)

    def __reduce__(self):
        return (type(self), ())


class Top(_Const):
    __slots__ = ()


class Bottom(_Const):
    __slots__ = ()


TOP = Top()
BOTTOM = Bottom()


class Atom(Formula):
    __slots__ = ("prop",)

    def __init__(self, prop: Prop):
        if not isinstance(prop, Prop):
            prop = Prop(Cell(*prop[0]), prop[1])
        self.prop = prop
        self._hash = hash(("atom", prop))

    def __reduce__(self):
        return (Atom, (self.prop,))


class Not(Formula):
    __slots__ = ("arg",)

    def __init__(self, arg: Formula):
        self.arg = arg
        self._hash = hash(("not", arg._hash))

    @property
    def children(self):
        return (self.arg,)

    def __reduce__(self):
        return (Not, (self.arg,))


class Binary(Formula):
    __slots__ = ("left", "right")
    tag = ""

    def __init__(self, left: Formula, right: Formula):
        self.left = left
        self.right = right
        self._hash = hash((self.tag, left._hash, right._hash))

    @property
    def children(self):
        return (self.left, self.right)

    def __reduce__(self):
        return (type(self), (self.left, self.right))


class And(Binary):
    __slots__ = ()
    tag = "and"


class Or(Binary):
    __slots__ = ()
    tag = "or"


class Implies(Binary):
    __slots__ = ()
    tag = "implies"


class Iff(Binary):
    __slots__ = ()
    tag = "iff"


FormulaSet = frozenset  # of Formula; membership is structural equality


# structural utilities ------------------------------------------------------

def chain_operands(f: Formula, kind: type) -> list[Formula]:
    """Operands of the maximal left-nested ``kind`` chain rooted at ``f``.

    Only the left spine is followed, so ``a & (b & c)`` yields ``[a, b & c]``.
    """
    out = []
    while type(f) is kind:
        out.append(f.right)
        f = f.left
    out.append(f)
    out.reverse()
    return out


def flatten(f: Formula, kind: type) -> list[Formula]:
    """All operands of ``f`` under any nesting of ``kind``, left to right."""
    out = []
    stack = [f]
    while stack:
        g = stack.pop()
        if type(g) is kind:
            stack.append(g.right)
            stack.append(g.left)
        else:
            out.append(g)
    return out


def conj(operands: Iterable[Formula]) -> Formula:
    """Left-nested conjunction; the empty conjunction is ``TOP``."""
    it = iter(operands)
    try:
        acc = next(it)
    except StopIteration:
        return TOP
    for g in it:
        acc = And(acc, g)
    return acc


def disj(operands: Iterable[Formula]) -> Formula:
    """Left-nested disjunction; the empty disjunction is ``BOTTOM``."""
    it = iter(operands)
    try:
        acc = next(it)
    except StopIteration:
        return BOTTOM
    for g in it:
        acc = Or(acc, g)
    return acc


def iter_nodes(f: Formula) -> Iterator[Formula]:
    """Every distinct node object of the tree (shared subtrees once)."""
    seen = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if id(g) in seen:
            continue
        seen.add(id(g))
        yield g
        stack.extend(g.children)


def atoms_of(f: Formula) -> frozenset[Prop]:
    return frozenset(g.prop for g in iter_nodes(f) if isinstance(g, Atom))


def fold(f: Formula, leaf: Callable[[Formula], object], node: Callable[[Formula, list], object]):
    """Bottom-up evaluation with memoisation on node identity.

    ``leaf`` handles atoms and constants; ``node(g, child_values)`` the rest.
    """
    memo: dict[int, object] = {}
    stack: list[tuple[Formula, bool]] = [(f, False)]
    while stack:
        g, expanded = stack.pop()
        key = id(g)
        if key in memo:
            continue
        kids = g.children
        if not kids:
            memo[key] = leaf(g)
        elif expanded:
            memo[key] = node(g, [memo[id(k)] for k in kids])
        else:
            stack.append((g, True))
            for k in kids:
                if id(k) not in memo:
                    stack.append((k, False))
    return memo[id(f)]


def eval_bits(f: Formula, atom_bits: Callable[[Prop], int], width_mask: int) -> int:
    """Evaluate ``f`` on many interpretations at once.

    Bit ``k`` of ``atom_bits(p)`` is the truth value of ``p`` in the k-th
    interpretation; the result holds the truth value of ``f`` in each.
    """

    def leaf(g):
        if isinstance(g, Atom):
            return atom_bits(g.prop)
        return width_mask if isinstance(g, Top) else 0

    def node(g, vals):
        t = type(g)
        if t is Not:
            return width_mask & ~vals[0]
        a, b = vals
        if t is And:
            return a & b
        if t is Or:
            return a | b
        if t is Implies:
            return (width_mask & ~a) | b
        return width_mask & ~(a ^ b)

    return fold(f, leaf, node)


def map_atoms(f: Formula, fn: Callable[[Prop], Prop]) -> Formula:
    """Rebuild ``f`` with every atom payload replaced by ``fn(payload)``."""

    def leaf(g):
        return Atom(fn(g.prop)) if isinstance(g, Atom) else g

    def node(g, vals):
        if type(g) is Not:
            return Not(vals[0])
        return type(g)(vals[0], vals[1])

    return fold(f, leaf, node)


def size(f: Formula) -> int:
    """Number of nodes, counting shared subtrees once per occurrence."""
    return fold(f, lambda g: 1, lambda g, vals: 1 + sum(vals))


# builders -------------------------------------------------------------------

def _cell(cell, params: BoardParams) -> Cell:
    if not isinstance(cell, Cell):
        cell = Cell(*cell)
    return check_cell(cell, params)


def atom(i: int, j: int, d: int, params: BoardParams = B3) -> Atom:
    """``r{i}c{j} !~ d``."""
    cell = check_cell(Cell(i, j), params)
    return Atom(Prop(cell, check_digit(d, params)))


def approx_of(cell, d: int, params: BoardParams = B3) -> Formula:
    """``r_i c_j ~ d``: the cell could hold ``d``."""
    cell = _cell(cell, params)
    return Not(Atom(Prop(cell, check_digit(d, params))))


@cache
def _equiv(cell: Cell, d: int, params: BoardParams) -> Formula:
    return conj(Atom(Prop(cell, s)) for s in params.digits if s != d)


def equiv_of(cell, d: int, params: BoardParams = B3) -> Formula:
    """``r_i c_j == d``: every other digit is excluded from the cell."""
    cell = _cell(cell, params)
    return _equiv(cell, check_digit(d, params), params)


@cache
def _parallel(a: Cell, b: Cell, params: BoardParams) -> Formula:
    parts = []
    for d in params.digits:
        parts.append(Implies(_equiv(a, d, params), Atom(Prop(b, d))))
        parts.append(Implies(_equiv(b, d, params), Atom(Prop(a, d))))
    return conj(parts)


def parallel_of(cell_a, cell_b, params: BoardParams = B3) -> Formula:
    """``a || b``: if either cell is determined, the other cannot share its value."""
    a, b = _cell(cell_a, params), _cell(cell_b, params)
    if a == b:
        raise ValueError(f"parallel_of needs two distinct cells, got {a} twice")
    return _parallel(a, b, params)


def _unit_condition(unit: tuple[int, ...], params: BoardParams) -> Formula:
    cells = sorted(cell_of(p, params) for p in unit)
    return conj(_parallel(a, b, params) for a, b in combinations(cells, 2))


def _check_index(k: int, params: BoardParams) -> int:
    if not 1 <= k <= params.side:
        raise ValueError(f"unit index {k} outside 1..{params.side}")
    return k


@cache
def row_condition(i: int, params: BoardParams = B3) -> Formula:
    return _unit_condition(geometry(params).units[_check_index(i, params) - 1], params)


@cache
def col_condition(j: int, params: BoardParams = B3) -> Formula:
    return _unit_condition(geometry(params).units[params.side + _check_index(j, params) - 1], params)


@cache
def box_condition(k: int, params: BoardParams = B3) -> Formula:
    return _unit_condition(geometry(params).units[2 * params.side + _check_index(k, params) - 1], params)


def sigma_ax_list(params: BoardParams = B3) -> list[Formula]:
    """Row, column and box conditions in the order R_1..R_n, C_1..C_n, B_1..B_n."""
    n = params.side
    return (
        [row_condition(i, params) for i in range(1, n + 1)]
        + [col_condition(j, params) for j in range(1, n + 1)]
        + [box_condition(k, params) for k in range(1, n + 1)]
    )


def sigma_ax(params: BoardParams = B3) -> frozenset[Formula]:
    return frozenset(sigma_ax_list(params))


def xwing_row_premise(i: int, j: int, m: int, d: int, params: BoardParams = B3) -> frozenset[Prop]:
    """Digit ``d`` can sit in row ``i`` only at columns ``j`` and ``m``."""
    for k in (i, j, m):
        _check_index(k, params)
    check_digit(d, params)
    if j == m:
        raise ValueError("X-wing columns must differ")
    return frozenset(Prop(Cell(i, s), d) for s in params.digits if s not in (j, m))


def xwing_col_conclusion(j: int, i: int, l: int, d: int, params: BoardParams = B3) -> frozenset[Prop]:
    """Digit ``d`` can sit in column ``j`` only at rows ``i`` and ``l``."""
    for k in (j, i, l):
        _check_index(k, params)
    check_digit(d, params)
    if i == l:
        raise ValueError("X-wing rows must differ")
    return frozenset(Prop(Cell(t, j), d) for t in params.digits if t not in (i, l))


def epsilon_of(full_grid: Grid) -> Formula:
    """Conjunction of ``r_i c_j ~ d_ij`` over all cells, row-major."""
    if not full_grid.is_full:
        raise ValueError("epsilon_of needs a full grid")
    params = full_grid.params
    return conj(
        Not(Atom(Prop(cell_of(p, params), m.bit_length()))) for p, m in enumerate(full_grid.cells)
    )


def uniq_formula(params: BoardParams) -> Formula:
    """No two distinct full Sudoku grids can both be solutions.

    Only materialisable on the 4x4 board (41,328 conjuncts there).
    """
    if params.box_size != 2:
        raise NotImplementedError("Uniq is only materialised for b=2; the 9x9 conjunction is astronomically large")
    from .solver import all_full_grids

    grids = sorted(all_full_grids(params), key=lambda g: g.to_puzzle())
    eps = [epsilon_of(g) for g in grids]
    return conj(Not(And(eps[a], eps[b])) for a, b in combinations(range(len(eps)), 2))
