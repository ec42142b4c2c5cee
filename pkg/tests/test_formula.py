import pickle

import pytest

from sudoku_logic.board import B2, B3, Cell, Grid, Prop
from sudoku_logic.formula import (
    TOP,
    And,
    Atom,
    Iff,
    Implies,
    Not,
    approx_of,
    atom,
    atoms_of,
    box_condition,
    chain_operands,
    col_condition,
    epsilon_of,
    equiv_of,
    flatten,
    iter_nodes,
    map_atoms,
    parallel_of,
    row_condition,
    sigma_ax,
    size,
    uniq_formula,
    xwing_col_conclusion,
    xwing_row_premise,
)
from sudoku_logic.semantics import models, models_all
from sudoku_logic.solver import all_full_grids, random_full_grid


def test_atom():
    assert atom(1, 1, 1).prop == Prop(Cell(1, 1), 1)
    assert str(atom(2, 3, 7)) == "r2c3 !~ 7"
    with pytest.raises(ValueError):
        atom(1, 1, 10)
    with pytest.raises(ValueError):
        atom(1, 5, 1, B2)


def test_approx():
    f = approx_of(Cell(1, 1), 1)
    assert f == Not(atom(1, 1, 1))
    assert str(approx_of(Cell(9, 9), 9)) == "r9c9 ~ 9"
    s = random_full_grid(B3, 0)
    for d in range(1, 10):
        assert models(s, approx_of(Cell(1, 1), d)) == (d in s.candidates(Cell(1, 1)))


def test_equiv():
    e = equiv_of(Cell(2, 3), 7)
    parts = chain_operands(e, And)
    assert [a.prop.digit for a in parts] == [1, 2, 3, 4, 5, 6, 8, 9]
    assert equiv_of(Cell(1, 1), 1, B2) == And(And(atom(1, 1, 2, B2), atom(1, 1, 3, B2)), atom(1, 1, 4, B2))
    s = Grid.full(B3).replace(Cell(2, 3), (7,))
    assert models(s, e)


def test_parallel():
    f = parallel_of(Cell(1, 1), Cell(1, 2))
    parts = chain_operands(f, And)
    assert len(parts) == 18 and all(type(p) is Implies for p in parts)
    assert parts[0].left == equiv_of(Cell(1, 1), 1) and parts[1].left == equiv_of(Cell(1, 2), 1)
    assert len(atoms_of(f)) == 18
    assert models(Grid.full(B3), f)
    both = Grid.full(B3).replace(Cell(1, 1), (1,)).replace(Cell(1, 2), (1,))
    assert not models(both, f)
    with pytest.raises(ValueError):
        parallel_of(Cell(1, 1), Cell(1, 1))


def test_unit_conditions():
    # one parallel condition of n implications per unordered pair of cells
    assert sum(type(x) is Implies for x in iter_nodes(row_condition(1))) == 36 * 18
    assert sum(type(x) is Implies for x in iter_nodes(row_condition(1, B2))) == 6 * 8
    assert row_condition(1, B2).right == parallel_of(Cell(1, 3), Cell(1, 4), B2)
    cells = {p.cell for p in atoms_of(box_condition(3))}
    assert cells == {Cell(r, c) for r in range(1, 4) for c in range(7, 10)}
    assert col_condition(2).right == parallel_of(Cell(8, 2), Cell(9, 2))
    with pytest.raises(ValueError):
        row_condition(10)


def test_sigma_ax():
    assert len(sigma_ax(B3)) == 27
    assert len(sigma_ax(B2)) == 12
    for g in all_full_grids(B2)[:20]:
        assert models_all(g, sigma_ax(B2))


def test_builders_deterministic():
    assert row_condition(4) == row_condition(4)
    assert equiv_of(Cell(3, 3), 2) == equiv_of((3, 3), 2)


def test_xwing_sets():
    x = xwing_row_premise(1, 2, 5, 7)
    assert {p.col for p in x} == {1, 3, 4, 6, 7, 8, 9} and len(x) == 7
    assert len(xwing_col_conclusion(2, 1, 3, 4, B2)) == 2
    with pytest.raises(ValueError):
        xwing_row_premise(1, 2, 2, 7)
    with pytest.raises(ValueError):
        xwing_col_conclusion(1, 3, 3, 7)


def test_epsilon():
    s = random_full_grid(B3, 5)
    eps = epsilon_of(s)
    assert len(flatten(eps, And)) == 81
    assert models(s, eps)
    assert models(Grid.full(B3), eps)
    other = random_full_grid(B3, 6)
    assert not models(other, eps)
    with pytest.raises(ValueError):
        epsilon_of(Grid.full(B3))


def test_uniq():
    u = uniq_formula(B2)
    assert len(chain_operands(u, And)) == 288 * 287 // 2
    with pytest.raises(NotImplementedError):
        uniq_formula(B3)
    g = Grid.full(B2)
    assert not models(g, u)  # the empty grid admits two solutions
    for s in all_full_grids(B2)[:5]:
        assert models(s, u)


def test_uniq_falsified_by_two_solution_grid():
    grids = sorted(all_full_grids(B2), key=lambda g: g.to_puzzle())
    a, b = grids[0], grids[1]
    union = Grid(B2, tuple(x | y for x, y in zip(a.cells, b.cells)))
    conjunct = Not(And(epsilon_of(a), epsilon_of(b)))
    assert not models(union, conjunct)


def test_deep_formulas_are_safe():
    u = uniq_formula(B2)
    assert hash(u) == hash(uniq_formula(B2))
    assert u == map_atoms(u, lambda p: p)
    assert size(row_condition(1)) > 1000
    assert atoms_of(TOP) == frozenset()


def test_schema_s2_holds_in_full_grids():
    for g in all_full_grids(B2):
        for d in range(1, 5):
            f = Iff(Not(atom(2, 3, d, B2)), equiv_of(Cell(2, 3), d, B2))
            assert models(g, f)


def test_pickle_shallow():
    f = Implies(atom(1, 1, 1), Not(atom(2, 2, 2)))
    assert pickle.loads(pickle.dumps(f)) == f


def test_atom_identity():
    assert Atom(Prop(Cell(1, 1), 1)) == atom(1, 1, 1)
    assert atom(1, 1, 1) != atom(1, 1, 2)
    assert len({atom(1, 1, 1), atom(1, 1, 1)}) == 1
