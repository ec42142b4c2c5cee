import random

import pytest
from hypothesis import given, strategies as st

from sudoku_logic.board import (
    B2,
    B3,
    BoardParams,
    Cell,
    Contradiction,
    Grid,
    Prop,
    all_props,
    box_index,
    is_compatible,
    is_solution,
    is_sudoku_grid,
    peers,
    prop_of,
    propagate,
)
from sudoku_logic.formula import sigma_ax
from sudoku_logic.sampling import random_grid
from sudoku_logic.semantics import models_all
from sudoku_logic.solver import all_full_grids, enumerate_solutions, random_full_grid


def grid_with(params, assignments):
    g = Grid.full(params)
    for cell, digits in assignments.items():
        g = g.replace(cell, digits)
    return g


def test_board_params():
    assert B3.side == 9 and B3.n_cells == 81 and list(B3.digits) == list(range(1, 10))
    assert B2.side == 4 and B2.full_mask == 0b1111
    assert BoardParams.from_name("b2") == B2
    with pytest.raises(ValueError):
        BoardParams(4)
    with pytest.raises(ValueError):
        BoardParams.from_name("b9")


@pytest.mark.parametrize("cell,expected", [(Cell(1, 1), 1), (Cell(5, 5), 5), (Cell(1, 7), 3), (Cell(9, 9), 9), (Cell(7, 3), 7)])
def test_box_index(cell, expected):
    assert box_index(cell, B3) == expected


def test_peers():
    assert len(peers(Cell(1, 1), B3)) == 20
    assert len(peers(Cell(1, 1), B2)) == 7
    assert Cell(1, 2) in peers(Cell(1, 1), B3)
    assert Cell(1, 1) not in peers(Cell(1, 1), B3)
    with pytest.raises(ValueError):
        peers(Cell(10, 1), B3)


def test_prop_count():
    assert len(set(all_props(B3))) == 729
    assert len(set(all_props(B2))) == 64


def test_grid_invariants():
    with pytest.raises(ValueError):
        Grid(B2, (0,) + (15,) * 15)
    with pytest.raises(ValueError):
        Grid(B2, (16,) + (15,) * 15)
    with pytest.raises(ValueError):
        Grid(B2, (15,) * 15)


def test_is_full():
    full = all_full_grids(B2)[0]
    assert full.is_full
    assert not full.replace(Cell(1, 1), (1, 2)).is_full
    assert not Grid.full(B3).is_full


def test_compatibility_and_solution():
    a = grid_with(B3, {Cell(1, 1): (1,)})
    assert is_compatible(a, a)
    assert not is_compatible(Grid.full(B3), a)
    s = random_full_grid(B3, 0, a)
    assert is_compatible(s, a) and is_solution(s, a)
    assert not is_solution(a, a)
    other = s.replace(Cell(1, 1), (2,))
    assert not is_solution(other, a)
    with pytest.raises(ValueError):
        is_compatible(Grid.full(B2), Grid.full(B3))


def test_is_sudoku_grid_examples():
    assert is_sudoku_grid(Grid.full(B3))
    assert not is_sudoku_grid(grid_with(B3, {Cell(1, 1): (1,), Cell(1, 2): (1,)}))
    assert not is_sudoku_grid(grid_with(B3, {Cell(1, 1): (1,), Cell(1, 2): (1, 2)}))
    # a single is fine once its peers have dropped the value
    assert not is_sudoku_grid(grid_with(B3, {Cell(1, 1): (1,), Cell(1, 2): (2, 3)}))
    assert is_sudoku_grid(propagate(grid_with(B3, {Cell(1, 1): (1,), Cell(1, 2): (2, 3)})))


def test_is_sudoku_grid_matches_sigma_ax():
    rng = random.Random(1)
    sig = {p: sigma_ax(p) for p in (B2, B3)}
    for k in range(1000):
        params = B2 if k % 2 else B3
        g = random_grid(rng, params, density=rng.choice([0.2, 0.5, 0.9]))
        assert is_sudoku_grid(g) == models_all(g, sig[params])


def test_prop_of():
    assert prop_of(Grid.full(B3)) == frozenset()
    s = random_full_grid(B3, 3)
    assert len(prop_of(s)) == 648
    g = random_grid(7, B3)
    assert len(prop_of(g)) == 729 - sum(m.bit_count() for m in g.cells)


def test_prop_of_monotone_for_solutions():
    rng = random.Random(2)
    for _ in range(100):
        g = random_grid(rng, B2, density=0.7)
        for s in enumerate_solutions(g).solutions:
            assert prop_of(g) <= prop_of(s)


def test_propagate_examples():
    g = grid_with(B3, {Cell(1, 1): (1,), Cell(1, 2): (1, 2)})
    out = propagate(g)
    assert out.candidates(Cell(1, 2)) == {2}
    assert propagate(out) == out
    with pytest.raises(Contradiction):
        propagate(grid_with(B3, {Cell(1, 1): (1,), Cell(1, 2): (1,)}))


def test_propagate_keeps_solution_set():
    rng = random.Random(3)
    for _ in range(200):
        g = random_grid(rng, B2, density=0.6)
        sols = set(enumerate_solutions(g).solutions)
        try:
            p = propagate(g)
        except Contradiction:
            assert not sols
            continue
        assert is_compatible(p, g)
        assert propagate(p) == p
        assert set(enumerate_solutions(p).solutions) == sols


@given(st.lists(st.sampled_from(".1234"), min_size=16, max_size=16))
def test_puzzle_round_trip(chars):
    text = "".join(chars)
    g = Grid.from_puzzle(text)
    assert g.params == B2
    assert g.to_puzzle() == text.replace("0", ".") or "." in g.to_puzzle()
    assert Grid.parse(g.to_text()) == g
    assert Grid.parse(g.to_line()) == g


def test_text_formats():
    g = Grid.parse("# comment\n12 3 4 1234\n1 2 3 4\n1 2 3 4\n1 2 3 4\n")
    assert g.candidates(Cell(1, 1)) == {1, 2}
    assert Grid.from_puzzle("0" * 81) == Grid.full(B3)
    with pytest.raises(ValueError):
        Grid.from_puzzle("5" * 16)
    with pytest.raises(ValueError):
        Grid.from_puzzle("1" * 15)


def test_prop_str():
    assert str(Prop(Cell(2, 3), 7)) == "r2c3 !~ 7"
