"""Regenerate the grid and proof fixtures under tests/fixtures.

The automorphic grids are built to admit the transformations named in the
file headers; every fixture is re-checked before it is written.

    python3 scripts/make_fixtures.py [--out tests/fixtures]
"""

import argparse
import random
from pathlib import Path

from sudoku_logic.board import B3, Cell, Grid, Prop, propagate
from sudoku_logic.formula import Atom, Implies, equiv_of
from sudoku_logic.proof import AXIOM, ProofBuilder, format_proof, verify
from sudoku_logic.solver import Uniqueness, unique_solution
from sudoku_logic.transform import (
    Transform,
    chain,
    col_shuffle,
    is_automorphism,
    normal_form,
    relabel,
    row_shuffle,
    symmetric_completion,
)

SHIFT = (4, 5, 6, 7, 8, 9, 1, 2, 3)
REVERSE = (9, 8, 7, 6, 5, 4, 3, 2, 1)
SWAPS = (1, 2, 3, 5, 4, 7, 6, 9, 8)

CHAINS = {
    "shift": Transform((col_shuffle(SHIFT), row_shuffle(SHIFT))),
    "rot180_reverse": chain("rot180", relabel(REVERSE)),
    "deltabar_swaps": chain("deltabar", relabel(SWAPS)),
}


def orbits(nf):
    seen, out = set(), []
    for p in range(len(nf.cell_map)):
        if p in seen:
            continue
        orb = [p]
        q = nf.cell_map[p]
        while q != p:
            orb.append(q)
            q = nf.cell_map[q]
        seen.update(orb)
        out.append(orb)
    return out


def symmetric_puzzle(t, full, rng):
    """Remove whole cell orbits from ``full`` while the solution stays unique."""
    params = full.params
    nf = normal_form(t, params)
    cells = list(full.cells)
    order = orbits(nf)
    rng.shuffle(order)
    for orb in order:
        trial = list(cells)
        for p in orb:
            trial[p] = params.full_mask
        if unique_solution(Grid(params, tuple(trial))).kind is Uniqueness.UNIQUE:
            cells = trial
    puzzle = Grid(params, tuple(cells))
    assert is_automorphism(t, puzzle)
    return puzzle


def header(lines):
    return "".join(f"# {ln}\n" for ln in lines)


def sample_proof_b3():
    """r1c1 == 9 from premises, so 9 is excluded from r1c2 and r5c1."""
    pb = ProofBuilder(B3)
    atoms = [Atom(Prop(Cell(1, 1), d)) for d in range(1, 9)]
    for a in atoms:
        pb.premise(a)
    acc = atoms[0]
    for a in atoms[1:]:
        acc = pb.conjoin(acc, a)
    assert acc == equiv_of(Cell(1, 1), 9, B3)
    for v in (Cell(1, 2), Cell(5, 1)):
        rule = Implies(acc, Atom(Prop(v, 9)))
        pb.add(rule, AXIOM)
        pb.modus_ponens(acc, rule)
    return pb.build()


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "tests" / "fixtures"))
    ap.add_argument("--seed", type=int, default=2024)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(args.seed)

    for name, t in CHAINS.items():
        full = symmetric_completion(t, B3, seed=rng)
        assert full is not None and is_automorphism(t, full)
        (out / f"{name}_grid.txt").write_text(header([f"full grid fixed by {t}"]) + full.to_puzzle() + "\n")
        if name != "shift":
            puzzle = symmetric_puzzle(t, full, rng)
            (out / f"{name}_puzzle.txt").write_text(
                header([f"uniquely solvable puzzle fixed by {t}", f"solution {full.to_puzzle()}"])
                + puzzle.to_puzzle() + "\n"
            )
            if name == "deltabar_swaps":
                # propagate the symmetric givens, then force r6c4 to {8, 9}
                pattern = propagate(puzzle).replace(Cell(6, 4), (8, 9))
                assert is_automorphism(t, pattern)
                (out / "deltabar_pattern_grid.txt").write_text(
                    header([f"candidate grid fixed by {t}", "r6c4 lies on the auxiliary diagonal and holds {8, 9}"])
                    + pattern.to_text() + "\n"
                )

    proof = sample_proof_b3()
    assert verify(proof)
    (out / "sample_proof_b3.txt").write_text(format_proof(proof))

    # step 3 cites a premise that is not an implication
    (out / "bad_proof_b3.txt").write_text(
        "board: b3\npremises: r1c1 !~ 1, r1c1 !~ 2\n"
        "1. r1c1 !~ 1 ; premise\n2. r1c1 !~ 2 ; premise\n3. r1c1 !~ 3 ; mp 1 2\n"
    )

    (out / "xwing_b2_premises.txt").write_text("# digit 1 sits in row 1 only at c1, c3 and in row 3 only at c1, c3\n"
                                               "r1c2 !~ 1, r1c4 !~ 1\nr3c2 !~ 1, r3c4 !~ 1\n")
    (out / "xwing_b2_conclusions.txt").write_text("r2c1 !~ 1, r4c1 !~ 1\nr2c3 !~ 1, r4c3 !~ 1\n")
    print(f"fixtures written to {out}")


if __name__ == "__main__":
    main()
