"""Exercise the X-wing rule for rows: exhaustively on 4x4, by sampling on 9x9.

On 4x4 every (i, l, j, m, d) instance goes through the entailment checker.
On 9x9 full grids are drawn first and instances read off them, so each
sample is a grid satisfying the premises; the conclusion must then hold.

    python3 scripts/xwing_sampling.py [--samples 10000] [--seed 0]
"""

import argparse
import random
from dataclasses import dataclass
from itertools import permutations

from sudoku_logic.board import B2, B3, Cell
from sudoku_logic.formula import xwing_col_conclusion, xwing_row_premise
from sudoku_logic.semantics import entails, full_grid_models_props
from sudoku_logic.solver import random_full_grid


@dataclass
class XwingConfig:
    samples: int = 10_000
    seed: int = 0


def exhaustive_b2() -> dict:
    verdicts = {}
    for i, l in permutations(B2.digits, 2):
        for j, m in permutations(B2.digits, 2):
            for d in B2.digits:
                prem = xwing_row_premise(i, j, m, d, B2) | xwing_row_premise(l, j, m, d, B2)
                concl = xwing_col_conclusion(j, i, l, d, B2) | xwing_col_conclusion(m, i, l, d, B2)
                k = entails(prem, concl, B2).kind
                verdicts[k.name] = verdicts.get(k.name, 0) + 1
    return verdicts


def sampled_b3(cfg: XwingConfig) -> dict:
    rng = random.Random(cfg.seed)
    grids = [random_full_grid(B3, rng) for _ in range(64)]
    held = premise_true = 0
    for _ in range(cfg.samples):
        s = rng.choice(grids)
        i, l = rng.sample(range(1, 10), 2)
        d = rng.randint(1, 9)
        j = next(c for c in range(1, 10) if s.value(Cell(i, c)) == d)
        m = next(c for c in range(1, 10) if s.value(Cell(l, c)) == d)
        prem = xwing_row_premise(i, j, m, d) | xwing_row_premise(l, j, m, d)
        if not full_grid_models_props(s, prem):
            continue
        premise_true += 1
        concl = xwing_col_conclusion(j, i, l, d) | xwing_col_conclusion(m, i, l, d)
        held += full_grid_models_props(s, concl)
    return {"samples": cfg.samples, "premises_true": premise_true, "conclusion_held": held}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    cfg = XwingConfig(args.samples, args.seed)
    print("b2 verdicts:", exhaustive_b2())
    print("b3 sampling:", sampled_b3(cfg))


if __name__ == "__main__":
    main()
