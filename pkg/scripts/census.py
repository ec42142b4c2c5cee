"""Essentially different 4x4 grids, counted two independent ways.

Orbits of the canonical-form census are checked against Burnside's lemma
(average number of automorphisms over the transformation group).

    python3 scripts/census.py [--jobs 4]
"""

import argparse
import time
from dataclasses import dataclass

from sudoku_logic.board import B2, BoardParams
from sudoku_logic.solver import all_full_grids
from sudoku_logic.transform import automorphisms_of, essentially_different_census, group_order


@dataclass
class CensusConfig:
    box_size: int = 2
    jobs: int = 1


def run(cfg: CensusConfig) -> dict:
    params = BoardParams(cfg.box_size)
    t0 = time.perf_counter()
    c = essentially_different_census(params)
    t1 = time.perf_counter()
    fixed = sum(len(automorphisms_of(g, jobs=cfg.jobs)) for g in all_full_grids(params))
    t2 = time.perf_counter()
    return {
        "full_grids": len(all_full_grids(params)),
        "group_order": c.group_order,
        "orbits": c.orbit_count,
        "orbit_sizes": c.orbit_sizes,
        "burnside_sum": fixed,
        "burnside_orbits": fixed / group_order(params),
        "census_seconds": round(t1 - t0, 2),
        "burnside_seconds": round(t2 - t1, 2),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()
    out = run(CensusConfig(box_size=B2.box_size, jobs=args.jobs))
    for k, v in out.items():
        print(f"{k}: {v}")


if __name__ == "__main__":
    main()
