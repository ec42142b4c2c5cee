"""Random proofs against the semantics.

For each generated proof: it must verify, its deduction-theorem and
transported versions must verify, and (on 4x4) the entailment checker
must prove the conclusion from the premises.  Any disagreement is printed.

    python3 scripts/soundness_harness.py [--proofs 500] [--seed 0]
"""

import argparse
import random
from dataclasses import dataclass

from sudoku_logic.board import B2
from sudoku_logic.proof import deduction_transform, map_proof, random_proof, verify
from sudoku_logic.sampling import random_transform
from sudoku_logic.semantics import Entailment, entails


@dataclass
class HarnessConfig:
    proofs: int = 500
    seed: int = 0


def run(cfg: HarnessConfig) -> dict:
    rng = random.Random(cfg.seed)
    counts = dict.fromkeys(("verified", "deduced", "mapped", "entailed"), 0)
    problems = []
    for k in range(cfg.proofs):
        proof, _ = random_proof(rng, B2)
        if not verify(proof):
            problems.append((k, "generated proof fails"))
            continue
        counts["verified"] += 1
        alpha = next(iter(proof.premises))
        counts["deduced"] += bool(verify(deduction_transform(proof, alpha, check=False)))
        counts["mapped"] += bool(verify(map_proof(random_transform(rng, B2), proof, check=False)))
        v = entails([f.prop for f in proof.premises], [proof.conclusion.prop], B2)
        if v.kind is Entailment.PROVEN:
            counts["entailed"] += 1
        else:
            problems.append((k, f"entailment says {v.kind.name}"))
    counts["problems"] = problems
    return counts


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--proofs", type=int, default=500)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    for key, val in run(HarnessConfig(args.proofs, args.seed)).items():
        print(f"{key}: {val}")


if __name__ == "__main__":
    main()
