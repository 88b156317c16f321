"""Run the brute-force congruence oracle on the two non-SD pairs and record the result.

Usage: python3 scripts/record_ac3_oracle.py [--samples N] [--seed S]
"""
import argparse
import json
import sys
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))
from oracles import min_joint_offdiag_mass  # noqa: E402

PAIRS = {
    "nonreal": (np.diag([1.0, -1.0]), np.array([[0.0, 1.0], [1.0, 0.0]])),
    "b2": (np.diag([1.0, 0.0]), np.array([[1.0, 1.0], [1.0, 0.0]])),
    # positive control: an SD pair must drive the mass towards 0
    "sd_control": (np.diag([1.0, 2.0]), np.array([[1.0, 1.0], [1.0, 3.0]])),
}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--samples", type=int, default=100_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default=str(ROOT / "tests" / "fixtures" / "ac3_oracle.json"))
    args = ap.parse_args()
    rec = {"samples": args.samples, "seed": args.seed, "pairs": {}}
    for name, (A, B) in PAIRS.items():
        mass, used = min_joint_offdiag_mass(A, B, args.samples, args.seed)
        rec["pairs"][name] = {"A": A.tolist(), "B": B.tolist(), "min_joint_mass": mass, "nonsingular_samples": used}
        print(f"{name:12s} min joint off-diagonal mass {mass:.6f} over {used} congruences")
    with open(args.out, "w") as fh:
        json.dump(rec, fh, indent=2)
        fh.write("\n")


if __name__ == "__main__":
    main()
