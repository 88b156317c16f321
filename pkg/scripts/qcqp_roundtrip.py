"""Diagonalize random SD QCQP instances of each kind, emit models and check them by sampling.

Usage: python3 scripts/qcqp_roundtrip.py [--instances N] [--samples S] [--seed S]
"""
import argparse

import numpy as np

from sdcong.planted import random_sd_general_multi, random_sd_qcqp
from sdcong.qcqp_reform import classify_exactness, diagonalize_qcqp, emit_lp, emit_socp, verify_reformulation


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--instances", type=int, default=25)
    ap.add_argument("--samples", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    for kind in ("trs", "gtrs", "igtrs", "two", "general"):
        worst, rows, status = 0.0, 0, set()
        for i in range(args.instances):
            n = int(rng.integers(1, 8)) if kind != "general" else int(rng.integers(2, 6))
            p = random_sd_qcqp(rng, kind, n) if kind != "general" else random_sd_general_multi(rng, n, 3)
            d = diagonalize_qcqp(p)
            model = emit_lp(d) if kind == "general" else emit_socp(d)
            rep = verify_reformulation(p, d, args.samples, seed=i)
            worst = max(worst, rep.max_discrepancy)
            rows += len(model.rows)
            status.add(classify_exactness(d).status.value)
        print(f"{kind:8s} instances {args.instances}  max discrepancy {worst:.2e}  rows {rows}  exactness {sorted(status)}")


if __name__ == "__main__":
    main()
