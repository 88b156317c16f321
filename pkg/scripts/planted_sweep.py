"""Success rate and runtime of the family test on planted SD instances.

Usage: python3 scripts/planted_sweep.py [--trials N] [--seed S] [--out results.json]
"""
import argparse
import json
import time
from collections import Counter, defaultdict

import numpy as np

from sdcong.family_sd import sd_family
from sdcong.planted import planted_family

MODES = {"definite": {}, "semidefinite": {"semidefinite": True}, "common_zeros": {"common_zeros": 1}}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=20, help="trials per (n, m, mode) cell")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--nmax", type=int, default=10)
    ap.add_argument("--out", default=None)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)

    rows = []
    for mode, kw in MODES.items():
        for n in range(2, args.nmax + 1, 2):
            for m in range(2, 6):
                verdicts = Counter()
                times, resid = [], []
                paths = defaultdict(int)
                for _ in range(args.trials):
                    mats, _, _ = planted_family(rng, n, m, **kw)
                    t0 = time.perf_counter()
                    out = sd_family(mats)
                    times.append(time.perf_counter() - t0)
                    verdicts[out.verdict.value] += 1
                    paths[out.trace.get("path", "?")] += 1
                    if out.is_sd:
                        resid.append(max(out.trace["residual_offdiag"]))
                row = {
                    "mode": mode, "n": n, "m": m, "sd_rate": verdicts["SD"] / args.trials,
                    "verdicts": dict(verdicts), "paths": dict(paths),
                    "median_ms": 1e3 * float(np.median(times)), "max_residual": max(resid, default=float("nan")),
                }
                rows.append(row)
                print(f"{mode:13s} n={n:2d} m={m}  SD {row['sd_rate']:.2f}  "
                      f"median {row['median_ms']:7.1f} ms  max residual {row['max_residual']:.1e}  {dict(paths)}")
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(rows, fh, indent=2)


if __name__ == "__main__":
    main()
