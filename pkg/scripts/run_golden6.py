"""Reproduce the worked 6x6 example step by step.

Prints the canonical-form quantities (p, q, r, eigenvalues of B3, the
corrected block B1c), the eigenvalues of A1^-1 B1c and the diagonals
obtained both with the returned congruence and with the congruence
rescaled so its third row reads (1, 1, 1, ...).
"""
from pathlib import Path

import numpy as np

from sdcong.io import load_matrix
from sdcong.numeric_core import apply_congruence, inertia
from sdcong.pair_sd import sd_pair

DATA = Path(__file__).resolve().parents[1] / "data"


def main():
    A = load_matrix(DATA / "golden6_A.json")
    B = load_matrix(DATA / "golden6_B.json")
    out = sd_pair(A, B)
    cf = out.trace["canonical"]
    np.set_printoptions(precision=4, suppress=True, linewidth=120)
    print("verdict:", out.verdict.value)
    print(f"p, q, r = {cf.p}, {cf.q}, {cf.r}")
    print("eigenvalues of B3:", cf.steps["eigB3"])
    print("B1 - B4 B6^-1 B4^T =\n", cf.B1c)
    print("eigenvalues of A1^-1 B1c:", sorted(lam for lam, _ in out.trace["clusters"]))

    P = out.P
    print("diag(P^T A P):", out.diagA, "inertia", tuple(inertia(np.diag(out.diagA))))
    print("diag(P^T B P):", out.diagB, "inertia", tuple(inertia(np.diag(out.diagB))))

    V2 = out.trace["V2"]
    P1 = cf.U.P.copy()
    P1[:, :3] = cf.U.P[:, :3] @ (V2 / V2[2])
    print("rescaled congruence:\n", P1)
    print("diag(P^T A P) rescaled:", np.diag(apply_congruence(P1, A)))
    print("diag(P^T B P) rescaled:", np.diag(apply_congruence(P1, B)))


if __name__ == "__main__":
    main()
