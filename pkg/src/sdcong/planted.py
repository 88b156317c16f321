"""Random instances with a known answer, for tests and experiment scripts."""
from __future__ import annotations

import numpy as np
from scipy.stats import ortho_group

from .qcqp_reform import Interval, QcqpProblem, Sense


def random_orthogonal(rng, n: int) -> np.ndarray:
    if n == 1:
        return np.array([[1.0 if rng.random() < 0.5 else -1.0]])
    return ortho_group.rvs(n, random_state=rng)


def well_conditioned(rng, n: int, lo: float = 0.3, hi: float = 3.0) -> np.ndarray:
    """``Q diag(s) W`` with singular values in ``[lo, hi]``."""
    return random_orthogonal(rng, n) @ np.diag(rng.uniform(lo, hi, n)) @ random_orthogonal(rng, n)


def random_symmetric(rng, n: int) -> np.ndarray:
    X = rng.standard_normal((n, n))
    return 0.5 * (X + X.T)


def planted_diagonals(rng, n: int, m: int, *, common_zeros: int = 0, semidefinite: bool = False) -> tuple[list, np.ndarray]:
    """Diagonals ``D_1..D_m`` carrying a hidden pencil ``lam`` with ``sum lam_i D_i >= 0``.

    The pencil is definite unless ``semidefinite``, in which case it vanishes
    on a few positions where another ``D_i`` is positive, so the kernel
    subfamily again has a definite pencil.  ``common_zeros``
    trailing positions are zero in every ``D_i``.
    """
    k = n - common_zeros
    lam = rng.choice([-1.0, 1.0], m) * rng.uniform(0.5, 1.0, m)
    j = int(rng.integers(m))
    lam[j] = 1.0
    D = rng.standard_normal((m, k))
    D[rng.random((m, k)) < 0.2] = 0.0
    target = rng.uniform(0.5, 2.0, k)
    if semidefinite and k >= 2 and m >= 2:
        ker = rng.choice(k, int(rng.integers(1, k)), replace=False)
        target[ker] = 0.0
        # the kernel subfamily gets a definite pencil of its own (D_i there)
        i = (j + 1 + int(rng.integers(m - 1))) % m
        D[i, ker] = rng.uniform(0.5, 2.0, ker.size)
    # fix D_j so that sum lam_i D_i equals target
    D[j] = target - (lam @ D - lam[j] * D[j])
    full = np.zeros((m, n))
    full[:, :k] = D
    return [np.diag(d) for d in full], lam


def planted_family(rng, n: int, m: int, **kw) -> tuple[list, np.ndarray, list]:
    """``A_i = P^T D_i P`` with well-conditioned ``P``; returns (mats, P, diagonals)."""
    Ds, _ = planted_diagonals(rng, n, m, **kw)
    P = well_conditioned(rng, n)
    mats = [P.T @ D @ P for D in Ds]
    return [0.5 * (A + A.T) for A in mats], P, Ds


def definite_pencil_pair(rng, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Random pair with ``mu1 A + mu2 B`` positive definite for a random ``mu``."""
    A = random_symmetric(rng, n)
    B = random_symmetric(rng, n)
    mu = rng.standard_normal(2)
    mu /= np.linalg.norm(mu)
    S = mu[0] * A + mu[1] * B
    shift = 0.5 - np.linalg.eigvalsh(S)[0]
    if shift > 0:
        # move the shift into whichever matrix carries more of the pencil
        if abs(mu[0]) >= abs(mu[1]):
            A = A + (shift / mu[0]) * np.eye(n)
        else:
            B = B + (shift / mu[1]) * np.eye(n)
    return A, B


def commuting_family(rng, n: int, m: int, *, cluster: int = 2) -> tuple[list, np.ndarray]:
    """Orthogonally similar diagonal family with forced repeated eigenvalues."""
    Q = random_orthogonal(rng, n)
    mats = []
    for _ in range(m):
        vals = rng.integers(-3, 4, n).astype(float)
        k = min(cluster, n)
        vals[:k] = vals[0]
        mats.append(Q @ np.diag(vals) @ Q.T)
    return [0.5 * (A + A.T) for A in mats], Q


# ---------------------------------------------------------------------------
# QCQP instances


def _sd_forms(rng, n, k):
    Ds, _ = planted_diagonals(rng, n, k)
    P = well_conditioned(rng, n)
    Pinv = np.linalg.inv(P)
    return [Pinv.T @ D @ Pinv for D in Ds]


def random_sd_qcqp(rng, kind: str, n: int) -> QcqpProblem:
    """SD instance of kind ``trs``, ``gtrs``, ``igtrs`` or ``two``."""
    if kind == "trs":
        A0 = random_symmetric(rng, n)
        return QcqpProblem.build(A0, rng.standard_normal(n), [(np.eye(n), None, -1.0, Sense.LE)])
    if kind in ("gtrs", "igtrs"):
        A0, A1 = _sd_forms(rng, n, 2)
        if np.allclose(A1, np.eye(n)):
            A1 = A1 + np.diag(np.arange(n) * 0.1)
        sense = Sense.LE if kind == "gtrs" else Interval(-1.0 - rng.random(), 1.0 + rng.random())
        return QcqpProblem.build(A0, rng.standard_normal(n), [(A1, rng.standard_normal(n), float(rng.standard_normal()), sense)])
    if kind == "two":
        A0, A1, A2 = _sd_forms(rng, n, 3)
        cons = [
            (A1, rng.standard_normal(n), -1.0, Sense.LE),
            (A2, rng.standard_normal(n), float(rng.standard_normal()), Sense.LE if rng.random() < 0.5 else Sense.EQ),
        ]
        return QcqpProblem.build(A0, rng.standard_normal(n), cons)
    raise ValueError(kind)


def random_sd_general_multi(rng, n: int, m: int) -> QcqpProblem:
    """Problem with linear terms whose homogenized forms are SD.

    The bordered matrices are ``T^T E_i T`` with diagonal ``E_i`` and the last
    row of ``T`` equal to ``e_{n+1}``, so the normalization form
    ``diag(0_n, 1)`` is part of the same SD family.
    """
    N = n + 1
    T = well_conditioned(rng, N)
    T[n] = 0.0
    T[n, n] = 1.0
    Es, _ = planted_diagonals(rng, N, m + 1)
    E0 = Es[0].copy()
    # corner of the bordered objective must vanish
    E0[n, n] = -float(np.sum(np.diag(E0)[:n] * T[:n, n] ** 2))
    Bs = [T.T @ E0 @ T] + [T.T @ E @ T for E in Es[1:]]
    Bs = [0.5 * (B + B.T) for B in Bs]
    cons = [(B[:n, :n], B[:n, n], float(B[n, n]), Sense.LE) for B in Bs[1:]]
    return QcqpProblem.build(Bs[0][:n, :n], Bs[0][:n, n], cons)
