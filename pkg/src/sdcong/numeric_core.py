"""Symmetric-matrix primitives shared by every SD routine.

All rank, diagonality, clustering and commutation decisions go through a
single :class:`TolerancePolicy`.  Thresholds are relative: a quantity is
compared against ``eps * max(1, ||M||_F)`` of the matrix being tested.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

__all__ = [
    "TolerancePolicy",
    "DEFAULT_TOL",
    "Congruence",
    "Inertia",
    "BorderlineDecision",
    "DimensionError",
    "as_symmat",
    "scale_of",
    "split_rank",
    "spectral_decompose",
    "apply_congruence",
    "inertia",
    "commute",
    "is_diagonal",
    "max_offdiag",
    "make_congruence",
    "cluster_values",
]

# a decision whose quantity lands within this factor of its threshold is
# reported as borderline instead of being forced either way
BORDERLINE_FACTOR = 10.0


class DimensionError(ValueError):
    pass


class BorderlineDecision(ArithmeticError):
    """A rank/cluster/zero test landed too close to its threshold."""

    def __init__(self, what: str, value: float, threshold: float):
        self.what = what
        self.value = float(value)
        self.threshold = float(threshold)
        super().__init__(f"{what}: {value:.3e} within {BORDERLINE_FACTOR:g}x of threshold {threshold:.3e}")


@dataclass(frozen=True)
class TolerancePolicy:
    eps_rank: float = 1e-10
    eps_offdiag: float = 1e-8
    eps_cluster: float = 1e-6
    eps_commute: float = 1e-10

    def __post_init__(self):
        for name in ("eps_rank", "eps_offdiag", "eps_cluster", "eps_commute"):
            v = getattr(self, name)
            if not (0.0 < v < 1.0):
                raise ValueError(f"{name} must lie in (0, 1), got {v!r}")

    def rank_threshold(self, M) -> float:
        return self.eps_rank * scale_of(M)

    def offdiag_threshold(self, M) -> float:
        return self.eps_offdiag * scale_of(M)


DEFAULT_TOL = TolerancePolicy()


class Inertia(NamedTuple):
    n_plus: int
    n_minus: int
    n_zero: int


@dataclass(frozen=True)
class Congruence:
    P: np.ndarray
    cond_estimate: float

    @property
    def n(self) -> int:
        return self.P.shape[0]


def scale_of(M) -> float:
    return max(1.0, float(np.linalg.norm(M)))


def as_symmat(data, n: int | None = None) -> np.ndarray:
    """Validate ``data`` as a finite square matrix and return its exact symmetrization.

    The (i, j) and (j, i) entries are averaged so the result is symmetric bit for bit.
    """
    a = np.array(data, dtype=float)
    if a.ndim == 0 and n in (None, 1):
        a = a.reshape(1, 1)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    if n is not None and a.shape[0] != n:
        raise DimensionError(f"expected dimension {n}, got {a.shape[0]}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    s = 0.5 * (a + a.T)
    s.setflags(write=False)
    return s


def _check_same_dim(*mats):
    shapes = {np.shape(m) for m in mats}
    if len(shapes) != 1:
        raise DimensionError(f"dimension mismatch: {sorted(shapes)}")


def _borderline(value: float, thr: float) -> bool:
    return thr / BORDERLINE_FACTOR < value < thr * BORDERLINE_FACTOR


def split_rank(d: np.ndarray, thr: float, *, strict: bool = False, what: str = "eigenvalue") -> np.ndarray:
    """Boolean mask of entries of ``d`` counted as nonzero (``|d_i| > thr``).

    With ``strict`` a :class:`BorderlineDecision` is raised if any ``|d_i|`` sits
    within the borderline band around ``thr``.
    """
    mag = np.abs(d)
    if strict:
        for v in mag:
            if _borderline(v, thr):
                raise BorderlineDecision(what, v, thr)
    return mag > thr


def spectral_decompose(A, tol: TolerancePolicy = DEFAULT_TOL, *, strict: bool = False, scale: float | None = None):
    """Orthogonal eigendecomposition with the numerically nonzero eigenvalues first.

    Returns ``(Q, d, p)`` with ``Q.T @ A @ Q == diag(d)``, ``|d[:p]|`` above the zero
    threshold ``eps_rank * max(1, ||A||_F)`` and ``d[p:]`` below it.  Within each
    group eigenvalues stay in ascending order.

    ``scale`` overrides the norm used for the zero threshold, for blocks that
    must be judged against their parent matrix.
    """
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    if n == 0:
        return np.zeros((0, 0)), np.zeros(0), 0
    try:
        d, Q = np.linalg.eigh(A)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise ArithmeticError(f"eigensolver failed: {exc}") from exc
    thr = tol.eps_rank * (scale_of(A) if scale is None else max(1.0, scale))
    nz = split_rank(d, thr, strict=strict)
    order = np.concatenate([np.flatnonzero(nz), np.flatnonzero(~nz)])
    return Q[:, order], d[order], int(nz.sum())


def apply_congruence(P, A) -> np.ndarray:
    P = np.asarray(P, dtype=float)
    A = np.asarray(A, dtype=float)
    if P.ndim != 2 or A.ndim != 2 or P.shape[0] != A.shape[0] or A.shape[0] != A.shape[1]:
        raise DimensionError(f"cannot form P^T A P for P {P.shape}, A {A.shape}")
    X = P.T @ A @ P
    return 0.5 * (X + X.T)


def inertia(A, tol: TolerancePolicy = DEFAULT_TOL) -> Inertia:
    A = np.asarray(A, dtype=float)
    d = np.linalg.eigvalsh(A) if A.size else np.zeros(0)
    thr = tol.rank_threshold(A)
    pos = int(np.sum(d > thr))
    neg = int(np.sum(d < -thr))
    return Inertia(pos, neg, len(d) - pos - neg)


def commute(A, B, tol: TolerancePolicy = DEFAULT_TOL) -> bool:
    _check_same_dim(A, B)
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    c = np.linalg.norm(A @ B - B @ A)
    return bool(c <= tol.eps_commute * max(1.0, np.linalg.norm(A) * np.linalg.norm(B)))


def max_offdiag(A) -> float:
    A = np.asarray(A, dtype=float)
    if A.shape[0] < 2:
        return 0.0
    return float(np.max(np.abs(A - np.diag(np.diag(A)))))


def is_diagonal(A, tol: TolerancePolicy = DEFAULT_TOL) -> bool:
    return max_offdiag(A) <= tol.offdiag_threshold(A)


def make_congruence(P, tol: TolerancePolicy = DEFAULT_TOL) -> Congruence:
    """Wrap ``P`` after checking it is numerically nonsingular."""
    P = np.array(P, dtype=float)
    if P.size == 0:
        return Congruence(P, 1.0)
    s = np.linalg.svd(P, compute_uv=False)
    if s[-1] <= tol.eps_rank * s[0]:
        raise ArithmeticError(f"congruence is numerically singular (sigma_min/sigma_max = {s[-1] / s[0]:.2e})")
    P.setflags(write=False)
    return Congruence(P, float(s[0] / s[-1]))


def cluster_values(values: Sequence[float], thr: float, *, strict: bool = False) -> list[np.ndarray]:
    """Group sorted values whose neighbouring gap is at most ``thr``.

    Returns index arrays (into ``values``), one per cluster, clusters in
    ascending order of value.
    """
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        return []
    order = np.argsort(v, kind="stable")
    gaps = np.diff(v[order])
    if strict:
        for g in gaps:
            if _borderline(g, thr):
                raise BorderlineDecision("eigenvalue gap", g, thr)
    cuts = np.flatnonzero(gaps > thr) + 1
    return [np.asarray(c) for c in np.split(order, cuts)]
