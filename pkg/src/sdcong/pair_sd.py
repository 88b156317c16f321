"""Simultaneous diagonalization by congruence for two symmetric matrices.

The test reduces (A, B) to the block form

    U^T A U = diag(A1, 0_q, 0_r)

              [ B1c  0    B2c ]
    U^T B U = [ 0    B3c  0   ]
              [ B2c^T 0   0   ]

with A1, B3c nonsingular diagonal.  The pair is SD exactly when ``B2c`` is
zero (or empty) and ``A1^{-1} B1c`` is diagonalizable over the reals.  The
Jordan form is never built; diagonalizability is decided per eigenvalue
cluster by comparing geometric and algebraic multiplicity.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .numeric_core import (
    DEFAULT_TOL,
    BorderlineDecision,
    Congruence,
    TolerancePolicy,
    _borderline,
    as_symmat,
    cluster_values,
    scale_of,
    spectral_decompose,
)
from .outcome import (
    IllConditioned,
    Obstruction,
    ObstructionFound,
    SdOutcome,
    certify,
    indeterminate,
    not_sd,
)

__all__ = ["CanonicalPairForm", "RealDiagCertificate", "canonical_pair_form", "real_diag_test", "sd_pair"]


@dataclass(frozen=True)
class CanonicalPairForm:
    p: int
    q: int
    r: int
    a1: np.ndarray  # diagonal of A1
    B1c: np.ndarray  # B1 - B4 B6^{-1} B4^T
    B2c: np.ndarray  # p x r coupling block
    b3: np.ndarray  # diagonal of B3c
    U: Congruence
    steps: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def n(self) -> int:
        return self.p + self.q + self.r

    @property
    def A1(self) -> np.ndarray:
        return np.diag(self.a1)

    @property
    def B3c(self) -> np.ndarray:
        return np.diag(self.b3)


@dataclass(frozen=True)
class RealDiagCertificate:
    V2: np.ndarray
    clusters: list[tuple[float, int]]
    cond: float
    residual: float

    @property
    def blocks(self) -> list[slice]:
        out, start = [], 0
        for _, k in self.clusters:
            out.append(slice(start, start + k))
            start += k
        return out

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.concatenate([np.full(k, lam) for lam, k in self.clusters]) if self.clusters else np.zeros(0)


def canonical_pair_form(A, B, tol: TolerancePolicy = DEFAULT_TOL, *, strict: bool = False) -> CanonicalPairForm:
    A = as_symmat(A)
    B = as_symmat(B, A.shape[0])
    n = A.shape[0]
    sB = scale_of(B)

    Q1, dA, p = spectral_decompose(A, tol, strict=strict)
    Bbar = Q1.T @ B @ Q1
    Bbar = 0.5 * (Bbar + Bbar.T)
    steps = {"Q1": Q1, "eigA": dA}

    if p == n:
        return CanonicalPairForm(
            p, 0, 0, dA.copy(), Bbar, np.zeros((p, 0)), np.zeros(0), Congruence(Q1, 1.0), steps
        )

    B1 = Bbar[:p, :p]
    B2 = Bbar[:p, p:]
    B3 = Bbar[p:, p:]
    # B3 is judged against ||B||, not its own norm
    V1, d3, q = spectral_decompose(B3, tol, strict=strict, scale=sB)
    r = n - p - q
    Q2 = np.eye(n)
    Q2[p:, p:] = V1
    B45 = B2 @ V1
    B4, B5 = B45[:, :q], B45[:, q:]
    b6 = d3[:q]

    Q3 = np.eye(n)
    Q3[p : p + q, :p] = -(B4 / b6).T
    B1c = B1 - (B4 / b6) @ B4.T
    B1c = 0.5 * (B1c + B1c.T)

    U = Q1 @ Q2 @ Q3
    steps.update({"B3": B3, "eigB3": d3, "V1": V1, "Q2": Q2, "Q3": Q3, "B4": B4, "B5": B5})
    return CanonicalPairForm(p, q, r, dA[:p].copy(), B1c, B5, b6.copy(), Congruence(U, float(np.linalg.cond(U))), steps)


def real_diag_test(M, tol: TolerancePolicy = DEFAULT_TOL, *, strict: bool = True) -> RealDiagCertificate:
    """Certify that the square matrix ``M`` is diagonalizable with real eigenvalues.

    Returns the eigenbasis ``V2`` (columns grouped by cluster, orthonormal
    inside each eigenspace).  Raises :class:`ObstructionFound` with
    ``NonRealEigenvalue`` or ``NonDiagonalizableJordan`` otherwise, and
    :class:`BorderlineDecision` / :class:`IllConditioned` when the answer is
    numerically unreliable.
    """
    M = np.asarray(M, dtype=float)
    p = M.shape[0]
    if p == 0:
        return RealDiagCertificate(np.zeros((0, 0)), [], 1.0, 0.0)

    w = np.linalg.eigvals(M)
    radius = max(1.0, float(np.max(np.abs(w))))
    thr = tol.eps_cluster * radius
    im = np.abs(w.imag)
    if strict:
        for v in im:
            if _borderline(v, thr):
                raise BorderlineDecision("imaginary part of eigenvalue", v, thr)
    if np.any(im > thr):
        k = int(np.argmax(im))
        raise ObstructionFound(
            Obstruction.NON_REAL_EIGENVALUE, f"eigenvalue {w[k]:.6g} of A1^-1 B1 is not real"
        )

    rank_thr = tol.eps_cluster * scale_of(M)
    clusters, bases = [], []
    for idx in cluster_values(w.real, thr, strict=strict):
        lam = float(np.mean(w.real[idx]))
        k = len(idx)
        _, s, Vt = np.linalg.svd(M - lam * np.eye(p))
        null_sv = s[p - k :]
        if strict:
            for v in (null_sv[0], s[p - k - 1] if k < p else np.inf):
                if _borderline(v, rank_thr):
                    raise BorderlineDecision(f"singular value of M - ({lam:.6g}) I", v, rank_thr)
        if null_sv[0] > rank_thr:
            geo = int(np.sum(s <= rank_thr))
            raise ObstructionFound(
                Obstruction.NON_DIAGONALIZABLE_JORDAN,
                f"eigenvalue {lam:.6g} has algebraic multiplicity {k} but geometric multiplicity {geo}",
            )
        clusters.append((lam, k))
        bases.append(Vt[p - k :].T)

    V2 = np.hstack(bases)
    cond = float(np.linalg.cond(V2))
    if cond > 1.0 / tol.eps_rank:
        raise IllConditioned(f"eigenbasis condition number {cond:.3e} exceeds 1/eps_rank")
    lams = np.concatenate([np.full(k, lam) for lam, k in clusters])
    residual = float(np.linalg.norm(M @ V2 - V2 * lams))
    return RealDiagCertificate(V2, clusters, cond, residual)


def _eigvecs(X) -> np.ndarray:
    return np.linalg.eigh(X)[1] if X.size else np.zeros((0, 0))


def sd_pair(A, B, tol: TolerancePolicy = DEFAULT_TOL) -> SdOutcome:
    """Decide whether ``A`` and ``B`` are simultaneously diagonalizable by congruence.

    On SD, ``outcome.P`` makes both ``P^T A P`` and ``P^T B P`` diagonal and
    ``outcome.diagA`` / ``outcome.diagB`` hold the diagonals.

    A borderline rank or cluster decision never yields NotSD.  The test is
    rerun with the default side of each threshold; if that produces a
    certified congruence the answer is SD, otherwise Indeterminate.
    """
    A = as_symmat(A)
    B = as_symmat(B, A.shape[0])
    out = _sd_pair(A, B, tol, strict=True)
    if out.obstruction is Obstruction.BORDERLINE:
        retry = _sd_pair(A, B, tol, strict=False)
        if retry.is_sd:
            retry.trace["borderline_resolved"] = out.detail
            return retry
    return out


def _sd_pair(A, B, tol, strict):
    n = A.shape[0]
    trace: dict = {"n": n}
    if n == 0:
        return certify(np.zeros((0, 0)), [A, B], tol, trace)

    try:
        cf = canonical_pair_form(A, B, tol, strict=strict)
        trace.update(p=cf.p, q=cf.q, r=cf.r, canonical=cf)
        if cf.p == 0:
            # A is numerically zero: B's eigenbasis does the job
            trace["path"] = "A = 0"
            return certify(_eigvecs(B), [A, B], tol, trace)

        if cf.r > 0:
            nb = float(np.linalg.norm(cf.B2c))
            thr = tol.eps_offdiag * scale_of(B)
            trace["norm_B2c"] = nb
            if strict and _borderline(nb, thr):
                raise BorderlineDecision("||B2c||", nb, thr)
            if nb > thr:
                return not_sd(
                    Obstruction.B2_NOT_ZERO,
                    f"coupling block B2c ({cf.p}x{cf.r}) has norm {nb:.3e}",
                    trace,
                )

        M = cf.B1c / cf.a1[:, None]
        trace["M"] = M
        cert = real_diag_test(M, tol, strict=strict)
        trace.update(clusters=cert.clusters, V2=cert.V2, cond_V2=cert.cond)

        G = cert.V2.T @ np.diag(cf.a1) @ cert.V2
        G = 0.5 * (G + G.T)
        R = scipy.linalg.block_diag(*[_eigvecs(G[b, b]) for b in cert.blocks])
        Q4 = np.eye(n)
        Q4[: cf.p, : cf.p] = cert.V2 @ R
        trace["Q4"] = Q4
        P = cf.U.P @ Q4
    except BorderlineDecision as exc:
        return indeterminate(Obstruction.BORDERLINE, str(exc), trace)
    except IllConditioned as exc:
        return indeterminate(Obstruction.ILL_CONDITIONED, str(exc), trace)
    except ObstructionFound as exc:
        return not_sd(exc.obstruction, exc.detail, trace)

    trace["path"] = "canonical"
    return certify(P, [A, B], tol, trace)
