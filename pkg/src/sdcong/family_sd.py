"""SD tests for families of m >= 2 symmetric matrices.

Three routes, picked by the pencil certificate available for the family:

* commuting families are diagonalized by an orthogonal matrix (recursive
  eigenspace refinement);
* a definite pencil ``S = sum(lam_i A_i) > 0`` is normalized to ``I`` and the
  remaining matrices must then commute;
* a semidefinite pencil is normalized to ``diag(I_p, 0)``; the kernel blocks
  are tested recursively and three block conditions decide the rest.

Without any semidefinite pencil the question is left open (Indeterminate).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Sequence

import numpy as np

from .numeric_core import (
    DEFAULT_TOL,
    BorderlineDecision,
    Congruence,
    DimensionError,
    TolerancePolicy,
    _borderline,
    as_symmat,
    cluster_values,
    commute,
    scale_of,
    spectral_decompose,
    split_rank,
)
from .outcome import (
    IllConditioned,
    Obstruction,
    ObstructionFound,
    SdOutcome,
    Verdict,
    certify,
    indeterminate,
    not_sd,
)
from .pair_sd import sd_pair

__all__ = [
    "PencilClass",
    "PencilCertificate",
    "SearchOptions",
    "CommutationFailure",
    "StructuralError",
    "SemidefCanonicalForm",
    "commuting_family_diag",
    "classify_pencil",
    "find_pencil",
    "mu_search",
    "sd_family_definite",
    "sd_family_semidefinite",
    "sd_family",
    "cdt_sd_check",
]


class StructuralError(ValueError):
    """The input violates a structural precondition (e.g. a common zero position)."""


class CommutationFailure(ObstructionFound):
    def __init__(self, i: int, j: int, norm: float):
        self.pair = (i, j)
        self.norm = norm
        super().__init__(
            Obstruction.COMMUTATION_FAILURE, f"matrices {i} and {j} do not commute (||[Ai, Aj]||_F = {norm:.3e})"
        )


class PencilClass(str, Enum):
    DEFINITE = "Definite"
    SEMIDEFINITE = "Semidefinite"
    NONE = "None"


@dataclass(frozen=True)
class PencilCertificate:
    lam: np.ndarray
    min_eig: float
    cls: PencilClass
    pivot_index: int
    rank: int = 0

    def combination(self, mats) -> np.ndarray:
        return sum(l * A for l, A in zip(self.lam, mats))


@dataclass(frozen=True)
class SearchOptions:
    seed: int = 0
    random_starts: int = 0
    iters_per_level: int = 25
    # stop once a definite pencil with min_eig >= stop_margin * scale is found
    stop_margin: float = 1e-2


@dataclass(frozen=True)
class SemidefCanonicalForm:
    p: int
    q: int
    Q1: np.ndarray
    Q2: np.ndarray
    blocks: list[dict] = field(repr=False)
    mu: np.ndarray = field(default_factory=lambda: np.zeros(0))
    D2: np.ndarray = field(default_factory=lambda: np.zeros((0, 0)))
    D3: np.ndarray = field(default_factory=lambda: np.zeros(0))


def _check_family(mats) -> list[np.ndarray]:
    if len(mats) == 0:
        return []
    out = [as_symmat(mats[0])]
    n = out[0].shape[0]
    for M in mats[1:]:
        out.append(as_symmat(M, n))
    return out


# ---------------------------------------------------------------------------
# commuting families


def _first_noncommuting_pair(mats, tol):
    for i, j in itertools.combinations(range(len(mats)), 2):
        if not commute(mats[i], mats[j], tol):
            return i, j, float(np.linalg.norm(mats[i] @ mats[j] - mats[j] @ mats[i]))
    return None


def commuting_family_diag(mats: Sequence, tol: TolerancePolicy = DEFAULT_TOL, *, n: int | None = None) -> Congruence:
    """Orthogonal ``Q`` with every ``Q^T A_i Q`` diagonal, for a commuting family.

    Raises :class:`CommutationFailure` naming the first non-commuting pair,
    :class:`BorderlineDecision` on a borderline eigenvalue gap and
    :class:`IllConditioned` when the block structure promised by the
    commutation test is not found.
    """
    mats = _check_family(mats)
    if not mats:
        if n is None:
            raise ValueError("empty family needs an explicit dimension")
        return Congruence(np.eye(n), 1.0)
    bad = _first_noncommuting_pair(mats, tol)
    if bad is not None:
        raise CommutationFailure(*bad)
    dim = mats[0].shape[0]
    radii = [max(1.0, float(np.max(np.abs(np.linalg.eigvalsh(M))))) if dim else 1.0 for M in mats]
    Q = _refine(mats, radii, np.eye(dim), tol)
    return Congruence(Q, float(np.linalg.cond(Q)) if dim else 1.0)


def _refine(mats, radii, basis, tol):
    if not mats or basis.shape[1] <= 1:
        return basis
    X = basis.T @ mats[0] @ basis
    w, V = np.linalg.eigh(0.5 * (X + X.T))
    clusters = cluster_values(w, tol.eps_cluster * radii[0], strict=True)
    if len(clusters) > 1:
        for Y in mats[1:]:
            Z = V.T @ (basis.T @ Y @ basis) @ V
            for a, b in itertools.combinations(clusters, 2):
                off = float(np.linalg.norm(Z[np.ix_(a, b)]))
                if off > tol.offdiag_threshold(Y):
                    raise IllConditioned(
                        f"eigenspace coupling {off:.3e} after a passed commutation test; tolerances inconsistent"
                    )
    parts = [_refine(mats[1:], radii[1:], basis @ V[:, c], tol) for c in clusters]
    return np.hstack(parts)


# ---------------------------------------------------------------------------
# pencils


def _pencil_scale(mats, lam) -> float:
    return max(1.0, float(sum(abs(l) * np.linalg.norm(A) for l, A in zip(lam, mats))))


def classify_pencil(mats: Sequence, lam, tol: TolerancePolicy = DEFAULT_TOL) -> PencilCertificate:
    """Normalize ``lam`` to unit max-norm and classify ``sum(lam_i A_i)``."""
    mats = _check_family(mats)
    lam = np.asarray(lam, dtype=float).ravel()
    if lam.shape[0] != len(mats):
        raise DimensionError(f"pencil has {lam.shape[0]} coefficients for {len(mats)} matrices")
    top = float(np.max(np.abs(lam))) if lam.size else 0.0
    if top == 0.0 or not np.all(np.isfinite(lam)):
        return PencilCertificate(lam, -np.inf, PencilClass.NONE, 0)
    lam = lam / top
    pivot = int(np.argmax(np.abs(lam)))
    S = sum(l * A for l, A in zip(lam, mats))
    thr = tol.eps_rank * _pencil_scale(mats, lam)
    d = np.linalg.eigvalsh(S)
    min_eig = float(d[0])
    rank = int(np.sum(d > thr))
    if np.linalg.norm(S) <= thr:
        cls = PencilClass.NONE  # zero pencil: lam != 0 but the combination vanishes
    elif min_eig > thr:
        cls = PencilClass.DEFINITE
    elif min_eig >= -thr:
        cls = PencilClass.SEMIDEFINITE
    else:
        cls = PencilClass.NONE
    return PencilCertificate(lam, min_eig, cls, pivot, rank)


def _softmin(w, tau):
    z = -(w - w[0]) / tau
    e = np.exp(z)
    s = e.sum()
    return w[0] - tau * np.log(s), e / s


def _ascend_face(R, j, sign, lam0, scale, opts):
    """Projected gradient ascent of the smoothed minimum eigenvalue on one face
    ``lam_j = sign`` of the max-norm sphere.  Returns the visited iterates'
    best point by true minimum eigenvalue."""
    m = len(R)
    lam = np.clip(lam0, -1.0, 1.0)
    lam[j] = sign
    free = np.ones(m, dtype=bool)
    free[j] = False

    def evaluate(l, tau):
        w, V = np.linalg.eigh(sum(c * A for c, A in zip(l, R)))
        val, wts = _softmin(w, tau)
        grad = np.array([np.einsum("ik,ij,jk->k", V, A, V) @ wts for A in R])
        return val, grad, w[0]

    best_lam, best = lam.copy(), -np.inf
    for tau in (1e-1, 1e-2, 1e-3, 1e-4, 1e-6):
        tau *= scale
        val, grad, lmin = evaluate(lam, tau)
        eta = 1.0 / scale
        for _ in range(opts.iters_per_level):
            if lmin > best:
                best, best_lam = lmin, lam.copy()
            g = np.where(free, grad, 0.0)
            if not np.any(g):
                break
            for _ in range(30):
                cand = np.where(free, np.clip(lam + eta * g, -1.0, 1.0), lam)
                cval, cgrad, clmin = evaluate(cand, tau)
                if cval >= val:
                    break
                eta *= 0.5
            else:
                break
            moved = np.max(np.abs(cand - lam))
            lam, val, grad, lmin = cand, cval, cgrad, clmin
            eta *= 1.5
            if moved < 1e-14:
                break
        if lmin > best:
            best, best_lam = lmin, lam.copy()
    return best_lam


def _polish_kernel(R, j, lam, scale, iters=8):
    """Push a nearly semidefinite pencil onto the boundary.

    If ``K`` spans the kernel of the semidefinite combination, the
    coefficients satisfy the linear system ``K^T (sum lam_i R_i) K = 0``.
    ``K`` is taken as the near-kernel of the current combination, for each
    plausible kernel dimension; ``lam_j`` stays fixed.
    """
    m = len(R)
    free = np.arange(m) != j
    w = np.linalg.eigvalsh(sum(c * A for c, A in zip(lam, R)))
    dims = [k for k in range(1, len(w)) if w[k - 1] < 0.1 * scale]
    out = []
    for k in dims:
        x = lam.copy()
        for _ in range(iters):
            S = sum(c * A for c, A in zip(x, R))
            V = np.linalg.eigh(S)[1][:, :k]
            iu = np.triu_indices(k)
            G = np.stack([(V.T @ A @ V)[iu] for A in R], axis=1)
            res = G @ x
            if not np.any(free):
                break
            delta = np.linalg.lstsq(G[:, free], -res, rcond=None)[0]
            x = x.copy()
            x[free] += delta
            top = np.max(np.abs(x))
            x = x / top if top > 0 else x
            if np.max(np.abs(delta)) < 1e-15:
                break
        out.append(x)
    return out


def _snap(lam, denom=16):
    return np.array([float(Fraction(x).limit_denominator(denom)) for x in lam])


def _rank_key(cert: PencilCertificate, reduced_min: float):
    order = {PencilClass.DEFINITE: 2, PencilClass.SEMIDEFINITE: 1, PencilClass.NONE: 0}[cert.cls]
    if cert.cls is PencilClass.DEFINITE:
        return (order, cert.min_eig, 0.0)
    # a clean semidefinite pencil has its reduced kernel eigenvalue at zero
    return (order, cert.rank, -abs(reduced_min))


def find_pencil(
    mats: Sequence,
    tol: TolerancePolicy = DEFAULT_TOL,
    opts: SearchOptions = SearchOptions(),
) -> PencilCertificate | None:
    """Best-effort search for ``lam`` (``||lam||_inf = 1``) maximizing
    ``lambda_min(sum(lam_i A_i))``.

    The common null space of the family is projected out first, so a
    semidefinite pencil whose kernel is exactly that null space shows up as a
    definite pencil of the reduced family.  Each face ``lam_j = +-1`` of the
    max-norm sphere is a box on which the objective is concave; every face is
    searched by smoothed projected gradient ascent.  Returns ``None`` when no
    definite or semidefinite pencil was found; that is not a proof that none
    exists.
    """
    mats = _check_family(mats)
    m = len(mats)
    if m == 0:
        return None
    n = mats[0].shape[0]
    fam_scale = max(scale_of(A) for A in mats)
    _, s, Vt = np.linalg.svd(np.vstack(mats))
    keep = s > tol.eps_rank * fam_scale
    W = Vt[: int(keep.sum())].T
    if W.shape[1] == 0:
        return None
    R = [W.T @ A @ W for A in mats]
    rscale = max(scale_of(A) for A in R)
    rng = np.random.default_rng(opts.seed)

    seen: list[tuple] = []
    best: PencilCertificate | None = None
    best_key = None

    def consider(lam):
        nonlocal best, best_key
        if not np.any(lam):
            return
        cert = classify_pencil(mats, lam, tol)
        if cert.cls is PencilClass.NONE and best is not None:
            key = _rank_key(cert, -np.inf)
        else:
            rmin = float(np.linalg.eigvalsh(sum(c * A for c, A in zip(cert.lam, R)))[0])
            key = _rank_key(cert, rmin)
        if best_key is None or key > best_key:
            best, best_key = cert, key

    starts = []
    for j in range(m):
        for sign in (1.0, -1.0):
            starts.append((j, sign, sign * np.eye(m)[j]))
            for _ in range(opts.random_starts):
                starts.append((j, sign, rng.uniform(-1, 1, m)))
    for j, sign, lam0 in starts:
        lam = _ascend_face(R, j, sign, np.array(lam0, dtype=float), rscale, opts)
        cands = [lam, _snap(lam)]
        if best is None or best.cls is not PencilClass.DEFINITE:
            cands += _polish_kernel(R, j, lam, rscale)
        for cand in cands:
            key = tuple(np.round(cand, 15))
            if key not in seen:
                seen.append(key)
                consider(cand)
        if (
            best is not None
            and best.cls is PencilClass.DEFINITE
            and best.min_eig >= opts.stop_margin * _pencil_scale(mats, best.lam)
        ):
            break
    if best is None or best.cls is PencilClass.NONE:
        return None
    return best


# ---------------------------------------------------------------------------
# mu search


def mu_search(diags: Sequence, tol: TolerancePolicy = DEFAULT_TOL) -> np.ndarray:
    """Coefficients ``mu`` with ``sum(mu_i D^i)`` nonsingular for diagonal ``D^i``.

    Greedy merge of supports: start from ``D = D^1`` and, for each next
    matrix, take the smallest ``s`` in ``0..q`` such that ``D + (s/q) D^{j+1}``
    has support equal to the union of both supports.  Stops as soon as ``D``
    is nonsingular.  Entries count as zero below ``eps_rank * scale``.
    """
    vecs = [np.diag(d) if np.ndim(d) == 2 else np.asarray(d, dtype=float) for d in diags]
    k = len(vecs)
    if k == 0:
        raise StructuralError("mu_search needs at least one matrix")
    q = vecs[0].shape[0]
    mu = np.zeros(k)
    mu[0] = 1.0
    if q == 0:
        return mu
    scale = max(1.0, max(float(np.max(np.abs(v))) for v in vecs))
    thr = tol.eps_rank * scale

    def supp(v):
        return split_rank(v, thr)

    union = np.zeros(q, dtype=bool)
    for v in vecs:
        union |= supp(v)
    if not union.all():
        raise StructuralError(f"common zero diagonal position(s) {np.flatnonzero(~union).tolist()}")

    D = vecs[0].copy()
    for j in range(1, k):
        if supp(D).all():
            break
        target = supp(D) | supp(vecs[j])
        for s in range(q + 1):
            cand = D + (s / q) * vecs[j]
            if np.array_equal(supp(cand), target):
                break
        else:
            raise StructuralError(f"no s in 0..{q} keeps the support union at step {j}")
        mu[j] = s / q
        D = cand
    if not supp(D).all():
        raise StructuralError("procedure exhausted the family without a nonsingular combination")
    return mu


# ---------------------------------------------------------------------------
# family SD


def _pencil_trace(cert: PencilCertificate) -> dict:
    return {"pencil": cert.lam.tolist(), "pencil_class": cert.cls.value, "pencil_min_eig": cert.min_eig,
            "pivot": cert.pivot_index}


def sd_family_definite(mats: Sequence, cert: PencilCertificate, tol: TolerancePolicy = DEFAULT_TOL) -> SdOutcome:
    mats = _check_family(mats)
    if cert.cls is not PencilClass.DEFINITE:
        raise ValueError("sd_family_definite needs a definite pencil certificate")
    trace = _pencil_trace(cert)
    trace["path"] = "definite"
    S = cert.combination(mats)
    d, U = np.linalg.eigh(S)
    if d[0] <= 0:
        return indeterminate(Obstruction.ILL_CONDITIONED, "pencil is not numerically positive definite", trace)
    P0 = U / np.sqrt(d)
    others = [i for i in range(len(mats)) if i != cert.pivot_index]
    images = [P0.T @ mats[i] @ P0 for i in others]
    images = [0.5 * (X + X.T) for X in images]
    try:
        R = commuting_family_diag(images, tol, n=S.shape[0])
    except CommutationFailure as exc:
        i, j = others[exc.pair[0]], others[exc.pair[1]]
        trace["failed_pair"] = (i, j)
        return not_sd(
            Obstruction.COMMUTATION_FAILURE,
            f"P^T A{i} P and P^T A{j} P do not commute after normalizing the pencil to I",
            trace,
        )
    except BorderlineDecision as exc:
        return indeterminate(Obstruction.BORDERLINE, str(exc), trace)
    except IllConditioned as exc:
        return indeterminate(Obstruction.ILL_CONDITIONED, str(exc), trace)
    return certify(P0 @ R.P, mats, tol, trace)


def _kernel_subfamily_sd(sub, tol, opts) -> SdOutcome:
    if len(sub) == 1:
        return certify(np.linalg.eigh(sub[0])[1], sub, tol, {"path": "single"})
    return sd_family(sub, tol, opts=opts)


def sd_family_semidefinite(
    mats: Sequence,
    cert: PencilCertificate,
    tol: TolerancePolicy = DEFAULT_TOL,
    opts: SearchOptions = SearchOptions(),
) -> SdOutcome:
    """SD test under a semidefinite pencil.

    Steps: normalize the pencil to ``diag(I_p, 0)``; recursively diagonalize
    the kernel blocks, moving common zeros to the end; pick ``mu`` so the
    combined kernel diagonal ``D3`` is nonsingular; check

    1. the coupling to the common-zero part vanishes,
    2. ``A_i^2 == D2 D3^{-1} A_i^3``,
    3. the Schur-type blocks ``A_i^1 - A_i^2 D3^{-1} D2^T`` commute;

    and assemble the congruence from an orthogonal diagonalizer of those blocks.
    """
    mats = _check_family(mats)
    if cert.cls not in (PencilClass.SEMIDEFINITE, PencilClass.DEFINITE):
        raise ValueError("sd_family_semidefinite needs a semidefinite pencil certificate")
    n = mats[0].shape[0]
    k = cert.pivot_index
    others = [i for i in range(len(mats)) if i != k]
    trace = _pencil_trace(cert)
    trace["path"] = "semidefinite"

    S = cert.combination(mats)
    thr = tol.eps_rank * _pencil_scale(mats, cert.lam)
    try:
        d, Q = np.linalg.eigh(S)
        for v in d:
            if _borderline(abs(v), thr):
                raise BorderlineDecision("pencil eigenvalue", abs(v), thr)
        if d[0] < -thr:
            return indeterminate(Obstruction.NO_PENCIL_FOUND, f"pencil has eigenvalue {d[0]:.3e} < 0", trace)
        pos = d > thr
        order = np.concatenate([np.flatnonzero(pos), np.flatnonzero(~pos)])
        p = int(pos.sum())
        Q1 = Q[:, order] * np.concatenate([1.0 / np.sqrt(d[order][:p]), np.ones(n - p)])
        trace["p"] = p
        calA = {i: Q1.T @ mats[i] @ Q1 for i in others}
        calA = {i: 0.5 * (X + X.T) for i, X in calA.items()}

        # kernel blocks
        q0 = n - p
        if q0 > 0:
            sub = [calA[i][p:, p:] for i in others]
            sub_out = _kernel_subfamily_sd(sub, tol, opts)
            trace["kernel_verdict"] = sub_out.verdict.value
            if sub_out.verdict is Verdict.NOT_SD:
                return not_sd(
                    Obstruction.KERNEL_BLOCK_NOT_SD, f"kernel blocks are not SD ({sub_out.detail})", trace
                )
            if sub_out.verdict is Verdict.INDETERMINATE:
                reason = sub_out.obstruction or Obstruction.NO_PENCIL_FOUND
                return indeterminate(reason, f"kernel block SD undecided: {sub_out.detail}", trace)
            V = sub_out.P
            kdiag = np.array([np.diag(V.T @ X @ V) for X in sub])  # (m-1) x q0
            kscale = max(1.0, max(float(np.linalg.norm(calA[i])) for i in others))
            nonzero = np.zeros(q0, dtype=bool)
            for row in kdiag:
                nonzero |= split_rank(row, tol.eps_rank * kscale, strict=True, what="kernel diagonal entry")
            perm = np.concatenate([np.flatnonzero(nonzero), np.flatnonzero(~nonzero)])
            V = V[:, perm]
            q = int(nonzero.sum())
        else:
            V = np.zeros((0, 0))
            q = 0
        Q2 = np.eye(n)
        Q2[p:, p:] = V
        trace["q"] = q

        bold = {i: Q2.T @ calA[i] @ Q2 for i in others}
        bold = {i: 0.5 * (X + X.T) for i, X in bold.items()}
        blk = {
            i: {
                "A1": X[:p, :p],
                "A2": X[:p, p : p + q],
                "A3": np.diag(X[p : p + q, p : p + q]).copy(),
                "A4": X[:p, p + q :],
                "scale": scale_of(X),
            }
            for i, X in bold.items()
        }

        if q > 0:
            mu = mu_search([blk[i]["A3"] for i in others], tol)
        else:
            mu = np.zeros(len(others))
            if others:
                mu[0] = 1.0
        D2 = sum(mu_j * blk[i]["A2"] for mu_j, i in zip(mu, others)) if others else np.zeros((p, q))
        D3 = sum(mu_j * blk[i]["A3"] for mu_j, i in zip(mu, others)) if others else np.zeros(q)
        trace["mu"] = mu.tolist()
        trace["cond_D3"] = float(np.max(np.abs(D3)) / np.min(np.abs(D3))) if q else 1.0

        # condition 1: no coupling to the common-zero coordinates
        for i in others:
            nrm = float(np.linalg.norm(blk[i]["A4"]))
            t = tol.eps_offdiag * blk[i]["scale"]
            if _borderline(nrm, t):
                raise BorderlineDecision(f"||A{i}^4||", nrm, t)
            if nrm > t:
                trace["failed_condition"] = 1
                return not_sd(Obstruction.B2_NOT_ZERO, f"condition 1 fails: block A{i}^4 has norm {nrm:.3e}", trace)

        # condition 2: coupling blocks are proportional through D2 D3^{-1}
        G = D2 / D3 if q else np.zeros((p, 0))
        for i in others:
            nrm = float(np.linalg.norm(blk[i]["A2"] - G * blk[i]["A3"]))
            t = tol.eps_offdiag * blk[i]["scale"]
            if _borderline(nrm, t):
                raise BorderlineDecision(f"||A{i}^2 - D2 D3^-1 A{i}^3||", nrm, t)
            if nrm > t:
                trace["failed_condition"] = 2
                return not_sd(
                    Obstruction.B2_NOT_ZERO, f"condition 2 fails for matrix {i}: residual {nrm:.3e}", trace
                )

        # condition 3: reduced leading blocks commute
        C = [blk[i]["A1"] - blk[i]["A2"] @ (D2 / D3).T if q else blk[i]["A1"] for i in others]
        C = [0.5 * (X + X.T) for X in C]
        try:
            P1 = commuting_family_diag(C, tol, n=p).P
        except CommutationFailure as exc:
            trace["failed_condition"] = 3
            i, j = others[exc.pair[0]], others[exc.pair[1]]
            trace["failed_pair"] = (i, j)
            return not_sd(Obstruction.COMMUTATION_FAILURE, f"condition 3 fails: reduced blocks {i}, {j} do not commute", trace)

        P = np.eye(n)
        P[:p, :p] = P1
        if q:
            P[p : p + q, :p] = -((D2 / D3).T @ P1)
        trace["scf"] = SemidefCanonicalForm(p, q, Q1, Q2, [blk[i] for i in others], mu, D2, D3)
        U = Q1 @ Q2 @ P
    except BorderlineDecision as exc:
        return indeterminate(Obstruction.BORDERLINE, str(exc), trace)
    except IllConditioned as exc:
        return indeterminate(Obstruction.ILL_CONDITIONED, str(exc), trace)
    except StructuralError as exc:
        return not_sd(Obstruction.KERNEL_BLOCK_NOT_SD, f"mu search failed: {exc}", trace)
    return certify(U, mats, tol, trace)


def sd_family(
    mats: Sequence,
    tol: TolerancePolicy = DEFAULT_TOL,
    lam=None,
    *,
    opts: SearchOptions = SearchOptions(),
) -> SdOutcome:
    """Decide SD for a family; dispatches on family size and pencil class.

    ``lam`` supplies a pencil and skips the search.  Families with no
    semidefinite pencil found come back Indeterminate (``NoPencilFound``):
    the criterion used here only covers families that have one.
    """
    mats = _check_family(mats)
    m = len(mats)
    if m == 0:
        raise ValueError("sd_family needs at least one matrix")
    if m == 1:
        return certify(np.linalg.eigh(mats[0])[1], mats, tol, {"path": "single"})
    if m == 2:
        return sd_pair(mats[0], mats[1], tol)
    n = mats[0].shape[0]
    fam_scale = max(scale_of(A) for A in mats)
    if all(np.linalg.norm(A) <= tol.eps_rank * fam_scale for A in mats):
        return certify(np.eye(n), mats, tol, {"path": "zero family"})

    if lam is not None:
        cert = classify_pencil(mats, lam, tol)
        if cert.cls is PencilClass.NONE:
            return indeterminate(
                Obstruction.NO_PENCIL_FOUND,
                f"supplied pencil is not semidefinite (min eigenvalue {cert.min_eig:.3e})",
                _pencil_trace(cert),
            )
    else:
        cert = find_pencil(mats, tol, opts)
        if cert is None:
            return indeterminate(
                Obstruction.NO_PENCIL_FOUND,
                "no semidefinite pencil found; SD without one is outside the criterion",
            )
    if cert.cls is PencilClass.DEFINITE:
        return sd_family_definite(mats, cert, tol)
    return sd_family_semidefinite(mats, cert, tol, opts)


def cdt_sd_check(Bobj, A, tol: TolerancePolicy = DEFAULT_TOL) -> bool:
    """SD precondition for the CDT problem: ``{I, B, A A^T}`` are SD iff ``B`` and ``A A^T`` commute."""
    Bobj = as_symmat(Bobj)
    A = np.asarray(A, dtype=float)
    if A.ndim == 1:
        A = A[:, None]
    if A.shape[0] != Bobj.shape[0]:
        raise DimensionError(f"A has {A.shape[0]} rows, B is {Bobj.shape[0]}x{Bobj.shape[0]}")
    return commute(Bobj, A @ A.T, tol)
