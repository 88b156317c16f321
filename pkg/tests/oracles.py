"""Independent reference computations (numpy only, no sdcong imports)."""
import numpy as np

J = np.array([[0.0, 1.0], [-1.0, 0.0]])


def offdiag_mass(P, M):
    """Column-scaling invariant off-diagonal mass of ``P_k^T M P_k`` for a stack of 2x2 ``P_k``.

    ``|x12| / sqrt(|x11 x22| + x12^2)``, taken as 0 when the image is zero.
    """
    X = np.einsum("kji,jl,klm->kim", P, M, P)
    den = np.sqrt(np.abs(X[:, 0, 0] * X[:, 1, 1]) + X[:, 0, 1] ** 2)
    safe = np.where(den > 0, den, 1.0)
    return np.where(den > 0, np.abs(X[:, 0, 1]) / safe, 0.0)


def min_joint_offdiag_mass(A, B, samples=100_000, seed=0):
    """Minimum over random nonsingular 2x2 ``P`` of max(mass(A), mass(B))."""
    rng = np.random.default_rng(seed)
    P = rng.standard_normal((samples, 2, 2))
    P = P[np.abs(np.linalg.det(P)) > 1e-12]
    joint = np.maximum(offdiag_mass(P, np.asarray(A, float)), offdiag_mass(P, np.asarray(B, float)))
    return float(joint.min()), int(P.shape[0])


def sd_2x2(A, B, rel=1e-9):
    """Closed-form SD test for 2x2 symmetric pairs.

    ``u`` and ``v`` diagonalize both forms only if ``Au || Bu`` and ``Av || Bv``,
    i.e. both are roots of ``q(u) = det[Au, Bu] = u^T C u`` with
    ``C = sym(A J B)``.  SD iff ``q`` vanishes identically or has two
    distinct root directions (``C`` indefinite).  Returns None when
    ``det C`` is too close to zero to call.
    """
    A = np.asarray(A, float)
    B = np.asarray(B, float)
    C = A @ J @ B
    C = 0.5 * (C + C.T)
    s = max(1.0, np.linalg.norm(A) * np.linalg.norm(B))
    if np.linalg.norm(C) <= rel * s:
        return True
    det = C[0, 0] * C[1, 1] - C[0, 1] ** 2
    if det == 0.0:
        return False  # rank-one C: a single root direction
    if abs(det) <= 1e-6 * s * s:
        return None
    return bool(det < 0)


def pencil_grid_max_min_eig(mats, steps=41):
    """Max over a grid of the max-norm sphere of lambda_min(sum lam_i A_i)."""
    m = len(mats)
    grid = np.linspace(-1.0, 1.0, steps)
    best = -np.inf
    for j in range(m):
        for sign in (-1.0, 1.0):
            for rest in np.stack(np.meshgrid(*[grid] * (m - 1), indexing="ij"), -1).reshape(-1, m - 1):
                lam = np.insert(rest, j, sign)
                S = sum(l * A for l, A in zip(lam, mats))
                best = max(best, np.linalg.eigvalsh(S)[0])
    return best
