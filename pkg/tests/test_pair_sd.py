import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from oracles import sd_2x2
from sdcong.numeric_core import apply_congruence, inertia, is_diagonal, max_offdiag
from sdcong.outcome import Obstruction, ObstructionFound, Verdict
from sdcong.pair_sd import canonical_pair_form, real_diag_test, sd_pair
from sdcong.planted import definite_pencil_pair, random_symmetric, well_conditioned

GOLDEN6_RATIOS = [-2.2837, 0.7458, 1.5657]


def test_canonical_form_golden6(golden6):
    A, B = golden6
    cf = canonical_pair_form(A, B)
    assert (cf.p, cf.q, cf.r) == (3, 2, 1)
    np.testing.assert_allclose(cf.B1c, [[-2, 2, 0], [2, 5, 1], [0, 1, 7]], atol=1e-12)
    np.testing.assert_allclose(sorted(cf.b3), [1, 6], atol=1e-12)
    np.testing.assert_allclose(cf.B2c, 0, atol=1e-12)
    np.testing.assert_allclose(sorted(cf.steps["eigB3"]), [0, 1, 6], atol=1e-9)


def test_canonical_form_block_pattern(golden6):
    A, B = golden6
    cf = canonical_pair_form(A, B)
    p, q = cf.p, cf.q
    UA = apply_congruence(cf.U.P, A)
    UB = apply_congruence(cf.U.P, B)
    np.testing.assert_allclose(UA[:p, :p], np.diag(cf.a1), atol=1e-12)
    np.testing.assert_allclose(UA[p:, :], 0, atol=1e-12)
    np.testing.assert_allclose(UB[:p, p : p + q], 0, atol=1e-12)
    np.testing.assert_allclose(UB[p : p + q, p : p + q], np.diag(cf.b3), atol=1e-12)
    np.testing.assert_allclose(UB[p + q :, p:], 0, atol=1e-12)


def test_canonical_form_a_nonsingular(rng):
    B = random_symmetric(rng, 4)
    cf = canonical_pair_form(np.eye(4), B)
    assert (cf.p, cf.q, cf.r) == (4, 0, 0)
    np.testing.assert_allclose(cf.B1c, B, atol=1e-12)


def test_canonical_form_b2_pair():
    cf = canonical_pair_form(np.diag([1.0, 0.0]), [[1, 1], [1, 0]])
    assert (cf.p, cf.q, cf.r) == (1, 0, 1)
    np.testing.assert_allclose(np.abs(cf.B2c), [[1.0]])


def test_real_diag_golden6(golden6):
    cf = canonical_pair_form(*golden6)
    cert = real_diag_test(cf.B1c / cf.a1[:, None])
    assert [k for _, k in cert.clusters] == [1, 1, 1]
    np.testing.assert_allclose(sorted(cert.eigenvalues), GOLDEN6_RATIOS, atol=1e-3)


def test_real_diag_identity():
    cert = real_diag_test(np.eye(4))
    assert cert.clusters == [(1.0, 4)]
    M = np.eye(4)
    np.testing.assert_allclose(np.linalg.solve(cert.V2, M @ cert.V2), np.eye(4), atol=1e-12)


def test_real_diag_rotation():
    with pytest.raises(ObstructionFound) as info:
        real_diag_test(np.array([[0.0, 1.0], [-1.0, 0.0]]))
    assert info.value.obstruction is Obstruction.NON_REAL_EIGENVALUE


def test_real_diag_jordan_block():
    with pytest.raises(ObstructionFound) as info:
        real_diag_test(np.array([[2.0, 1.0], [0.0, 2.0]]))
    assert info.value.obstruction is Obstruction.NON_DIAGONALIZABLE_JORDAN


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 7))
def test_real_diag_block_scalar(seed, p):
    rng = np.random.default_rng(seed)
    vals = rng.choice([-2.0, 0.5, 3.0], p)
    S = well_conditioned(rng, p)
    M = S @ np.diag(vals) @ np.linalg.inv(S)
    cert = real_diag_test(M)
    assert sum(k for _, k in cert.clusters) == p
    J = np.linalg.solve(cert.V2, M @ cert.V2)
    np.testing.assert_allclose(J, np.diag(cert.eigenvalues), atol=1e-8 * max(1, np.linalg.norm(M)))


def test_sd_pair_golden6(golden6):
    A, B = golden6
    out = sd_pair(A, B)
    assert out.verdict is Verdict.SD
    P = out.P
    assert is_diagonal(apply_congruence(P, A)) and is_diagonal(apply_congruence(P, B))
    assert inertia(np.diag(out.diagA)) == (3, 0, 3)
    assert inertia(np.diag(out.diagB)) == (4, 1, 1)
    nz = np.abs(out.diagA) > 1e-8
    np.testing.assert_allclose(sorted(out.diagB[nz] / out.diagA[nz]), GOLDEN6_RATIOS, atol=1e-3)


@pytest.mark.parametrize("n", [1, 3, 6])
def test_sd_pair_trs(rng, n):
    out = sd_pair(np.eye(n), random_symmetric(rng, n))
    assert out.is_sd


def test_sd_pair_zero_a_and_zero_b(rng):
    B = random_symmetric(rng, 3)
    assert sd_pair(np.zeros((3, 3)), B).is_sd
    assert sd_pair(B, np.zeros((3, 3))).is_sd


@pytest.mark.parametrize(
    "A, B, obstruction",
    [
        (np.diag([1.0, -1.0]), [[0, 1], [1, 0]], Obstruction.NON_REAL_EIGENVALUE),
        (np.diag([1.0, 0.0]), [[1, 1], [1, 0]], Obstruction.B2_NOT_ZERO),
        (np.diag([1.0, 1.0]), [[2, 1], [1, 2]], None),
    ],
)
def test_sd_pair_small_cases(A, B, obstruction):
    out = sd_pair(A, B)
    if obstruction is None:
        assert out.is_sd
    else:
        assert out.verdict is Verdict.NOT_SD
        assert out.obstruction is obstruction
        assert out.P is None


def test_sd_pair_jordan_obstruction():
    # A^-1 B is a single Jordan block
    A = np.array([[0.0, 1.0], [1.0, 0.0]])
    B = np.array([[0.0, 2.0], [2.0, 1.0]])
    out = sd_pair(A, B)
    assert out.verdict is Verdict.NOT_SD
    assert out.obstruction is Obstruction.NON_DIAGONALIZABLE_JORDAN


def test_sd_pair_borderline_is_indeterminate():
    # ||B2c|| sits right next to the threshold
    A = np.diag([1.0, 0.0])
    B = np.array([[1.0, 3e-8], [3e-8, 0.0]])
    out = sd_pair(A, B)
    assert out.verdict is Verdict.INDETERMINATE
    assert out.obstruction is Obstruction.BORDERLINE
    assert "B2c" in out.detail


def test_sd_pair_certificate_is_real(rng):
    A, B = definite_pencil_pair(rng, 6)
    out = sd_pair(A, B)
    assert out.is_sd
    for M, d in zip((A, B), out.diagonals):
        X = apply_congruence(out.P, M)
        assert max_offdiag(X) <= 1e-8 * max(1, np.linalg.norm(M))
        np.testing.assert_allclose(np.diag(X), d)


ints = st.integers(-3, 3)


@settings(max_examples=300, deadline=None)
@given(arrays(np.float64, (2, 2), elements=ints), arrays(np.float64, (2, 2), elements=ints))
def test_sd_pair_matches_2x2_oracle(A, B):
    A = 0.5 * (A + A.T)
    B = 0.5 * (B + B.T)
    expected = sd_2x2(A, B)
    assume(expected is not None)
    out = sd_pair(A, B)
    if out.verdict is not Verdict.INDETERMINATE:
        assert out.is_sd == expected


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_sd_pair_matches_2x2_oracle_generic(seed):
    rng = np.random.default_rng(seed)
    A, B = random_symmetric(rng, 2), random_symmetric(rng, 2)
    expected = sd_2x2(A, B)
    assume(expected is not None)
    assert sd_pair(A, B).is_sd == expected


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 7))
def test_sd_pair_congruence_invariance(seed, n):
    rng = np.random.default_rng(seed)
    A, B = random_symmetric(rng, n), random_symmetric(rng, n)
    T = well_conditioned(rng, n)
    v1 = sd_pair(A, B).verdict
    v2 = sd_pair(T.T @ A @ T, T.T @ B @ T).verdict
    if Verdict.INDETERMINATE not in (v1, v2):
        assert v1 == v2


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 8))
def test_sd_pair_planted(seed, n):
    rng = np.random.default_rng(seed)
    P = well_conditioned(rng, n)
    Da = np.diag(rng.integers(-2, 3, n).astype(float))
    Db = np.diag(rng.standard_normal(n))
    A, B = P.T @ Da @ P, P.T @ Db @ P
    out = sd_pair(A, B)
    assert out.is_sd, out
    assert inertia(np.diag(out.diagA)) == inertia(Da)
    assert inertia(np.diag(out.diagB)) == inertia(Db)
