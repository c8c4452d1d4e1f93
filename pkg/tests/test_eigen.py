import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pcabiplot.eigen import canonical_signs, eigen_symmetric
from pcabiplot.errors import ValidationError
from pcabiplot.matrix import covariance


def roots_2x2(a, b, c):
    """Eigenvalues of [[a, b], [b, c]], descending."""
    mid = (a + c) / 2
    rad = math.hypot((a - c) / 2, b)
    return [mid + rad, mid - rad]


def roots_3x3(M):
    """Closed-form eigenvalues of a symmetric 3x3 matrix (trigonometric cubic solution).

    Evaluated at 50 digits: acos is ill-conditioned near repeated roots.
    """
    with mpmath.workdps(50):
        A = [[mpmath.mpf(float(M[i, j])) for j in range(3)] for i in range(3)]
        p1 = A[0][1] ** 2 + A[0][2] ** 2 + A[1][2] ** 2
        q = (A[0][0] + A[1][1] + A[2][2]) / 3
        if p1 == 0:
            return sorted((float(A[i][i]) for i in range(3)), reverse=True)
        p2 = sum((A[i][i] - q) ** 2 for i in range(3)) + 2 * p1
        p = mpmath.sqrt(p2 / 6)
        B = mpmath.matrix([[(A[i][j] - (q if i == j else 0)) / p for j in range(3)] for i in range(3)])
        r = mpmath.det(B) / 2
        phi = mpmath.acos(min(mpmath.mpf(1), max(mpmath.mpf(-1), r))) / 3
        e1 = q + 2 * p * mpmath.cos(phi)
        e3 = q + 2 * p * mpmath.cos(phi + 2 * mpmath.pi / 3)
        return [float(e1), float(3 * q - e1 - e3), float(e3)]


def check_decomposition(M, res):
    lam, V = res.eigenvalues, res.eigenvectors
    m = len(lam)
    assert np.all(np.diff(lam) <= 0)
    np.testing.assert_allclose(np.linalg.norm(V, axis=0), 1.0, atol=1e-10)
    np.testing.assert_allclose(V.T @ V, np.eye(m), atol=1e-9)
    resid = np.abs(M @ V - V * lam).max()
    assert resid <= 1e-8 * (1 + np.abs(M).sum(axis=1).max())
    scale = max(np.linalg.norm(M), 1e-300)
    assert np.linalg.norm(V @ np.diag(lam) @ V.T - M) <= 1e-8 * scale
    assert abs(lam.sum() - np.trace(M)) <= 1e-9 * max(1.0, abs(np.trace(M)), np.abs(lam).sum())


def test_ex2_spectrum(ex2):
    res = eigen_symmetric(covariance(ex2))
    np.testing.assert_allclose(res.eigenvalues, [21.28, 0.81], atol=0.005)
    # columns equal +-(-0.94, -0.34) and +-(0.34, -0.94)
    V = res.eigenvectors
    np.testing.assert_allclose(np.abs(V[:, 0]), [0.94, 0.34], atol=0.005)
    np.testing.assert_allclose(np.abs(V[:, 1]), [0.34, 0.94], atol=0.005)
    assert V[0, 0] * V[1, 0] > 0 and V[0, 1] * V[1, 1] < 0


def test_ex2_matches_numpy_oracle(ex2):
    res = eigen_symmetric(covariance(ex2))
    np.testing.assert_allclose(res.eigenvalues, [21.284012242764234, 0.809321090569098], rtol=1e-12)


def test_identity():
    res = eigen_symmetric(np.eye(3))
    np.testing.assert_allclose(res.eigenvalues, [1, 1, 1])
    check_decomposition(np.eye(3), res)


def test_diagonal():
    res = eigen_symmetric(np.diag([4.0, 9.0]))
    np.testing.assert_allclose(res.eigenvalues, [9.0, 4.0])
    np.testing.assert_allclose(np.abs(res.eigenvectors), [[0, 1], [1, 0]])


def test_canonical_signs():
    res = eigen_symmetric(np.array([[2.0, -1.0], [-1.0, 2.0]]))
    V = res.eigenvectors
    for k in range(2):
        j = np.argmax(np.abs(V[:, k]))
        assert V[j, k] > 0
    # exact tie in magnitude: the lowest index carries the positive sign
    np.testing.assert_array_equal(canonical_signs(np.array([[-0.5], [0.5]])), [-1.0])


def test_equal_eigenvalues_ordered_by_dominant_index():
    res = eigen_symmetric(np.diag([3.0, 5.0, 3.0]))
    np.testing.assert_array_equal(res.eigenvectors, np.eye(3)[:, [1, 0, 2]])


def test_degenerate_subspace_projector():
    # eigenspace of 2 is spanned by e1 and (e2 + e3)/sqrt(2) after rotation
    Q = np.array([[1, 0, 0], [0, 1, 1], [0, 1, -1]]) / np.array([1, math.sqrt(2), math.sqrt(2)])
    M = Q @ np.diag([2.0, 2.0, 7.0]) @ Q.T
    res = eigen_symmetric(M)
    np.testing.assert_allclose(res.eigenvalues, [7, 2, 2], atol=1e-12)
    W = res.eigenvectors[:, 1:]
    P = Q[:, :2] @ Q[:, :2].T
    np.testing.assert_allclose(W @ W.T, P, atol=1e-10)


def test_not_symmetric():
    with pytest.raises(ValidationError, match="matrix not symmetric"):
        eigen_symmetric(np.array([[1.0, 2.0], [0.0, 1.0]]))


def test_not_square():
    with pytest.raises(ValidationError):
        eigen_symmetric(np.zeros((2, 3)))


def test_small_negative_clamped_for_covariance():
    Y = np.array([[1.0, 1.0], [-1.0, -1.0], [0.0, 0.0]])
    from pcabiplot.matrix import DataMatrix

    res = eigen_symmetric(covariance(DataMatrix(Y)))
    assert np.all(res.eigenvalues >= 0.0)
    assert res.eigenvalues[1] == 0.0


sym_entry = st.floats(-100, 100, allow_nan=False)


@settings(max_examples=200, deadline=None)
@given(sym_entry, sym_entry, sym_entry)
def test_2x2_matches_closed_form(a, b, c):
    M = np.array([[a, b], [b, c]])
    res = eigen_symmetric(M)
    expected = roots_2x2(a, b, c)
    np.testing.assert_allclose(res.eigenvalues, expected, rtol=1e-9, atol=1e-9)
    check_decomposition(M, res)


@settings(max_examples=200, deadline=None)
@given(st.lists(sym_entry, min_size=6, max_size=6))
def test_3x3_matches_closed_form(e):
    M = np.array([[e[0], e[1], e[2]], [e[1], e[3], e[4]], [e[2], e[4], e[5]]])
    res = eigen_symmetric(M)
    np.testing.assert_allclose(res.eigenvalues, roots_3x3(M), rtol=1e-9, atol=1e-9 * max(1.0, np.abs(M).max()))
    check_decomposition(M, res)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_matches_numpy_oracle(m, seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(m, m)) * rng.uniform(0.01, 100)
    M = a + a.T
    res = eigen_symmetric(M)
    expected = np.linalg.eigvalsh(M)[::-1]
    np.testing.assert_allclose(res.eigenvalues, expected, atol=1e-10 * max(1.0, np.abs(M).max()))
    check_decomposition(M, res)
