import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from pcabiplot.errors import ValidationError
from pcabiplot.matrix import (
    CovarianceMatrix,
    DataMatrix,
    Divisor,
    center,
    column_variances,
    covariance,
    mean_relative_difference,
)


def test_default_labels():
    X = DataMatrix(np.zeros((3, 2)))
    assert X.row_labels == ("1", "2", "3")
    assert X.col_labels == ("V1", "V2")
    assert X.shape == (3, 2)


def test_values_are_read_only_copies():
    a = np.ones((3, 2))
    X = DataMatrix(a)
    a[0, 0] = 99.0
    assert X.values[0, 0] == 1.0
    with pytest.raises(ValueError):
        X.values[0, 0] = 5.0


@pytest.mark.parametrize("bad", [np.zeros((1, 2)), np.zeros((3, 0)), np.zeros(4)])
def test_rejects_bad_shapes(bad):
    with pytest.raises(ValidationError):
        DataMatrix(bad)


def test_rejects_non_finite():
    with pytest.raises(ValidationError, match="non-finite"):
        DataMatrix(np.array([[1.0, np.nan], [2.0, 3.0]]))


def test_label_count_mismatch():
    with pytest.raises(ValidationError):
        DataMatrix(np.zeros((2, 2)), ("a",), ("x", "y"))


def test_ex2_centering(ex2):
    # column means of the raw data are 5.83 and 3.63
    assert ex2.is_centered()
    np.testing.assert_allclose(ex2.values[0], [10 - 35 / 6, 6 - 21.8 / 6])


def test_ex2_variances(ex2):
    np.testing.assert_allclose(column_variances(ex2), [18.97, 3.13], atol=0.005)


def test_variance_divisors():
    X = DataMatrix(np.array([[1.0], [2.0], [3.0], [4.0]]))
    # sum of squares about the mean is 5
    assert column_variances(X, Divisor.N_MINUS_ONE)[0] == pytest.approx(5 / 3)
    assert column_variances(X, Divisor.N)[0] == pytest.approx(5 / 4)
    assert column_variances(X, Divisor.ONE)[0] == pytest.approx(5.0)


def test_insufficient_observations():
    with pytest.raises(ValidationError, match="insufficient observations"):
        Divisor.N_MINUS_ONE.value_for(1)


def test_covariance_requires_centering():
    X = DataMatrix(np.array([[1.0, 2.0], [3.0, 5.0], [4.0, 4.0]]))
    with pytest.raises(ValidationError, match="input not centered"):
        covariance(X)


def test_covariance_ex2(ex2):
    S = covariance(ex2)
    np.testing.assert_allclose(np.diag(S.values), [18.97, 3.13], atol=0.005)
    assert np.array_equal(S.values, S.values.T)
    assert S.divisor is Divisor.N_MINUS_ONE


def test_covariance_matrix_checks():
    with pytest.raises(ValidationError, match="not symmetric"):
        CovarianceMatrix(np.array([[1.0, 2.0], [0.0, 1.0]]), Divisor.N)
    with pytest.raises(ValidationError):
        CovarianceMatrix(np.zeros((2, 3)), Divisor.N)


def test_mean_relative_difference_examples():
    assert mean_relative_difference([1.0, 2.0], [1.0, 2.0]) == 0.0
    assert mean_relative_difference([1.0, 1.0], [1.2, 0.8]) == pytest.approx(0.2)
    # target is the reference: swapping arguments changes the result
    assert mean_relative_difference([5.0], [4.0]) == pytest.approx(0.2)
    assert mean_relative_difference([4.0], [5.0]) == pytest.approx(0.25)
    with pytest.raises(ValidationError, match="relative difference undefined"):
        mean_relative_difference([0.0, 0.0], [1.0, 0.0])
    with pytest.raises(ValidationError):
        mean_relative_difference([1.0, 2.0], [1.0])


finite = st.floats(-1e3, 1e3, allow_nan=False)


@settings(max_examples=50, deadline=None)
@given(arrays(float, st.tuples(st.integers(2, 8), st.integers(1, 4)), elements=finite))
def test_center_is_idempotent_and_centered(a):
    Y = center(DataMatrix(a))
    assert np.all(np.abs(Y.values.mean(axis=0)) < 1e-9)
    np.testing.assert_allclose(center(Y).values, Y.values, atol=1e-9)


@settings(max_examples=50, deadline=None)
@given(arrays(float, st.tuples(st.integers(2, 8), st.integers(1, 4)), elements=finite))
def test_covariance_is_symmetric_psd(a):
    S = covariance(center(DataMatrix(a))).values
    assert np.array_equal(S, S.T)
    assert np.all(np.linalg.eigvalsh(S) >= -1e-8 * max(1.0, np.abs(S).max()))
