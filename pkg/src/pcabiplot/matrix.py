"""Labeled dense matrices, centering, variances and covariance.

Everything here is a pure function over immutable inputs. Arrays stored on
``DataMatrix`` and ``CovarianceMatrix`` are copied and flagged read-only.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ValidationError

CENTER_TOL = 1e-9


class Divisor(str, enum.Enum):
    """Denominator used when turning a sum of squares into a (co)variance."""

    N_MINUS_ONE = "n-1"
    N = "n"
    ONE = "1"

    def value_for(self, n: int) -> float:
        if self is Divisor.N_MINUS_ONE:
            if n < 2:
                raise ValidationError("insufficient observations")
            return float(n - 1)
        if self is Divisor.N:
            return float(n)
        return 1.0


def _frozen(a, ndim: int) -> np.ndarray:
    arr = np.array(a, dtype=float, copy=True)
    if arr.ndim != ndim:
        raise ValidationError(f"expected a {ndim}-d array, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class DataMatrix:
    """An n x m numeric matrix with row (observation) and column (feature) labels."""

    values: np.ndarray
    row_labels: tuple[str, ...] = field(default=())
    col_labels: tuple[str, ...] = field(default=())

    def __post_init__(self):
        vals = _frozen(self.values, 2)
        n, m = vals.shape
        if n < 2 or m < 1:
            raise ValidationError(f"need n >= 2 and m >= 1, got {n}x{m}")
        if not np.all(np.isfinite(vals)):
            raise ValidationError("matrix contains non-finite values")
        rows = tuple(str(r) for r in self.row_labels) or tuple(str(i + 1) for i in range(n))
        cols = tuple(str(c) for c in self.col_labels) or tuple(f"V{j + 1}" for j in range(m))
        if len(rows) != n or len(cols) != m:
            raise ValidationError(
                f"label counts ({len(rows)}, {len(cols)}) do not match shape {n}x{m}"
            )
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "row_labels", rows)
        object.__setattr__(self, "col_labels", cols)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def m(self) -> int:
        return self.values.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    def with_values(self, values) -> DataMatrix:
        """Same labels, new numbers."""
        return DataMatrix(values, self.row_labels, self.col_labels)

    def column(self, j: int) -> np.ndarray:
        return self.values[:, j]

    def is_centered(self, tol: float = CENTER_TOL) -> bool:
        return bool(np.all(np.abs(self.values.mean(axis=0)) < tol))


@dataclass(frozen=True)
class CovarianceMatrix:
    values: np.ndarray
    divisor: Divisor
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        vals = _frozen(self.values, 2)
        if vals.shape[0] != vals.shape[1]:
            raise ValidationError("covariance matrix must be square")
        if not np.allclose(vals, vals.T, rtol=0.0, atol=1e-12 * max(1.0, np.abs(vals).max())):
            raise ValidationError("matrix not symmetric")
        if np.any(np.diag(vals) < -1e-12):
            raise ValidationError("covariance diagonal has negative entries")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "divisor", Divisor(self.divisor))
        object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def m(self) -> int:
        return self.values.shape[0]


def column_means(X: DataMatrix) -> np.ndarray:
    return X.values.mean(axis=0)


def center(X: DataMatrix) -> DataMatrix:
    """Subtract each column's mean. Labels are kept."""
    return X.with_values(X.values - column_means(X))


def column_variances(X: DataMatrix, divisor: Divisor = Divisor.N_MINUS_ONE) -> np.ndarray:
    d = Divisor(divisor).value_for(X.n)
    dev = X.values - column_means(X)
    return (dev**2).sum(axis=0) / d


def covariance(Y: DataMatrix, divisor: Divisor = Divisor.N_MINUS_ONE) -> CovarianceMatrix:
    """``(1/d) YᵀY`` for a column-centered ``Y``.

    Raises ``ValidationError("input not centered")`` when any column mean
    exceeds 1e-9 in magnitude; raw data must go through :func:`center` first.
    """
    if not Y.is_centered():
        raise ValidationError("input not centered")
    divisor = Divisor(divisor)
    d = divisor.value_for(Y.n)
    gram = Y.values.T @ Y.values
    # exact symmetry; matmul roundoff can differ in the last bit across the diagonal
    gram = 0.5 * (gram + gram.T)
    return CovarianceMatrix(gram / d, divisor, Y.col_labels)


def mean_relative_difference(target, current) -> float:
    """``mean(|target - current|) / mean(|target|)`` over all entries.

    Matrices are flattened row-major. This is the comparison statistic
    behind R's ``all.equal`` messages, with ``target`` as the reference.
    """
    t = np.asarray(target, dtype=float).ravel(order="C")
    c = np.asarray(current, dtype=float).ravel(order="C")
    if t.shape != c.shape:
        raise ValidationError(f"shape mismatch: {np.shape(target)} vs {np.shape(current)}")
    scale = np.mean(np.abs(t))
    if scale == 0.0:
        raise ValidationError("relative difference undefined")
    return float(np.mean(np.abs(t - c)) / scale)


def frobenius(a) -> float:
    return float(np.linalg.norm(np.asarray(a, dtype=float)))


def as_data_matrix(values, row_labels: Sequence[str] = (), col_labels: Sequence[str] = ()) -> DataMatrix:
    if isinstance(values, DataMatrix):
        return values
    return DataMatrix(values, tuple(row_labels), tuple(col_labels))
