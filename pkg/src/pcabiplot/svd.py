"""Thin SVD of a tall matrix built on the Jacobi eigensolver.

The right vectors come from the eigendecomposition of ``YᵀY``. Singular
values are then measured as ``‖Y v_k‖`` rather than ``√λ_k`` (the square
root discards half the significant digits of small eigenvalues), and the
left vectors ``Y v_k / ℓ_k`` are re-orthonormalized with modified
Gram-Schmidt. Columns whose singular value is negligible are completed
from the canonical basis so that ``UᵀU = I`` always holds.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .eigen import canonical_signs, eigen_symmetric
from .errors import ValidationError
from .matrix import CovarianceMatrix, DataMatrix, Divisor, as_data_matrix

RANK_RTOL = 1e-10


@dataclass(frozen=True)
class SvdResult:
    u: np.ndarray
    singular_values: np.ndarray
    v: np.ndarray
    row_labels: tuple[str, ...] = ()
    col_labels: tuple[str, ...] = ()

    def __post_init__(self):
        for name in ("u", "singular_values", "v"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def rank(self) -> int:
        """Number of nonzero singular values."""
        return int(np.count_nonzero(self.singular_values))

    def reconstruct(self) -> np.ndarray:
        return (self.u * self.singular_values) @ self.v.T


def _orthonormalize(vec: np.ndarray, basis: list[np.ndarray]) -> tuple[np.ndarray, float]:
    w = vec.copy()
    for _ in range(2):
        for b in basis:
            w -= (b @ w) * b
    norm = float(np.linalg.norm(w))
    return (w / norm if norm > 0 else w), norm


def svd(Y) -> SvdResult:
    """Thin SVD ``Y = U diag(ℓ) Vᵀ`` with ``m`` columns returned.

    Requires ``n >= m``. If ``Y`` is column-centered its rank is at most
    ``n - 1``, so any singular value past that index is set to exactly zero.
    """
    Y = as_data_matrix(Y)
    n, m = Y.shape
    if n < m:
        raise ValidationError("transpose input: thin SVD expects n >= m")
    # exact power-of-two scaling keeps YᵀY clear of under/overflow
    peak = float(np.abs(Y.values).max())
    exponent = math.frexp(peak)[1] if peak > 0 else 0
    y = np.ldexp(Y.values, -exponent)

    gram = y.T @ y
    spectral = eigen_symmetric(CovarianceMatrix(0.5 * (gram + gram.T), Divisor.ONE))
    v = np.array(spectral.eigenvectors)
    w = y @ v
    sv = np.linalg.norm(w, axis=0)

    order = np.argsort(-sv, kind="stable")
    v, w, sv = v[:, order], w[:, order], sv[order]

    rank_cap = n - 1 if Y.is_centered() else n
    top = sv[0] if m else 0.0
    zero = (sv <= RANK_RTOL * top) | (np.arange(m) >= rank_cap)
    sv = np.where(zero, 0.0, sv)

    basis: list[np.ndarray] = []
    u = np.zeros((n, m))
    for k in range(m):
        if not zero[k]:
            col, norm = _orthonormalize(w[:, k] / sv[k], basis)
            if norm < 0.5:
                # lost to cancellation against earlier columns; treat as null direction
                zero[k] = True
                sv[k] = 0.0
            else:
                u[:, k] = col
                basis.append(col)
                continue
        for i in range(n):
            e = np.zeros(n)
            e[i] = 1.0
            col, norm = _orthonormalize(e, basis)
            if norm > 0.5:
                break
        u[:, k] = col
        basis.append(col)

    flips = canonical_signs(v)
    return SvdResult(u * flips, np.ldexp(sv, exponent), v * flips, Y.row_labels, Y.col_labels)


def singular_values_from_eigen(eigenvalues, n: int) -> np.ndarray:
    """``ℓ_k = √((n-1) λ_k)`` for covariance eigenvalues computed with divisor n-1."""
    lam = np.asarray(eigenvalues, dtype=float)
    if n < 2:
        raise ValidationError("insufficient observations")
    if np.any(lam < -1e-9):
        raise ValidationError("negative eigenvalue")
    return np.sqrt((n - 1) * np.clip(lam, 0.0, None))
