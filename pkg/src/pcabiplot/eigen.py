"""Symmetric eigendecomposition by cyclic Jacobi rotations."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, ValidationError
from .matrix import CovarianceMatrix

MAX_SWEEPS = 100
OFF_DIAGONAL_RTOL = 1e-12


@dataclass(frozen=True)
class SpectralResult:
    """Eigenvalues in descending order; column k of ``eigenvectors`` pairs with eigenvalue k."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    sweeps: int = 0

    def __post_init__(self):
        for name in ("eigenvalues", "eigenvectors"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


def canonical_signs(vectors: np.ndarray) -> np.ndarray:
    """Sign flips (+1/-1 per column) making each column's largest-magnitude entry positive.

    Ties go to the lowest row index.
    """
    if vectors.size == 0:
        return np.ones(vectors.shape[1])
    idx = np.argmax(np.abs(vectors), axis=0)
    lead = vectors[idx, np.arange(vectors.shape[1])]
    return np.where(lead < 0, -1.0, 1.0)


def _off_norm(a: np.ndarray) -> float:
    # sum the off-diagonal squares directly; ‖A‖² - ‖diag A‖² cancels catastrophically
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


def _jacobi(a: np.ndarray) -> tuple[np.ndarray, np.ndarray, int]:
    m = a.shape[0]
    v = np.eye(m)
    target = OFF_DIAGONAL_RTOL * float(np.linalg.norm(a))
    for sweep in range(MAX_SWEEPS + 1):
        off = _off_norm(a)
        if off <= target:
            return np.diag(a).copy(), v, sweep
        if sweep == MAX_SWEEPS:
            break
        # early sweeps skip rotations that would barely move anything
        threshold = 0.2 * off / (m * m) if sweep < 3 else 0.0
        for p in range(m - 1):
            for q in range(p + 1, m):
                apq = a[p, q]
                if apq == 0.0 or abs(apq) <= threshold:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c

                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0

                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    raise NumericalError("eigensolver did not converge")


def eigen_symmetric(M, canonicalize: bool = True) -> SpectralResult:
    """Eigenvalues and orthonormal eigenvectors of a real symmetric matrix.

    ``M`` may be a :class:`CovarianceMatrix` or any square array-like. For
    covariance inputs, tiny negative eigenvalues produced by roundoff are
    clamped to zero.

    Eigenpairs are sorted by descending eigenvalue; exact ties are ordered by
    the row index of each eigenvector's dominant entry. With
    ``canonicalize`` each eigenvector is flipped so its largest-magnitude
    entry is positive; otherwise signs are whatever the rotations produced.
    """
    is_cov = isinstance(M, CovarianceMatrix)
    a = np.array(M.values if is_cov else M, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValidationError("matrix contains non-finite values")
    scale = max(1.0, float(np.abs(a).max(initial=0.0)))
    if np.any(np.abs(a - a.T) > 1e-9 * scale):
        raise ValidationError("matrix not symmetric")
    a = 0.5 * (a + a.T)

    # power-of-two rescaling is exact and keeps the norms clear of under/overflow
    peak = float(np.abs(a).max(initial=0.0))
    exponent = math.frexp(peak)[1] if peak > 0 else 0
    values, vectors, sweeps = _jacobi(np.ldexp(a, -exponent))
    values = np.ldexp(values, exponent)

    dominant = np.argmax(np.abs(vectors), axis=0)
    order = sorted(range(len(values)), key=lambda k: (-values[k], dominant[k]))
    values = values[order]
    vectors = vectors[:, order]

    if canonicalize:
        vectors = vectors * canonical_signs(vectors)

    if is_cov:
        floor = -1e-9 * max(1.0, abs(values[0]) if len(values) else 1.0)
        values = np.where((values < 0.0) & (values >= floor), 0.0, values)

    return SpectralResult(values, vectors, sweeps)
