"""Property suite: the identities that tie the PCA routes and the biplot together.

Each property is evaluated on one centered data matrix and returns a
verdict with the observed gap, so the same code backs the ``check``
subcommand and the randomized acceptance run.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .biplot import biplot_coordinates, feature_geometry
from .errors import ValidationError
from .matrix import as_data_matrix, covariance, Divisor
from .pca import EIGEN_REFERENCE, SVD_REFERENCE, pca_eigen, pca_svd
from .svd import singular_values_from_eigen, svd

ALPHAS = (0.0, 0.5, 1.0)


@dataclass(frozen=True)
class PropertyResult:
    name: str
    passed: bool
    gap: float
    tolerance: float
    note: str = ""

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        extra = f" ({self.note})" if self.note else ""
        return f"{verdict}  {self.name:<28} gap={self.gap:.3e} tol={self.tolerance:.0e}{extra}"


def _rel(gap: float, scale: float) -> float:
    return gap / scale if scale > 0 else gap


def _result(name, gap, tol, note="") -> PropertyResult:
    return PropertyResult(name, bool(gap <= tol), float(gap), tol, note)


def property_suite(Y) -> list[PropertyResult]:
    """Evaluate every property on centered ``Y``; requires ``n >= m``."""
    Y = as_data_matrix(Y)
    if not Y.is_centered():
        raise ValidationError("input not centered")
    n, m = Y.shape
    y = Y.values
    out: list[PropertyResult] = []

    eig = pca_eigen(Y, EIGEN_REFERENCE)
    sv = pca_svd(Y, SVD_REFERENCE)
    s = svd(Y)
    lam = eig.eigenvalues
    lam_scale = max(float(lam.max()), 0.0)

    # variances of the scores against eigenvalues, both routes
    gap = 0.0
    for res in (eig, sv):
        var = res.scores.var(axis=0, ddof=1)
        gap = max(gap, float(np.max(np.abs(var - lam))))
    out.append(_result("variance-equals-eigenvalue", _rel(gap, lam_scale), 1e-9))

    ell_from_eig = singular_values_from_eigen(lam, n)
    gap = float(np.max(np.abs(s.singular_values - ell_from_eig)))
    out.append(_result("singular-value-relation", _rel(gap, float(s.singular_values[0])), 1e-8))

    z_scale = float(np.abs(eig.scores).max())
    gap = float(np.max(np.abs(np.abs(eig.scores) - np.abs(sv.scores))))
    out.append(_result("route-agreement", _rel(gap, z_scale), 1e-8))

    y_norm = float(np.linalg.norm(y))
    gap = 0.0
    for alpha in ALPHAS:
        c = biplot_coordinates(s, alpha)
        gap = max(gap, float(np.linalg.norm(y - c.product())))
    out.append(_result("factorization-identity", _rel(gap, y_norm), 1e-8))

    c0 = biplot_coordinates(s, 0.0)
    gram = c0.features @ c0.features.T
    target = (n - 1) * covariance(Y, Divisor.N_MINUS_ONE).values
    gap = float(np.linalg.norm(gram - target))
    out.append(_result("feature-gram-identity", _rel(gap, float(np.linalg.norm(target))), 1e-8))

    geo = feature_geometry(c0, Y)
    out.append(_result("feature-length-equals-sd", geo.length_discrepancy, 1e-9))
    note = ""
    if geo.undefined.any():
        note = "pairs with a zero-length vector skipped"
    out.append(_result("cosine-equals-correlation", geo.cosine_discrepancy, 1e-9, note))

    ell = s.singular_values
    total = float(np.sum(ell**2))
    gap = 0.0
    for k in range(1, m):
        ck = biplot_coordinates(s, 0.0, k)
        resid = float(np.sum((y - ck.product()) ** 2))
        expected = float(np.sum(ell[k:] ** 2))
        # relative to the discarded energy; the floor keeps exactly-zero tails finite
        gap = max(gap, _rel(abs(resid - expected), max(expected, 1e-10 * total)))
    out.append(_result("truncation-residual", gap, 1e-8))

    gap = abs(float(eig.explained_variance_ratio.sum()) - 1.0)
    out.append(_result("explained-ratio-sum", gap, 1e-9))

    loads = sv.loadings
    gap = float(np.max(np.abs(loads.T @ loads - np.eye(m))))
    out.append(_result("loadings-orthonormal", gap, 1e-9))
    return out
