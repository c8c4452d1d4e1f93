"""Biplot coordinates from a split of the singular values.

``Y = U Lᵅ L¹⁻ᵅ Vᵀ = A Bᵀ`` with ``A = U Lᵅ`` (observations) and
``B = V L¹⁻ᵅ`` (features, one row per feature). ``alpha = 0`` gives the
principal-component biplot, for which feature vector lengths recover
column standard deviations and cosines recover correlations, but only
when every component is retained.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .matrix import as_data_matrix
from .svd import SvdResult, svd


def split_power(values: np.ndarray, p: float) -> np.ndarray:
    """Elementwise ``values ** p`` with zero mapped to zero for every ``p``.

    This keeps ``A Bᵀ = Y`` for rank-deficient input, where a literal
    ``0 ** 0 = 1`` would resurrect null directions.
    """
    values = np.asarray(values, dtype=float)
    out = np.zeros_like(values)
    pos = values > 0
    out[pos] = values[pos] ** p
    return out


@dataclass(frozen=True)
class BiplotCoordinates:
    alpha: float
    observations: np.ndarray
    features: np.ndarray
    retained_components: int
    source_rank: int
    singular_values: np.ndarray
    row_labels: tuple[str, ...] = ()
    col_labels: tuple[str, ...] = ()

    def __post_init__(self):
        for name in ("observations", "features", "singular_values"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def full_rank(self) -> bool:
        """True when no nonzero singular value was dropped."""
        return bool(np.all(self.singular_values[self.retained_components :] == 0.0))

    def product(self) -> np.ndarray:
        return self.observations @ self.features.T


def biplot_coordinates(svd_result: SvdResult, alpha: float = 0.0, k: int | None = None) -> BiplotCoordinates:
    m = len(svd_result.singular_values)
    k = m if k is None else int(k)
    if not 0.0 <= alpha <= 1.0:
        raise ValidationError("alpha must be in [0,1]")
    if not 1 <= k <= m:
        raise ValidationError(f"components must be in [1, {m}], got {k}")
    ell = svd_result.singular_values[:k]
    A = svd_result.u[:, :k] * split_power(ell, alpha)
    B = svd_result.v[:, :k] * split_power(ell, 1.0 - alpha)
    return BiplotCoordinates(
        alpha=float(alpha),
        observations=A,
        features=B,
        retained_components=k,
        source_rank=m,
        singular_values=svd_result.singular_values,
        row_labels=svd_result.row_labels,
        col_labels=svd_result.col_labels,
    )


@dataclass(frozen=True)
class FeatureGeometry:
    """Feature-vector lengths and angles of a principal-component biplot.

    ``undefined`` flags pairs involving a zero-length feature vector or a
    zero-variance column; their cosine/correlation entries are stored as 0.
    ``length_discrepancy`` and ``cosine_discrepancy`` are max absolute gaps
    against the data; they are only expected to vanish when ``full_rank``.
    """

    vector_lengths: np.ndarray
    pairwise_cosines: np.ndarray
    pairwise_correlations: np.ndarray
    column_sd: np.ndarray
    undefined: np.ndarray
    full_rank: bool
    length_discrepancy: float
    cosine_discrepancy: float


def _cosine_matrix(rows: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    norms = np.linalg.norm(rows, axis=1)
    ok = norms > 0
    unit = np.zeros_like(rows)
    unit[ok] = rows[ok] / norms[ok, None]
    cos = np.clip(unit @ unit.T, -1.0, 1.0)
    bad = ~(ok[:, None] & ok[None, :])
    cos[bad] = 0.0
    return cos, bad


def feature_geometry(coords: BiplotCoordinates, Y) -> FeatureGeometry:
    if coords.alpha != 0.0:
        raise ValidationError("feature geometry is defined for the alpha = 0 biplot")
    Y = as_data_matrix(Y)
    y = Y.values - Y.values.mean(axis=0)
    n = Y.n
    B = coords.features
    lengths = np.linalg.norm(B, axis=1) / np.sqrt(n - 1)
    cos, bad_b = _cosine_matrix(B)
    corr, bad_y = _cosine_matrix(y.T)
    sd = y.std(axis=0, ddof=1)
    undefined = bad_b | bad_y
    both = ~undefined
    cos_gap = float(np.max(np.abs(cos - corr)[both], initial=0.0))
    return FeatureGeometry(
        vector_lengths=lengths,
        pairwise_cosines=cos,
        pairwise_correlations=corr,
        column_sd=sd,
        undefined=undefined,
        full_rank=coords.full_rank,
        length_discrepancy=float(np.max(np.abs(lengths - sd))),
        cosine_discrepancy=cos_gap,
    )


@dataclass(frozen=True)
class ScaleCalibration:
    """Extents of the two layers of a 2-D biplot.

    The feature layer is drawn divided by ``ratio`` so both layers fill the
    same canvas; the secondary (feature) axes are labeled in feature units.
    """

    observation_range: tuple[float, float]
    feature_range: tuple[float, float]
    observation_extent: float
    feature_extent: float
    ratio: float
    degenerate_observations: bool
    degenerate_features: bool


def scale_calibration(coords: BiplotCoordinates) -> ScaleCalibration:
    if coords.retained_components != 2:
        raise ValidationError("scale calibration needs exactly 2 components")
    A, B = coords.observations, coords.features
    obs_extent = float(np.abs(A).max())
    feat_extent = float(np.abs(B).max())
    degenerate_obs = obs_extent == 0.0
    degenerate_feat = feat_extent == 0.0
    if degenerate_obs:
        obs_extent = 1.0
    if degenerate_feat:
        feat_extent = 1.0
    return ScaleCalibration(
        observation_range=(float(A.min()), float(A.max())),
        feature_range=(float(B.min()), float(B.max())),
        observation_extent=obs_extent,
        feature_extent=feat_extent,
        ratio=feat_extent / obs_extent,
        degenerate_observations=degenerate_obs,
        degenerate_features=degenerate_feat,
    )


def biplot_from_data(Y, alpha: float = 0.0, k: int | None = None) -> BiplotCoordinates:
    return biplot_coordinates(svd(Y), alpha, k)


__all__ = [
    "BiplotCoordinates",
    "FeatureGeometry",
    "ScaleCalibration",
    "biplot_coordinates",
    "biplot_from_data",
    "feature_geometry",
    "scale_calibration",
    "split_power",
]
