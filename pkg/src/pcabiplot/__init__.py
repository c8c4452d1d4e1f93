"""PCA and biplots via two routes, with convention profiles and a conformance harness."""

__version__ = "0.1.0"

from .biplot import (
    BiplotCoordinates,
    FeatureGeometry,
    ScaleCalibration,
    biplot_coordinates,
    biplot_from_data,
    feature_geometry,
    scale_calibration,
)
from .conformance import (
    CheckId,
    ConformanceReport,
    Status,
    emulate_biplot_prcomp,
    emulate_ggbiplot,
    render_grid,
    run_conformance,
)
from .eigen import SpectralResult, eigen_symmetric
from .errors import NumericalError, PcaError, ValidationError
from .matrix import (
    CovarianceMatrix,
    DataMatrix,
    Divisor,
    center,
    covariance,
    mean_relative_difference,
)
from .pca import (
    DEFAULT_PROFILES,
    ConventionProfile,
    PcaResult,
    explained_variance,
    get_profile,
    pca,
    pca_eigen,
    pca_svd,
    reconstruct_rank_k,
)
from .svd import SvdResult, singular_values_from_eigen, svd
