"""PCA through either the covariance eigenproblem or the SVD of the centered data.

The arithmetic differences between implementations (covariance divisor,
what "sdev" means, whether loadings or scores are rescaled) are captured by
a :class:`ConventionProfile`. Profiles are plain data; the registry below
ships the presets used by the conformance grid.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .eigen import eigen_symmetric
from .errors import NumericalError, ValidationError
from .matrix import CENTER_TOL, DataMatrix, Divisor, as_data_matrix, covariance
from .svd import svd


class Route(str, enum.Enum):
    EIGEN = "eigen"
    SVD = "svd"


class SdevDefinition(str, enum.Enum):
    SQRT_EIGEN = "sqrt-eigen"
    SINGULAR_OVER_SQRT_N_MINUS_ONE = "singular/sqrt(n-1)"
    SINGULAR_OVER_SQRT_N = "singular/sqrt(n)"
    SCORE_SD = "score-sd"


class LoadingScaling(str, enum.Enum):
    UNIT = "unit"
    TIMES_SQRT_EIGEN = "times-sqrt-eigen"


class ScoreScaling(str, enum.Enum):
    PLAIN = "plain"
    OVER_SQRT_EIGEN = "over-sqrt-eigen"


class SignPolicy(str, enum.Enum):
    CANONICAL = "canonical"
    AS_COMPUTED = "as-computed"


@dataclass(frozen=True)
class ConventionProfile:
    """A named bundle of arithmetic choices.

    ``variance_reference`` names which side the emulated implementation's
    own variance check treats as the reference ("eigenvalues" or
    "score_variance"); it only affects the orientation of the reported
    discrepancy. ``sqrt_eig_output`` marks implementations whose reported
    eigenvalue vector actually holds square roots.
    """

    name: str
    divisor: Divisor = Divisor.N_MINUS_ONE
    route: Route = Route.SVD
    sdev_definition: SdevDefinition = SdevDefinition.SINGULAR_OVER_SQRT_N_MINUS_ONE
    loading_scaling: LoadingScaling = LoadingScaling.UNIT
    score_scaling: ScoreScaling = ScoreScaling.PLAIN
    sign_policy: SignPolicy = SignPolicy.CANONICAL
    variance_reference: str = "eigenvalues"
    sqrt_eig_output: bool = False
    description: str = ""

    def __post_init__(self):
        for attr, kind in (
            ("divisor", Divisor),
            ("route", Route),
            ("sdev_definition", SdevDefinition),
            ("loading_scaling", LoadingScaling),
            ("score_scaling", ScoreScaling),
            ("sign_policy", SignPolicy),
        ):
            object.__setattr__(self, attr, kind(getattr(self, attr)))
        if self.variance_reference not in ("eigenvalues", "score_variance"):
            raise ValidationError(f"unknown variance_reference {self.variance_reference!r}")

    @property
    def is_plain(self) -> bool:
        return self.score_scaling is ScoreScaling.PLAIN and self.loading_scaling is LoadingScaling.UNIT

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "divisor": self.divisor.value,
            "route": self.route.value,
            "sdev_definition": self.sdev_definition.value,
            "loading_scaling": self.loading_scaling.value,
            "score_scaling": self.score_scaling.value,
            "sign_policy": self.sign_policy.value,
            "variance_reference": self.variance_reference,
            "sqrt_eig_output": self.sqrt_eig_output,
        }


SVD_REFERENCE = ConventionProfile(
    "svd-reference",
    description="SVD of Y, divisor n-1, sdev = singular values / sqrt(n-1) (prcomp-like)",
)
EIGEN_REFERENCE = ConventionProfile(
    "eigen-reference",
    route=Route.EIGEN,
    sdev_definition=SdevDefinition.SQRT_EIGEN,
    description="eigenproblem of the n-1 covariance; scores Z = YV",
)
EIGEN_N = ConventionProfile(
    "eigen-n",
    divisor=Divisor.N,
    route=Route.EIGEN,
    sdev_definition=SdevDefinition.SQRT_EIGEN,
    description="eigenproblem of YᵀY/n (princomp / dudi.pca-like)",
)
EIGEN_GRAM = ConventionProfile(
    "eigen-gram",
    divisor=Divisor.ONE,
    route=Route.EIGEN,
    sdev_definition=SdevDefinition.SCORE_SD,
    sqrt_eig_output=True,
    description="eigenproblem of YᵀY, sdev taken from the scores (acp-like)",
)
EIGEN_RESCALED = ConventionProfile(
    "eigen-rescaled",
    route=Route.EIGEN,
    sdev_definition=SdevDefinition.SQRT_EIGEN,
    loading_scaling=LoadingScaling.TIMES_SQRT_EIGEN,
    score_scaling=ScoreScaling.OVER_SQRT_EIGEN,
    description="loadings times sqrt(eigenvalue), scores over sqrt(eigenvalue) (principal-like)",
)
GSVD_N = ConventionProfile(
    "gsvd-n",
    divisor=Divisor.N,
    route=Route.SVD,
    sdev_definition=SdevDefinition.SINGULAR_OVER_SQRT_N,
    variance_reference="score_variance",
    description="SVD with uniform 1/n row weights (FactoMineR / PCAmixdata-like)",
)


def make_registry(profiles: Iterable[ConventionProfile]) -> dict[str, ConventionProfile]:
    registry: dict[str, ConventionProfile] = {}
    for p in profiles:
        if p.name in registry:
            raise ValidationError(f"duplicate profile name {p.name!r}")
        registry[p.name] = p
    return registry


DEFAULT_PROFILES = make_registry(
    [SVD_REFERENCE, EIGEN_REFERENCE, EIGEN_N, EIGEN_GRAM, EIGEN_RESCALED, GSVD_N]
)


def get_profile(name: str, registry: Mapping[str, ConventionProfile] = DEFAULT_PROFILES) -> ConventionProfile:
    try:
        return registry[name]
    except KeyError:
        raise ValidationError(
            f"unknown profile {name!r}; available: {', '.join(sorted(registry))}"
        ) from None


@dataclass(frozen=True)
class PcaResult:
    scores: np.ndarray
    loadings: np.ndarray
    sdev: np.ndarray
    eigenvalues: np.ndarray
    explained_variance_ratio: np.ndarray
    profile: ConventionProfile
    n_obs: int
    row_labels: tuple[str, ...] = ()
    col_labels: tuple[str, ...] = ()

    def __post_init__(self):
        for name in ("scores", "loadings", "sdev", "eigenvalues", "explained_variance_ratio"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def n_components(self) -> int:
        return len(self.eigenvalues)

    @property
    def component_labels(self) -> tuple[str, ...]:
        return tuple(f"PC{k + 1}" for k in range(self.n_components))

    @property
    def reported_eigenvalues(self) -> np.ndarray:
        """The eigenvalue vector as the emulated implementation would print it."""
        if self.profile.sqrt_eig_output:
            return np.sqrt(self.eigenvalues)
        return self.eigenvalues


def _require_centered(Y: DataMatrix) -> None:
    if not Y.is_centered(CENTER_TOL):
        raise ValidationError("input not centered")


def _safe_pow(x: np.ndarray, p: float) -> np.ndarray:
    # zero stays zero for every exponent, including 0 and negatives
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = x[pos] ** p
    return out


def _assemble(Y: DataMatrix, profile: ConventionProfile, v: np.ndarray, z: np.ndarray, gram_eig: np.ndarray) -> PcaResult:
    n = Y.n
    d = profile.divisor.value_for(n)
    # gram_eig are eigenvalues of YᵀY (singular values squared)
    gram_eig = np.clip(gram_eig, 0.0, None)
    gram_eig[n - 1 :] = 0.0  # centered data has rank <= n - 1
    total = gram_eig.sum()
    if total <= 0.0:
        raise NumericalError("no variance")
    lam = gram_eig / d
    ell = np.sqrt(gram_eig)

    scores = z
    if profile.score_scaling is ScoreScaling.OVER_SQRT_EIGEN:
        scores = z * _safe_pow(lam, -0.5)
    loadings = v
    if profile.loading_scaling is LoadingScaling.TIMES_SQRT_EIGEN:
        loadings = v * np.sqrt(lam)

    sd = profile.sdev_definition
    if sd is SdevDefinition.SQRT_EIGEN:
        sdev = np.sqrt(lam)
    elif sd is SdevDefinition.SINGULAR_OVER_SQRT_N_MINUS_ONE:
        sdev = ell / np.sqrt(n - 1)
    elif sd is SdevDefinition.SINGULAR_OVER_SQRT_N:
        sdev = ell / np.sqrt(n)
    else:
        sdev = scores.std(axis=0, ddof=1)

    return PcaResult(
        scores=scores,
        loadings=loadings,
        sdev=sdev,
        eigenvalues=lam,
        explained_variance_ratio=gram_eig / total,
        profile=profile,
        n_obs=n,
        row_labels=Y.row_labels,
        col_labels=Y.col_labels,
    )


def pca_eigen(Y, profile: ConventionProfile = EIGEN_REFERENCE) -> PcaResult:
    """PCA from the eigendecomposition of the profile's covariance matrix.

    Scores are always ``Y V``: rescaling the covariance changes the
    eigenvalues but not the eigenvectors.
    """
    Y = as_data_matrix(Y)
    if profile.route is not Route.EIGEN:
        raise ValidationError(f"profile {profile.name!r} uses the {profile.route.value} route")
    cov = covariance(Y, profile.divisor)
    spectral = eigen_symmetric(cov, canonicalize=profile.sign_policy is SignPolicy.CANONICAL)
    v = np.array(spectral.eigenvectors)
    z = Y.values @ v
    gram_eig = spectral.eigenvalues * profile.divisor.value_for(Y.n)
    return _assemble(Y, profile, v, z, gram_eig)


def pca_svd(Y, profile: ConventionProfile = SVD_REFERENCE) -> PcaResult:
    """PCA from the thin SVD of the centered data; scores are ``U diag(ℓ)``."""
    Y = as_data_matrix(Y)
    if profile.route is not Route.SVD:
        raise ValidationError(f"profile {profile.name!r} uses the {profile.route.value} route")
    _require_centered(Y)
    s = svd(Y)
    z = s.u * s.singular_values
    return _assemble(Y, profile, np.array(s.v), z, s.singular_values**2)


def pca(Y, profile: ConventionProfile = SVD_REFERENCE) -> PcaResult:
    """Dispatch on ``profile.route``."""
    if profile.route is Route.EIGEN:
        return pca_eigen(Y, profile)
    return pca_svd(Y, profile)


def explained_variance(result: PcaResult) -> np.ndarray:
    lam = np.asarray(result.eigenvalues, dtype=float)
    total = lam.sum()
    if total <= 0.0:
        raise NumericalError("no variance")
    return lam / total


def reconstruct_rank_k(result: PcaResult, k: int) -> DataMatrix:
    """Sum of the first ``k`` outer products ``z_j a_jᵀ``."""
    if not result.profile.is_plain:
        raise ValidationError("rank-k reconstruction needs plain scores and unit loadings")
    m = result.n_components
    if not 1 <= k <= m:
        raise ValidationError(f"k must be in [1, {m}], got {k}")
    approx = result.scores[:, :k] @ result.loadings[:, :k].T
    return DataMatrix(approx, result.row_labels, result.col_labels)
