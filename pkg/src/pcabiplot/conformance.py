"""Audit PCA/biplot conventions against the algebraic identities they should satisfy.

Each subject (a convention profile, or a biplot emulation) is run through a
set of equivalence checks. A check compares two quantities with the mean
relative difference; it *holds* when that is within tolerance, *holds
with a caveat* when it only holds after undoing a documented rescaling,
and *fails* otherwise.

Emulations here are pure transforms of a :class:`PcaResult`; they mimic
the arithmetic of well-known biplot routines (singular values rebuilt
from ``sdev`` under the wrong divisor, scores reused as coordinates), not
their code.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from .biplot import biplot_coordinates
from .errors import ValidationError
from .matrix import Divisor, as_data_matrix, mean_relative_difference
from .pca import (
    DEFAULT_PROFILES,
    EIGEN_REFERENCE,
    SVD_REFERENCE,
    ConventionProfile,
    PcaResult,
    ScoreScaling,
    SdevDefinition,
    pca,
    pca_eigen,
    pca_svd,
)
from .svd import svd

DEFAULT_TOLERANCE = 1.5e-8


class CheckId(str, enum.Enum):
    VAR_EQUALS_EIGEN = "VarEqualsEigen"
    SINGULAR_VALUE_RELATION = "SingularValueRelation"
    ABS_SCORE_AGREEMENT = "AbsScoreAgreement"
    FEATURE_LENGTH_EQUALS_SD = "FeatureLengthEqualsSd"
    COSINE_EQUALS_CORRELATION = "CosineEqualsCorrelation"
    OBS_COORDS_EQUAL_U = "ObsCoordsEqualU"
    FEAT_COORDS_EQUAL_DV = "FeatCoordsEqualDV"
    FEAT_COORDS_AGREE_BASE_BIPLOT = "FeatCoordsAgreeBaseBiplot"


@dataclass(frozen=True)
class EquivalenceCheck:
    id: CheckId
    description: str


CHECKS = {
    c.id: c
    for c in (
        EquivalenceCheck(CheckId.VAR_EQUALS_EIGEN, "variance of each score column equals its eigenvalue"),
        EquivalenceCheck(CheckId.SINGULAR_VALUE_RELATION, "sdev * sqrt(n-1) equals the singular values of Y"),
        EquivalenceCheck(CheckId.ABS_SCORE_AGREEMENT, "|scores| equal |Y V| from the n-1 covariance"),
        EquivalenceCheck(CheckId.FEATURE_LENGTH_EQUALS_SD, "feature vector length / sqrt(n-1) equals column St.Dev."),
        EquivalenceCheck(CheckId.COSINE_EQUALS_CORRELATION, "cosine between feature vectors equals correlation"),
        EquivalenceCheck(CheckId.OBS_COORDS_EQUAL_U, "observation coordinates equal U"),
        EquivalenceCheck(CheckId.FEAT_COORDS_EQUAL_DV, "feature coordinates equal V D"),
        EquivalenceCheck(
            CheckId.FEAT_COORDS_AGREE_BASE_BIPLOT,
            "feature coordinates agree with the prcomp-style biplot",
        ),
    )
}


class Status(str, enum.Enum):
    HOLDS = "holds"
    HOLDS_WITH_CAVEAT = "holds-with-caveat"
    FAILS = "fails"


MARKS = {Status.HOLDS: "●", Status.HOLDS_WITH_CAVEAT: "○", Status.FAILS: "✗"}


@dataclass(frozen=True)
class ConformanceRow:
    profile: str
    check: CheckId
    status: Status
    discrepancy: float | None
    note: str = ""
    corrected_discrepancy: float | None = None

    def __post_init__(self):
        if (self.discrepancy is None) != (self.status is Status.HOLDS):
            raise ValidationError("discrepancy must be present exactly when the check does not hold")

    def as_dict(self) -> dict:
        return {
            "profile": self.profile,
            "check": self.check.value,
            "status": self.status.value,
            "discrepancy": self.discrepancy,
            "note": self.note,
        }


@dataclass(frozen=True)
class ConformanceReport:
    rows: tuple[ConformanceRow, ...]
    tolerance: float = DEFAULT_TOLERANCE

    def find(self, profile: str, check: CheckId | str) -> ConformanceRow:
        check = CheckId(check)
        for row in self.rows:
            if row.profile == profile and row.check is check:
                return row
        raise KeyError((profile, check.value))

    def to_json(self) -> str:
        return json.dumps([r.as_dict() for r in self.rows], ensure_ascii=False, indent=2) + "\n"


class Emulation(str, enum.Enum):
    REFERENCE = "reference"
    PRCOMP_STYLE = "prcomp-style"
    GGBIPLOT_STYLE = "ggbiplot-style"


@dataclass(frozen=True)
class BiplotEmulation:
    emulation: Emulation
    observations: np.ndarray
    features: np.ndarray
    singular_values: np.ndarray
    pc_biplot_flag: bool = False


def _divide(a: np.ndarray, d: np.ndarray) -> np.ndarray:
    out = np.zeros_like(a, dtype=float)
    nz = d != 0
    out[:, nz] = a[:, nz] / d[nz]
    return out


def _require_plain(result: PcaResult) -> None:
    if not result.profile.is_plain:
        raise ValidationError("biplot emulation needs plain scores and unit loadings")


def emulate_reference(Y) -> BiplotEmulation:
    coords = biplot_coordinates(svd(Y), alpha=0.0)
    return BiplotEmulation(Emulation.REFERENCE, coords.observations, coords.features, coords.singular_values)


def emulate_biplot_prcomp(result: PcaResult, pc_biplot_flag: bool = False, corrected: bool = False) -> BiplotEmulation:
    """Biplot coordinates rebuilt from ``sdev`` the way base-R ``biplot.prcomp`` does.

    With the flag off the singular values are taken as ``sdev * sqrt(n)``;
    with it on, as ``sdev`` itself. ``corrected`` uses ``sdev * sqrt(n - 1)``,
    which recovers ``A = U`` and ``B = V D`` exactly.
    """
    _require_plain(result)
    n = result.n_obs
    if corrected:
        ell = result.sdev * np.sqrt(n - 1)
    elif pc_biplot_flag:
        ell = np.array(result.sdev)
    else:
        ell = result.sdev * np.sqrt(n)
    A = _divide(result.scores, ell)
    B = result.loadings * ell
    return BiplotEmulation(Emulation.PRCOMP_STYLE, A, B, ell, pc_biplot_flag)


def emulate_ggbiplot(result: PcaResult, components: int = 2) -> BiplotEmulation:
    """ggbiplot-style principal-component biplot: scores times ``sqrt(n-1)/sqrt(n)``
    for observations, loadings times ``sdev`` for features."""
    _require_plain(result)
    m = result.n_components
    if not 1 <= components <= m:
        raise ValidationError(f"components must be in [1, {m}]")
    n = result.n_obs
    k = components
    A = result.scores[:, :k] * np.sqrt(n - 1) / np.sqrt(n)
    B = result.loadings[:, :k] * result.sdev[:k]
    return BiplotEmulation(Emulation.GGBIPLOT_STYLE, A, B, result.sdev[:k] * np.sqrt(n))


def _lengths(B: np.ndarray, n: int) -> np.ndarray:
    return np.linalg.norm(B, axis=1) / np.sqrt(n - 1)


def _cosines(rows: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(rows, axis=1)
    norms = np.where(norms > 0, norms, 1.0)
    unit = rows / norms[:, None]
    return np.clip(unit @ unit.T, -1.0, 1.0)


class _Evaluator:
    def __init__(self, tolerance: float):
        self.tolerance = tolerance
        self.rows: list[ConformanceRow] = []

    def add(
        self,
        subject: str,
        check: CheckId,
        target,
        current,
        correction: Callable[[], tuple] | None = None,
        correction_note: str = "",
        fail_note: str = "",
    ) -> None:
        raw = mean_relative_difference(target, current)
        if raw <= self.tolerance:
            self.rows.append(ConformanceRow(subject, check, Status.HOLDS, None))
            return
        corrected = None
        if correction is not None:
            corrected = mean_relative_difference(*correction())
            if corrected <= self.tolerance:
                self.rows.append(
                    ConformanceRow(subject, check, Status.HOLDS_WITH_CAVEAT, raw, correction_note, corrected)
                )
                return
        self.rows.append(ConformanceRow(subject, check, Status.FAILS, raw, fail_note, corrected))


def _sdev_own_divisor(profile: ConventionProfile, n: int) -> float:
    """Divisor under which the profile's ``sdev`` converts to singular values."""
    sd = profile.sdev_definition
    if sd is SdevDefinition.SINGULAR_OVER_SQRT_N:
        return float(n)
    if sd is SdevDefinition.SQRT_EIGEN:
        return profile.divisor.value_for(n)
    return float(n - 1)


def _profile_checks(ev: _Evaluator, Y, profile: ConventionProfile, ell: np.ndarray, z_ref: np.ndarray) -> None:
    r = pca(Y, profile)
    n = Y.n
    name = profile.name
    lam = r.eigenvalues
    score_var = r.scores.var(axis=0, ddof=1)

    def unscaled_scores():
        if profile.score_scaling is ScoreScaling.OVER_SQRT_EIGEN:
            return r.scores * np.sqrt(lam)
        return r.scores

    rescaled = profile.score_scaling is not ScoreScaling.PLAIN
    fix_var = None
    if rescaled:
        def fix_var():
            v = unscaled_scores().var(axis=0, ddof=1)
            return (lam, v) if profile.variance_reference == "eigenvalues" else (v, lam)

    if profile.variance_reference == "eigenvalues":
        target, current = lam, score_var
    else:
        target, current = score_var, lam
    divisor_note = "" if profile.divisor is Divisor.N_MINUS_ONE else f"eigenvalues use divisor {profile.divisor.value}"
    ev.add(name, CheckId.VAR_EQUALS_EIGEN, target, current, fix_var,
           "scores multiplied by sqrt(eigenvalue)", divisor_note)

    own = _sdev_own_divisor(profile, n)
    fix_sv = None
    if own != n - 1:
        def fix_sv():
            return r.sdev * np.sqrt(own), ell
    ev.add(name, CheckId.SINGULAR_VALUE_RELATION, r.sdev * np.sqrt(n - 1), ell, fix_sv,
           f"singular values recovered as sdev * sqrt({'n' if own == n else int(own)})",
           "sdev does not convert to singular values")

    fix_abs = None
    if rescaled:
        def fix_abs():
            return np.abs(unscaled_scores()), np.abs(z_ref)
    ev.add(name, CheckId.ABS_SCORE_AGREEMENT, np.abs(r.scores), np.abs(z_ref), fix_abs,
           "scores multiplied by sqrt(eigenvalue)")


def _biplot_checks(
    ev: _Evaluator,
    subject: str,
    emul: BiplotEmulation,
    corrected: BiplotEmulation | None,
    U: np.ndarray,
    DV: np.ndarray,
    sd: np.ndarray,
    corr: np.ndarray,
    n: int,
    rank: int,
    note: str,
) -> None:
    k = min(rank, emul.observations.shape[1])
    fix = (lambda f: f) if corrected is not None else (lambda f: None)

    ev.add(subject, CheckId.OBS_COORDS_EQUAL_U, emul.observations[:, :k], U[:, :k],
           fix(lambda: (corrected.observations[:, :k], U[:, :k])), note)
    ev.add(subject, CheckId.FEAT_COORDS_EQUAL_DV, emul.features[:, :k], DV[:, :k],
           fix(lambda: (corrected.features[:, :k], DV[:, :k])), note)
    ev.add(subject, CheckId.FEATURE_LENGTH_EQUALS_SD, sd, _lengths(emul.features, n),
           fix(lambda: (sd, _lengths(corrected.features, n))), note)
    ev.add(subject, CheckId.COSINE_EQUALS_CORRELATION, _cosines(emul.features), corr,
           fix(lambda: (_cosines(corrected.features), corr)), note)


def run_conformance(
    Y,
    profiles: Mapping[str, ConventionProfile] = DEFAULT_PROFILES,
    tolerance: float = DEFAULT_TOLERANCE,
    include_biplots: bool = True,
) -> ConformanceReport:
    """Evaluate every (subject, check) pair on centered data ``Y``.

    Rows are sorted by subject name, then check id.
    """
    Y = as_data_matrix(Y)
    if not profiles:
        raise ValidationError("empty profile registry")
    if not tolerance > 0:
        raise ValidationError("tolerance must be positive")
    if not Y.is_centered():
        raise ValidationError("input not centered")
    n = Y.n

    s = svd(Y)
    ell = np.array(s.singular_values)
    rank = s.rank
    z_ref = pca_eigen(Y, EIGEN_REFERENCE).scores
    ev = _Evaluator(tolerance)

    for profile in profiles.values():
        _profile_checks(ev, Y, profile, ell, z_ref)

    if include_biplots:
        y = Y.values
        sd = y.std(axis=0, ddof=1)
        corr = _cosines(y.T)
        U = np.array(s.u)
        DV = s.v * ell
        base = pca_svd(Y, SVD_REFERENCE)
        m = base.n_components

        _biplot_checks(ev, "biplot/reference", emulate_reference(Y), None, U, DV, sd, corr, n, rank, "")

        fixed = emulate_biplot_prcomp(base, corrected=True)
        for flag, subject, what in (
            (False, "biplot/prcomp-style", "sdev * sqrt(n)"),
            (True, "biplot/prcomp-style-pc", "sdev"),
        ):
            emul = emulate_biplot_prcomp(base, pc_biplot_flag=flag)
            note = f"singular values taken as {what}; corrected with sdev * sqrt(n-1)"
            ev.add(subject, CheckId.SINGULAR_VALUE_RELATION, emul.singular_values, ell,
                   lambda: (fixed.singular_values, ell), note)
            _biplot_checks(ev, subject, emul, fixed, U, DV, sd, corr, n, rank, note)

        gg = emulate_ggbiplot(base, components=m)
        gg_fixed = BiplotEmulation(
            Emulation.GGBIPLOT_STYLE,
            _divide(gg.observations * np.sqrt(n) / np.sqrt(n - 1), base.sdev * np.sqrt(n - 1)),
            gg.features * np.sqrt(n - 1),
            base.sdev * np.sqrt(n - 1),
        )
        _biplot_checks(ev, "biplot/ggbiplot-style", gg, gg_fixed, U, DV, sd, corr, n, rank,
                       "observations are rescaled scores; features use sdev in place of singular values")
        prcomp_b = emulate_biplot_prcomp(base, pc_biplot_flag=False).features
        ev.add("biplot/ggbiplot-style", CheckId.FEAT_COORDS_AGREE_BASE_BIPLOT,
               prcomp_b[:, :m], gg.features, None, "",
               "prcomp-style uses sdev * sqrt(n), ggbiplot-style uses sdev")

    rows = sorted(ev.rows, key=lambda r: (r.profile, r.check.value))
    return ConformanceReport(tuple(rows), tolerance)


def format_discrepancy(x: float | None) -> str:
    return "" if x is None else f"{x:#.7g}"


def render_grid(report: ConformanceReport) -> str:
    """Fixed-width text table, one line per (subject, check)."""
    if not report.rows:
        raise ValidationError("empty conformance report")
    header = ("subject", "check", "", "discrepancy", "note")
    body = [
        (r.profile, r.check.value, MARKS[r.status], format_discrepancy(r.discrepancy), r.note)
        for r in report.rows
    ]
    widths = [max(len(row[i]) for row in [header, *body]) for i in range(4)]
    lines = [
        f"● holds   ○ holds with caveat   ✗ fails   (tolerance {report.tolerance:g})",
    ]
    for row in [header, *body]:
        cells = [row[i].ljust(widths[i]) if i != 3 else row[i].rjust(widths[i]) for i in range(4)]
        lines.append(("  ".join(cells) + "  " + row[4]).rstrip())
    return "\n".join(lines) + "\n"
