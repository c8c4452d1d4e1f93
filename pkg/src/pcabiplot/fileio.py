"""CSV ingestion, run configuration and result files."""
from __future__ import annotations

import csv
import json
import math
import os
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .biplot import BiplotCoordinates
from .errors import ValidationError
from .matrix import DataMatrix, center
from .pca import PcaResult

FORMATS = ("csv", "json")


@dataclass(frozen=True)
class RunConfig:
    input_path: str = ""
    profile_name: str = "svd-reference"
    alpha: float = 0.0
    components: int = 2
    center: bool = True
    scale_unit_variance: bool = False
    output_format: str = "csv"
    svg_path: str | None = None
    tolerance: float = 1.5e-8
    out_dir: str | None = None

    def __post_init__(self):
        if not (0.0 <= self.alpha <= 1.0):
            raise ValidationError("alpha must be in [0,1]")
        if self.components < 1:
            raise ValidationError("components must be >= 1")
        if self.output_format not in FORMATS:
            raise ValidationError(f"output format must be one of {', '.join(FORMATS)}")
        if not self.tolerance > 0:
            raise ValidationError("tolerance must be positive")


def _parse_cell(text: str, line: int, column: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ValidationError(f"line {line}, column {column!r}: cannot parse {text!r} as a number") from None
    if not math.isfinite(value):
        raise ValidationError(f"line {line}, column {column!r}: non-finite value {text!r}")
    return value


def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def read_csv(path, has_row_labels: bool | None = None) -> DataMatrix:
    """Read a numeric CSV with a header row.

    When ``has_row_labels`` is None the first column is treated as labels if
    its header cell is blank or none of its body cells parse as numbers.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    if not rows:
        raise ValidationError("empty file: no header row")
    header = [h.strip() for h in rows[0]]
    body = rows[1:]
    if not body:
        raise ValidationError("no observations")
    for i, r in enumerate(body, start=2):
        if len(r) != len(header):
            raise ValidationError(f"line {i}: ragged row with {len(r)} cells, header has {len(header)}")

    if has_row_labels is None:
        has_row_labels = header[0] == "" or not any(_is_number(r[0].strip()) for r in body)

    if has_row_labels:
        row_labels = [r[0].strip() for r in body]
        col_labels = header[1:]
        cells = [r[1:] for r in body]
    else:
        row_labels = [str(i + 1) for i in range(len(body))]
        col_labels = header
        cells = body
    if not col_labels:
        raise ValidationError("no feature columns")
    for kind, labels in (("row", row_labels), ("column", col_labels)):
        seen = set()
        for lab in labels:
            if lab in seen:
                raise ValidationError(f"duplicate {kind} label {lab!r}")
            seen.add(lab)

    values = [
        [_parse_cell(c.strip(), i, col_labels[j]) for j, c in enumerate(r)]
        for i, r in enumerate(cells, start=2)
    ]
    return DataMatrix(np.array(values), tuple(row_labels), tuple(col_labels))


def prepare(X: DataMatrix, config: RunConfig) -> DataMatrix:
    """Center (or verify centering) and optionally scale to unit variance."""
    if config.center:
        Y = center(X)
    else:
        if not X.is_centered():
            raise ValidationError("input not centered (drop --no-center or center the file)")
        Y = X
    if config.scale_unit_variance:
        sd = Y.values.std(axis=0, ddof=1)
        if np.any(sd == 0.0):
            bad = [Y.col_labels[j] for j in np.flatnonzero(sd == 0.0)]
            raise ValidationError(f"cannot scale zero-variance columns: {', '.join(bad)}")
        Y = Y.with_values(Y.values / sd)
    return Y


def fmt(x: float) -> str:
    return f"{float(x):.15g}"


def _round15(x: float) -> float:
    return float(fmt(x))


def write_matrix_csv(path, values, row_labels, col_labels, corner: str = "") -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([corner, *col_labels])
        for lab, row in zip(row_labels, np.asarray(values)):
            w.writerow([lab, *(fmt(v) for v in row)])


def _matrix_obj(values, rows, cols) -> dict:
    return {
        "rows": list(rows),
        "columns": list(cols),
        "values": [[_round15(v) for v in row] for row in np.asarray(values)],
    }


def summary_dict(result: PcaResult, coords: BiplotCoordinates | None = None, include_matrices: bool = False) -> dict:
    comps = list(result.component_labels)
    out = {
        "profile": result.profile.as_dict(),
        "n_obs": result.n_obs,
        "n_features": len(result.col_labels),
        "observations": list(result.row_labels),
        "features": list(result.col_labels),
        "components": comps,
        "eigenvalues": [_round15(v) for v in result.eigenvalues],
        "reported_eigenvalues": [_round15(v) for v in result.reported_eigenvalues],
        "sdev": [_round15(v) for v in result.sdev],
        "explained_variance_ratio": [_round15(v) for v in result.explained_variance_ratio],
    }
    if include_matrices:
        out["scores"] = _matrix_obj(result.scores, result.row_labels, comps)
        out["loadings"] = _matrix_obj(result.loadings, result.col_labels, comps)
    if coords is not None:
        ccols = comps[: coords.retained_components]
        out["biplot"] = {
            "alpha": coords.alpha,
            "components": coords.retained_components,
            "observations": _matrix_obj(coords.observations, coords.row_labels, ccols),
            "features": _matrix_obj(coords.features, coords.col_labels, ccols),
        }
    return out


def write_results(result: PcaResult, coords: BiplotCoordinates | None, config: RunConfig) -> list[str]:
    """Write result files into ``config.out_dir`` and return their paths."""
    out_dir = config.out_dir or "."
    os.makedirs(out_dir, exist_ok=True)
    written = []
    json_mode = config.output_format == "json"
    if not json_mode:
        comps = result.component_labels
        p = os.path.join(out_dir, "scores.csv")
        write_matrix_csv(p, result.scores, result.row_labels, comps)
        written.append(p)
        p = os.path.join(out_dir, "loadings.csv")
        write_matrix_csv(p, result.loadings, result.col_labels, comps)
        written.append(p)
        if coords is not None:
            ccols = comps[: coords.retained_components]
            p = os.path.join(out_dir, "biplot_observations.csv")
            write_matrix_csv(p, coords.observations, coords.row_labels, ccols)
            written.append(p)
            p = os.path.join(out_dir, "biplot_features.csv")
            write_matrix_csv(p, coords.features, coords.col_labels, ccols)
            written.append(p)
    p = os.path.join(out_dir, "summary.json")
    with open(p, "w", encoding="utf-8") as fh:
        json.dump(summary_dict(result, coords, include_matrices=json_mode), fh, indent=2, ensure_ascii=False)
        fh.write("\n")
    written.append(p)
    return written


def load_schema(name: str) -> dict:
    """Load one of the shipped JSON schemas ("summary" or "conformance")."""
    text = resources.files("pcabiplot").joinpath("schemas", f"{name}.schema.json").read_text("utf-8")
    return json.loads(text)
