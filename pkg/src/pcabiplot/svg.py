"""Deterministic SVG rendering of a two-component biplot.

Observations are drawn on the primary scale (bottom/left axes) and
feature arrows on a secondary scale (top/right axes); the two scales differ
by the calibration ratio so both layers fill the same plot box.
"""
from __future__ import annotations

import math
from xml.sax.saxutils import escape

import numpy as np

from .biplot import BiplotCoordinates, FeatureGeometry, scale_calibration
from .errors import ValidationError

SIZE = 800
MARGIN = 80  # 10% of the canvas on every side
HALF = (SIZE - 2 * MARGIN) / 2
MID = SIZE / 2
AXIS_GREY = "#888888"
OBS_COLOUR = "#1f4e79"
FEAT_COLOUR = "#b2182b"
ARROW_LEN = 10.0
ARROW_HALF_WIDTH = 4.0


def nice_ceiling(x: float) -> float:
    """Smallest value of the form {1, 2, 2.5, 5} * 10^e that is >= x."""
    if x <= 0:
        return 1.0
    e = math.floor(math.log10(x))
    for step in (1.0, 2.0, 2.5, 5.0, 10.0):
        v = step * 10.0**e
        if v >= x * (1 - 1e-12):
            return v
    return 10.0 ** (e + 1)


def ticks(limit: float, target: int = 4) -> list[float]:
    """Symmetric ticks in [-limit, limit] at a nice step."""
    step = nice_ceiling(limit / target)
    count = int(math.floor(limit / step + 1e-9))
    return [i * step for i in range(-count, count + 1)]


def _num(v: float) -> str:
    s = f"{v:.2f}"
    return "0.00" if s == "-0.00" else s


def _label(v: float) -> str:
    s = f"{v:.6g}"
    return "0" if s in ("-0", "0") else s


def render_svg(coords: BiplotCoordinates, geometry: FeatureGeometry | None = None, path=None) -> str:
    """Return the SVG document and write it to ``path`` when given."""
    if coords.retained_components != 2:
        raise ValidationError("SVG rendering requires exactly 2 components")
    cal = scale_calibration(coords)
    obs_limit = nice_ceiling(cal.observation_extent)
    feat_limit = obs_limit * cal.ratio

    def obs_xy(p) -> tuple[float, float]:
        return MID + p[0] / obs_limit * HALF, MID - p[1] / obs_limit * HALF

    def feat_xy(p) -> tuple[float, float]:
        return MID + p[0] / feat_limit * HALF, MID - p[1] / feat_limit * HALF

    lo, hi = MARGIN, SIZE - MARGIN
    out: list[str] = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white"/>',
        f'<rect x="{lo}" y="{lo}" width="{hi - lo}" height="{hi - lo}" fill="none" stroke="{AXIS_GREY}"/>',
        f'<line x1="{lo}" y1="{_num(MID)}" x2="{hi}" y2="{_num(MID)}" stroke="{AXIS_GREY}" stroke-dasharray="4 4"/>',
        f'<line x1="{_num(MID)}" y1="{lo}" x2="{_num(MID)}" y2="{hi}" stroke="{AXIS_GREY}" stroke-dasharray="4 4"/>',
    ]

    out.append(f'<g class="axes-observations" stroke="{AXIS_GREY}" fill="{AXIS_GREY}">')
    for t in ticks(obs_limit):
        x, y = obs_xy((t, t))
        out.append(f'<line x1="{_num(x)}" y1="{hi}" x2="{_num(x)}" y2="{hi + 5}"/>')
        out.append(f'<text x="{_num(x)}" y="{hi + 18}" text-anchor="middle" stroke="none">{_label(t)}</text>')
        out.append(f'<line x1="{lo - 5}" y1="{_num(y)}" x2="{lo}" y2="{_num(y)}"/>')
        out.append(f'<text x="{lo - 8}" y="{_num(y + 4)}" text-anchor="end" stroke="none">{_label(t)}</text>')
    out.append("</g>")

    out.append(f'<g class="axes-features" stroke="{AXIS_GREY}" fill="{AXIS_GREY}">')
    for t in ticks(feat_limit):
        x, y = feat_xy((t, t))
        out.append(f'<line x1="{_num(x)}" y1="{lo - 5}" x2="{_num(x)}" y2="{lo}"/>')
        out.append(f'<text x="{_num(x)}" y="{lo - 9}" text-anchor="middle" stroke="none">{_label(t)}</text>')
        out.append(f'<line x1="{hi}" y1="{_num(y)}" x2="{hi + 5}" y2="{_num(y)}"/>')
        out.append(f'<text x="{hi + 8}" y="{_num(y + 4)}" text-anchor="start" stroke="none">{_label(t)}</text>')
    out.append("</g>")

    out.append(f'<text x="{_num(MID)}" y="{SIZE - 30}" text-anchor="middle">PC1</text>')
    out.append(
        f'<text x="30" y="{_num(MID)}" text-anchor="middle" transform="rotate(-90 30 {_num(MID)})">PC2</text>'
    )

    out.append(f'<g class="observations" fill="{OBS_COLOUR}">')
    for label, p in zip(coords.row_labels, coords.observations):
        x, y = obs_xy(p)
        out.append(f'<circle cx="{_num(x)}" cy="{_num(y)}" r="3"/>')
        out.append(f'<text x="{_num(x + 5)}" y="{_num(y - 5)}">{escape(label)}</text>')
    out.append("</g>")

    out.append(f'<g class="features" stroke="{FEAT_COLOUR}" fill="{FEAT_COLOUR}">')
    for label, p in zip(coords.col_labels, coords.features):
        x, y = feat_xy(p)
        out.append(f'<line x1="{_num(MID)}" y1="{_num(MID)}" x2="{_num(x)}" y2="{_num(y)}" stroke-width="1.5"/>')
        dx, dy = x - MID, y - MID
        length = math.hypot(dx, dy)
        if length > 1e-9:
            ux, uy = dx / length, dy / length
            bx, by = x - ARROW_LEN * ux, y - ARROW_LEN * uy
            nx, ny = -uy * ARROW_HALF_WIDTH, ux * ARROW_HALF_WIDTH
            pts = f"{_num(x)},{_num(y)} {_num(bx + nx)},{_num(by + ny)} {_num(bx - nx)},{_num(by - ny)}"
            out.append(f'<polygon points="{pts}" stroke="none"/>')
            lx, ly = x + 8 * ux, y + 8 * uy
        else:
            lx, ly = x + 5, y - 5
        anchor = "start" if dx >= 0 else "end"
        out.append(f'<text x="{_num(lx)}" y="{_num(ly + 4)}" text-anchor="{anchor}" stroke="none">{escape(label)}</text>')
    out.append("</g>")

    m = len(coords.col_labels)
    if geometry is not None and m >= 2:
        out.append('<g class="cosines" font-size="10" fill="#333333">')
        row = 0
        cos = np.asarray(geometry.pairwise_cosines)
        corr = np.asarray(geometry.pairwise_correlations)
        for i in range(m):
            for j in range(i + 1, m):
                a, b = escape(coords.col_labels[i]), escape(coords.col_labels[j])
                if geometry.undefined[i, j]:
                    text = f"cos({a}, {b}) undefined"
                else:
                    # at reduced rank the drawn angle no longer encodes the correlation
                    text = f"cos({a}, {b}) = {cos[i, j]:.3f}  (corr {corr[i, j]:.3f})"
                out.append(f'<text x="{lo + 6}" y="{lo + 14 + 12 * row}">{text}</text>')
                row += 1
        out.append("</g>")

    out.append("</svg>")
    doc = "\n".join(out) + "\n"
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(doc)
    return doc
