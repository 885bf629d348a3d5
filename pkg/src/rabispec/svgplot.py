"""Minimal SVG line plots: polylines, points, axes, tick labels.

Figures are for eyeballing; the CSV siblings are the data contract, and
each SVG embeds its sibling CSV text in a <desc> element so the numbers
shown can be traced exactly.
"""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

import numpy as np

WIDTH = 720
HEIGHT = 480
MARGIN_LEFT = 70
MARGIN_RIGHT = 20
MARGIN_TOP = 40
MARGIN_BOTTOM = 50

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _finite_range(values):
    finite = [v for v in values if math.isfinite(v)]
    if not finite:
        return 0.0, 1.0
    lo, hi = min(finite), max(finite)
    if lo == hi:
        lo, hi = lo - 0.5, hi + 0.5
    pad = 0.05 * (hi - lo)
    return lo - pad, hi + pad


def line_plot_svg(
    title: str,
    xlabel: str,
    ylabel: str,
    series,
    points=(),
    csv_text: str = "",
) -> str:
    """Render polyline series and scatter points to an SVG document string.

    ``series`` is a sequence of (name, x, y) arrays; NaNs break a polyline
    into segments.  ``points`` is a sequence of (name, x, y) scalars drawn
    as circles.  ``csv_text`` is embedded verbatim in a <desc> element.
    """
    xs, ys = [], []
    for _, x, y in series:
        xs.extend(np.asarray(x, dtype=float).tolist())
        ys.extend(np.asarray(y, dtype=float).tolist())
    for _, x, y in points:
        xs.append(float(x))
        ys.append(float(y))
    x_lo, x_hi = _finite_range(xs)
    y_lo, y_hi = _finite_range(ys)
    plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

    def to_px(x, y):
        px = MARGIN_LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w
        py = MARGIN_TOP + (y_hi - y) / (y_hi - y_lo) * plot_h
        return px, py

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f"<desc>{escape(csv_text)}</desc>",
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{plot_w}" height="{plot_h}" '
        'fill="none" stroke="black"/>',
        f'<text x="{WIDTH / 2:.1f}" y="20" text-anchor="middle" font-size="14">'
        f"{escape(title)}</text>",
        f'<text x="{MARGIN_LEFT + plot_w / 2:.1f}" y="{HEIGHT - 10}" text-anchor="middle" '
        f'font-size="12">{escape(xlabel)}</text>',
        f'<text x="18" y="{MARGIN_TOP + plot_h / 2:.1f}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 18 {MARGIN_TOP + plot_h / 2:.1f})">{escape(ylabel)}</text>',
    ]
    for i in range(5):
        frac = i / 4.0
        x_val = x_lo + frac * (x_hi - x_lo)
        y_val = y_lo + frac * (y_hi - y_lo)
        px, _ = to_px(x_val, y_lo)
        _, py = to_px(x_lo, y_val)
        parts.append(
            f'<line x1="{px:.1f}" y1="{MARGIN_TOP + plot_h}" x2="{px:.1f}" '
            f'y2="{MARGIN_TOP + plot_h + 5}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{px:.1f}" y="{MARGIN_TOP + plot_h + 18}" text-anchor="middle" '
            f'font-size="10">{x_val:.4g}</text>'
        )
        parts.append(
            f'<line x1="{MARGIN_LEFT - 5}" y1="{py:.1f}" x2="{MARGIN_LEFT}" y2="{py:.1f}" '
            'stroke="black"/>'
        )
        parts.append(
            f'<text x="{MARGIN_LEFT - 8}" y="{py + 3:.1f}" text-anchor="end" '
            f'font-size="10">{y_val:.4g}</text>'
        )
    for idx, (name, x, y) in enumerate(series):
        color = PALETTE[idx % len(PALETTE)]
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        segment = []
        chunks = []
        for xv, yv in zip(x, y):
            if math.isfinite(xv) and math.isfinite(yv):
                segment.append(to_px(xv, yv))
            elif segment:
                chunks.append(segment)
                segment = []
        if segment:
            chunks.append(segment)
        for chunk in chunks:
            if len(chunk) == 1:
                px, py = chunk[0]
                parts.append(f'<circle cx="{px:.2f}" cy="{py:.2f}" r="2" fill="{color}"/>')
            else:
                coords = " ".join(f"{px:.2f},{py:.2f}" for px, py in chunk)
                parts.append(
                    f'<polyline points="{coords}" fill="none" stroke="{color}" '
                    'stroke-width="1.5"/>'
                )
        parts.append(
            f'<text x="{MARGIN_LEFT + plot_w - 8}" y="{MARGIN_TOP + 16 + 14 * idx}" '
            f'text-anchor="end" font-size="11" fill="{color}">{escape(str(name))}</text>'
        )
    for _, x, y in points:
        px, py = to_px(float(x), float(y))
        parts.append(f'<circle cx="{px:.2f}" cy="{py:.2f}" r="3.5" fill="black"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
