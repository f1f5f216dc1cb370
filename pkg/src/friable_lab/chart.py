"""Minimal deterministic SVG line charts for sweep CSV files."""

from __future__ import annotations

import csv
import io
import math
from typing import Sequence

from .errors import MissingData

WIDTH, HEIGHT = 640, 400
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 70, 20, 30, 50
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _label(v: float) -> str:
    return f"{v:.4g}"


def _read_columns(text: str, x_col: str, y_cols: Sequence[str]) -> tuple[list[float], dict[str, list[float]]]:
    reader = csv.DictReader(io.StringIO(text))
    header = reader.fieldnames or []
    for col in (x_col, *y_cols):
        if col not in header:
            raise MissingData(f"column {col!r} not in CSV header {header}")
    xs: list[float] = []
    ys: dict[str, list[float]] = {c: [] for c in y_cols}
    for row in reader:
        xs.append(float(row[x_col]))
        for c in y_cols:
            cell = row[c]
            ys[c].append(float(cell) if cell not in ("", None) else math.nan)
    if not xs:
        raise MissingData("CSV has a header but no data rows")
    return xs, ys


def render_svg(text: str, x_col: str, y_cols: Sequence[str], log_y: bool = False, title: str = "") -> str:
    """SVG source for a line chart of y_cols against x_col.

    With log_y the natural log of each y value is plotted; nonpositive values
    are dropped from their series.
    """
    if not y_cols:
        raise MissingData("no y columns requested")
    xs, ys = _read_columns(text, x_col, y_cols)
    series = {}
    for c in y_cols:
        pts = []
        for x, y in zip(xs, ys[c]):
            if log_y:
                y = math.log(y) if y > 0 else math.nan
            if math.isfinite(x) and math.isfinite(y):
                pts.append((x, y))
        series[c] = pts
    all_pts = [p for pts in series.values() for p in pts]
    if not all_pts:
        raise MissingData("no finite points to plot")
    x0, x1 = min(p[0] for p in all_pts), max(p[0] for p in all_pts)
    y0, y1 = min(p[1] for p in all_pts), max(p[1] for p in all_pts)
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5
    pw = WIDTH - MARGIN_L - MARGIN_R
    ph = HEIGHT - MARGIN_T - MARGIN_B

    def sx(x):
        return MARGIN_L + (x - x0) / (x1 - x0) * pw

    def sy(y):
        return MARGIN_T + (1 - (y - y0) / (y1 - y0)) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for i in range(5):
        fx = x0 + (x1 - x0) * i / 4
        fy = y0 + (y1 - y0) * i / 4
        out.append(f'<text x="{_fmt(sx(fx))}" y="{HEIGHT - MARGIN_B + 18}" font-size="11" text-anchor="middle">{_label(fx)}</text>')
        out.append(f'<text x="{MARGIN_L - 6}" y="{_fmt(sy(fy) + 4)}" font-size="11" text-anchor="end">{_label(fy)}</text>')
    ylabel = f"log {', '.join(y_cols)}" if log_y else ", ".join(y_cols)
    out.append(f'<text x="{MARGIN_L + pw / 2:.2f}" y="{HEIGHT - 10}" font-size="12" text-anchor="middle">{_esc(x_col)}</text>')
    out.append(f'<text x="14" y="{MARGIN_T + ph / 2:.2f}" font-size="12" text-anchor="middle" transform="rotate(-90 14 {MARGIN_T + ph / 2:.2f})">{_esc(ylabel)}</text>')
    if title:
        out.append(f'<text x="{WIDTH / 2:.2f}" y="18" font-size="13" text-anchor="middle">{_esc(title)}</text>')
    for k, c in enumerate(y_cols):
        color = COLORS[k % len(COLORS)]
        pts = series[c]
        if pts:
            path = " ".join(f"{_fmt(sx(x))},{_fmt(sy(y))}" for x, y in pts)
            out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{path}"/>')
        ly = MARGIN_T + 14 + 14 * k
        out.append(f'<line x1="{WIDTH - MARGIN_R - 110}" y1="{ly - 4}" x2="{WIDTH - MARGIN_R - 90}" y2="{ly - 4}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{WIDTH - MARGIN_R - 86}" y="{ly}" font-size="11">{_esc(c)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _esc(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def emit_chart(csv_path: str, x_col: str, y_cols: Sequence[str], out_path: str, log_y: bool = False, title: str = "") -> str:
    with open(csv_path, newline="") as fh:
        text = fh.read()
    svg = render_svg(text, x_col, y_cols, log_y=log_y, title=title)
    with open(out_path, "w", newline="\n") as fh:
        fh.write(svg)
    return out_path
