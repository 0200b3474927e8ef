"""Minimal standalone SVG line charts.

Hand-rolled rather than delegating to a plotting library so that output is
byte-for-byte reproducible (no embedded ids, dates or font metrics).  One
chart per file; linear or log-scaled y axis; the effective y range is
exposed as ``data-ymin``/``data-ymax`` attributes on the root element.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

__all__ = ["Series", "ChartSpec", "write_line_chart"]

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf")

_W, _H = 720, 480
_ML, _MR, _MT, _MB = 72, 24, 40, 56


@dataclass(frozen=True, eq=False)
class Series:
    """One labeled polyline."""

    label: str
    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        y = np.asarray(self.y, dtype=float)
        if x.ndim != 1 or y.ndim != 1 or x.size != y.size or x.size == 0:
            raise ValueError("series needs equal-length nonempty x and y")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)


@dataclass(frozen=True, eq=False)
class ChartSpec:
    """A single chart: output filename plus labeled series and axis styling."""

    filename: str
    title: str
    xlabel: str
    ylabel: str
    series: tuple[Series, ...] = field(default_factory=tuple)
    log_y: bool = False
    y_floor: float | None = None  # lower bound forced into a log-scale range


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    return [lo + (hi - lo) * i / (n - 1) for i in range(n)]


def write_line_chart(directory: Path, chart: ChartSpec) -> Path:
    """Render the chart and return the written path."""
    if not chart.series:
        raise ValueError("chart has no series")
    xs = np.concatenate([s.x for s in chart.series])
    ys = np.concatenate([s.y for s in chart.series])
    x_lo, x_hi = float(xs.min()), float(xs.max())
    if chart.log_y:
        positive = ys[ys > 0.0]
        floor = chart.y_floor if chart.y_floor is not None else (
            float(positive.min()) / 10.0 if positive.size else 1e-16
        )
        floor = max(floor, 1e-300)
        y_hi_val = max(float(ys.max()), floor * 10.0)
        y_lo_val = min(floor, y_hi_val / 10.0)
        y_lo, y_hi = math.log10(y_lo_val), math.log10(y_hi_val)

        def ty(v: float) -> float:
            return math.log10(max(float(v), y_lo_val))

    else:
        y_lo_val, y_hi_val = float(ys.min()), float(ys.max())
        if chart.y_floor is not None:
            y_lo_val = min(y_lo_val, chart.y_floor)
        if y_hi_val <= y_lo_val:
            y_hi_val = y_lo_val + 1.0
        y_lo, y_hi = y_lo_val, y_hi_val

        def ty(v: float) -> float:
            return float(v)

    if x_hi <= x_lo:
        x_hi = x_lo + 1.0
    plot_w = _W - _ML - _MR
    plot_h = _H - _MT - _MB

    def px(v: float) -> float:
        return _ML + (v - x_lo) / (x_hi - x_lo) * plot_w

    def py(v: float) -> float:
        return _MT + (y_hi - ty(v)) / (y_hi - y_lo) * plot_h

    out = []
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}" data-ymin="{y_lo_val!r}" data-ymax="{y_hi_val!r}">'
    )
    out.append(f'<rect x="0" y="0" width="{_W}" height="{_H}" fill="white"/>')
    out.append(
        f'<text x="{_W / 2:.0f}" y="24" text-anchor="middle" font-size="16" '
        f'font-family="sans-serif">{chart.title}</text>'
    )
    # axes
    out.append(
        f'<line x1="{_ML}" y1="{_H - _MB}" x2="{_W - _MR}" y2="{_H - _MB}" stroke="black"/>'
    )
    out.append(f'<line x1="{_ML}" y1="{_MT}" x2="{_ML}" y2="{_H - _MB}" stroke="black"/>')
    for tx in _ticks(x_lo, x_hi):
        out.append(
            f'<text x="{px(tx):.1f}" y="{_H - _MB + 18}" text-anchor="middle" '
            f'font-size="11" font-family="sans-serif">{tx:.4g}</text>'
        )
    for tv in _ticks(y_lo, y_hi):
        label = 10.0 ** tv if chart.log_y else tv
        ypix = _MT + (y_hi - tv) / (y_hi - y_lo) * plot_h
        out.append(
            f'<text x="{_ML - 6}" y="{ypix + 4:.1f}" text-anchor="end" '
            f'font-size="11" font-family="sans-serif">{label:.3g}</text>'
        )
    out.append(
        f'<text x="{_ML + plot_w / 2:.0f}" y="{_H - 12}" text-anchor="middle" '
        f'font-size="13" font-family="sans-serif">{chart.xlabel}</text>'
    )
    out.append(
        f'<text x="18" y="{_MT + plot_h / 2:.0f}" text-anchor="middle" font-size="13" '
        f'font-family="sans-serif" transform="rotate(-90 18 {_MT + plot_h / 2:.0f})">'
        f"{chart.ylabel}</text>"
    )
    for i, s in enumerate(chart.series):
        color = _PALETTE[i % len(_PALETTE)]
        pts = " ".join(f"{_fmt(px(a))},{_fmt(py(b))}" for a, b in zip(s.x, s.y))
        out.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>'
        )
        out.append(
            f'<text x="{_W - _MR - 6}" y="{_MT + 16 + 16 * i}" text-anchor="end" '
            f'font-size="12" font-family="sans-serif" fill="{color}">{s.label}</text>'
        )
    out.append("</svg>")
    path = Path(directory) / chart.filename
    path.write_text("\n".join(out) + "\n", encoding="utf-8")
    return path
