"""Deterministic SVG line plots.

No plotting library: the runner's golden-file tests need byte-identical
output, so everything here is fixed-size, fixed-precision (%.6g) text.
Inputs are plain (label, xs, ys) series plus optional shaded x-bands
for exceptional radii.
"""

from __future__ import annotations

import math
from typing import List, Optional, Sequence, Tuple

__all__ = ["line_plot"]

WIDTH, HEIGHT = 640, 400
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 64, 18, 30, 46

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _fmt(v: float) -> str:
    if v == 0:
        return "0"
    return f"{v:.6g}"


def _nice_ticks(lo: float, hi: float, target: int = 5) -> List[float]:
    if not (math.isfinite(lo) and math.isfinite(hi)) or hi <= lo:
        return [lo]
    raw = (hi - lo) / target
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 5.0, 10.0):
        if raw <= mult * mag:
            step = mult * mag
            break
    first = math.ceil(lo / step) * step
    out = []
    t = first
    while t <= hi + 1e-9 * step:
        out.append(0.0 if abs(t) < 1e-12 * step else t)
        t += step
    return out


def _transform(v: float, log: bool) -> float:
    return math.log10(v) if log else v


def _data_range(series, idx: int, log: bool) -> Tuple[float, float]:
    vals = []
    for _, xs, ys in series:
        for v in (xs if idx == 0 else ys):
            v = float(v)
            if math.isfinite(v) and (not log or v > 0):
                vals.append(_transform(v, log))
    if not vals:
        return 0.0, 1.0
    lo, hi = min(vals), max(vals)
    if hi - lo < 1e-12:
        pad = max(1.0, abs(hi)) * 0.05
        return lo - pad, hi + pad
    pad = (hi - lo) * 0.04
    return lo - pad, hi + pad


def line_plot(series: Sequence[Tuple[str, Sequence[float], Sequence[float]]],
              x_label: str, y_label: str, title: str = "",
              shade: Sequence[Tuple[float, float]] = (),
              logx: bool = False, logy: bool = False) -> str:
    """SVG text for labeled polylines with optional shaded x-intervals.

    Non-finite samples (and non-positive ones on log axes) split the
    polyline rather than corrupting it.
    """
    xlo, xhi = _data_range(series, 0, logx)
    ylo, yhi = _data_range(series, 1, logy)
    plot_w = WIDTH - MARGIN_L - MARGIN_R
    plot_h = HEIGHT - MARGIN_T - MARGIN_B

    def px(x: float) -> float:
        return MARGIN_L + (x - xlo) / (xhi - xlo) * plot_w

    def py(y: float) -> float:
        return MARGIN_T + (yhi - y) / (yhi - ylo) * plot_h

    out: List[str] = []
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" '
        f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">')
    out.append(f'<rect width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>')

    for lo, hi in shade:
        lo_t, hi_t = _transform(max(lo, 1e-300) if logx else lo, logx), \
            _transform(max(hi, 1e-300) if logx else hi, logx)
        a = min(max(px(lo_t), MARGIN_L), WIDTH - MARGIN_R)
        b = min(max(px(hi_t), MARGIN_L), WIDTH - MARGIN_R)
        if b > a:
            out.append(
                f'<rect x="{_fmt(a)}" y="{MARGIN_T}" width="{_fmt(b - a)}" '
                f'height="{plot_h}" fill="#cccccc" fill-opacity="0.5"/>')

    # axes
    out.append(
        f'<line x1="{MARGIN_L}" y1="{MARGIN_T}" x2="{MARGIN_L}" '
        f'y2="{HEIGHT - MARGIN_B}" stroke="#000000"/>')
    out.append(
        f'<line x1="{MARGIN_L}" y1="{HEIGHT - MARGIN_B}" '
        f'x2="{WIDTH - MARGIN_R}" y2="{HEIGHT - MARGIN_B}" '
        f'stroke="#000000"/>')

    for t in _nice_ticks(xlo, xhi):
        x = px(t)
        label = _fmt(10.0 ** t) if logx else _fmt(t)
        out.append(
            f'<line x1="{_fmt(x)}" y1="{HEIGHT - MARGIN_B}" '
            f'x2="{_fmt(x)}" y2="{HEIGHT - MARGIN_B + 5}" stroke="#000000"/>')
        out.append(
            f'<text x="{_fmt(x)}" y="{HEIGHT - MARGIN_B + 18}" '
            f'font-size="11" text-anchor="middle" '
            f'font-family="monospace">{label}</text>')
    for t in _nice_ticks(ylo, yhi):
        y = py(t)
        label = _fmt(10.0 ** t) if logy else _fmt(t)
        out.append(
            f'<line x1="{MARGIN_L - 5}" y1="{_fmt(y)}" x2="{MARGIN_L}" '
            f'y2="{_fmt(y)}" stroke="#000000"/>')
        out.append(
            f'<text x="{MARGIN_L - 8}" y="{_fmt(y + 4)}" font-size="11" '
            f'text-anchor="end" font-family="monospace">{label}</text>')

    out.append(
        f'<text x="{MARGIN_L + plot_w / 2:.6g}" y="{HEIGHT - 8}" '
        f'font-size="12" text-anchor="middle" '
        f'font-family="monospace">{x_label}</text>')
    out.append(
        f'<text x="14" y="{MARGIN_T + plot_h / 2:.6g}" font-size="12" '
        f'text-anchor="middle" font-family="monospace" '
        f'transform="rotate(-90 14 {MARGIN_T + plot_h / 2:.6g})">'
        f'{y_label}</text>')
    if title:
        out.append(
            f'<text x="{WIDTH / 2:.6g}" y="18" font-size="13" '
            f'text-anchor="middle" font-family="monospace">{title}</text>')

    for k, (label, xs, ys) in enumerate(series):
        color = PALETTE[k % len(PALETTE)]
        segment: List[str] = []
        pieces: List[List[str]] = []
        for x, y in zip(xs, ys):
            x, y = float(x), float(y)
            ok = (math.isfinite(x) and math.isfinite(y)
                  and (not logx or x > 0) and (not logy or y > 0))
            if not ok:
                if segment:
                    pieces.append(segment)
                    segment = []
                continue
            segment.append(
                f"{px(_transform(x, logx)):.6g},{py(_transform(y, logy)):.6g}")
        if segment:
            pieces.append(segment)
        for piece in pieces:
            if len(piece) == 1:
                cx, cy = piece[0].split(",")
                out.append(f'<circle cx="{cx}" cy="{cy}" r="2.5" '
                           f'fill="{color}"/>')
            else:
                out.append(
                    f'<polyline points="{" ".join(piece)}" fill="none" '
                    f'stroke="{color}" stroke-width="1.5"/>')
        lx = WIDTH - MARGIN_R - 150
        ly = MARGIN_T + 14 + 16 * k
        out.append(
            f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 18}" y2="{ly - 4}" '
            f'stroke="{color}" stroke-width="2"/>')
        out.append(
            f'<text x="{lx + 24}" y="{ly}" font-size="11" '
            f'font-family="monospace">{label}</text>')

    out.append("</svg>")
    return "\n".join(out) + "\n"
