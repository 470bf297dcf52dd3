"""Dependency-free SVG line charts."""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

WIDTH, HEIGHT = 960, 540
MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 80, 190, 40, 60
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
           "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf")


def nice_ticks(lo: float, hi: float, target: int = 6) -> list[float]:
    """Round tick positions covering ``[lo, hi]``."""
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / max(target - 1, 1)
    mag = 10.0 ** math.floor(math.log10(raw))
    step = next(s * mag for s in (1, 2, 2.5, 5, 10) if s * mag >= raw)
    first = math.floor(lo / step) * step
    ticks = []
    k = 0
    while True:
        v = first + k * step
        if v > hi + 1e-9 * step:
            break
        if v >= lo - 1e-9 * step:
            ticks.append(round(v, 12))
        k += 1
    return ticks


def _finite_prefix(xs, ys):
    px, py = [], []
    for x, y in zip(xs, ys):
        if not (math.isfinite(x) and math.isfinite(y)):
            break
        px.append(float(x))
        py.append(float(y))
    return px, py


def _label(v: float) -> str:
    return format(v, "g")


def line_chart(series, title: str = "", xlabel: str = "t", ylabel: str = "") -> str:
    """Render ``series`` (a list of ``(label, xs, ys)``) as an SVG document.

    Each polyline stops at its first non-finite point.
    """
    data = [(label, *_finite_prefix(xs, ys)) for label, xs, ys in series]
    data = [(label, xs, ys) for label, xs, ys in data if xs]
    if not data:
        raise ValueError("nothing to plot: every series is empty or non-finite")
    x_lo = min(min(xs) for _, xs, _ in data)
    x_hi = max(max(xs) for _, xs, _ in data)
    y_lo = min(min(ys) for _, _, ys in data)
    y_hi = max(max(ys) for _, _, ys in data)
    xt, yt = nice_ticks(x_lo, x_hi), nice_ticks(y_lo, y_hi)
    x_lo, x_hi = min(x_lo, xt[0]), max(x_hi, xt[-1])
    y_lo, y_hi = min(y_lo, yt[0]), max(y_hi, yt[-1])
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0

    pw = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    ph = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

    def sx(x):
        return MARGIN_LEFT + (x - x_lo) / (x_hi - x_lo) * pw

    def sy(y):
        return MARGIN_TOP + (y_hi - y) / (y_hi - y_lo) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{pw}" height="{ph}" '
        'fill="none" stroke="black"/>',
    ]
    for v in xt:
        x = sx(v)
        out.append(f'<line x1="{x:.2f}" y1="{MARGIN_TOP + ph}" x2="{x:.2f}" '
                   f'y2="{MARGIN_TOP + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{x:.2f}" y="{MARGIN_TOP + ph + 20}" '
                   f'text-anchor="middle">{_label(v)}</text>')
    for v in yt:
        y = sy(v)
        out.append(f'<line x1="{MARGIN_LEFT - 5}" y1="{y:.2f}" x2="{MARGIN_LEFT + pw}" '
                   f'y2="{y:.2f}" stroke="#dddddd"/>')
        out.append(f'<text x="{MARGIN_LEFT - 8}" y="{y + 4:.2f}" '
                   f'text-anchor="end">{_label(v)}</text>')
    if title:
        out.append(f'<text x="{MARGIN_LEFT + pw / 2:.2f}" y="{MARGIN_TOP - 14}" '
                   f'text-anchor="middle" font-size="16">{escape(title)}</text>')
    out.append(f'<text x="{MARGIN_LEFT + pw / 2:.2f}" y="{HEIGHT - 15}" '
               f'text-anchor="middle">{escape(xlabel)}</text>')
    if ylabel:
        cy = MARGIN_TOP + ph / 2
        out.append(f'<text x="20" y="{cy:.2f}" text-anchor="middle" '
                   f'transform="rotate(-90 20 {cy:.2f})">{escape(ylabel)}</text>')
    for k, (label, xs, ys) in enumerate(data):
        color = PALETTE[k % len(PALETTE)]
        pts = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in zip(xs, ys))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        ly = MARGIN_TOP + 10 + 20 * k
        lx = MARGIN_LEFT + pw + 15
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 25}" y2="{ly}" '
                   f'stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{lx + 32}" y="{ly + 4}">{escape(str(label))}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
