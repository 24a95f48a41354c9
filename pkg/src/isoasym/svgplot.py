"""Minimal hand-written SVG line/scatter plots (no plotting dependency)."""

from __future__ import annotations

import math


def _nice_ticks(lo: float, hi: float, n: int = 5):
    if not (math.isfinite(lo) and math.isfinite(hi)) or hi <= lo:
        return [lo]
    raw = (hi - lo) / max(n, 1)
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        if raw <= mult * mag:
            step = mult * mag
            break
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-12 * step:
        ticks.append(round(t, 12))
        t += step
    return ticks


def line_plot_svg(path, xs, ys, title: str = "", xlabel: str = "", ylabel: str = "",
                  width: int = 640, height: int = 420, marker: bool = False) -> None:
    """Write a single-series line plot as a standalone SVG file."""
    pts = [(float(x), float(y)) for x, y in zip(xs, ys)
           if math.isfinite(float(x)) and math.isfinite(float(y))]
    if not pts:
        raise ValueError("nothing to plot")
    ml, mr, mt, mb = 64, 16, 30, 46
    x0, x1 = min(p[0] for p in pts), max(p[0] for p in pts)
    y0, y1 = min(p[1] for p in pts), max(p[1] for p in pts)
    if x1 <= x0:
        x1 = x0 + 1.0
    if y1 <= y0:
        y1 = y0 + 1.0
    padx, pady = 0.03 * (x1 - x0), 0.06 * (y1 - y0)
    x0, x1, y0, y1 = x0 - padx, x1 + padx, y0 - pady, y1 + pady

    def sx(x):
        return ml + (x - x0) / (x1 - x0) * (width - ml - mr)

    def sy(y):
        return height - mb - (y - y0) / (y1 - y0) * (height - mt - mb)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<g font-family="monospace" font-size="11" fill="black">',
    ]
    if title:
        out.append(f'<text x="{width/2:.1f}" y="18" text-anchor="middle">{title}</text>')
    # axes
    out.append(
        f'<path d="M {ml} {mt} V {height-mb} H {width-mr}" stroke="black" fill="none"/>'
    )
    for t in _nice_ticks(x0 + padx, x1 - padx):
        px = sx(t)
        out.append(f'<line x1="{px:.1f}" y1="{height-mb}" x2="{px:.1f}" y2="{height-mb+4}" stroke="black"/>')
        out.append(f'<text x="{px:.1f}" y="{height-mb+16}" text-anchor="middle">{t:g}</text>')
    for t in _nice_ticks(y0 + pady, y1 - pady):
        py = sy(t)
        out.append(f'<line x1="{ml-4}" y1="{py:.1f}" x2="{ml}" y2="{py:.1f}" stroke="black"/>')
        out.append(f'<text x="{ml-7}" y="{py+3:.1f}" text-anchor="end">{t:g}</text>')
    if xlabel:
        out.append(f'<text x="{(ml+width-mr)/2:.1f}" y="{height-8}" text-anchor="middle">{xlabel}</text>')
    if ylabel:
        out.append(
            f'<text x="14" y="{(mt+height-mb)/2:.1f}" text-anchor="middle" '
            f'transform="rotate(-90 14 {(mt+height-mb)/2:.1f})">{ylabel}</text>'
        )
    poly = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in pts)
    out.append(f'<polyline points="{poly}" fill="none" stroke="#1f4e9c" stroke-width="1.4"/>')
    if marker:
        for x, y in pts:
            out.append(f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="2" fill="#1f4e9c"/>')
    out.append("</g></svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(out) + "\n")
