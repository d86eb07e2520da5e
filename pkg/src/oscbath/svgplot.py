"""Minimal deterministic SVG line plots: fixed 800x600 canvas, bare axes.

Meant for eyeballing runs, not publication; every float is formatted with a
fixed precision so identical data produce identical bytes.
"""

from __future__ import annotations

import numpy as np

__all__ = ["write_line_svg"]

WIDTH, HEIGHT = 800, 600
MARGIN = 70
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
           "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf")


def _fmt(x: float) -> str:
    return f"{x:.3f}"


def write_line_svg(path, x, series: dict[str, np.ndarray], title: str = "") -> None:
    """Write one polyline per named series against the shared x axis."""
    x = np.asarray(x, dtype=float)
    ys = {name: np.asarray(y, dtype=float) for name, y in series.items()}
    if not ys:
        raise ValueError("need at least one series")
    x_lo, x_hi = float(x.min()), float(x.max())
    y_lo = min(float(y.min()) for y in ys.values())
    y_hi = max(float(y.max()) for y in ys.values())
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0

    def px(v):
        return MARGIN + (v - x_lo) / (x_hi - x_lo) * (WIDTH - 2 * MARGIN)

    def py(v):
        return HEIGHT - MARGIN - (v - y_lo) / (y_hi - y_lo) * (HEIGHT - 2 * MARGIN)

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<line x1="{MARGIN}" y1="{HEIGHT - MARGIN}" x2="{WIDTH - MARGIN}" '
        f'y2="{HEIGHT - MARGIN}" stroke="black"/>',
        f'<line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" '
        f'y2="{HEIGHT - MARGIN}" stroke="black"/>',
        f'<text x="{MARGIN}" y="{HEIGHT - MARGIN + 20}" font-size="12">{_fmt(x_lo)}</text>',
        f'<text x="{WIDTH - MARGIN}" y="{HEIGHT - MARGIN + 20}" font-size="12" '
        f'text-anchor="end">{_fmt(x_hi)}</text>',
        f'<text x="{MARGIN - 6}" y="{HEIGHT - MARGIN}" font-size="12" '
        f'text-anchor="end">{_fmt(y_lo)}</text>',
        f'<text x="{MARGIN - 6}" y="{MARGIN + 4}" font-size="12" '
        f'text-anchor="end">{_fmt(y_hi)}</text>',
    ]
    if title:
        lines.append(f'<text x="{WIDTH // 2}" y="30" font-size="16" '
                     f'text-anchor="middle">{title}</text>')
    for i, (name, y) in enumerate(ys.items()):
        color = PALETTE[i % len(PALETTE)]
        points = " ".join(f"{_fmt(px(xv))},{_fmt(py(yv))}" for xv, yv in zip(x, y))
        lines.append(f'<polyline fill="none" stroke="{color}" points="{points}"/>')
        lines.append(f'<text x="{WIDTH - MARGIN + 4}" y="{MARGIN + 16 * i}" '
                     f'font-size="12" fill="{color}">{name}</text>')
    lines.append("</svg>")
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
