"""Deterministic SVG drawing of plane arrays and bolts.

Output depends only on the input points: fixed 640x640 canvas, 5% margins,
fixed-precision coordinates, no timestamps or ids.
"""

from __future__ import annotations

from typing import Sequence
from xml.sax.saxutils import escape

SIZE = 640
MARGIN = 0.05 * SIZE


def _fmt(v: float) -> str:
    s = f"{v:.2f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def render(points: Sequence[Sequence[float]], edges: Sequence[tuple[int, int]], title: str = "") -> str:
    """SVG text with labelled points ``a_1 ...`` and dotted connectors for ``edges``."""
    if not points:
        xs = ys = [0.0]
    else:
        xs = [p[0] for p in points]
        ys = [p[1] for p in points]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    span = max(x1 - x0, y1 - y0) or 1.0
    scale = (SIZE - 2 * MARGIN) / span
    # centre the data box; equal scaling keeps right angles right
    ox = MARGIN + ((SIZE - 2 * MARGIN) - (x1 - x0) * scale) / 2
    oy = MARGIN + ((SIZE - 2 * MARGIN) - (y1 - y0) * scale) / 2

    def to_px(p):
        return ox + (p[0] - x0) * scale, SIZE - (oy + (p[1] - y0) * scale)

    px = [to_px(p) for p in points]
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">',
        f"<title>{escape(title)}</title>",
        f'<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="#ffffff"/>',
        '<g stroke="#555555" stroke-width="1.5" stroke-dasharray="2,4" fill="none">',
    ]
    for a, b in edges:
        (xa, ya), (xb, yb) = px[a], px[b]
        out.append(f'<line x1="{_fmt(xa)}" y1="{_fmt(ya)}" x2="{_fmt(xb)}" y2="{_fmt(yb)}"/>')
    out.append("</g>")
    out.append('<g fill="#000000" font-family="serif" font-size="14">')
    for r, (x, y) in enumerate(px, start=1):
        out.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="3"/>')
        out.append(
            f'<text x="{_fmt(x + 5)}" y="{_fmt(y - 5)}">a<tspan baseline-shift="sub" font-size="10">{r}</tspan></text>'
        )
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
