"""SVG pictures of a polygon, guards, their visibility regions and a witness."""

from __future__ import annotations

from pathlib import Path
from typing import Optional, Sequence

from .geometry import Point, SimplePolygon
from .visibility import VisibilityRegion

PRECISION = 4
_FILLS = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b")


def _f(v) -> str:
    return f"{float(v):.{PRECISION}f}"


def render_svg(polygon: SimplePolygon, guards: Sequence[Point] = (),
               regions: Sequence[VisibilityRegion] = (), witness: Optional[Point] = None,
               path=None, size: int = 480) -> str:
    """Return (and optionally write) the SVG text; output depends only on the inputs."""
    xs = [p.x for p in polygon.vertices]
    ys = [p.y for p in polygon.vertices]
    x0, y0 = min(xs), min(ys)
    span = max(max(xs) - x0, max(ys) - y0)
    k = (size - 20) / span

    def tx(p):
        # flip y so the picture has the usual orientation
        return _f(10 + (p.x - x0) * k), _f(size - 10 - (p.y - y0) * k)

    def path_d(pts):
        parts = []
        for i, p in enumerate(pts):
            x, y = tx(p)
            parts.append(f"{'M' if i == 0 else 'L'}{x},{y}")
        return " ".join(parts) + " Z"

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
           f'viewBox="0 0 {size} {size}">']
    for i, r in enumerate(regions):
        fill = _FILLS[i % len(_FILLS)]
        out.append(f'  <path class="region" d="{path_d(r.polygon.vertices)}" '
                   f'fill="{fill}" fill-opacity="0.25" stroke="none"/>')
    out.append(f'  <path class="polygon" d="{path_d(polygon.vertices)}" '
               f'fill="none" stroke="black" stroke-width="1.5"/>')
    for g in guards:
        x, y = tx(g)
        out.append(f'  <circle class="guard" cx="{x}" cy="{y}" r="4" fill="black"/>')
    if witness is not None:
        x, y = (float(v) for v in tx(witness))
        out.append(f'  <path class="witness" d="M{_f(x - 5)},{_f(y - 5)} L{_f(x + 5)},{_f(y + 5)} '
                   f'M{_f(x - 5)},{_f(y + 5)} L{_f(x + 5)},{_f(y - 5)}" stroke="red" stroke-width="2"/>')
    out.append("</svg>")
    text = "\n".join(out) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text
