"""SVG overlays of layout wireframes on the equirectangular canvas."""

from xml.sax.saxutils import quoteattr

import numpy as np

from .metrics import EVAL_SIZE, wireframe_edges

STROKES = ("#1a9850", "#d73027")
SVG_DENSITY = 1.0


def split_at_seam(pts, width):
    """Wrap columns into ``[0, width)`` and cut the polyline where it crosses the seam."""
    u = np.mod(pts[:, 0], width)
    jumps = np.flatnonzero(np.abs(np.diff(u)) > width / 2) + 1
    return [np.column_stack(p) for p in zip(np.split(u, jumps), np.split(pts[:, 1], jumps))]


def polylines(layout, width, height, density=SVG_DENSITY):
    out = []
    for edge in wireframe_edges(layout, width, height, density):
        out.extend(p for p in split_at_seam(edge, width) if len(p) >= 2)
    return out


def render_svg(layouts, width=EVAL_SIZE[0], height=EVAL_SIZE[1], density=SVG_DENSITY):
    """Wireframes of up to two layouts as an SVG document string."""
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="-0.5 -0.5 {width} {height}">',
        f'<rect x="-0.5" y="-0.5" width="{width}" height="{height}" fill="white"/>',
    ]
    for k, layout in enumerate(layouts):
        stroke = STROKES[k % len(STROKES)]
        lines.append(f'<g id={quoteattr(f"layout{k}")} fill="none" stroke="{stroke}" stroke-width="1">')
        for poly in polylines(layout, width, height, density):
            coords = " ".join(f"{u:.3f},{v:.3f}" for u, v in poly)
            lines.append(f'<polyline points="{coords}"/>')
        lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
