"""Planar polygon helpers for floor-plan overlap."""

import numpy as np

from .errors import DegenerateError


def signed_area(poly):
    x, y = np.asarray(poly, dtype=np.float64).T
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def area(poly):
    return abs(signed_area(poly)) if len(poly) >= 3 else 0.0


def ccw(poly):
    poly = np.asarray(poly, dtype=np.float64)
    return poly if signed_area(poly) >= 0 else poly[::-1]


def is_convex(poly):
    poly = ccw(poly)
    e = np.roll(poly, -1, axis=0) - poly
    cross = e[:, 0] * np.roll(e[:, 1], -1) - e[:, 1] * np.roll(e[:, 0], -1)
    return bool(np.all(cross >= -1e-12 * np.abs(cross).max()))


def clip(subject, clipper):
    """Sutherland-Hodgman: part of ``subject`` inside the convex ``clipper``.

    Both polygons are taken counterclockwise. ``subject`` may be non-convex.
    """
    out = [tuple(p) for p in ccw(subject)]
    clipper = ccw(clipper)
    for a, b in zip(clipper, np.roll(clipper, -1, axis=0)):
        if not out:
            break
        ex, ey = b - a

        def side(p):
            return ex * (p[1] - a[1]) - ey * (p[0] - a[0])

        pts, out = out, []
        for p, q in zip(pts, pts[1:] + pts[:1]):
            sp, sq = side(p), side(q)
            if sp >= 0:
                out.append(p)
            if (sp >= 0) != (sq >= 0):
                t = sp / (sp - sq)
                out.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
    return np.array(out, dtype=np.float64).reshape(-1, 2)


def intersection_area(a, b):
    """Overlap area of two simple polygons, at least one of them convex."""
    if is_convex(b):
        return area(clip(a, b))
    if is_convex(a):
        return area(clip(b, a))
    raise DegenerateError("polygon overlap needs at least one convex footprint")


def iou(a, b):
    area_a, area_b = area(a), area(b)
    if area_a <= 0 or area_b <= 0:
        raise DegenerateError("degenerate footprint with zero area")
    inter = intersection_area(a, b)
    return min(1.0, inter / (area_a + area_b - inter))
