"""Layout evaluation metrics on a full-resolution equirectangular grid.

All pixel distances treat the panorama as a horizontal cylinder, so a corner
in column 0 and one in column ``W - 1`` are one pixel apart.
"""

from dataclasses import astuple, dataclass, fields

import numpy as np
from scipy.spatial import cKDTree

from . import polygon
from .errors import DegenerateError, DomainError
from .layout import FLOOR_DIST, NUM_WALLS, deproject
from .sphere import pixel_angles, sph_to_pix_array, unit3_to_angles

EVAL_SIZE = (1024, 512)
THRESHOLDS = (5, 10, 15)
WIREFRAME_DENSITY = 4.0
DELTA1_RATIO = 1.25
CEILING, WALL, FLOOR = 0, 1, 2


@dataclass(frozen=True)
class MetricsReport:
    ce: float
    pe: float
    iou2d: float
    iou3d: float
    j5: float
    j10: float
    j15: float
    w5: float
    w10: float
    w15: float
    rmse: float
    delta1: float

    def items(self):
        return [(f.name, getattr(self, f.name)) for f in fields(self)]

    def __iter__(self):
        return iter(astuple(self))


def _check_pair(pred, gt):
    if pred.corners.shape != gt.corners.shape:
        raise DomainError("prediction and ground truth have different corner counts")


def _pixels(layout, width, height):
    return sph_to_pix_array(layout.phi, layout.theta, width, height)


def pixel_distance(u1, v1, u2, v2, width):
    du = np.abs(np.asarray(u1) - u2) % width
    du = np.minimum(du, width - du)
    return np.hypot(du, np.asarray(v1) - v2)


def corner_error(pred, gt, width=EVAL_SIZE[0], height=EVAL_SIZE[1]):
    """Mean corner pixel distance as a percentage of the image diagonal."""
    _check_pair(pred, gt)
    up, vp = _pixels(pred, width, height)
    ug, vg = _pixels(gt, width, height)
    d = pixel_distance(up, vp, ug, vg, width)
    return 100.0 * float(np.mean(d) / np.hypot(width, height))


def junction_accuracy(pred, gt, d, width=EVAL_SIZE[0], height=EVAL_SIZE[1], symmetric=False):
    """Percentage of predicted corners within ``d`` pixels of some ground-truth corner."""
    up, vp = _pixels(pred, width, height)
    ug, vg = _pixels(gt, width, height)
    dist = pixel_distance(up[:, None], vp[:, None], ug[None, :], vg[None, :], width)
    hits = dist.min(axis=1) <= d
    if symmetric:
        hits = np.concatenate([hits, dist.min(axis=0) <= d])
    return 100.0 * float(np.mean(hits))


def horizontal_range(poly, phi):
    """Distance from the origin to the boundary of ``poly`` along azimuths ``phi``.

    The origin must lie inside the polygon. Returns an array shaped like ``phi``.
    """
    phi = np.asarray(phi, dtype=np.float64)
    dx, dy = np.cos(phi)[..., None], np.sin(phi)[..., None]
    a = np.asarray(poly, dtype=np.float64)
    e = np.roll(a, -1, axis=0) - a
    denom = dx * e[:, 1] - dy * e[:, 0]
    with np.errstate(divide="ignore", invalid="ignore"):
        r = (a[:, 0] * e[:, 1] - a[:, 1] * e[:, 0]) / denom
        s = (a[:, 0] * dy - a[:, 1] * dx) / denom
    ok = (np.abs(denom) > 0) & (r > 0) & (s >= -1e-12) & (s <= 1 + 1e-12)
    r = np.where(ok, r, np.inf).min(axis=-1)
    if not np.all(np.isfinite(r)):
        raise DegenerateError("degenerate cuboid: camera is not inside the room footprint")
    return r


def depth_along(cuboid, phi, theta):
    """Euclidean distance from the camera to the first room surface along rays.

    Rays above the horizon are bounded by the ceiling footprint and plane,
    rays below by the floor ones. For a cuboid the two footprints coincide and
    this is plain ray casting against six planes.
    """
    phi, theta = np.broadcast_arrays(np.asarray(phi, np.float64), np.asarray(theta, np.float64))
    st, ct = np.sin(theta), np.cos(theta)
    up = ct > 0
    r = np.where(up, horizontal_range(cuboid.ceil_pts, phi), horizontal_range(cuboid.floor_pts, phi))
    plane = np.where(up, cuboid.ceil_z, cuboid.floor_z)
    with np.errstate(divide="ignore", invalid="ignore"):
        t_wall = np.where(st > 0, r / st, np.inf)
        t_plane = np.where(ct != 0, plane / ct, np.inf)
    return np.minimum(t_wall, t_plane)


def render_depth(layout, width=EVAL_SIZE[0], height=EVAL_SIZE[1], floor_dist=FLOOR_DIST):
    phis, thetas = pixel_angles(width, height)
    return depth_along(deproject(layout, floor_dist), phis[None, :], thetas[:, None])


def rasterize_mask(layout, width=EVAL_SIZE[0], height=EVAL_SIZE[1], floor_dist=FLOOR_DIST):
    """Ceiling / wall / floor label of every pixel-center ray."""
    cuboid = deproject(layout, floor_dist)
    phis, thetas = pixel_angles(width, height)
    r_ceil = horizontal_range(cuboid.ceil_pts, phis)[None, :]
    r_floor = horizontal_range(cuboid.floor_pts, phis)[None, :]
    # horizontal range at which each ray meets the ceiling / floor plane
    st, ct = np.sin(thetas)[:, None], np.cos(thetas)[:, None]
    with np.errstate(divide="ignore"):
        hit_c = np.where(ct > 0, cuboid.ceil_z * st / ct, np.inf)
        hit_f = np.where(ct < 0, cuboid.floor_z * st / ct, np.inf)
    mask = np.full((height, width), WALL, dtype=np.uint8)
    mask[hit_c < r_ceil] = CEILING
    mask[hit_f < r_floor] = FLOOR
    return mask


def pixel_error(pred, gt, width=EVAL_SIZE[0], height=EVAL_SIZE[1]):
    """Percentage of pixels whose ceiling/wall/floor label differs."""
    mp = rasterize_mask(pred, width, height)
    mg = rasterize_mask(gt, width, height)
    return 100.0 * float(np.mean(mp != mg))


def iou2d(pred, gt, floor_dist=FLOOR_DIST):
    """Floor-plan intersection over union, in percent."""
    a = deproject(pred, floor_dist).floor_pts
    b = deproject(gt, floor_dist).floor_pts
    return 100.0 * polygon.iou(a, b)


def iou3d_cuboids(a, b):
    area_a, area_b = polygon.area(a.floor_pts), polygon.area(b.floor_pts)
    if area_a <= 0 or area_b <= 0:
        raise DegenerateError("degenerate footprint with zero area")
    inter_area = polygon.intersection_area(a.floor_pts, b.floor_pts)
    overlap = max(0.0, min(a.ceil_z, b.ceil_z) - max(a.floor_z, b.floor_z))
    inter = inter_area * overlap
    union = area_a * a.height + area_b * b.height - inter
    return 100.0 * min(1.0, inter / union)


def iou3d(pred, gt, floor_dist=FLOOR_DIST):
    """Volumetric intersection over union of the deprojected rooms, in percent."""
    return iou3d_cuboids(deproject(pred, floor_dist), deproject(gt, floor_dist))


def _sample_curve(points_at, density, width, n=64):
    # refine until consecutive samples are at most 1/density pixels apart
    while True:
        s = np.linspace(0.0, 1.0, n)
        u, v = points_at(s)
        du = np.diff(u)
        du = (du + width / 2) % width - width / 2
        gap = np.hypot(du, np.diff(v)).max()
        if gap <= 1.0 / density:
            return np.column_stack([u, v])
        n = int(np.ceil(n * gap * density * 1.1)) + 1


def wireframe_edges(layout, width=EVAL_SIZE[0], height=EVAL_SIZE[1],
                    density=WIREFRAME_DENSITY, floor_dist=FLOOR_DIST):
    """Dense pixel polylines of the room's 12 edges, each of shape ``(n, 2)``.

    Vertical wall edges are straight image segments between paired corners;
    ceiling and floor edges follow the projection of the 3D room boundary.
    Horizontal coordinates are continuous and may run past the image seam.
    """
    cuboid = deproject(layout, floor_dist)
    up, vp = _pixels(layout, width, height)
    edges = []
    for i in range(NUM_WALLS):
        du = (up[i + NUM_WALLS] - up[i] + width / 2) % width - width / 2
        edges.append(_sample_curve(
            lambda s, i=i, du=du: (up[i] + s * du, vp[i] + s * (vp[i + NUM_WALLS] - vp[i])),
            density, width))
    for pts, z in ((cuboid.ceil_pts, cuboid.ceil_z), (cuboid.floor_pts, cuboid.floor_z)):
        for i in range(NUM_WALLS):
            a, b = pts[i], pts[(i + 1) % NUM_WALLS]

            def along(s, a=a, b=b, z=z):
                xy = a[None, :] + s[:, None] * (b - a)[None, :]
                phi, theta = unit3_to_angles(np.column_stack([xy, np.full(len(s), z)]))
                return sph_to_pix_array(phi, theta, width, height)

            edges.append(_sample_curve(along, density, width))
    return edges


def wireframe_samples(layout, width=EVAL_SIZE[0], height=EVAL_SIZE[1],
                      density=WIREFRAME_DENSITY, floor_dist=FLOOR_DIST):
    """All wireframe samples stacked, with columns wrapped into ``[0, width)``."""
    samples = np.vstack(wireframe_edges(layout, width, height, density, floor_dist))
    samples[:, 0] %= width
    return samples


def _nearest(samples, ref, width):
    # periodic in u; v period far beyond any pixel threshold
    box = [width, 1e6]
    shift = np.array([0.0, 1.0])
    tree = cKDTree(ref + shift, boxsize=box)
    d, _ = tree.query(samples + shift)
    return d


def wireframe_accuracy(pred, gt, d, width=EVAL_SIZE[0], height=EVAL_SIZE[1],
                       density=WIREFRAME_DENSITY, symmetric=False):
    """Percentage of predicted wireframe samples within ``d`` pixels of the ground truth."""
    sp = wireframe_samples(pred, width, height, density)
    sg = wireframe_samples(gt, width, height, density)
    hits = _nearest(sp, sg, width) <= d
    if symmetric:
        hits = np.concatenate([hits, _nearest(sg, sp, width) <= d])
    return 100.0 * float(np.mean(hits))


def wireframe_accuracies(pred, gt, thresholds=THRESHOLDS, width=EVAL_SIZE[0], height=EVAL_SIZE[1],
                         density=WIREFRAME_DENSITY):
    sp = wireframe_samples(pred, width, height, density)
    dist = _nearest(sp, wireframe_samples(gt, width, height, density), width)
    return [100.0 * float(np.mean(dist <= t)) for t in thresholds]


def depth_metrics(pred_depth, gt_depth):
    """RMSE in meters and the percentage of pixels with depth ratio below 1.25."""
    p = np.asarray(pred_depth, dtype=np.float64)
    g = np.asarray(gt_depth, dtype=np.float64)
    if p.shape != g.shape:
        raise DomainError(f"depth maps differ in shape: {p.shape} vs {g.shape}")
    if not (np.all(p > 0) and np.all(g > 0)):
        raise DomainError("depth maps must be strictly positive")
    rmse = float(np.sqrt(np.mean((p - g) ** 2)))
    ratio = np.maximum(p / g, g / p)
    return rmse, 100.0 * float(np.mean(ratio < DELTA1_RATIO))


def evaluate(pred, gt, width=EVAL_SIZE[0], height=EVAL_SIZE[1], floor_dist=FLOOR_DIST):
    """Every metric for one prediction / ground-truth pair."""
    _check_pair(pred, gt)
    j = [junction_accuracy(pred, gt, t, width, height) for t in THRESHOLDS]
    w = wireframe_accuracies(pred, gt, THRESHOLDS, width, height)
    rmse, delta1 = depth_metrics(render_depth(pred, width, height, floor_dist),
                                 render_depth(gt, width, height, floor_dist))
    return MetricsReport(
        ce=corner_error(pred, gt, width, height),
        pe=pixel_error(pred, gt, width, height),
        iou2d=iou2d(pred, gt, floor_dist),
        iou3d=iou3d(pred, gt, floor_dist),
        j5=j[0], j10=j[1], j15=j[2],
        w5=w[0], w10=w[1], w15=w[2],
        rmse=rmse, delta1=delta1,
    )


def mean_report(reports):
    values = np.mean([list(r) for r in reports], axis=0)
    return MetricsReport(*(float(v) for v in values))

