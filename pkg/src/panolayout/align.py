"""Manhattan alignment of predicted cuboid corners.

Two stages: making every wall edge vertical (ceiling and floor corner share a
longitude), then turning the floor-view quadrilateral into a rectangle with a
homography to the unit square followed by an orthogonal Procrustes fit.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateError, DomainError
from .layout import FLOOR_DIST, NUM_WALLS, Cuboid3D, CuboidLayout, deproject, project
from .sphere import lift, unlift

MODES = ("floor", "ceiling", "joint")
UNIT_SQUARE = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])


@dataclass(frozen=True, eq=False)
class Homography:
    matrix: np.ndarray

    def __call__(self, pts):
        pts = np.asarray(pts, dtype=np.float64)
        hom = np.column_stack([pts, np.ones(len(pts))]) @ self.matrix.T
        return hom[:, :2] / hom[:, 2:]


@dataclass(frozen=True, eq=False)
class RigidTransform2D:
    rotation: np.ndarray
    translation: np.ndarray

    def __call__(self, pts):
        return np.asarray(pts, dtype=np.float64) @ self.rotation.T + self.translation

    @property
    def angle(self):
        return float(np.arctan2(self.rotation[1, 0], self.rotation[0, 0]))


def enforce_quasi_manhattan(layout):
    """Give both corners of every wall edge their circular mean longitude."""
    lam_c, tau_c = lift(layout.ceiling[:, 0])
    lam_f, tau_f = lift(layout.floor[:, 0])
    lam, tau = lam_c + lam_f, tau_c + tau_f
    if np.any(np.hypot(lam, tau) < 1e-12):
        raise DegenerateError("wall edge with antipodal corner longitudes has no mean")
    phi = unlift(lam, tau)
    corners = layout.corners.copy()
    corners[:NUM_WALLS, 0] = phi
    corners[NUM_WALLS:, 0] = phi
    return CuboidLayout(corners)


def _normalizer(pts):
    # centroid to origin, mean distance sqrt(2)
    centroid = pts.mean(axis=0)
    mean_dist = np.mean(np.linalg.norm(pts - centroid, axis=1))
    if not mean_dist > 0:
        raise DegenerateError("degenerate quadrilateral: all points coincide")
    s = np.sqrt(2.0) / mean_dist
    return np.array([[s, 0.0, -s * centroid[0]], [0.0, s, -s * centroid[1]], [0.0, 0.0, 1.0]])


def _has_collinear_triple(pts, tol=1e-9):
    scale = np.ptp(pts, axis=0).max() ** 2
    for i in range(len(pts)):
        a, b, c = (pts[(i + k) % len(pts)] for k in range(3))
        cross = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
        if abs(cross) <= tol * scale:
            return True
    return False


def fit_homography(src, dst):
    """Normalized DLT estimate of the homography taking 4 ``src`` points to ``dst``."""
    src = np.asarray(src, dtype=np.float64)
    dst = np.asarray(dst, dtype=np.float64)
    if src.shape != (4, 2) or dst.shape != (4, 2):
        raise DomainError("homography needs exactly 4 point correspondences")
    if _has_collinear_triple(src) or _has_collinear_triple(dst):
        raise DegenerateError("degenerate quadrilateral: three collinear points")
    t_src, t_dst = _normalizer(src), _normalizer(dst)
    s = np.column_stack([src, np.ones(4)]) @ t_src.T
    d = np.column_stack([dst, np.ones(4)]) @ t_dst.T
    rows = []
    for (x, y, w), (xp, yp, wp) in zip(s, d):
        rows.append([0, 0, 0, -wp * x, -wp * y, -wp * w, yp * x, yp * y, yp * w])
        rows.append([wp * x, wp * y, wp * w, 0, 0, 0, -xp * x, -xp * y, -xp * w])
    # 8x9 system: one-dimensional null space unless the configuration is degenerate
    _, sv, vt = np.linalg.svd(np.array(rows))
    if sv[-1] < 1e-10 * sv[0]:
        raise DegenerateError("degenerate homography system: rank deficient")
    h = np.linalg.inv(t_dst) @ vt[-1].reshape(3, 3) @ t_src
    if abs(h[2, 2]) > 1e-15:
        h = h / h[2, 2]
    return Homography(h)


def procrustes_align(src, dst):
    """Least-squares rotation and translation taking ``src`` onto ``dst``."""
    src = np.asarray(src, dtype=np.float64)
    dst = np.asarray(dst, dtype=np.float64)
    mu_s, mu_d = src.mean(axis=0), dst.mean(axis=0)
    a, b = src - mu_s, dst - mu_d
    if not np.linalg.norm(a) > 1e-12:
        raise DegenerateError("procrustes source points have zero spread")
    u, _, vt = np.linalg.svd(a.T @ b)
    # no reflections: flip the weakest direction if needed
    d = np.sign(np.linalg.det(vt.T @ u.T)) or 1.0
    r = vt.T @ np.diag([1.0, d]) @ u.T
    return RigidTransform2D(r, mu_d - r @ mu_s)


def floor_view(cuboid, mode):
    """Horizontal corner coordinates driving the rectangle fit."""
    if mode == "floor":
        return cuboid.floor_pts
    if mode == "ceiling":
        return cuboid.ceil_pts
    if mode == "joint":
        # remove the ceiling's scale offset before averaging with the floor
        scale = np.linalg.norm(cuboid.floor_pts, axis=1).sum() / np.linalg.norm(cuboid.ceil_pts, axis=1).sum()
        return 0.5 * (cuboid.floor_pts + scale * cuboid.ceil_pts)
    raise DomainError(f"unknown alignment mode {mode!r}; expected one of {MODES}")


def fit_rectangle(quad):
    """Rectangle matched vertex-for-vertex to a counterclockwise quadrilateral.

    The quadrilateral is mapped to the unit square by a homography, the
    square is stretched to the mean lengths of opposite edges and centered
    on the quadrilateral, and a Procrustes fit then rotates it into place.
    """
    quad = np.asarray(quad, dtype=np.float64)
    square = fit_homography(quad, UNIT_SQUARE)(quad)
    edges = np.linalg.norm(np.roll(quad, -1, axis=0) - quad, axis=1)
    sides = np.array([0.5 * (edges[0] + edges[2]), 0.5 * (edges[1] + edges[3])])
    rect = (square - 0.5) * sides + quad.mean(axis=0)
    return procrustes_align(rect, quad)(rect)


def fit_manhattan_cuboid(layout, mode="joint", floor_dist=FLOOR_DIST):
    """Full Manhattan cuboid for a quasi-Manhattan layout, in metric 3D."""
    cuboid = deproject(layout, floor_dist)
    rect = fit_rectangle(floor_view(cuboid, mode))
    return Cuboid3D(rect, rect.copy(), cuboid.floor_z, cuboid.ceil_z)


def align_cuboid(layout, mode="joint", floor_dist=FLOOR_DIST):
    """Project the fitted Manhattan cuboid back to corner coordinates.

    Corner ``i`` of the result corresponds to corner ``i`` of ``layout``.
    """
    return project(fit_manhattan_cuboid(layout, mode, floor_dist))
