"""Cuboid layouts on the sphere and their metric 3D counterparts.

A layout stores eight corners as an ``(8, 2)`` array of ``(phi, theta)``.
Rows 0-3 are the ceiling junctions, rows 4-7 the floor junctions, and
rows ``i`` and ``i + 4`` bound the same vertical wall edge. Walls run
counterclockwise seen from above, i.e. by increasing longitude.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateError, DomainError
from .sphere import (
    TWO_PI,
    SphericalPoint,
    angles_to_unit3,
    unit3_to_angles,
    wrap_delta,
    wrap_phi,
)

NUM_CORNERS = 8
NUM_WALLS = 4
FLOOR_DIST = -1.6
# corners closer than this (radians) to the horizon cannot be deprojected
HORIZON_EPS = 1e-6


@dataclass(frozen=True, eq=False)
class CuboidLayout:
    corners: np.ndarray

    def __post_init__(self):
        c = np.array(self.corners, dtype=np.float64)
        if c.shape != (NUM_CORNERS, 2):
            raise DomainError(f"layout needs {NUM_CORNERS} (phi, theta) corners, got shape {c.shape}")
        if not np.all(np.isfinite(c)):
            raise DomainError("layout corners must be finite")
        c[:, 0] = wrap_phi(c[:, 0])
        c[:, 1] = np.clip(c[:, 1], 0.0, np.pi)
        if np.any(c[:NUM_WALLS, 1] >= np.pi / 2):
            raise DomainError("ceiling corners (0-3) must lie above the horizon")
        if np.any(c[NUM_WALLS:, 1] <= np.pi / 2):
            raise DomainError("floor corners (4-7) must lie below the horizon")
        c.setflags(write=False)
        object.__setattr__(self, "corners", c)

    @classmethod
    def from_points(cls, points):
        return cls([[p.phi, p.theta] for p in points])

    @property
    def phi(self):
        return self.corners[:, 0]

    @property
    def theta(self):
        return self.corners[:, 1]

    @property
    def ceiling(self):
        return self.corners[:NUM_WALLS]

    @property
    def floor(self):
        return self.corners[NUM_WALLS:]

    def points(self):
        return [SphericalPoint(p, t) for p, t in self.corners]

    def rotated(self, dphi):
        c = self.corners.copy()
        c[:, 0] += dphi
        return CuboidLayout(c)

    def is_quasi_manhattan(self, tol=1e-9):
        return bool(np.all(np.abs(wrap_delta(self.ceiling[:, 0] - self.floor[:, 0])) <= tol))

    def is_counterclockwise(self):
        """True when the ceiling longitudes increase cyclically around the room."""
        steps = np.mod(np.diff(self.ceiling[:, 0], append=self.ceiling[0, 0]), TWO_PI)
        return bool(np.all(steps > 0) and abs(steps.sum() - TWO_PI) < 1e-9)

    def canonical(self):
        """Same walls, cyclically reindexed so corner 0 has the smallest longitude."""
        start = int(np.argmin(self.ceiling[:, 0]))
        order = np.roll(np.arange(NUM_WALLS), -start)
        return CuboidLayout(np.concatenate([self.ceiling[order], self.floor[order]]))

    def allclose(self, other, atol=1e-9):
        d = np.abs(wrap_delta(self.phi - other.phi))
        return bool(np.all(d <= atol) and np.all(np.abs(self.theta - other.theta) <= atol))


@dataclass(frozen=True, eq=False)
class Cuboid3D:
    """Metric room geometry in camera coordinates (camera at the origin, z up).

    ``floor_pts`` and ``ceil_pts`` are ``(4, 2)`` horizontal coordinates of
    the floor and ceiling corners of each wall edge.
    """

    floor_pts: np.ndarray
    ceil_pts: np.ndarray
    floor_z: float
    ceil_z: float

    def __post_init__(self):
        f = np.array(self.floor_pts, dtype=np.float64)
        c = np.array(self.ceil_pts, dtype=np.float64)
        if f.shape != (NUM_WALLS, 2) or c.shape != (NUM_WALLS, 2):
            raise DomainError("cuboid needs 4 floor and 4 ceiling horizontal points")
        if not self.floor_z < 0 < self.ceil_z:
            raise DomainError(f"need floor_z < 0 < ceil_z, got {self.floor_z}, {self.ceil_z}")
        object.__setattr__(self, "floor_pts", f)
        object.__setattr__(self, "ceil_pts", c)
        object.__setattr__(self, "floor_z", float(self.floor_z))
        object.__setattr__(self, "ceil_z", float(self.ceil_z))

    @property
    def height(self):
        return self.ceil_z - self.floor_z

    def vertices(self):
        """``(8, 3)`` vertices, ceiling first, in layout corner order."""
        top = np.column_stack([self.ceil_pts, np.full(NUM_WALLS, self.ceil_z)])
        bottom = np.column_stack([self.floor_pts, np.full(NUM_WALLS, self.floor_z)])
        return np.vstack([top, bottom])

    def scaled(self, factor):
        return Cuboid3D(self.floor_pts * factor, self.ceil_pts * factor,
                        self.floor_z * factor, self.ceil_z * factor)


def deproject(layout, floor_dist=FLOOR_DIST):
    """Lift a layout to metric 3D given the camera-to-floor distance.

    Floor corners are intersected with the plane ``z = floor_dist``. Each
    ceiling ray is scaled to the horizontal range of its floor partner,
    which implies a ceiling height; the mean of the four is used as the
    ceiling plane and the ceiling rays are intersected with it.
    """
    if not floor_dist < 0:
        raise DomainError(f"floor distance must be negative, got {floor_dist}")
    theta = layout.theta
    if np.any(theta[:NUM_WALLS] > np.pi / 2 - HORIZON_EPS) or np.any(theta[NUM_WALLS:] < np.pi / 2 + HORIZON_EPS):
        raise DegenerateError("degenerate ray: a corner lies on or too near the horizon")
    if np.any(theta[:NUM_WALLS] < HORIZON_EPS) or np.any(theta[NUM_WALLS:] > np.pi - HORIZON_EPS):
        raise DegenerateError("degenerate ray: a corner lies at a pole")
    dirs = angles_to_unit3(layout.phi, theta)
    floor_scale = floor_dist / dirs[NUM_WALLS:, 2]
    floor_pts = dirs[NUM_WALLS:, :2] * floor_scale[:, None]
    floor_range = np.linalg.norm(floor_pts, axis=1)
    ceil_dirs = dirs[:NUM_WALLS]
    ceil_horiz = np.linalg.norm(ceil_dirs[:, :2], axis=1)
    ceil_z = float(np.mean(floor_range * ceil_dirs[:, 2] / ceil_horiz))
    ceil_pts = ceil_dirs[:, :2] * (ceil_z / ceil_dirs[:, 2])[:, None]
    return Cuboid3D(floor_pts, ceil_pts, floor_dist, ceil_z)


def project(cuboid):
    """Corner directions of a 3D cuboid as a layout."""
    verts = cuboid.vertices()
    if np.any(np.linalg.norm(verts, axis=1) == 0):
        raise DomainError("cuboid vertex at the camera center")
    phi, theta = unit3_to_angles(verts)
    return CuboidLayout(np.column_stack([phi, theta]))


def cuboid_from_box(width, depth, floor_z, ceil_z, yaw=0.0, center=(0.0, 0.0)):
    """Axis-aligned ``width x depth`` box rotated by ``yaw`` about the vertical.

    ``center`` is the horizontal position of the box center relative to the
    camera. Corners are emitted counterclockwise starting from ``(+w/2, -d/2)``.
    """
    hw, hd = width / 2.0, depth / 2.0
    local = np.array([[hw, -hd], [hw, hd], [-hw, hd], [-hw, -hd]])
    c, s = np.cos(yaw), np.sin(yaw)
    pts = local @ np.array([[c, s], [-s, c]]) + np.asarray(center, dtype=np.float64)
    return Cuboid3D(pts, pts.copy(), floor_z, ceil_z)
