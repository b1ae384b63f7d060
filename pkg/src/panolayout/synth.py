"""Synthetic ground-truth rooms used in place of network predictions."""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .layout import CuboidLayout, cuboid_from_box, project
from .sphere import angles_to_unit3, unit3_to_angles


@dataclass(frozen=True)
class SyntheticRoomSpec:
    width: float
    depth: float
    camera_height: float = 1.6
    ceiling_height: float = 2.9
    yaw: float = 0.0
    offset: tuple = (0.0, 0.0)
    noise: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if not (self.width > 0 and self.depth > 0):
            raise DomainError(f"room size must be positive, got {self.width} x {self.depth}")
        if not 0 < self.camera_height < self.ceiling_height:
            raise DomainError("camera must be strictly between floor and ceiling "
                              f"(camera_height={self.camera_height}, ceiling_height={self.ceiling_height})")
        ox, oy = self.offset
        if not (abs(ox) < self.width / 2 and abs(oy) < self.depth / 2):
            raise DomainError(f"camera offset {self.offset} lies outside the room")
        if not self.noise >= 0:
            raise DomainError(f"noise must be non-negative, got {self.noise}")

    def cuboid(self):
        c, s = np.cos(self.yaw), np.sin(self.yaw)
        ox, oy = self.offset
        # room center seen from the camera
        center = (-(c * ox - s * oy), -(s * ox + c * oy))
        return cuboid_from_box(self.width, self.depth, -self.camera_height,
                               self.ceiling_height - self.camera_height, self.yaw, center)


def perturb(layout, noise, rng):
    """Move every corner by an isotropic random angle with per-axis std ``noise``."""
    if noise == 0:
        return CuboidLayout(layout.corners)
    d = angles_to_unit3(layout.phi, layout.theta)
    # tangent frame (east, south) at each corner
    east = np.column_stack([-np.sin(layout.phi), np.cos(layout.phi), np.zeros(len(d))])
    south = np.cross(east, d)
    a, b = rng.normal(0.0, noise, size=(2, len(d)))
    step = a[:, None] * east + b[:, None] * south
    ang = np.linalg.norm(step, axis=1)
    with np.errstate(invalid="ignore", divide="ignore"):
        unit = np.where(ang[:, None] > 0, step / ang[:, None], 0.0)
    moved = np.cos(ang)[:, None] * d + np.sin(ang)[:, None] * unit
    phi, theta = unit3_to_angles(moved)
    return CuboidLayout(np.column_stack([phi, theta]))


def generate_room(spec):
    """Exact layout of the specified room and a seeded noisy copy of it."""
    gt = project(spec.cuboid()).canonical()
    noisy = perturb(gt, spec.noise, np.random.default_rng(spec.seed))
    return gt, noisy


def random_room_spec(rng, noise=0.0, size_range=(2.0, 8.0), seed=None):
    """Random room with the camera somewhere in its central region."""
    width, depth = rng.uniform(*size_range, size=2)
    camera_height = rng.uniform(1.2, 1.8)
    ceiling_height = camera_height + rng.uniform(0.8, 1.6)
    offset = (rng.uniform(-0.3, 0.3) * width, rng.uniform(-0.3, 0.3) * depth)
    return SyntheticRoomSpec(
        width=float(width), depth=float(depth), camera_height=float(camera_height),
        ceiling_height=float(ceiling_height), yaw=float(rng.uniform(0, 2 * np.pi)),
        offset=tuple(float(o) for o in offset), noise=noise,
        seed=int(rng.integers(2**31)) if seed is None else seed,
    )
