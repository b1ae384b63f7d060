"""Equirectangular coordinates, geodesic distance and spherical center of mass.

Conventions used throughout the package:

* ``phi`` is the longitude in ``[0, 2*pi)``, increasing with the image column.
* ``theta`` is the polar angle in ``[0, pi]``; ``theta = 0`` is the zenith
  (image row 0) and ``theta = pi`` the nadir.
* Pixel ``(u, v)`` of a ``W x H`` panorama is sampled at its center,
  ``phi = (u + 0.5) * 2*pi / W`` and ``theta = (v + 0.5) * pi / H``.
* Unit directions are ``(sin t cos p, sin t sin p, cos t)``, so ``z`` is up.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateMassError, DomainError

TWO_PI = 2.0 * np.pi
# below this total (weighted) mass a center of mass is considered undefined
MASS_EPS = 1e-30


def wrap_phi(phi):
    """Reduce longitudes into ``[0, 2*pi)``. Works on scalars and arrays."""
    out = np.mod(phi, TWO_PI)
    # np.mod maps tiny negatives to exactly 2*pi
    out = np.where(out >= TWO_PI, 0.0, out)
    if np.ndim(out) == 0:
        return float(out)
    return out


def wrap_delta(dphi):
    """Signed longitude difference reduced into ``[-pi, pi)``."""
    return np.mod(np.asarray(dphi) + np.pi, TWO_PI) - np.pi


@dataclass(frozen=True)
class SphericalPoint:
    phi: float
    theta: float

    def __post_init__(self):
        if not (np.isfinite(self.phi) and np.isfinite(self.theta)):
            raise DomainError(f"non-finite spherical point ({self.phi}, {self.theta})")
        object.__setattr__(self, "phi", wrap_phi(float(self.phi)))
        object.__setattr__(self, "theta", float(np.clip(self.theta, 0.0, np.pi)))

    def __iter__(self):
        yield self.phi
        yield self.theta

    def rotated(self, dphi):
        return SphericalPoint(self.phi + dphi, self.theta)


@dataclass(frozen=True)
class PixelCoord:
    u: float
    v: float

    def __iter__(self):
        yield self.u
        yield self.v


@dataclass(frozen=True)
class UnitCirclePoint:
    """A longitude lifted onto the unit circle, ``(cos phi, sin phi)``."""

    lam: float
    tau: float

    def __post_init__(self):
        if abs(self.lam * self.lam + self.tau * self.tau - 1.0) > 1e-12:
            raise DomainError(f"({self.lam}, {self.tau}) is not on the unit circle")

    @classmethod
    def from_phi(cls, phi):
        return cls(float(np.cos(phi)), float(np.sin(phi)))

    @property
    def phi(self):
        return unlift(self.lam, self.tau)


@dataclass(frozen=True, eq=False)
class Heatmap:
    """Non-negative mass sampled at the pixel centers of a ``H x W`` grid.

    ``mass[v, u]`` is the value of pixel ``(u, v)``; row 0 is the zenith row.
    """

    mass: np.ndarray

    def __post_init__(self):
        mass = np.asarray(self.mass, dtype=np.float64)
        if mass.ndim != 2:
            raise DomainError(f"heatmap must be 2-D, got shape {mass.shape}")
        if mass.shape[0] < 2 or mass.shape[1] < 2:
            raise DomainError(f"heatmap must be at least 2x2, got {mass.shape}")
        if not np.all(np.isfinite(mass)):
            raise DomainError("heatmap contains non-finite values")
        if np.any(mass < 0):
            raise DomainError("heatmap contains negative mass")
        object.__setattr__(self, "mass", mass)

    @property
    def width(self):
        return self.mass.shape[1]

    @property
    def height(self):
        return self.mass.shape[0]

    def roll_columns(self, k):
        return Heatmap(np.roll(self.mass, k, axis=1))


def pixel_angles(width, height):
    """Longitudes of the ``width`` columns and polar angles of the ``height`` rows."""
    phis = (np.arange(width) + 0.5) * (TWO_PI / width)
    thetas = (np.arange(height) + 0.5) * (np.pi / height)
    return phis, thetas


def pix_to_sph(p, width, height):
    """Angles of a continuous pixel coordinate.

    Integer coordinates are pixel centers, so the image spans
    ``[-0.5, width - 0.5) x [-0.5, height - 0.5]``.
    """
    u, v = p
    if not (-0.5 <= u < width - 0.5 and -0.5 <= v <= height - 0.5):
        raise DomainError(f"pixel ({u}, {v}) outside {width}x{height} grid")
    return SphericalPoint((u + 0.5) * TWO_PI / width, (v + 0.5) * np.pi / height)


def sph_to_pix(s, width, height):
    phi, theta = s
    return PixelCoord(phi * width / TWO_PI - 0.5, theta * height / np.pi - 0.5)


def sph_to_pix_array(phi, theta, width, height):
    """Vectorised :func:`sph_to_pix` returning continuous ``(u, v)`` arrays."""
    u = np.asarray(phi) * (width / TWO_PI) - 0.5
    v = np.asarray(theta) * (height / np.pi) - 0.5
    return u, v


def haversine(phi1, theta1, phi2, theta2):
    """Great-circle angle between points given as polar-angle coordinates.

    The haversine form is usually written with latitudes; with polar angles
    the ``cos(latitude)`` factors become ``sin(theta)``. Broadcasts.
    """
    h = (np.sin(0.5 * (np.asarray(theta1) - theta2)) ** 2
         + np.sin(theta1) * np.sin(theta2) * np.sin(0.5 * (np.asarray(phi1) - phi2)) ** 2)
    return 2.0 * np.arcsin(np.sqrt(np.clip(h, 0.0, 1.0)))


def geodesic_distance(a, b):
    """Great-circle angle in ``[0, pi]`` between two :class:`SphericalPoint`."""
    return float(haversine(a.phi, a.theta, b.phi, b.theta))


def density_weight(s):
    """Area element of the equirectangular grid at ``s`` (``sin theta``)."""
    return float(np.sin(s.theta))


def lift(phi):
    """Map longitudes onto the unit circle; returns ``(cos phi, sin phi)``."""
    return np.cos(phi), np.sin(phi)


def unlift(lam, tau):
    """Longitude of a (not necessarily unit) circle point, in ``[0, 2*pi)``."""
    return wrap_phi(np.arctan2(-tau, -lam) + np.pi)


def circle_com(weights, phis):
    """Mass-weighted mean longitude, continuous across the 0/2*pi seam."""
    weights = np.asarray(weights, dtype=np.float64)
    phis = np.asarray(phis, dtype=np.float64)
    if weights.shape != phis.shape:
        raise DomainError(f"weights {weights.shape} and phis {phis.shape} differ in shape")
    total = weights.sum()
    if not total > MASS_EPS:
        raise DegenerateMassError()
    lam, tau = lift(phis)
    return unlift(np.dot(weights, lam) / total, np.dot(weights, tau) / total)


def spherical_com(h):
    """Sub-pixel spherical center of mass of a heatmap.

    Every pixel contributes ``mass * sin(theta)``; longitudes are averaged on
    the unit circle and polar angles linearly.

    Raises:
        DegenerateMassError: if the weighted mass vanishes.
    """
    phis, thetas = pixel_angles(h.width, h.height)
    row_w = h.mass * np.sin(thetas)[:, None]
    total = row_w.sum()
    if not total > MASS_EPS:
        raise DegenerateMassError()
    col = row_w.sum(axis=0)
    lam = np.dot(col, np.cos(phis)) / total
    tau = np.dot(col, np.sin(phis)) / total
    theta = np.dot(row_w.sum(axis=1), thetas) / total
    return SphericalPoint(unlift(lam, tau), theta)


def flat_com(h):
    """Naive planar center of mass on the image grid (no seam or area handling)."""
    total = h.mass.sum()
    if not total > MASS_EPS:
        raise DegenerateMassError()
    phis, thetas = pixel_angles(h.width, h.height)
    phi = np.dot(h.mass.sum(axis=0), phis) / total
    theta = np.dot(h.mass.sum(axis=1), thetas) / total
    return SphericalPoint(phi, theta)


def sph_to_unit3(s):
    return np.array(angles_to_unit3(s.phi, s.theta))


def angles_to_unit3(phi, theta):
    """Unit direction vectors, stacked along the last axis."""
    phi, theta = np.broadcast_arrays(np.asarray(phi, np.float64), np.asarray(theta, np.float64))
    st = np.sin(theta)
    return np.stack([st * np.cos(phi), st * np.sin(phi), np.cos(theta)], axis=-1)


def unit3_to_angles(xyz):
    """Inverse of :func:`angles_to_unit3` for arbitrary non-zero vectors."""
    xyz = np.asarray(xyz, dtype=np.float64)
    norm = np.linalg.norm(xyz, axis=-1)
    if np.any(norm == 0):
        raise DomainError("zero-length direction has no spherical coordinates")
    theta = np.arccos(np.clip(xyz[..., 2] / norm, -1.0, 1.0))
    horiz = np.hypot(xyz[..., 0], xyz[..., 1])
    phi = np.where(horiz > 0, np.arctan2(xyz[..., 1], xyz[..., 0]), 0.0)
    return wrap_phi(phi), theta
