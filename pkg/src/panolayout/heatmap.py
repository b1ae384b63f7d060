"""Heatmap synthesis, spatial normalization and the training-loss evaluators."""

from dataclasses import dataclass

import numpy as np

from .align import enforce_quasi_manhattan
from .errors import DomainError
from .layout import NUM_CORNERS, CuboidLayout
from .sphere import Heatmap, flat_com, haversine, pixel_angles, spherical_com

DEFAULT_ALPHA_DEG = 2.0
DEFAULT_SIGMA_PX = (3.5, 3.5)
HEATMAP_SIZE = (128, 64)
# probabilities are floored here before taking logs
KL_FLOOR = 1e-30


@dataclass(frozen=True, eq=False)
class HeatmapStack:
    maps: tuple

    def __post_init__(self):
        maps = tuple(m if isinstance(m, Heatmap) else Heatmap(m) for m in self.maps)
        if not maps:
            raise DomainError("heatmap stack is empty")
        shape = maps[0].mass.shape
        if any(m.mass.shape != shape for m in maps):
            raise DomainError("heatmaps in a stack must share their dimensions")
        object.__setattr__(self, "maps", maps)

    @property
    def count(self):
        return len(self.maps)

    @property
    def width(self):
        return self.maps[0].width

    @property
    def height(self):
        return self.maps[0].height

    def as_array(self):
        return np.stack([m.mass for m in self.maps])

    def __iter__(self):
        return iter(self.maps)

    def __getitem__(self, j):
        return self.maps[j]


@dataclass(frozen=True)
class LossWeights:
    lambda_g: float = 1.0
    lambda_d: float = 0.15

    def __post_init__(self):
        for name in ("lambda_g", "lambda_d"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v >= 0):
                raise DomainError(f"{name} must be finite and non-negative, got {v}")


def make_geodesic_heatmap(center, alpha, width, height, squared=True):
    """Normal distribution on the sphere rendered on the equirectangular grid.

    Each pixel gets ``exp(-g / (2 alpha^2)) / (alpha sqrt(2 pi))`` where ``g``
    is the great-circle distance to ``center``, or ``g**2`` when ``squared``.
    The squared form is a true Gaussian with angular standard deviation
    ``alpha``; the linear form is much sharper and only kept for comparison.
    """
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    phis, thetas = pixel_angles(width, height)
    g = haversine(center.phi, center.theta, phis[None, :], thetas[:, None])
    if squared:
        g = g * g
    return Heatmap(np.exp(-g / (2.0 * alpha * alpha)) / (alpha * np.sqrt(2.0 * np.pi)))


def make_gaussian_heatmap(center, s, width, height):
    """Planar isotropic Gaussian in pixel units, ignoring the seam and distortion."""
    sx, sy = s
    if not (sx > 0 and sy > 0):
        raise DomainError(f"standard deviations must be positive, got {s}")
    u = np.arange(width, dtype=np.float64)
    v = np.arange(height, dtype=np.float64)
    e = ((u[None, :] - center.u) ** 2 / (2 * sx * sx)
         + (v[:, None] - center.v) ** 2 / (2 * sy * sy))
    return Heatmap(np.exp(-e) / (2 * np.pi * sx * sy))


def spatial_softmax(values):
    """Softmax over all pixels; accepts a :class:`Heatmap` or any real 2-D array."""
    m = values.mass if isinstance(values, Heatmap) else np.asarray(values, dtype=np.float64)
    if not np.all(np.isfinite(m)):
        raise DomainError("softmax input contains non-finite values")
    e = np.exp(m - m.max())
    return Heatmap(e / e.sum())


def normalize(h):
    return Heatmap(h.mass / h.mass.sum())


def geodesic_loss(pred, gt):
    """Mean great-circle distance between corresponding corners."""
    if pred.corners.shape != gt.corners.shape:
        raise DomainError("layouts have different corner counts")
    return float(np.mean(haversine(pred.phi, pred.theta, gt.phi, gt.theta)))


def kl_loss(pred_stack, gt, alpha, squared=True):
    """Sum over junctions of KL(target || softmax(prediction)).

    ``pred_stack`` holds raw (pre-softmax) scores, one map per center in
    ``gt`` (a :class:`CuboidLayout` or a sequence of spherical points).
    """
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    centers = gt.points() if isinstance(gt, CuboidLayout) else list(gt)
    scores = pred_stack.as_array() if isinstance(pred_stack, HeatmapStack) else np.asarray(pred_stack, np.float64)
    if scores.ndim != 3 or scores.shape[0] != len(centers):
        raise DomainError(f"need one map per corner, got stack of shape {scores.shape}")
    height, width = scores.shape[1:]
    total = 0.0
    for s, c in zip(scores, centers):
        target = normalize(make_geodesic_heatmap(c, alpha, width, height, squared)).mass
        pred = spatial_softmax(s).mass
        p = np.maximum(target, KL_FLOOR)
        q = np.maximum(pred, KL_FLOOR)
        total += float(np.sum(target * (np.log(p) - np.log(q))))
    return total


def total_loss(geodesic, kl, weights=LossWeights()):
    """Weighted loss averaged over one or more stacked predictions."""
    gl = np.atleast_1d(np.asarray(geodesic, dtype=np.float64))
    dl = np.atleast_1d(np.asarray(kl, dtype=np.float64))
    if gl.shape != dl.shape or gl.size < 1:
        raise DomainError("need the same non-zero number of geodesic and KL terms")
    n = gl.size
    return float(np.sum(weights.lambda_g / n * gl + weights.lambda_d / n * dl))


def synthesize(layout, alpha=np.deg2rad(DEFAULT_ALPHA_DEG), width=HEATMAP_SIZE[0],
               height=HEATMAP_SIZE[1], squared=True):
    """One geodesic heatmap per layout corner."""
    return HeatmapStack(tuple(make_geodesic_heatmap(p, alpha, width, height, squared)
                              for p in layout.points()))


def extract(stack, spherical=True, quasi=False):
    """Read a layout off a heatmap stack, one corner per map."""
    if stack.count != NUM_CORNERS:
        raise DomainError(f"cuboid extraction needs {NUM_CORNERS} heatmaps, got {stack.count}")
    com = spherical_com if spherical else flat_com
    layout = CuboidLayout.from_points([com(m) for m in stack])
    return enforce_quasi_manhattan(layout) if quasi else layout
