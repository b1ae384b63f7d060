"""Geometry toolkit for single-shot cuboid room layouts on spherical panoramas."""

from .align import align_cuboid, enforce_quasi_manhattan, fit_homography, fit_manhattan_cuboid, procrustes_align
from .errors import DegenerateError, DegenerateMassError, DomainError, FormatError, LayoutError
from .heatmap import HeatmapStack, LossWeights, extract, geodesic_loss, kl_loss, synthesize, total_loss
from .layout import Cuboid3D, CuboidLayout, deproject, project
from .metrics import MetricsReport, evaluate
from .sphere import Heatmap, PixelCoord, SphericalPoint, geodesic_distance, spherical_com
from .synth import SyntheticRoomSpec, generate_room

__version__ = "0.1.0"
