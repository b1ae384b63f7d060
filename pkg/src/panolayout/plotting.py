"""Matplotlib figures written next to evaluation reports."""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .layout import FLOOR_DIST, deproject  # noqa: E402
from .metrics import EVAL_SIZE, rasterize_mask  # noqa: E402
from .svg import polylines  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.titlesize": 10,
    "axes.labelsize": 9,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "savefig.dpi": 120,
    # keep PNG bytes reproducible
    "svg.hashsalt": "panolayout",
}
COLORS = {"gt": "#1a9850", "pred": "#d73027"}


def _footprint(ax, layout, color, label, floor_dist):
    pts = deproject(layout, floor_dist).floor_pts
    closed = np.vstack([pts, pts[:1]])
    ax.plot(closed[:, 0], closed[:, 1], "-o", color=color, ms=3, lw=1.2, label=label)


def plot_evaluation(pred, gt, path, report=None, width=EVAL_SIZE[0], height=EVAL_SIZE[1],
                    floor_dist=FLOOR_DIST):
    """Panorama wireframes over the ground-truth labels, plus both floor plans."""
    with plt.rc_context(STYLE):
        fig, (ax_pano, ax_plan) = plt.subplots(
            1, 2, figsize=(11, 3.4), gridspec_kw={"width_ratios": [2.2, 1]})
        ax_pano.imshow(rasterize_mask(gt, width, height), cmap="Greys", vmin=-1, vmax=3,
                       extent=(-0.5, width - 0.5, height - 0.5, -0.5), interpolation="nearest")
        for name, layout in (("gt", gt), ("pred", pred)):
            for k, poly in enumerate(polylines(layout, width, height)):
                ax_pano.plot(poly[:, 0], poly[:, 1], color=COLORS[name], lw=0.9,
                             label=name if k == 0 else None)
        ax_pano.set_xlim(-0.5, width - 0.5)
        ax_pano.set_ylim(height - 0.5, -0.5)
        ax_pano.set_xlabel("u [px]")
        ax_pano.set_ylabel("v [px]")
        ax_pano.legend(loc="lower right")
        if report is not None:
            ax_pano.set_title(f"CE {report.ce:.2f}%   PE {report.pe:.2f}%   "
                              f"IoU3D {report.iou3d:.2f}%   RMSE {report.rmse:.3f} m")

        _footprint(ax_plan, gt, COLORS["gt"], "gt", floor_dist)
        _footprint(ax_plan, pred, COLORS["pred"], "pred", floor_dist)
        ax_plan.plot([0], [0], "k+", ms=8, label="camera")
        ax_plan.set_aspect("equal")
        ax_plan.set_xlabel("x [m]")
        ax_plan.set_ylabel("y [m]")
        ax_plan.set_title("floor plan")
        ax_plan.legend(loc="best")
        fig.tight_layout()
        fig.savefig(path, metadata={"Software": None})
        plt.close(fig)
