"""Command line interface: ``panolayout {gen,synth,extract,align,eval,render}``."""

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import io
from .align import MODES, align_cuboid
from .errors import DegenerateError, DomainError, FormatError, LayoutError
from .heatmap import DEFAULT_ALPHA_DEG, HEATMAP_SIZE, extract, synthesize
from .layout import FLOOR_DIST
from .metrics import EVAL_SIZE, evaluate, mean_report
from .svg import render_svg
from .synth import SyntheticRoomSpec, generate_room

EXIT_IO = 1
EXIT_FORMAT = 3
EXIT_DOMAIN = 4
EXIT_DEGENERATE = 5


def _room(text):
    try:
        w, d, h = (float(x) for x in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected WIDTHxDEPTHxHEIGHT in meters, got {text!r}")
    return w, d, h


def cmd_gen(args):
    w, d, h = args.room
    spec = SyntheticRoomSpec(width=w, depth=d, camera_height=args.camera_height, ceiling_height=h,
                             yaw=args.yaw, noise=np.deg2rad(args.noise_deg), seed=args.seed)
    gt, noisy = generate_room(spec)
    io.save_layout(gt, args.out_gt, name="gt", floor_dist=-args.camera_height)
    if args.out_noisy:
        io.save_layout(noisy, args.out_noisy, name="noisy", floor_dist=-args.camera_height)


def cmd_synth(args):
    layout = io.load_layout(args.layout)
    stack = synthesize(layout, np.deg2rad(args.alpha_deg), args.width, args.height)
    io.save_heatmaps(stack, args.out)


def cmd_extract(args):
    stack = io.load_heatmaps(args.heatmaps)
    io.save_layout(extract(stack, spherical=args.spherical, quasi=args.quasi), args.out)


def cmd_align(args):
    layout = io.load_layout(args.layout)
    aligned = align_cuboid(layout, args.mode, args.floor_dist)
    io.save_layout(aligned, args.out, floor_dist=args.floor_dist)


def _evaluate_files(pred_path, gt_path, width, height):
    return evaluate(io.load_layout(pred_path), io.load_layout(gt_path), width, height)


def cmd_eval(args):
    pred, gt, out = Path(args.pred), Path(args.gt), Path(args.out)
    if pred.is_dir() or gt.is_dir():
        if not (pred.is_dir() and gt.is_dir()):
            raise FormatError("--pred and --gt must both be files or both be directories")
        names = sorted(p.name for p in pred.glob("*.json") if (gt / p.name).exists())
        if not names:
            raise FormatError(f"no matching *.json files in {pred} and {gt}")
        pairs = [(pred / n, gt / n, args.width, args.height) for n in names]
        if args.jobs > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                reports = list(pool.map(_evaluate_files, *zip(*pairs)))
        else:
            reports = [_evaluate_files(*p) for p in pairs]
        text = "".join(io.format_report(r, prefix=f"{Path(n).stem}.") for n, r in zip(names, reports))
        out.write_text(text + io.format_report(mean_report(reports), prefix="mean."), encoding="utf-8")
        return
    pred_layout, gt_layout = io.load_layout(pred), io.load_layout(gt)
    report = evaluate(pred_layout, gt_layout, args.width, args.height)
    out.write_text(io.format_report(report), encoding="utf-8")
    from .plotting import plot_evaluation

    plot_evaluation(pred_layout, gt_layout, out.with_suffix(".png"), report, args.width, args.height)


def cmd_render(args):
    layouts = [io.load_layout(args.layout)]
    if args.layout2:
        layouts.append(io.load_layout(args.layout2))
    Path(args.out).write_text(render_svg(layouts, args.width, args.height), encoding="utf-8")


def build_parser():
    parser = argparse.ArgumentParser(prog="panolayout", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a synthetic room layout")
    p.add_argument("--room", type=_room, required=True, metavar="WxDxH")
    p.add_argument("--camera-height", type=float, default=1.6)
    p.add_argument("--yaw", type=float, default=0.0, help="room rotation in radians")
    p.add_argument("--noise-deg", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-gt", required=True)
    p.add_argument("--out-noisy")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("synth", help="render geodesic heatmaps for a layout")
    p.add_argument("--layout", required=True)
    p.add_argument("--width", type=int, default=HEATMAP_SIZE[0])
    p.add_argument("--height", type=int, default=HEATMAP_SIZE[1])
    p.add_argument("--alpha-deg", type=float, default=DEFAULT_ALPHA_DEG)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("extract", help="read corners off a heatmap stack")
    p.add_argument("--heatmaps", required=True)
    p.add_argument("--quasi", action="store_true", help="make wall edges vertical")
    p.add_argument("--no-spherical", dest="spherical", action="store_false",
                   help="use the naive planar center of mass")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("align", help="fit a Manhattan cuboid to a layout")
    p.add_argument("--layout", required=True)
    p.add_argument("--mode", choices=MODES, default="joint")
    p.add_argument("--floor-dist", type=float, default=FLOOR_DIST)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_align)

    p = sub.add_parser("eval", help="compute layout metrics")
    p.add_argument("--pred", required=True)
    p.add_argument("--gt", required=True)
    p.add_argument("--width", type=int, default=EVAL_SIZE[0])
    p.add_argument("--height", type=int, default=EVAL_SIZE[1])
    p.add_argument("--jobs", type=int, default=1, help="worker processes for directory inputs")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("render", help="draw layout wireframes as SVG")
    p.add_argument("--layout", required=True)
    p.add_argument("--layout2")
    p.add_argument("--width", type=int, default=EVAL_SIZE[0])
    p.add_argument("--height", type=int, default=EVAL_SIZE[1])
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_render)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except FormatError as exc:
        code, msg = EXIT_FORMAT, exc
    except DegenerateError as exc:
        code, msg = EXIT_DEGENERATE, exc
    except (DomainError, LayoutError) as exc:
        code, msg = EXIT_DOMAIN, exc
    except OSError as exc:
        code, msg = EXIT_IO, f"{exc.filename or ''}: {exc.strerror or exc}".lstrip(": ")
    else:
        return 0
    print(f"panolayout {args.command}: error: {str(msg).splitlines()[0]}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
