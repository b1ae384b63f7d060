"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines as they are
produced; they are also collected in the terminal summary.
"""

import dataclasses
import math
import time

import numpy as np
import pytest

from panolayout import polygon
from panolayout.align import MODES, align_cuboid, enforce_quasi_manhattan
from panolayout.heatmap import (
    LossWeights,
    extract,
    geodesic_loss,
    kl_loss,
    make_geodesic_heatmap,
    normalize,
    synthesize,
    total_loss,
)
from panolayout.layout import Cuboid3D, cuboid_from_box, deproject, project
from panolayout.metrics import (
    THRESHOLDS,
    corner_error,
    evaluate,
    iou3d,
    iou3d_cuboids,
    junction_accuracy,
    wireframe_accuracies,
)
from panolayout.sphere import (
    TWO_PI,
    Heatmap,
    SphericalPoint,
    angles_to_unit3,
    flat_com,
    haversine,
    spherical_com,
    wrap_delta,
)
from panolayout.synth import generate_room, perturb, random_room_spec

pytestmark = pytest.mark.acceptance

ALPHA = math.radians(2.0)


def random_sphere(rng, n):
    return rng.uniform(0, TWO_PI, n), np.arccos(rng.uniform(-1, 1, n))


def corner_deviation(a, b):
    return float(np.max(haversine(a.phi, a.theta, b.phi, b.theta)))


def random_rooms(seed, n, noise=0.0):
    rng = np.random.default_rng(seed)
    return [random_room_spec(rng, noise=noise) for _ in range(n)]


def test_criterion_1_geodesic_oracle(record):
    rng = np.random.default_rng(101)
    start = time.perf_counter()
    p1, t1 = random_sphere(rng, 10_000)
    p2, t2 = random_sphere(rng, 10_000)
    d = haversine(p1, t1, p2, t2)
    chord = np.linalg.norm(angles_to_unit3(p1, t1) - angles_to_unit3(p2, t2), axis=1)
    err = float(np.max(np.abs(d - 2 * np.arcsin(np.minimum(chord / 2, 1.0)))))
    pa, ta = random_sphere(rng, 1000)
    pb, tb = random_sphere(rng, 1000)
    pc, tc = random_sphere(rng, 1000)
    slack = haversine(pa, ta, pb, tb) + haversine(pb, tb, pc, tc) - haversine(pa, ta, pc, tc)
    elapsed = time.perf_counter() - start
    ok = err < 1e-12 and slack.min() >= -1e-12 and elapsed < 1.0
    record(1, ok, f"max chord deviation {err:.2e}, min triangle slack {slack.min():.2e}, {elapsed:.3f} s")
    assert ok


def test_criterion_2_spherical_com(record):
    rng = np.random.default_rng(202)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(1000):
        c = SphericalPoint(rng.uniform(0, TWO_PI), rng.uniform(math.pi / 6, 5 * math.pi / 6))
        s = spherical_com(make_geodesic_heatmap(c, ALPHA, 128, 64))
        worst = max(worst, float(haversine(s.phi, s.theta, c.phi, c.theta)))
    flat_worst = 0.0
    for _ in range(200):
        c = SphericalPoint(rng.uniform(-math.radians(5), math.radians(5)),
                           rng.uniform(math.pi / 6, 5 * math.pi / 6))
        s = flat_com(make_geodesic_heatmap(c, ALPHA, 128, 64))
        flat_worst = max(flat_worst, float(haversine(s.phi, s.theta, c.phi, c.theta)))
    elapsed = time.perf_counter() - start
    ok = worst < 0.02 and flat_worst > 1.0 and elapsed < 10.0
    record(2, ok, f"spherical max error {worst:.4f} rad, flat max error near seam {flat_worst:.3f} rad, "
                  f"{elapsed:.2f} s")
    assert ok


def test_criterion_3_wraparound(record):
    rng = np.random.default_rng(303)
    worst = 0.0
    for _ in range(100):
        w, h = int(rng.integers(4, 200)), int(rng.integers(2, 100))
        m = Heatmap(rng.random((h, w)) ** rng.uniform(1, 8))
        k = int(rng.integers(-3 * w, 3 * w))
        a, b = spherical_com(m), spherical_com(m.roll_columns(k))
        worst = max(worst, abs(float(wrap_delta(b.phi - a.phi - k * TWO_PI / w))))
    ok = worst < 1e-9
    record(3, ok, f"max longitude shift error {worst:.2e} rad")
    assert ok


def test_criterion_4_fixed_point(record):
    worst = {m: 0.0 for m in MODES}
    for spec in random_rooms(404, 1000):
        gt, _ = generate_room(spec)
        for mode in MODES:
            worst[mode] = max(worst[mode], corner_deviation(align_cuboid(gt, mode), gt))
    ok = max(worst.values()) < 1e-6
    record(4, ok, ", ".join(f"{m} {v:.1e}" for m, v in worst.items()) + " rad")
    assert ok


def test_criterion_5_manhattan_output(record):
    rng = np.random.default_rng(505)
    ortho = wall = idem = 0.0
    for spec in random_rooms(505, 1000):
        gt, _ = generate_room(spec)
        inp = enforce_quasi_manhattan(perturb(gt, rng.uniform(0, math.radians(2)), rng))
        out = align_cuboid(inp)
        pts = deproject(out).floor_pts
        e = np.roll(pts, -1, axis=0) - pts
        n = np.linalg.norm(e, axis=1)
        ortho = max(ortho, float(np.max(np.abs(np.sum(e * np.roll(e, -1, axis=0), axis=1)) / (n * np.roll(n, -1)))))
        wall = max(wall, float(np.max(np.abs(wrap_delta(out.phi[:4] - out.phi[4:])))))
        idem = max(idem, corner_deviation(align_cuboid(out), out))
    ok = ortho < 1e-9 and wall < 1e-9 and idem < 1e-6
    record(5, ok, f"orthogonality residual {ortho:.1e}, wall phi gap {wall:.1e}, idempotence {idem:.1e} rad")
    assert ok


def _inside(poly, p):
    e = np.roll(poly, -1, axis=0) - poly
    cross = e[:, 0] * (p[:, None, 1] - poly[:, 1]) - e[:, 1] * (p[:, None, 0] - poly[:, 0])
    return np.all(cross >= 0, axis=1)


def test_criterion_6_iou_oracle(record):
    rng = np.random.default_rng(606)
    worst = 0.0
    for _ in range(100):
        a, b = (cuboid_from_box(*rng.uniform(1, 4, 2), -1.0, 1.0, rng.uniform(0, np.pi),
                                rng.uniform(-1, 1, 2)).floor_pts for _ in range(2))
        both = np.vstack([a, b])
        lo, hi = both.min(axis=0), both.max(axis=0)
        inter = union = 0
        for _ in range(4):
            p = rng.uniform(lo, hi, size=(250_000, 2))
            ia, ib = _inside(a, p), _inside(b, p)
            inter += np.count_nonzero(ia & ib)
            union += np.count_nonzero(ia | ib)
        worst = max(worst, abs(100 * polygon.iou(a, b) - 100 * inter / union))
    # containment: same footprint, one room half as tall as the other
    base = cuboid_from_box(4.0, 4.0, -1.5, 0.5)
    tall = Cuboid3D(base.floor_pts, base.ceil_pts, -1.5, 2.5)
    half = iou3d_cuboids(base, tall)
    ok = worst < 0.2 and half == 50.0
    record(6, ok, f"max |clip - Monte-Carlo| {worst:.3f} pp, half-height IoU3D {half!r}")
    assert ok


def test_criterion_7_invariances(record):
    rng = np.random.default_rng(707)
    exact = ("ce", "iou2d", "iou3d", "j5", "j10", "j15", "rmse", "delta1")
    loose = ("pe", "w5", "w10", "w15")
    diff = {k: 0.0 for k in exact + loose}
    grid_diff = {"rmse": 0.0, "delta1": 0.0}
    for spec in random_rooms(707, 10):
        gt, _ = generate_room(spec)
        pred = perturb(gt, math.radians(1.0), rng)
        base = evaluate(pred, gt)
        dphi = rng.uniform(0, TWO_PI)
        moved = evaluate(pred.rotated(dphi), gt.rotated(dphi))
        for k in diff:
            diff[k] = max(diff[k], abs(getattr(base, k) - getattr(moved, k)))
        # whole-pixel rotations keep the depth sampling grid, for reference
        step = int(rng.integers(1, 1024)) * TWO_PI / 1024
        snapped = evaluate(pred.rotated(step), gt.rotated(step))
        for k in grid_diff:
            grid_diff[k] = max(grid_diff[k], abs(getattr(base, k) - getattr(snapped, k)))
    mono = True
    for spec in random_rooms(708, 500):
        gt, _ = generate_room(spec)
        pred = perturb(gt, rng.uniform(0, math.radians(3)), rng)
        j = [junction_accuracy(pred, gt, t) for t in THRESHOLDS]
        w = wireframe_accuracies(pred, gt)
        mono &= j == sorted(j) and w == sorted(w)
    failing = [k for k in exact if diff[k] >= 1e-9] + [k for k in loose if diff[k] >= 0.05]
    ok = not failing and mono
    detail = ", ".join(f"{k} {v:.1e}" for k, v in diff.items())
    detail += f"; whole-pixel rotation rmse {grid_diff['rmse']:.1e}, delta1 {grid_diff['delta1']:.1e}"
    detail += f"; monotone {mono}" + (f"; over tolerance: {', '.join(failing)}" if failing else "")
    record(7, ok, detail)
    assert ok


def test_criterion_8_pipeline(record):
    specs = random_rooms(0, 100)
    start = time.perf_counter()
    ce = j5 = 0.0
    iou = 100.0
    j5 = 100.0
    for spec in specs:
        gt, _ = generate_room(spec)
        aligned = align_cuboid(extract(synthesize(gt), quasi=True), "joint")
        ce = max(ce, corner_error(aligned, gt))
        iou = min(iou, iou3d(aligned, gt))
        j5 = min(j5, junction_accuracy(aligned, gt, 5))
    wins = quasi_wins = 0
    for spec in specs:
        gt, noisy = generate_room(dataclasses.replace(spec, noise=math.radians(1.0)))
        stack = synthesize(noisy)
        raw = extract(stack)
        quasi = extract(stack, quasi=True)
        score = iou3d(align_cuboid(quasi, "joint"), gt)
        wins += score > iou3d(raw, gt)
        quasi_wins += score > iou3d(quasi, gt)
    elapsed = time.perf_counter() - start
    rate = wins / len(specs)
    ok = ce < 0.2 and iou > 99.0 and j5 == 100.0 and rate >= 0.8 and elapsed < 60.0
    record(8, ok, f"noise 0: max CE {ce:.4f}%, min IoU3D {iou:.3f}%, min J5 {j5:.1f}%; "
                  f"noise 1 deg: aligned beats raw extraction on {rate:.2f} of rooms "
                  f"(beats quasi-only extraction on {quasi_wins / len(specs):.2f}); {elapsed:.1f} s")
    assert ok


def test_criterion_9_losses(record):
    rng = np.random.default_rng(909)
    gt, _ = generate_room(random_rooms(909, 1)[0])
    kl_min = min(kl_loss(rng.normal(0, s, size=(8, 64, 128)), gt, ALPHA) for s in (0.1, 1, 5, 20))
    targets = [normalize(make_geodesic_heatmap(p, ALPHA, 128, 64)).mass for p in gt.points()]
    kl_target = abs(kl_loss(np.log(np.maximum(targets, 1e-300)), gt, ALPHA))
    geo_self = geodesic_loss(gt, gt)
    weights = LossWeights(1.0, 0.15)
    comb = 0.0
    for _ in range(10):
        n = int(rng.integers(1, 6))
        g, d = rng.uniform(0, 3, n), rng.uniform(0, 10, n)
        hand = sum(1.0 * gi + 0.15 * di for gi, di in zip(g, d)) / n
        comb = max(comb, abs(total_loss(g, d, weights) - hand))
    ok = kl_min >= 0 and kl_target < 1e-9 and geo_self == 0.0 and comb < 1e-12
    record(9, ok, f"min KL {kl_min:.3f}, KL at target {kl_target:.1e}, geodesic self {geo_self}, "
                  f"combination error {comb:.1e}")
    assert ok
