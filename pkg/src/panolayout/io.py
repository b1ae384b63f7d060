"""File formats: layout JSON documents, heatmap stacks and metric reports.

Heatmap files are a 20-byte little-endian header followed by raw float32::

    b"SSCH" | version u32 | count u32 | width u32 | height u32 | count*height*width f32

The payload is junction-major, then row-major within each map.
"""

import json
import struct
from pathlib import Path

import numpy as np

from .errors import DomainError, FormatError
from .heatmap import HeatmapStack
from .layout import NUM_CORNERS, NUM_WALLS, CuboidLayout
from .metrics import MetricsReport
from .sphere import wrap_delta

LAYOUT_VERSION = 1
HEATMAP_MAGIC = b"SSCH"
HEATMAP_VERSION = 1
_HEADER = struct.Struct("<4sIIII")
# walls closer than this (radians) make the ceiling/floor pairing ambiguous
PAIRING_EPS = 1e-6


def layout_to_dict(layout, name=None, floor_dist=None):
    doc = {
        "version": LAYOUT_VERSION,
        "corners": [{"phi": float(p), "theta": float(t)} for p, t in layout.corners],
    }
    meta = {k: v for k, v in (("name", name), ("floor_dist", floor_dist)) if v is not None}
    if meta:
        doc["metadata"] = meta
    return doc


def pair_corners(corners):
    """Sort walls by ceiling longitude and pair each with its nearest floor corner."""
    corners = np.asarray(corners, dtype=np.float64)
    ceil = corners[:NUM_WALLS][np.argsort(corners[:NUM_WALLS, 0], kind="stable")]
    floor = corners[NUM_WALLS:]
    gaps = np.abs(wrap_delta(np.diff(ceil[:, 0], append=ceil[0, 0])))
    if np.any(gaps < PAIRING_EPS):
        raise FormatError("corners: ambiguous wall pairing, two walls share a longitude")
    dist = np.abs(wrap_delta(ceil[:, 0][:, None] - floor[:, 0][None, :]))
    match = dist.argmin(axis=1)
    if len(set(match.tolist())) != NUM_WALLS:
        raise FormatError("corners: ambiguous wall pairing, floor corners cannot be matched one-to-one")
    return np.concatenate([ceil, floor[match]])


def layout_from_dict(doc):
    if not isinstance(doc, dict):
        raise FormatError("layout document must be a JSON object")
    if doc.get("version") != LAYOUT_VERSION:
        raise FormatError(f"version: unsupported layout version {doc.get('version')!r}")
    corners = doc.get("corners")
    if not isinstance(corners, list) or len(corners) != NUM_CORNERS:
        raise FormatError(f"corners: expected a list of {NUM_CORNERS} records")
    rows = []
    for i, c in enumerate(corners):
        try:
            rows.append([float(c["phi"]), float(c["theta"])])
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"corners[{i}]: needs numeric 'phi' and 'theta'") from exc
    try:
        return CuboidLayout(pair_corners(CuboidLayout(rows).corners))
    except DomainError as exc:
        raise FormatError(f"corners: {exc}") from exc


def save_layout(layout, path, name=None, floor_dist=None):
    Path(path).write_text(json.dumps(layout_to_dict(layout, name, floor_dist), indent=2) + "\n",
                          encoding="utf-8")


def load_layout(path):
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: malformed JSON ({exc.msg} at line {exc.lineno})") from exc
    return layout_from_dict(doc)


def heatmaps_to_bytes(stack):
    data = np.ascontiguousarray(stack.as_array(), dtype="<f4")
    header = _HEADER.pack(HEATMAP_MAGIC, HEATMAP_VERSION, stack.count, stack.width, stack.height)
    return header + data.tobytes()


def heatmaps_from_bytes(buf):
    if len(buf) < _HEADER.size:
        raise FormatError("heatmap file: truncated header")
    magic, version, count, width, height = _HEADER.unpack_from(buf)
    if magic != HEATMAP_MAGIC:
        raise FormatError(f"magic: expected {HEATMAP_MAGIC!r}, got {magic!r}")
    if version != HEATMAP_VERSION:
        raise FormatError(f"version: unsupported heatmap version {version}")
    expected = 4 * count * width * height
    if len(buf) - _HEADER.size != expected:
        raise FormatError(f"payload: expected {expected} bytes, got {len(buf) - _HEADER.size}")
    data = np.frombuffer(buf, dtype="<f4", offset=_HEADER.size).reshape(count, height, width)
    try:
        return HeatmapStack(tuple(data.astype(np.float64)))
    except DomainError as exc:
        raise FormatError(f"payload: {exc}") from exc


def save_heatmaps(stack, path):
    Path(path).write_bytes(heatmaps_to_bytes(stack))


def load_heatmaps(path):
    return heatmaps_from_bytes(Path(path).read_bytes())


def format_report(report, prefix=""):
    return "".join(f"{prefix}{k} = {v:.6f}\n" for k, v in report.items())


def parse_report(text):
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise FormatError(f"report line {lineno}: expected 'key = value'")
        values[key.strip()] = float(value)
    try:
        return MetricsReport(**values)
    except TypeError as exc:
        raise FormatError(f"report: {exc}") from exc
