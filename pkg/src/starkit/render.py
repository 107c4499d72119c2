"""SVG drawings of scenes with kernel, star and probe overlays.

Geodesic edges are chart chords, so every layer is a plain straight-line
path.  Output is byte-stable: fixed layer order and fixed number formatting.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .models import ModelId, Point
from .regions import Containment, GeodesicPolygon, Region, contains
from .scene import Scene
from . import starshape

LAYERS = ("polygon", "kernel", "stars-at-extremes", "extreme-markers", "gap-segments", "probes")

DEFAULT_STYLES = {
    "polygon": 'fill="#dde6f0" stroke="#1f3b5a" stroke-width="1.5"',
    "kernel": 'fill="#f2b134" fill-opacity="0.6" stroke="#a86b00" stroke-width="1.5"',
    "stars-at-extremes": 'fill="none" stroke="#6a9955" stroke-width="0.6" stroke-dasharray="3,2"',
    "extreme-markers": 'fill="#c0392b" stroke="none"',
    "gap-segments": 'fill="none" stroke="#8e44ad" stroke-width="2"',
    "probes": 'fill="none" stroke="#222222" stroke-width="1"',
}


@dataclass(frozen=True)
class RenderSpec:
    layers: tuple[str, ...] = LAYERS
    size: int = 480
    styles: dict = field(default_factory=lambda: dict(DEFAULT_STYLES))


@dataclass
class Overlays:
    kernel: Region | None = None
    stars: list[GeodesicPolygon] = field(default_factory=list)
    extremes: list[Point] = field(default_factory=list)
    gaps: list[tuple[Point, Point]] = field(default_factory=list)
    probes: dict[str, Point] = field(default_factory=dict)


def build_overlays(scene: Scene, layers=LAYERS) -> Overlays:
    A = scene.polygon
    ov = Overlays(probes=dict(scene.probes))
    E = starshape.extreme_points(A)
    if "kernel" in layers:
        ov.kernel = starshape.kernel_extreme(A)
    if "extreme-markers" in layers:
        ov.extremes = E.points(A)
    if "stars-at-extremes" in layers:
        ov.stars = [starshape.star(A, p).polygon for p in E.points(A)]
    if "gap-segments" in layers:
        inside = [p for _, p in sorted(scene.probes.items())
                  if contains(A, p) is not Containment.EXTERIOR]
        for p, q in combinations(inside, 2):
            gap = starshape.gap_points(A, p, q)
            if gap is not None:
                ov.gaps.append(gap)
    return ov


class _Frame:
    def __init__(self, scene: Scene, size: int):
        if scene.model is ModelId.KLEIN:
            lo_u, lo_v, hi_u, hi_v = -1.0, -1.0, 1.0, 1.0
        else:
            pts = scene.polygon.coords + [p.uv for p in scene.probes.values()]
            lo_u, hi_u = min(u for u, _ in pts), max(u for u, _ in pts)
            lo_v, hi_v = min(v for _, v in pts), max(v for _, v in pts)
        span = max(hi_u - lo_u, hi_v - lo_v) or 1.0
        pad = 0.05 * span
        self.u0, self.v1 = lo_u - pad, hi_v + pad
        self.scale = size / (span + 2 * pad)
        self.size = size

    def xy(self, uv) -> str:
        return f"{(uv[0] - self.u0) * self.scale:.4f} {(self.v1 - uv[1]) * self.scale:.4f}"


def _ring(frame: _Frame, coords) -> str:
    return "M " + " L ".join(frame.xy(c) for c in coords) + " Z"


def _marker(frame: _Frame, uv, r: float = 3.0) -> str:
    x, y = ((uv[0] - frame.u0) * frame.scale, (frame.v1 - uv[1]) * frame.scale)
    return (f"M {x - r:.4f} {y - r:.4f} L {x + r:.4f} {y - r:.4f} "
            f"L {x + r:.4f} {y + r:.4f} L {x - r:.4f} {y + r:.4f} Z")


def _cross(frame: _Frame, uv, r: float = 4.0) -> str:
    x, y = ((uv[0] - frame.u0) * frame.scale, (frame.v1 - uv[1]) * frame.scale)
    return (f"M {x - r:.4f} {y:.4f} L {x + r:.4f} {y:.4f} "
            f"M {x:.4f} {y - r:.4f} L {x:.4f} {y + r:.4f}")


def render_svg(scene: Scene, overlays: Overlays | None = None, spec: RenderSpec | None = None) -> str:
    spec = spec or RenderSpec()
    if overlays is None:
        overlays = build_overlays(scene, spec.layers)
    frame = _Frame(scene, spec.size)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{spec.size}" '
        f'height="{spec.size}" viewBox="0 0 {spec.size} {spec.size}">',
    ]
    if scene.model is ModelId.KLEIN:
        cx = cy = f"{(0.0 - frame.u0) * frame.scale:.4f}"
        out.append(f'  <circle id="disk" cx="{cx}" cy="{cy}" r="{frame.scale:.4f}" '
                   'fill="none" stroke="#999999" stroke-width="1"/>')
    for layer in LAYERS:
        if layer not in spec.layers:
            continue
        extra = ""
        if layer == "polygon":
            d = _ring(frame, scene.polygon.coords)
        elif layer == "kernel":
            K = overlays.kernel
            if K is None or K.is_empty:
                d, extra = "", ' data-empty="true"'
            else:
                d = _ring(frame, K.polygon.coords)
        elif layer == "stars-at-extremes":
            d = " ".join(_ring(frame, s.coords) for s in overlays.stars)
        elif layer == "extreme-markers":
            d = " ".join(_marker(frame, p.uv) for p in overlays.extremes)
        elif layer == "gap-segments":
            d = " ".join(f"M {frame.xy(a.uv)} L {frame.xy(b.uv)}" for a, b in overlays.gaps)
        else:
            d = " ".join(_cross(frame, p.uv) for _, p in sorted(overlays.probes.items()))
        style = spec.styles.get(layer, "")
        out.append(f'  <path id="layer-{layer}" d="{d}"{extra} {style}/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
