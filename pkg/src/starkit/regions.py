"""Compact sets as simple geodesic polygons.

A polygon is stored as a counterclockwise chart cycle.  Because geodesics are
chart chords, containment and clipping are planar chart computations; angles
and distances go through the surface metric.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np
import shapely
from shapely.geometry import Polygon as _ShapelyPolygon

from .models import (
    Geodesic,
    GeometryError,
    HalfPlane,
    ModelId,
    OverlapError,
    Point,
    Side,
    _hit,
    _same_model,
    chart_angle_at,
    chart_dist,
    chart_distance,
    cross,
    in_domain,
    lerp,
    minkowski_dot,
)
from .tolerances import EPS_AREA, EPS_ON, EPS_PT


class Containment(str, Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    EXTERIOR = "exterior"


@dataclass(frozen=True)
class GeodesicPolygon:
    model: ModelId
    vertices: tuple[Point, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        if len(self.vertices) < 3:
            raise GeometryError("a polygon needs at least three vertices")
        for p in self.vertices:
            if p.model is not self.model:
                raise GeometryError("polygon vertices must share the polygon's model")

    @classmethod
    def from_coords(cls, model: ModelId | str, coords) -> "GeodesicPolygon":
        model = ModelId(model)
        return cls(model, tuple(Point(model, u, v) for u, v in coords))

    @property
    def coords(self) -> list[tuple[float, float]]:
        return [p.uv for p in self.vertices]

    def array(self) -> np.ndarray:
        return np.array(self.coords, dtype=float)

    def __len__(self):
        return len(self.vertices)

    def edges(self):
        pts = self.coords
        n = len(pts)
        return [(pts[i], pts[(i + 1) % n]) for i in range(n)]


@dataclass(frozen=True)
class Region:
    """A possibly empty simply connected region.

    ``multi_component`` is set when the true intersection that produced this
    region was disconnected; only the largest component is kept.
    """

    polygon: GeodesicPolygon | None = None
    multi_component: bool = field(default=False, compare=False)

    @property
    def is_empty(self) -> bool:
        return self.polygon is None

    @property
    def model(self) -> ModelId | None:
        return None if self.polygon is None else self.polygon.model


EMPTY = Region()


# -- basic chart quantities ------------------------------------------------

def signed_area(coords: Sequence) -> float:
    a = 0.0
    n = len(coords)
    for i in range(n):
        x1, y1 = coords[i]
        x2, y2 = coords[(i + 1) % n]
        a += x1 * y2 - x2 * y1
    return a / 2.0


def centroid(coords: Sequence) -> tuple[float, float]:
    """Chart area centroid of a simple polygon."""
    a = cx = cy = 0.0
    n = len(coords)
    ox, oy = coords[0]
    for i in range(n):
        x1, y1 = coords[i][0] - ox, coords[i][1] - oy
        x2, y2 = coords[(i + 1) % n][0] - ox, coords[(i + 1) % n][1] - oy
        w = x1 * y2 - x2 * y1
        a += w
        cx += (x1 + x2) * w
        cy += (y1 + y2) * w
    return (ox + cx / (3.0 * a), oy + cy / (3.0 * a))


def is_convex_coords(coords: Sequence, eps: float = EPS_PT) -> bool:
    n = len(coords)
    return all(cross(coords[i - 1], coords[i], coords[(i + 1) % n]) >= -eps for i in range(n))


def _segment_offset(p, a, b) -> float:
    """Chart distance from p to the segment [a, b]."""
    dx, dy = b[0] - a[0], b[1] - a[1]
    n2 = dx * dx + dy * dy
    t = 0.0 if n2 == 0 else max(0.0, min(1.0, ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / n2))
    return math.hypot(p[0] - a[0] - t * dx, p[1] - a[1] - t * dy)


def point_segment_distance(model: ModelId, p, a, b) -> float:
    """Metric distance from chart point p to the geodesic segment [a, b]."""
    if model is ModelId.EUCLIDEAN:
        return _segment_offset(p, a, b)
    P, A, B = (np.array([1.0, x[0], x[1]]) / math.sqrt(1.0 - x[0] ** 2 - x[1] ** 2) for x in (p, a, b))
    # spacelike normal of the plane spanned by A and B
    N = np.cross(A, B) * np.array([-1.0, 1.0, 1.0])
    nn = minkowski_dot(N, N)
    pn = minkowski_dot(P, N)
    foot = P - (pn / nn) * N
    f = (foot[1] / foot[0], foot[2] / foot[0])
    dx, dy = b[0] - a[0], b[1] - a[1]
    t = ((f[0] - a[0]) * dx + (f[1] - a[1]) * dy) / (dx * dx + dy * dy)
    if 0.0 <= t <= 1.0:
        return math.asinh(abs(pn) / math.sqrt(nn))
    return min(chart_distance(model, p, a), chart_distance(model, p, b))


# -- validation and containment ----------------------------------------------

def validate(P: GeodesicPolygon, eps: float = EPS_ON) -> list[str]:
    """Every violation of the polygon invariants; an empty list means valid."""
    pts = P.coords
    n = len(pts)
    problems = []
    for i, (u, v) in enumerate(pts):
        if not in_domain(P.model, u, v):
            problems.append(f"vertex {i} outside the {P.model.value} domain")
    for i in range(n):
        if chart_dist(pts[i], pts[(i + 1) % n]) <= EPS_PT:
            problems.append(f"vertices {i} and {(i + 1) % n} coincide")
    if problems:
        return problems
    for i in range(n):
        a, b, c = pts[i - 1], pts[i], pts[(i + 1) % n]
        span = max(chart_dist(a, c), chart_dist(a, b), chart_dist(b, c))
        if abs(cross(a, b, c)) <= eps * span:
            problems.append(f"vertex {i % n} is collinear with its neighbours")
    if signed_area(pts) <= 0:
        problems.append("orientation is not counterclockwise")
    for i in range(n):
        for j in range(i + 1, n):
            adjacent = j == i + 1 or (i == 0 and j == n - 1)
            if adjacent:
                continue
            try:
                hit = _hit(pts[i], pts[(i + 1) % n], pts[j], pts[(j + 1) % n], eps, 1.0)
            except OverlapError:
                hit = True
            if hit is not None:
                problems.append(f"edges {i} and {j} intersect")
    return problems


def classify_coords(coords: Sequence, p, eps: float = EPS_ON) -> Containment:
    n = len(coords)
    inside = False
    x, y = p
    for i in range(n):
        a, b = coords[i], coords[(i + 1) % n]
        if _segment_offset(p, a, b) <= eps:
            return Containment.BOUNDARY
        if (a[1] > y) != (b[1] > y):
            xc = a[0] + (y - a[1]) * (b[0] - a[0]) / (b[1] - a[1])
            if xc > x:
                inside = not inside
    return Containment.INTERIOR if inside else Containment.EXTERIOR


def contains(P: GeodesicPolygon, p: Point, eps: float = EPS_ON) -> Containment:
    _same_model(P, p)
    return classify_coords(P.coords, p.uv, eps)


def classify_array(coords: np.ndarray, pts: np.ndarray, eps: float = EPS_ON) -> np.ndarray:
    """Vectorized containment: 1 interior, 0 boundary, -1 exterior."""
    pts = np.asarray(pts, dtype=float).reshape(-1, 2)
    a = np.asarray(coords, dtype=float)
    b = np.roll(a, -1, axis=0)
    x, y = pts[:, 0:1], pts[:, 1:2]
    d = b - a
    n2 = (d ** 2).sum(axis=1)
    t = np.clip(((x - a[:, 0]) * d[:, 0] + (y - a[:, 1]) * d[:, 1]) / n2, 0.0, 1.0)
    off = np.hypot(x - a[:, 0] - t * d[:, 0], y - a[:, 1] - t * d[:, 1])
    on_edge = (off <= eps).any(axis=1)
    straddle = (a[:, 1] > y) != (b[:, 1] > y)
    with np.errstate(divide="ignore", invalid="ignore"):
        xc = a[:, 0] + (y - a[:, 1]) * d[:, 0] / d[:, 1]
    inside = (straddle & (xc > x)).sum(axis=1) % 2 == 1
    out = np.where(inside, 1, -1)
    out[on_edge] = 0
    return out


def interior_angle(P: GeodesicPolygon, i: int) -> float:
    n = len(P)
    if not -n <= i < n:
        raise IndexError(f"vertex index {i} out of range for {n} vertices")
    pts = P.coords
    i %= n
    return chart_angle_at(P.model, pts[i], pts[(i + 1) % n], pts[i - 1])


# -- region construction -----------------------------------------------------

def _tidy(coords, tol: float = 1e-11):
    """Drop repeated and collinear vertices until none remain."""
    pts = [tuple(map(float, c)) for c in coords]
    changed = True
    while changed and len(pts) >= 3:
        changed = False
        out = []
        for p in pts:
            if not out or chart_dist(out[-1], p) > tol:
                out.append(p)
        while len(out) > 1 and chart_dist(out[0], out[-1]) <= tol:
            out.pop()
        pts = out
        n = len(pts)
        if n < 3:
            break
        for i in range(n):
            a, b, c = pts[i - 1], pts[i], pts[(i + 1) % n]
            span = max(chart_dist(a, c), chart_dist(a, b), chart_dist(b, c))
            if abs(cross(a, b, c)) <= tol * span:
                del pts[i]
                changed = True
                break
    return pts


def region_from_coords(model: ModelId, coords, multi_component: bool = False) -> Region:
    pts = _tidy(coords)
    if len(pts) < 3:
        return EMPTY
    area = signed_area(pts)
    if abs(area) <= EPS_AREA:
        return EMPTY
    if area < 0:
        pts.reverse()
    first = min(range(len(pts)), key=lambda i: pts[i])
    pts = pts[first:] + pts[:first]
    return Region(GeodesicPolygon.from_coords(model, pts), multi_component)


def clip_coords(coords, a, b, eps: float = EPS_ON):
    """Sutherland-Hodgman: keep the part of a chart polygon left of the line a -> b."""
    L = chart_dist(a, b)
    out = []
    n = len(coords)
    if n == 0:
        return out
    d = [cross(a, b, p) / L for p in coords]
    for i in range(n):
        p, q = coords[i], coords[(i + 1) % n]
        dp, dq = d[i], d[(i + 1) % n]
        if dp >= -eps:
            out.append(p)
        if (dp > eps and dq < -eps) or (dp < -eps and dq > eps):
            out.append(lerp(p, q, dp / (dp - dq)))
    return out


def _components(geom) -> list:
    if geom.is_empty:
        return []
    if geom.geom_type == "Polygon":
        return [geom]
    if hasattr(geom, "geoms"):
        return [g for part in geom.geoms for g in _components(part)]
    return []


def _region_from_shapely(model: ModelId, geom) -> Region:
    parts = [g for g in _components(geom) if g.area > EPS_AREA]
    if not parts:
        return EMPTY
    parts.sort(key=lambda g: -g.area)
    # slivers left by floating-point overlay are not real components
    multi = len(parts) > 1 and parts[1].area > 1e-10
    ring = list(parts[0].exterior.coords)[:-1]
    return region_from_coords(model, ring, multi)


def _split_components(model: ModelId, coords) -> Region:
    return _region_from_shapely(model, shapely.make_valid(_ShapelyPolygon(coords)))


def clip_halfplane(P: GeodesicPolygon, h: HalfPlane, eps: float = EPS_ON) -> Region:
    model = _same_model(P, h)
    a, b = h.boundary.p.uv, h.boundary.q.uv
    if h.side is Side.RIGHT:
        a, b = b, a
    out = clip_coords(P.coords, a, b, eps)
    if len(_tidy(out)) < 3:
        return EMPTY
    if is_convex_coords(P.coords):
        return region_from_coords(model, out)
    return _split_components(model, _tidy(out))


def to_shapely(R: Region):
    if R.is_empty:
        return _ShapelyPolygon()
    return _ShapelyPolygon(R.polygon.coords)


def intersect_regions(R1: Region, R2: Region, eps: float = EPS_ON) -> Region:
    if R1.is_empty or R2.is_empty:
        return EMPTY
    model = _same_model(R1.polygon, R2.polygon)
    flag = R1.multi_component or R2.multi_component
    c1, c2 = R1.polygon.coords, R2.polygon.coords
    if not is_convex_coords(c2) and is_convex_coords(c1):
        c1, c2 = c2, c1
    if is_convex_coords(c2):
        out = c1
        for i in range(len(c2)):
            out = clip_coords(out, c2[i], c2[(i + 1) % len(c2)], eps)
        if len(_tidy(out)) < 3:
            return EMPTY
        if is_convex_coords(c1):
            r = region_from_coords(model, out)
        else:
            r = _split_components(model, _tidy(out))
    else:
        r = _region_from_shapely(model, shapely.intersection(_ShapelyPolygon(c1), _ShapelyPolygon(c2)))
    if flag and not r.is_empty:
        r = Region(r.polygon, True)
    return r


# -- comparison ----------------------------------------------------------------

def boundary_samples(coords, n_samples: int) -> list[tuple[float, float]]:
    """Vertices plus ``n_samples`` chart-evenly spaced boundary points."""
    n = len(coords)
    lengths = [chart_dist(coords[i], coords[(i + 1) % n]) for i in range(n)]
    total = sum(lengths)
    out = list(coords)
    if n_samples <= 0:
        return out
    step = total / n_samples
    i, acc = 0, 0.0
    for k in range(n_samples):
        s = k * step
        while i < n - 1 and acc + lengths[i] < s:
            acc += lengths[i]
            i += 1
        t = min(1.0, (s - acc) / lengths[i])
        out.append(lerp(coords[i], coords[(i + 1) % n], t))
    return out


def distance_to_region(model: ModelId, p, coords) -> float:
    if classify_coords(coords, p, 0.0) is not Containment.EXTERIOR:
        return 0.0
    n = len(coords)
    return min(point_segment_distance(model, p, coords[i], coords[(i + 1) % n]) for i in range(n))


def hausdorff(R1: Region, R2: Region, n_samples: int = 256) -> float:
    """Symmetric Hausdorff distance between two regions (metric, boundary-sampled).

    Exact whenever both regions are convex: distance to a convex set is convex
    along geodesics, so the sup is attained at a vertex, and vertices are
    always among the samples.
    """
    if R1.is_empty and R2.is_empty:
        return 0.0
    if R1.is_empty or R2.is_empty:
        return math.inf
    model = _same_model(R1.polygon, R2.polygon)
    c1, c2 = R1.polygon.coords, R2.polygon.coords
    d12 = max(distance_to_region(model, p, c2) for p in boundary_samples(c1, n_samples))
    d21 = max(distance_to_region(model, p, c1) for p in boundary_samples(c2, n_samples))
    return max(d12, d21)


def translated(R: Region, du: float, dv: float) -> Region:
    """Chart translation of a region (a planted fault for harness self-tests)."""
    if R.is_empty:
        return R
    return region_from_coords(R.model, [(u + du, v + dv) for u, v in R.polygon.coords])


def halfplane_left_of(model: ModelId, a, b) -> HalfPlane:
    return HalfPlane(Geodesic(Point(model, *a), Point(model, *b)), Side.LEFT)
