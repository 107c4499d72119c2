"""Ambient geometry for the Euclidean plane and the hyperbolic plane.

Both surfaces are exposed through a global chart in which every geodesic is a
straight line: the identity chart for the Euclidean plane and the
Beltrami-Klein disk for the hyperbolic plane.  Incidence questions (sides,
intersections) are therefore answered with planar chart algebra, while
distances and angles use the metric of the surface.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .tolerances import EPS_BOUNDARY, EPS_ON, EPS_PT


class GeometryError(ValueError):
    pass


class ModelMismatchError(GeometryError):
    pass


class DegenerateError(GeometryError):
    pass


class DomainError(GeometryError):
    pass


class CoincidentGeodesicsError(GeometryError):
    pass


class OverlapError(GeometryError):
    """Two collinear pieces share more than a single point."""


class ModelId(str, Enum):
    EUCLIDEAN = "euclidean"
    KLEIN = "hyperbolic-klein"


class Side(str, Enum):
    LEFT = "left"
    RIGHT = "right"
    ON = "on"


def in_domain(model: ModelId, u: float, v: float) -> bool:
    if not (math.isfinite(u) and math.isfinite(v)):
        return False
    if model is ModelId.KLEIN:
        return u * u + v * v < 1.0 - EPS_BOUNDARY
    return True


@dataclass(frozen=True)
class Point:
    model: ModelId
    u: float
    v: float

    def __post_init__(self):
        object.__setattr__(self, "u", float(self.u))
        object.__setattr__(self, "v", float(self.v))
        if not in_domain(self.model, self.u, self.v):
            raise DomainError(f"({self.u}, {self.v}) is outside the {self.model.value} domain")

    @property
    def uv(self) -> tuple[float, float]:
        return (self.u, self.v)

    def __repr__(self):
        return f"Point({self.model.value}, {self.u!r}, {self.v!r})"


def _same_model(*objs) -> ModelId:
    model = objs[0].model
    for o in objs[1:]:
        if o.model is not model:
            raise ModelMismatchError(f"cannot mix {model.value} and {o.model.value}")
    return model


@dataclass(frozen=True)
class GeodesicSegment:
    a: Point
    b: Point
    allow_degenerate: bool = False

    def __post_init__(self):
        _same_model(self.a, self.b)
        if not self.allow_degenerate and chart_dist(self.a.uv, self.b.uv) <= EPS_PT:
            raise DegenerateError("segment endpoints coincide")

    @property
    def model(self) -> ModelId:
        return self.a.model

    @property
    def length(self) -> float:
        return distance(self.a, self.b)


@dataclass(frozen=True)
class GeodesicRay:
    vertex: Point
    through: Point

    def __post_init__(self):
        _same_model(self.vertex, self.through)
        if chart_dist(self.vertex.uv, self.through.uv) <= EPS_PT:
            raise DegenerateError("ray vertex and through-point coincide")

    @property
    def model(self) -> ModelId:
        return self.vertex.model


@dataclass(frozen=True)
class Geodesic:
    p: Point
    q: Point

    def __post_init__(self):
        _same_model(self.p, self.q)
        if chart_dist(self.p.uv, self.q.uv) <= EPS_PT:
            raise DegenerateError("geodesic anchors coincide")

    @property
    def model(self) -> ModelId:
        return self.p.model


@dataclass(frozen=True)
class HalfPlane:
    """Closed side of ``boundary``; sides are relative to the anchor order p -> q."""

    boundary: Geodesic
    side: Side

    def __post_init__(self):
        if self.side is Side.ON:
            raise ValueError("a half-plane side must be LEFT or RIGHT")

    @property
    def model(self) -> ModelId:
        return self.boundary.model

    def contains(self, p: Point, eps: float = EPS_ON) -> bool:
        s = side_of(self.boundary, p, eps)
        return s is Side.ON or s is self.side


# -- chart algebra on plain (u, v) tuples ---------------------------------

def cross(o, a, b) -> float:
    """Twice the signed area of triangle (o, a, b); positive when counterclockwise."""
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def chart_dist(a, b) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def lerp(a, b, t: float) -> tuple[float, float]:
    return (a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]))


def line_params(a1, b1, a2, b2):
    """Parameters (t, s) with a1 + t(b1-a1) = a2 + s(b2-a2), or None if parallel."""
    d1 = (b1[0] - a1[0], b1[1] - a1[1])
    d2 = (b2[0] - a2[0], b2[1] - a2[1])
    denom = d1[0] * d2[1] - d1[1] * d2[0]
    scale = math.hypot(*d1) * math.hypot(*d2)
    if scale == 0.0 or abs(denom) <= 1e-14 * scale:
        return None
    w = (a2[0] - a1[0], a2[1] - a1[1])
    t = (w[0] * d2[1] - w[1] * d2[0]) / denom
    s = (w[0] * d1[1] - w[1] * d1[0]) / denom
    return t, s


# -- hyperboloid helpers ---------------------------------------------------

def lift(p: Point) -> np.ndarray:
    """Hyperboloid point (x0, x1, x2) with -x0^2 + x1^2 + x2^2 = -1 above a Klein chart point."""
    w = 1.0 / math.sqrt(1.0 - p.u * p.u - p.v * p.v)
    return np.array([w, w * p.u, w * p.v])


def minkowski_dot(x, y) -> float:
    return -x[0] * y[0] + x[1] * y[1] + x[2] * y[2]


def _klein_distance(a, b) -> float:
    # cosh d = -<A, B> for the lifts A, B rearranges to
    # tanh d = sqrt(|a-b|^2 - (a x b)^2) / (1 - a.b), which keeps full
    # relative precision for nearby points where arccosh does not.
    if tuple(b) < tuple(a):
        a, b = b, a  # fixed order makes d(p, q) == d(q, p) bit for bit
    du, dv = b[0] - a[0], b[1] - a[1]
    wedge = a[0] * dv - a[1] * du
    num = du * du + dv * dv - wedge * wedge
    den = 1.0 - (a[0] * b[0] + a[1] * b[1])
    return math.atanh(min(math.sqrt(max(num, 0.0)) / den, 1.0 - 1e-16))


def chart_distance(model: ModelId, a, b) -> float:
    """Metric distance between two chart coordinate pairs."""
    if model is ModelId.KLEIN:
        return _klein_distance(a, b)
    return chart_dist(a, b)


def distance(p: Point, q: Point) -> float:
    model = _same_model(p, q)
    return chart_distance(model, p.uv, q.uv)


def metric_tensor(model: ModelId, uv) -> np.ndarray:
    if model is ModelId.EUCLIDEAN:
        return np.eye(2)
    x = np.asarray(uv, dtype=float)
    k = 1.0 - x @ x
    return np.eye(2) / k + np.outer(x, x) / (k * k)


# -- operations ------------------------------------------------------------

def geodesic_through(p: Point, q: Point) -> Geodesic:
    return Geodesic(p, q)


def point_on(s: GeodesicSegment, t: float) -> Point:
    """Chart-affine parameterization of a segment (t is not arc length)."""
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"segment parameter {t} outside [0, 1]")
    if t == 0.0:
        return s.a
    if t == 1.0:
        return s.b
    return Point(s.model, *lerp(s.a.uv, s.b.uv, t))


def signed_offset(g: Geodesic, uv) -> float:
    """Signed chart distance of ``uv`` from the directed chart line of g."""
    p, q = g.p.uv, g.q.uv
    return cross(p, q, uv) / chart_dist(p, q)


def side_of(g: Geodesic, p: Point, eps: float = EPS_ON) -> Side:
    _same_model(g, p)
    d = signed_offset(g, p.uv)
    if abs(d) <= eps:
        return Side.ON
    return Side.LEFT if d > 0 else Side.RIGHT


def intersect_geodesics(g1: Geodesic, g2: Geodesic) -> Point | None:
    model = _same_model(g1, g2)
    params = line_params(g1.p.uv, g1.q.uv, g2.p.uv, g2.q.uv)
    if params is None:
        if abs(signed_offset(g1, g2.p.uv)) <= EPS_ON:
            raise CoincidentGeodesicsError("geodesics coincide")
        return None
    uv = lerp(g1.p.uv, g1.q.uv, params[0])
    if not in_domain(model, *uv):
        return None
    return Point(model, *uv)


def _collinear_overlap(a, b, c, d, eps, t_max):
    """Overlap of collinear pieces a->b (params in [0, t_max]) and [c, d]."""
    ab = (b[0] - a[0], b[1] - a[1])
    n2 = ab[0] ** 2 + ab[1] ** 2
    tc = ((c[0] - a[0]) * ab[0] + (c[1] - a[1]) * ab[1]) / n2
    td = ((d[0] - a[0]) * ab[0] + (d[1] - a[1]) * ab[1]) / n2
    lo, hi = max(0.0, min(tc, td)), min(t_max, max(tc, td))
    tol = eps / math.sqrt(n2)
    if hi < lo - tol:
        return None
    if hi - lo > tol:
        raise OverlapError("collinear pieces overlap")
    return lerp(a, b, (lo + hi) / 2)


def _hit(a, b, c, d, eps, t_max):
    """Intersection of piece a->b (params [0, t_max]) with segment [c, d]."""
    len1, len2 = chart_dist(a, b), chart_dist(c, d)
    params = line_params(a, b, c, d)
    if params is None:
        off_c = cross(a, b, c) / len1
        off_d = cross(a, b, d) / len1
        if abs(off_c) <= eps and abs(off_d) <= eps:
            return _collinear_overlap(a, b, c, d, eps, t_max)
        return None
    t, s = params
    tol1, tol2 = eps / len1, eps / len2
    if -tol1 <= t <= t_max + tol1 and -tol2 <= s <= 1.0 + tol2:
        s = min(max(s, 0.0), 1.0)
        return lerp(c, d, s)
    return None


def intersect_segment_segment(s1: GeodesicSegment, s2: GeodesicSegment,
                              eps: float = EPS_ON) -> Point | None:
    model = _same_model(s1, s2)
    uv = _hit(s1.a.uv, s1.b.uv, s2.a.uv, s2.b.uv, eps, 1.0)
    return None if uv is None else Point(model, *uv)


def intersect_ray_segment(r: GeodesicRay, s: GeodesicSegment,
                          eps: float = EPS_ON) -> Point | None:
    model = _same_model(r, s)
    uv = _hit(r.vertex.uv, r.through.uv, s.a.uv, s.b.uv, eps, math.inf)
    return None if uv is None else Point(model, *uv)


def chart_angle_at(model: ModelId, p, a, b) -> float:
    """Counterclockwise metric angle at p from the direction of a to that of b."""
    x = (a[0] - p[0], a[1] - p[1])
    y = (b[0] - p[0], b[1] - p[1])
    if model is ModelId.EUCLIDEAN:
        dot = x[0] * y[0] + x[1] * y[1]
        wedge = x[0] * y[1] - x[1] * y[0]
    else:
        # The Klein chart is not conformal away from the origin: measure both
        # directions with the metric tensor at p.
        g = metric_tensor(model, p)
        dot = float(np.asarray(x) @ g @ np.asarray(y))
        wedge = math.sqrt(np.linalg.det(g)) * (x[0] * y[1] - x[1] * y[0])
    ang = math.atan2(wedge, dot)
    if ang < 0.0:
        ang += 2.0 * math.pi
    return 0.0 if ang >= 2.0 * math.pi else ang


def angle_at(p: Point, a: Point, b: Point) -> float:
    model = _same_model(p, a, b)
    if chart_dist(p.uv, a.uv) <= EPS_PT or chart_dist(p.uv, b.uv) <= EPS_PT:
        raise DegenerateError("angle arms must differ from the apex")
    return chart_angle_at(model, p.uv, a.uv, b.uv)


# -- isometries --------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Isometry:
    """Orientation-preserving isometry as a 3x3 matrix on homogeneous chart coordinates.

    Euclidean motions act on (u, v, 1); hyperbolic ones are Lorentz matrices
    acting on (1, u, v), i.e. on the hyperboloid, projected back to the disk.
    """

    model: ModelId
    matrix: np.ndarray

    @classmethod
    def identity(cls, model: ModelId) -> "Isometry":
        return cls(model, np.eye(3))

    @classmethod
    def euclidean(cls, angle: float, tu: float = 0.0, tv: float = 0.0) -> "Isometry":
        c, s = math.cos(angle), math.sin(angle)
        return cls(ModelId.EUCLIDEAN, np.array([[c, -s, tu], [s, c, tv], [0.0, 0.0, 1.0]]))

    @classmethod
    def klein_rotation(cls, angle: float) -> "Isometry":
        c, s = math.cos(angle), math.sin(angle)
        return cls(ModelId.KLEIN, np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]]))

    @classmethod
    def klein_translation(cls, dist: float, direction: float = 0.0) -> "Isometry":
        """Hyperbolic translation by ``dist`` along the diameter at chart angle ``direction``."""
        ch, sh = math.cosh(dist), math.sinh(dist)
        boost = cls(ModelId.KLEIN, np.array([[ch, sh, 0.0], [sh, ch, 0.0], [0.0, 0.0, 1.0]]))
        rot = cls.klein_rotation(direction)
        return rot @ boost @ cls.klein_rotation(-direction)

    def __matmul__(self, other: "Isometry") -> "Isometry":
        _same_model(self, other)
        return Isometry(self.model, self.matrix @ other.matrix)

    def apply_uv(self, uv) -> tuple[float, float]:
        m = self.matrix
        if self.model is ModelId.EUCLIDEAN:
            x = m @ np.array([uv[0], uv[1], 1.0])
            return (float(x[0]), float(x[1]))
        x = m @ np.array([1.0, uv[0], uv[1]])
        return (float(x[1] / x[0]), float(x[2] / x[0]))


def apply_isometry(phi: Isometry, p: Point) -> Point:
    """Image of p; raises DomainError if rounding pushes a Klein image off the disk."""
    model = _same_model(phi, p)
    return Point(model, *phi.apply_uv(p.uv))


def random_isometry(model: ModelId, rng: np.random.Generator, max_shift: float = 1.0) -> Isometry:
    if model is ModelId.EUCLIDEAN:
        tu, tv = rng.uniform(-max_shift, max_shift, size=2)
        return Isometry.euclidean(rng.uniform(0, 2 * math.pi), tu, tv)
    return (Isometry.klein_translation(rng.uniform(0, max_shift), rng.uniform(0, 2 * math.pi))
            @ Isometry.klein_rotation(rng.uniform(0, 2 * math.pi)))
