"""Visibility, stars, extreme points and kernels of geodesic polygons.

Two independent kernel constructions live here:

* ``kernel_extreme`` intersects the stars of the extreme points only;
* ``kernel_halfplane`` intersects the inner half-planes of every edge, the
  classical planar construction carried over through the straightening chart.

``certify`` runs both, compares them with each other and with the sampling
oracle, and evaluates the exterior ray condition on random probes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import oracle
from .models import (
    GeometryError,
    ModelId,
    Point,
    _same_model,
    chart_dist,
    chart_distance,
    cross,
    in_domain,
    lerp,
    line_params,
)
from .regions import (
    EMPTY,
    Containment,
    GeodesicPolygon,
    Region,
    centroid,
    classify_coords,
    clip_coords,
    hausdorff,
    interior_angle,
    intersect_regions,
    region_from_coords,
)
from .tolerances import EPS_ANGLE, EPS_ON


class PreconditionError(GeometryError):
    pass


def _require_inside(A: GeodesicPolygon, *pts: Point, eps: float = EPS_ON):
    for p in pts:
        _same_model(A, p)
        if classify_coords(A.coords, p.uv, eps) is Containment.EXTERIOR:
            raise PreconditionError(f"{p.uv} lies outside the polygon")


# -- visibility ----------------------------------------------------------------

def _boundary_params(coords, p, q, eps):
    """Sorted parameters along [p, q] where the segment meets the polygon boundary."""
    n = len(coords)
    L = chart_dist(p, q)
    tol = eps / L
    ts = {0.0, 1.0}
    for i in range(n):
        a, b = coords[i], coords[(i + 1) % n]
        params = line_params(p, q, a, b)
        if params is None:
            if abs(cross(p, q, a)) / L <= eps and abs(cross(p, q, b)) / L <= eps:
                # collinear edge: both of its ends bound a boundary run
                for c in (a, b):
                    t = ((c[0] - p[0]) * (q[0] - p[0]) + (c[1] - p[1]) * (q[1] - p[1])) / (L * L)
                    if -tol <= t <= 1.0 + tol:
                        ts.add(min(max(t, 0.0), 1.0))
            continue
        t, s = params
        elen = chart_dist(a, b)
        if -tol <= t <= 1.0 + tol and -eps / elen <= s <= 1.0 + eps / elen:
            ts.add(min(max(t, 0.0), 1.0))
    return sorted(ts)


def _first_gap(coords, p, q, eps):
    ts = _boundary_params(coords, p, q, eps)
    for t0, t1 in zip(ts, ts[1:]):
        if t1 - t0 <= 0.0:
            continue
        mid = lerp(p, q, (t0 + t1) / 2)
        if classify_coords(coords, mid, eps) is Containment.EXTERIOR:
            return t0, t1
    return None


def sees(A: GeodesicPolygon, p: Point, q: Point, eps: float = EPS_ON) -> bool:
    """True iff the segment [p, q] stays inside A (exact crossing enumeration)."""
    _require_inside(A, p, q, eps=eps)
    if chart_dist(p.uv, q.uv) <= eps:
        return True
    return _first_gap(A.coords, p.uv, q.uv, eps) is None


def gap_points(A: GeodesicPolygon, a: Point, b: Point, eps: float = EPS_ON):
    """Boundary points bounding the first stretch of [a, b] outside A, or None."""
    _require_inside(A, a, b, eps=eps)
    if chart_dist(a.uv, b.uv) <= eps:
        return None
    gap = _first_gap(A.coords, a.uv, b.uv, eps)
    if gap is None:
        return None
    return (Point(A.model, *lerp(a.uv, b.uv, gap[0])),
            Point(A.model, *lerp(a.uv, b.uv, gap[1])))


# -- stars -----------------------------------------------------------------------

@dataclass(frozen=True)
class Breakpoint:
    theta: float        # chart direction angle at the center
    t_exit: float       # chart distance from the center to the first exit
    edge: int           # boundary edge index realizing the exit


@dataclass(frozen=True)
class RadialStar:
    center: Point
    breakpoints: tuple[Breakpoint, ...]
    polygon: GeodesicPolygon

    @property
    def region(self) -> Region:
        return Region(self.polygon)


def _ccw_angle(d0, d) -> float:
    """Counterclockwise chart angle from direction d0 to direction d, in [0, 2pi)."""
    a = math.atan2(d0[0] * d[1] - d0[1] * d[0], d0[0] * d[0] + d0[1] * d[1])
    return a + 2.0 * math.pi if a < 0.0 else a


def _cone(coords, c, eps):
    """Sweep cone at c: (excluded edges, start direction, span, vertex index or None)."""
    n = len(coords)
    for k in range(n):
        if chart_dist(coords[k], c) <= eps:
            nxt, prv = coords[(k + 1) % n], coords[k - 1]
            d0 = (nxt[0] - c[0], nxt[1] - c[1])
            span = _ccw_angle(d0, (prv[0] - c[0], prv[1] - c[1]))
            return {k, (k - 1) % n}, d0, span, k
    for k in range(n):
        a, b = coords[k], coords[(k + 1) % n]
        if abs(cross(a, b, c)) / chart_dist(a, b) <= eps:
            t = ((c[0] - a[0]) * (b[0] - a[0]) + (c[1] - a[1]) * (b[1] - a[1])) / chart_dist(a, b) ** 2
            if 0.0 <= t <= 1.0:
                return {k}, (b[0] - c[0], b[1] - c[1]), math.pi, None
    d0 = (coords[0][0] - c[0], coords[0][1] - c[1])
    return set(), d0, 2.0 * math.pi, None


def _first_hit(coords, c, d, excluded):
    """Nearest boundary edge met by the open ray c + t d, t > 0."""
    n = len(coords)
    best_t, best_e = math.inf, None
    far = (c[0] + d[0], c[1] + d[1])
    for e in range(n):
        if e in excluded:
            continue
        params = line_params(c, far, coords[e], coords[(e + 1) % n])
        if params is None:
            continue
        t, s = params
        if t > 1e-14 and -1e-12 <= s <= 1.0 + 1e-12 and t < best_t:
            best_t, best_e = t, e
    return best_e


def _on_edge_line(coords, e, c, d, event_vertices):
    """Point where the ray line c + t d meets the supporting line of edge e."""
    n = len(coords)
    i, j = e, (e + 1) % n
    if i in event_vertices:
        return coords[i]
    if j in event_vertices:
        return coords[j]
    a, b = coords[i], coords[j]
    params = line_params(c, (c[0] + d[0], c[1] + d[1]), a, b)
    return lerp(c, (c[0] + d[0], c[1] + d[1]), params[0])


def star(A: GeodesicPolygon, p: Point, eps: float = EPS_ON) -> RadialStar:
    """The star of A at p: every point of A that p sees, as a polygon.

    Angular sweep about p.  Events are the directions of the vertices; between
    consecutive events the first edge met by a ray does not change, so it is
    found once at the mid-direction and the star boundary follows that edge
    between the two event rays.  A center on the boundary restricts the sweep
    to the interior cone there.
    """
    _require_inside(A, p, eps=eps)
    coords = A.coords
    n = len(coords)
    c = p.uv
    excluded, d0, span, center_vertex = _cone(coords, c, eps)
    base = math.atan2(d0[1], d0[0])

    events: list[tuple[float, list[int]]] = []
    for j in range(n):
        if j == center_vertex:
            continue
        d = (coords[j][0] - c[0], coords[j][1] - c[1])
        if math.hypot(*d) <= eps:
            continue
        phi = _ccw_angle(d0, d)
        if phi > span + 1e-12 and span < 2.0 * math.pi:
            continue
        if phi > span:
            phi = span
        events.append((phi, [j]))
    events.append((0.0, []))
    events.append((span, []))
    events.sort(key=lambda x: x[0])
    merged: list[tuple[float, list[int]]] = []
    for phi, js in events:
        if merged and phi - merged[-1][0] <= 1e-12:
            merged[-1][1].extend(js)
        else:
            merged.append((phi, list(js)))
    if span >= 2.0 * math.pi:
        # the sweep closes on itself: vertex 0 marks both ends
        merged[0][1].append(0)
        merged[-1][1].append(0)

    def direction(phi, js):
        if js:
            v = coords[js[0]]
            return (v[0] - c[0], v[1] - c[1])
        return (math.cos(base + phi), math.sin(base + phi))

    pts = [c] if span < 2.0 * math.pi else []
    breakpoints = []
    for (phi0, js0), (phi1, js1) in zip(merged, merged[1:]):
        mid = (phi0 + phi1) / 2
        e = _first_hit(coords, c, (math.cos(base + mid), math.sin(base + mid)), excluded)
        if e is None:
            raise GeometryError("star sweep found no exit edge; is the polygon valid?")
        p0 = _on_edge_line(coords, e, c, direction(phi0, js0), js0)
        p1 = _on_edge_line(coords, e, c, direction(phi1, js1), js1)
        pts.extend([p0, p1])
        breakpoints.append(Breakpoint(base + phi0, chart_dist(c, p0), e))
        breakpoints.append(Breakpoint(base + phi1, chart_dist(c, p1), e))
    region = region_from_coords(A.model, pts)
    if region.is_empty:
        raise GeometryError("degenerate star")
    return RadialStar(p, tuple(breakpoints), region.polygon)


# -- extreme points and kernels ----------------------------------------------

@dataclass(frozen=True)
class ExtremeSet:
    indices: tuple[int, ...]
    angles: tuple[float, ...]        # metric interior angle at every vertex

    def points(self, A: GeodesicPolygon) -> list[Point]:
        return [A.vertices[i] for i in self.indices]

    def __len__(self):
        return len(self.indices)


def extreme_points(A: GeodesicPolygon) -> ExtremeSet:
    angles = tuple(interior_angle(A, i) for i in range(len(A)))
    idx = tuple(i for i, a in enumerate(angles) if a < math.pi - EPS_ANGLE)
    return ExtremeSet(idx, angles)


def kernel_extreme(A: GeodesicPolygon, eps: float = EPS_ON) -> Region:
    """A intersected with the stars of its extreme points."""
    B = Region(A)
    for i in extreme_points(A).indices:
        B = intersect_regions(B, star(A, A.vertices[i], eps).region, eps)
        if B.is_empty:
            return EMPTY
    return B


def kernel_halfplane(A: GeodesicPolygon, eps: float = EPS_ON) -> Region:
    """Intersection of the inner half-planes of all edges of A."""
    pts = A.coords
    us = [u for u, _ in pts]
    vs = [v for _, v in pts]
    pad = 1.0 + max(max(us) - min(us), max(vs) - min(vs))
    out = [(min(us) - pad, min(vs) - pad), (max(us) + pad, min(vs) - pad),
           (max(us) + pad, max(vs) + pad), (min(us) - pad, max(vs) + pad)]
    n = len(pts)
    for i in range(n):
        out = clip_coords(out, pts[i], pts[(i + 1) % n], eps)
        if len(out) < 3:
            return EMPTY
    return region_from_coords(A.model, out)


def is_starshaped(A: GeodesicPolygon, eps: float = EPS_ON) -> tuple[bool, Point | None]:
    K = kernel_halfplane(A, eps)
    if K.is_empty:
        return False, None
    return True, Point(A.model, *centroid(K.polygon.coords))


def farthest_extreme(A: GeodesicPolygon, p: Point, eps: float = EPS_ON) -> Point:
    """Vertex of A farthest from the exterior point p (lowest index on ties)."""
    _same_model(A, p)
    if classify_coords(A.coords, p.uv, eps) is not Containment.EXTERIOR:
        raise PreconditionError("farthest_extreme needs a point outside the polygon")
    best, best_d = None, -1.0
    for v in A.vertices:
        d = chart_distance(A.model, p.uv, v.uv)
        if d > best_d * (1.0 + 1e-12) + 1e-15:
            best, best_d = v, d
    return best


# -- rays from exterior points ---------------------------------------------------

def ray_hits(A: GeodesicPolygon, x: Point, theta: float, eps: float = EPS_ON):
    """First point of A on the ray from x at chart direction theta, with its distance."""
    _same_model(A, x)
    coords = A.coords
    if classify_coords(coords, x.uv, eps) is not Containment.EXTERIOR:
        return x, 0.0
    c = x.uv
    far = (c[0] + math.cos(theta), c[1] + math.sin(theta))
    best = math.inf
    n = len(coords)
    for i in range(n):
        a, b = coords[i], coords[(i + 1) % n]
        params = line_params(c, far, a, b)
        if params is None:
            if abs(cross(c, far, a)) <= eps and abs(cross(c, far, b)) <= eps:
                for e in (a, b):
                    t = (e[0] - c[0]) * (far[0] - c[0]) + (e[1] - c[1]) * (far[1] - c[1])
                    if t >= 0.0:
                        best = min(best, t)
            continue
        t, s = params
        elen = chart_dist(a, b)
        if t >= 0.0 and -eps / elen <= s <= 1.0 + eps / elen:
            best = min(best, t)
    if best is math.inf:
        return None
    hit = lerp(c, far, best)
    if not in_domain(A.model, *hit):
        return None
    return Point(A.model, *hit), chart_distance(A.model, c, hit)


def ray_condition(A: GeodesicPolygon, x: Point, eps: float = EPS_ON) -> tuple[bool, float | None]:
    """Is there a ray from the exterior point x meeting A?  Returns a witness direction.

    Taken literally this always holds for a non-empty A: aiming at any vertex
    works.  The search still goes through ``ray_hits`` so a broken ray caster
    would show up here.
    """
    _same_model(A, x)
    if classify_coords(A.coords, x.uv, eps) is not Containment.EXTERIOR:
        raise PreconditionError("ray_condition is defined for exterior points")
    for v in A.vertices:
        theta = math.atan2(v.v - x.v, v.u - x.u)
        if ray_hits(A, x, theta, eps) is not None:
            return True, theta
    return False, None


# -- certification -----------------------------------------------------------------

@dataclass
class CrossChecks:
    halfplane_kernel: Region
    hausdorff_B_vs_halfplane: float
    oracle_agreement: bool
    oracle_points: int
    oracle_violation: float


@dataclass
class CertReport:
    extreme: ExtremeSet
    B: Region
    ray_condition_checked: list[tuple[Point, bool]]
    starshaped: bool
    kernel: Region
    cross_checks: CrossChecks
    flags: list[str] = field(default_factory=list)

    @property
    def ray_condition_vacuous(self) -> bool:
        # every non-empty compact set passes the literal ray condition
        return True


def exterior_probes(A: GeodesicPolygon, n_probes: int, rng: np.random.Generator,
                    eps: float = EPS_ON) -> list[Point]:
    """Exterior points drawn uniformly from an annulus around the polygon."""
    pts = np.array(A.coords)
    c = pts.mean(axis=0)
    R = float(np.max(np.hypot(*(pts - c).T)))
    out: list[Point] = []
    for _ in range(200 * max(n_probes, 1)):
        if len(out) >= n_probes:
            break
        r = math.sqrt(rng.uniform((0.5 * R) ** 2, (1.5 * R) ** 2))
        t = rng.uniform(0.0, 2.0 * math.pi)
        uv = (c[0] + r * math.cos(t), c[1] + r * math.sin(t))
        if not in_domain(A.model, *uv):
            continue
        if classify_coords(A.coords, uv, eps) is Containment.EXTERIOR:
            out.append(Point(A.model, *uv))
    return out


def certify(A: GeodesicPolygon, n_probes: int = 32, eps: float = EPS_ON, seed: int = 0,
            resolution: int = oracle.DEFAULT_RESOLUTION,
            perturb: Callable[[Region, GeodesicPolygon], Region] | None = None) -> CertReport:
    """Starshapedness certificate from extreme-point stars plus the ray condition.

    ``perturb`` rewrites the star-intersection result before any checks; the
    verification harness uses it to plant faults.
    """
    rng = np.random.default_rng(seed)
    E = extreme_points(A)
    B = kernel_extreme(A, eps)
    if perturb is not None:
        B = perturb(B, A)
    probes = []
    for x in exterior_probes(A, n_probes, rng, eps):
        ok, _ = ray_condition(A, x, eps)
        probes.append((x, ok))
    starshaped = (not B.is_empty) and all(ok for _, ok in probes)
    K = kernel_halfplane(A, eps)
    samples, step = oracle.brute_kernel(A, resolution)
    cmp = oracle.compare(B, samples, step)
    flags = []
    if B.multi_component:
        flags.append("multi-component")
    return CertReport(
        extreme=E,
        B=B,
        ray_condition_checked=probes,
        starshaped=starshaped,
        kernel=B if starshaped else EMPTY,
        cross_checks=CrossChecks(
            halfplane_kernel=K,
            hausdorff_B_vs_halfplane=hausdorff(B, K),
            oracle_agreement=cmp.agrees,
            oracle_points=len(samples),
            oracle_violation=cmp.max_violation,
        ),
        flags=flags,
    )
