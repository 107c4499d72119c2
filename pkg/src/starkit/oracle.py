"""Brute-force references by dense sampling.

Nothing here calls the star sweep, the half-plane clipper or the polygon
intersection code; the only shared primitive is point containment.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .models import ModelId
from .regions import GeodesicPolygon, Region, boundary_samples, classify_array

DEFAULT_RESOLUTION = 64
DEFAULT_STEPS = 256
DEFAULT_DIRS = 1024


@dataclass(frozen=True)
class SampleGrid:
    model: ModelId
    resolution: int
    points: np.ndarray      # (N, 2) chart points classified interior
    step: float             # larger of the two cell sides


def sample_grid(A: GeodesicPolygon, resolution: int = DEFAULT_RESOLUTION) -> SampleGrid:
    """Interior cell centers of a uniform chart grid over A's bounding box."""
    pts = A.array()
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    cell = (hi - lo) / resolution
    us = lo[0] + (np.arange(resolution) + 0.5) * cell[0]
    vs = lo[1] + (np.arange(resolution) + 0.5) * cell[1]
    grid = np.stack(np.meshgrid(us, vs, indexing="xy"), axis=-1).reshape(-1, 2)
    inside = classify_array(pts, grid) == 1
    return SampleGrid(A.model, resolution, grid[inside], float(cell.max()))


def brute_sees(A: GeodesicPolygon, p, q, n_steps: int = DEFAULT_STEPS) -> bool:
    p = np.asarray(getattr(p, "uv", p), dtype=float)
    q = np.asarray(getattr(q, "uv", q), dtype=float)
    t = np.linspace(0.0, 1.0, n_steps + 1)[:, None]
    return bool((classify_array(A.array(), p + t * (q - p)) != -1).all())


def brute_star(A: GeodesicPolygon, p, n_dirs: int = DEFAULT_DIRS,
               n_steps: int = DEFAULT_STEPS) -> np.ndarray:
    """Samples visible from p: march each of n_dirs rays until it first leaves A."""
    coords = A.array()
    p = np.asarray(getattr(p, "uv", p), dtype=float)
    reach = float(np.max(np.hypot(*(coords - p).T)))
    theta = 2.0 * math.pi * np.arange(n_dirs) / n_dirs
    dirs = np.stack([np.cos(theta), np.sin(theta)], axis=1)
    r = reach * np.arange(1, n_steps + 1) / n_steps
    pts = p + dirs[:, None, :] * r[None, :, None]
    cls = classify_array(coords, pts.reshape(-1, 2)).reshape(n_dirs, n_steps)
    outside = cls == -1
    first_out = np.where(outside.any(axis=1), outside.argmax(axis=1), n_steps)
    keep = np.arange(n_steps)[None, :] < first_out[:, None]
    return np.vstack([p[None, :], pts[keep]])


@njit(cache=True)
def _sees_all(q, targets, a, b):
    """keep[i]: segment q_i -> t crosses no edge (a_k, b_k) properly, for every target t."""
    tol = 1e-12
    keep = np.ones(q.shape[0], dtype=np.bool_)
    for i in range(q.shape[0]):
        qx, qy = q[i, 0], q[i, 1]
        for j in range(targets.shape[0]):
            tx, ty = targets[j, 0], targets[j, 1]
            dx, dy = tx - qx, ty - qy
            hidden = False
            for k in range(a.shape[0]):
                ax, ay, bx, by = a[k, 0], a[k, 1], b[k, 0], b[k, 1]
                o1 = dx * (ay - qy) - dy * (ax - qx)
                o2 = dx * (by - qy) - dy * (bx - qx)
                if not ((o1 > tol and o2 < -tol) or (o1 < -tol and o2 > tol)):
                    continue
                ex, ey = bx - ax, by - ay
                o3 = ex * (qy - ay) - ey * (qx - ax)
                o4 = ex * (ty - ay) - ey * (tx - ax)
                if (o3 > tol and o4 < -tol) or (o3 < -tol and o4 > tol):
                    hidden = True
                    break
            if hidden:
                keep[i] = False
                break
    return keep


def brute_kernel(A: GeodesicPolygon, resolution: int = DEFAULT_RESOLUTION,
                 n_boundary_targets: int | None = None) -> tuple[np.ndarray, float]:
    """Grid points that see every vertex and every boundary sample of A.

    Returns the kept points and the grid step.  A grid point sees a target when
    the segment between them crosses no edge of A; targets sit on the boundary,
    so touching the boundary at the target does not count as crossing.
    """
    grid = sample_grid(A, resolution)
    coords = A.array()
    n = len(coords)
    if n_boundary_targets is None:
        n_boundary_targets = 4 * n * 16
    targets = np.array(boundary_samples(A.coords, n_boundary_targets))
    cand = grid.points
    keep = _sees_all(cand, targets, coords, np.roll(coords, -1, axis=0))
    return cand[keep], grid.step


@dataclass(frozen=True)
class Comparison:
    max_violation: float
    agrees: bool


def _inside_mask(coords: np.ndarray, pts: np.ndarray) -> np.ndarray:
    return classify_array(coords, pts, 0.0) != -1


def _dist_to_boundary(coords: np.ndarray, pts: np.ndarray) -> np.ndarray:
    a = coords
    d = np.roll(coords, -1, axis=0) - a
    n2 = (d ** 2).sum(axis=1)
    x, y = pts[:, 0:1], pts[:, 1:2]
    t = np.clip(((x - a[:, 0]) * d[:, 0] + (y - a[:, 1]) * d[:, 1]) / n2, 0.0, 1.0)
    return np.hypot(x - a[:, 0] - t * d[:, 0], y - a[:, 1] - t * d[:, 1]).min(axis=1)


def compare(region: Region, pts: np.ndarray, grid_step: float) -> Comparison:
    """Chart-distance agreement between an exact region and oracle samples.

    Oracle points must lie in the region, and every probe at least one grid
    step deep inside the region must have an oracle point nearby.  Agreement
    means the worst violation is at most two grid steps.
    """
    pts = np.asarray(pts, dtype=float).reshape(-1, 2)
    if region.is_empty:
        return Comparison(0.0 if len(pts) == 0 else math.inf, len(pts) == 0)
    coords = region.polygon.array()
    worst = 0.0
    if len(pts):
        outside = ~_inside_mask(coords, pts)
        if outside.any():
            worst = float(_dist_to_boundary(coords, pts[outside]).max())
    lo, hi = coords.min(axis=0), coords.max(axis=0)
    h = grid_step / 2
    us = np.arange(lo[0] + h / 2, hi[0], h)
    vs = np.arange(lo[1] + h / 2, hi[1], h)
    if len(us) and len(vs):
        probes = np.stack(np.meshgrid(us, vs), axis=-1).reshape(-1, 2)
        probes = probes[_inside_mask(coords, probes)]
        probes = probes[_dist_to_boundary(coords, probes) >= grid_step]
        if len(probes):
            if len(pts) == 0:
                worst = math.inf
            else:
                near = np.full(len(probes), np.inf)
                for chunk in np.array_split(pts, max(1, len(pts) // 512)):
                    dd = np.hypot(probes[:, None, 0] - chunk[None, :, 0], probes[:, None, 1] - chunk[None, :, 1])
                    near = np.minimum(near, dd.min(axis=1))
                worst = max(worst, float(near.max()))
    return Comparison(worst, worst <= 2 * grid_step)


def brute_is_extreme(A: GeodesicPolygon, i: int, n_dirs: int = 2048, n_steps: int = 32) -> bool:
    """Search for a short segment inside A with vertex i in its relative interior."""
    coords = A.array()
    v = coords[i]
    edge = np.hypot(*(np.roll(coords, -1, axis=0) - coords).T).min()
    delta = 1e-3 * edge
    theta = math.pi * np.arange(n_dirs) / n_dirs
    dirs = np.stack([np.cos(theta), np.sin(theta)], axis=1)
    s = np.linspace(-delta, delta, 2 * n_steps + 1)
    s = s[s != 0.0]
    pts = v + dirs[:, None, :] * s[None, :, None]
    cls = classify_array(coords, pts.reshape(-1, 2), eps=1e-6 * delta).reshape(n_dirs, -1)
    return not bool((cls != -1).all(axis=1).any())
