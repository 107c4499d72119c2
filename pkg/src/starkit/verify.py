"""Monte-Carlo campaign checking the extreme-star kernel against independent references.

Every trial draws a polygon (alternating radial star-shaped and unconstrained
simple polygons), certifies it, and cross-checks the result against the
half-plane kernel and the sampling oracle.  Any mismatch makes the trial a
counterexample candidate; nothing is suppressed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import oracle
from .models import Isometry, ModelId, Point
from .regions import Containment, GeodesicPolygon, Region, classify_coords, interior_angle, region_from_coords
from .scene import random_simple, random_starshaped
from .starshape import certify, sees

HAUSDORFF_TOL = 1e-6
ANGLE_TOL = 1e-7
CONVEXITY_PAIRS = 100
# the oracle grid is refined up to this factor before an emptiness mismatch counts
MAX_REFINEMENT = 16
FAULTS = ("shift-kernel",)


@dataclass
class TrialResult:
    index: int
    seed: int
    model: ModelId
    generator: str
    n_vertices: int
    starshaped: bool
    b_vertices: int
    halfplane_vertices: int
    hausdorff: float
    oracle_agrees: bool
    oracle_violation: float
    oracle_points: int
    emptiness_resolution: int
    reasons: list[str] = field(default_factory=list)

    def line(self) -> str:
        return (f"trial={self.index} seed={self.seed} model={self.model.value} gen={self.generator} "
                f"n={self.n_vertices} starshaped={str(self.starshaped).lower()} "
                f"B_vertices={self.b_vertices} halfplane_vertices={self.halfplane_vertices} "
                f"hausdorff={self.hausdorff:.3e} oracle={'agree' if self.oracle_agrees else 'disagree'} "
                f"oracle_points={self.oracle_points} oracle_violation={self.oracle_violation:.3e} "
                f"emptiness_resolution={self.emptiness_resolution} "
                f"flags={','.join(self.reasons) or '-'}")


@dataclass
class VerifyReport:
    trials: list[TrialResult]

    @property
    def candidates(self) -> list[TrialResult]:
        return [t for t in self.trials if t.reasons]

    @property
    def max_hausdorff(self) -> float:
        vals = [t.hausdorff for t in self.trials if t.b_vertices or t.halfplane_vertices]
        return max(vals, default=0.0)

    def text(self) -> str:
        lines = [t.line() for t in self.trials]
        n_star = sum(t.starshaped for t in self.trials)
        lines.append(f"summary trials={len(self.trials)} starshaped={n_star} "
                     f"max_hausdorff={self.max_hausdorff:.3e} candidates={len(self.candidates)}")
        for t in self.candidates:
            lines.append(f"candidate trial={t.index} seed={t.seed} reasons={','.join(t.reasons)}")
        return "\n".join(lines) + "\n"


def shift_kernel(B: Region, A: GeodesicPolygon) -> Region:
    """Planted fault: move the kernel half a unit; conjure one when there is none."""
    if B.is_empty:
        c = np.array(A.coords).mean(axis=0)
        r = 0.01
        return region_from_coords(A.model, [(c[0] + r, c[1]), (c[0], c[1] + r), (c[0] - r, c[1] - r)])
    if A.model is ModelId.KLEIN:
        phi = Isometry.klein_translation(0.5)
        return region_from_coords(A.model, [phi.apply_uv(p) for p in B.polygon.coords])
    return region_from_coords(A.model, [(u + 0.5, v) for u, v in B.polygon.coords])


def _sample_convex(coords, k: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform samples from a fan triangulation (exact for convex polygons)."""
    o = np.array(coords[0])
    tris = [(o, np.array(coords[i]), np.array(coords[i + 1])) for i in range(1, len(coords) - 1)]
    areas = np.array([abs((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])) / 2
                      for a, b, c in tris])
    pick = rng.choice(len(tris), size=k, p=areas / areas.sum())
    r1, r2 = rng.uniform(size=k), rng.uniform(size=k)
    flip = r1 + r2 > 1
    r1[flip], r2[flip] = 1 - r1[flip], 1 - r2[flip]
    return np.array([tris[i][0] + a * (tris[i][1] - tris[i][0]) + b * (tris[i][2] - tris[i][0])
                     for i, a, b in zip(pick, r1, r2)])


def kernel_is_convex(K: Region, rng: np.random.Generator, n_pairs: int = CONVEXITY_PAIRS) -> bool:
    if K.is_empty:
        return True
    P = K.polygon
    if any(interior_angle(P, i) > math.pi + ANGLE_TOL for i in range(len(P))):
        return False
    pts = _sample_convex(P.coords, 2 * n_pairs, rng)
    coords = P.coords
    for x, y in zip(pts[:n_pairs], pts[n_pairs:]):
        if (classify_coords(coords, x) is Containment.EXTERIOR
                or classify_coords(coords, y) is Containment.EXTERIOR):
            return False
        if not sees(P, Point(P.model, *x), Point(P.model, *y)):
            return False
    return True


def oracle_nonempty(A: GeodesicPolygon, resolution: int) -> tuple[bool, int]:
    """Does the brute-force kernel find any point, refining the grid by doubling?

    Starts at ``resolution`` and stops at ``resolution * MAX_REFINEMENT``;
    returns the verdict and the last resolution tried.
    """
    res = resolution
    while True:
        pts, _ = oracle.brute_kernel(A, res)
        if len(pts) or res >= resolution * MAX_REFINEMENT:
            return bool(len(pts)), res
        res *= 2


def run_trial(index: int, seed: int, model: ModelId, generator: str, n: int,
              resolution: int, fault: str | None = None) -> TrialResult:
    if generator == "starshaped":
        A = random_starshaped(model, n, seed)
    else:
        A = random_simple(model, n, seed)
    perturb = shift_kernel if fault == "shift-kernel" else None
    cert = certify(A, seed=seed, resolution=resolution, perturb=perturb)
    B, K = cert.B, cert.cross_checks.halfplane_kernel
    reasons = list(cert.flags)
    h = cert.cross_checks.hausdorff_B_vs_halfplane
    if (not B.is_empty or not K.is_empty) and not h <= HAUSDORFF_TOL:
        reasons.append("hausdorff")
    if not cert.cross_checks.oracle_agreement:
        reasons.append("oracle")
    found, res = cert.cross_checks.oracle_points > 0, resolution
    if not found and not B.is_empty:
        # a kernel thinner than a grid cell is invisible at the base resolution
        found, res = oracle_nonempty(A, resolution)
    if found == B.is_empty:
        reasons.append("emptiness")
    if not all(ok for _, ok in cert.ray_condition_checked):
        reasons.append("ray-condition")
    if generator == "starshaped" and not cert.starshaped:
        reasons.append("generator")
    if not kernel_is_convex(B, np.random.default_rng(seed)):
        reasons.append("kernel-convexity")
    return TrialResult(
        index=index, seed=seed, model=model, generator=generator, n_vertices=n,
        starshaped=cert.starshaped,
        b_vertices=0 if B.is_empty else len(B.polygon),
        halfplane_vertices=0 if K.is_empty else len(K.polygon),
        hausdorff=h, oracle_agrees=cert.cross_checks.oracle_agreement,
        oracle_violation=cert.cross_checks.oracle_violation,
        oracle_points=cert.cross_checks.oracle_points,
        emptiness_resolution=res, reasons=reasons,
    )


def run_campaign(trials: int, seed: int, models: list[ModelId], nmin: int = 5, nmax: int = 24,
                 resolution: int = oracle.DEFAULT_RESOLUTION, fault: str | None = None,
                 progress=None) -> VerifyReport:
    if trials < 1:
        raise ValueError("need at least one trial")
    if not 3 <= nmin <= nmax:
        raise ValueError("need 3 <= nmin <= nmax")
    results = []
    for i, child in enumerate(np.random.SeedSequence(seed).spawn(trials)):
        trial_seed = int(child.generate_state(1)[0])
        n = int(np.random.default_rng(child).integers(nmin, nmax + 1))
        # even trials are star-shaped by construction, odd ones unconstrained
        generator = "starshaped" if i % 2 == 0 else "simple"
        model = models[(i // 2) % len(models)]
        results.append(run_trial(i, trial_seed, model, generator, n, resolution, fault))
        if progress is not None:
            progress(results[-1])
    return VerifyReport(results)
