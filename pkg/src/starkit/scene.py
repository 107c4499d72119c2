"""Scene files and random polygon generators.

A scene is a small UTF-8 text document::

    model: euclidean
    polygon: [[0, 0], [2, 0], [2, 1], [1, 1], [1, 2], [0, 2]]
    probes: {a: [1.8, 0.5], b: [0.5, 1.8]}
    seed: 7

``model`` must be on the first line and ``polygon`` on the second; the other
keys are optional.  Blank lines and ``#`` comments are ignored.
"""
from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field

import numpy as np

from .models import DomainError, ModelId, OverlapError, Point, _hit
from .regions import GeodesicPolygon, signed_area, validate


class SceneError(ValueError):
    pass


class SceneParseError(SceneError):
    def __init__(self, line: int, col: int, msg: str):
        super().__init__(f"line {line}, column {col}: {msg}")
        self.line, self.col = line, col


class SceneValidationError(SceneError):
    def __init__(self, violations: list[str]):
        super().__init__("invalid polygon: " + "; ".join(violations))
        self.violations = violations


@dataclass(frozen=True)
class Scene:
    model: ModelId
    polygon: GeodesicPolygon
    probes: dict[str, Point] = field(default_factory=dict)
    seed: int | None = None


_KEY = re.compile(r"^\s*([A-Za-z_]+)\s*:\s*(.*?)\s*$")
_BARE_NAME = re.compile(r"([{,]\s*)([A-Za-z_][\w\-]*)(\s*:)")


def _pair(value, line, col, what):
    if (not isinstance(value, list) or len(value) != 2
            or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in value)):
        raise SceneParseError(line, col, f"{what} must be a [u, v] pair of numbers")
    return float(value[0]), float(value[1])


def _json(text, line, col0):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SceneParseError(line, col0 + exc.pos, exc.msg) from None


def load_scene(text: str) -> Scene:
    entries = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        m = _KEY.match(raw)
        if not m:
            raise SceneParseError(lineno, 1, "expected 'key: value'")
        entries.append((lineno, m.group(1), m.group(2), m.start(2) + 1))
    if len(entries) < 2:
        raise SceneParseError(entries[-1][0] if entries else 1, 1, "scene needs 'model' and 'polygon' lines")
    (l1, k1, v1, c1), (l2, k2, v2, c2) = entries[:2]
    if k1 != "model":
        raise SceneParseError(l1, 1, "first entry must be 'model'")
    try:
        model = ModelId(v1)
    except ValueError:
        raise SceneParseError(l1, c1, f"unknown model {v1!r}") from None
    if k2 != "polygon":
        raise SceneParseError(l2, 1, "second entry must be 'polygon'")
    raw_poly = _json(v2, l2, c2)
    if not isinstance(raw_poly, list):
        raise SceneParseError(l2, c2, "polygon must be a list of [u, v] pairs")
    coords = [_pair(p, l2, c2, "polygon vertex") for p in raw_poly]
    if len(coords) < 3:
        raise SceneValidationError(["a polygon needs at least three vertices"])
    probes: dict[str, Point] = {}
    seed = None
    for line, key, value, col in entries[2:]:
        if key == "probes":
            raw = _json(_BARE_NAME.sub(r'\1"\2"\3', value), line, col)
            if not isinstance(raw, dict):
                raise SceneParseError(line, col, "probes must be a {name: [u, v]} map")
            for name, uv in raw.items():
                try:
                    probes[name] = Point(model, *_pair(uv, line, col, f"probe {name}"))
                except DomainError as exc:
                    raise SceneValidationError([f"probe {name}: {exc}"]) from None
        elif key == "seed":
            try:
                seed = int(value)
            except ValueError:
                raise SceneParseError(line, col, "seed must be an integer") from None
        else:
            raise SceneParseError(line, 1, f"unknown key {key!r}")
    try:
        polygon = GeodesicPolygon.from_coords(model, coords)
    except DomainError as exc:
        raise SceneValidationError([str(exc)]) from None
    problems = validate(polygon)
    if problems:
        raise SceneValidationError(problems)
    return Scene(model, polygon, probes, seed)


def _num(x: float) -> str:
    # repr is the shortest string that round-trips exactly
    return repr(float(x))


def save_scene(scene: Scene) -> str:
    poly = ", ".join(f"[{_num(u)}, {_num(v)}]" for u, v in scene.polygon.coords)
    lines = [f"model: {scene.model.value}", f"polygon: [{poly}]"]
    if scene.probes:
        body = ", ".join(f"{name}: [{_num(p.u)}, {_num(p.v)}]" for name, p in scene.probes.items())
        lines.append(f"probes: {{{body}}}")
    if scene.seed is not None:
        lines.append(f"seed: {scene.seed}")
    return "\n".join(lines) + "\n"


def read_scene(path) -> Scene:
    with open(path, encoding="utf-8") as fh:
        return load_scene(fh.read())


# -- generators ------------------------------------------------------------------

KLEIN_RADIUS_CAP = 0.85
MAX_ATTEMPTS = 50


def starshaped_instance(model: ModelId | str, n_vertices: int, seed: int):
    """Random radial polygon and the center it is star-shaped about."""
    model = ModelId(model)
    if n_vertices < 3:
        raise ValueError("need at least three vertices")
    rng = np.random.default_rng(seed)
    if model is ModelId.KLEIN:
        c_max, r_min, r_max = 0.2, 0.15, KLEIN_RADIUS_CAP - 0.2
    else:
        c_max, r_min, r_max = 0.5, 0.3, 1.0
    for _ in range(MAX_ATTEMPTS):
        rho, phi = c_max * math.sqrt(rng.uniform()), rng.uniform(0, 2 * math.pi)
        c = (rho * math.cos(phi), rho * math.sin(phi))
        theta = np.sort(rng.uniform(0.0, 2 * math.pi, n_vertices))
        gaps = np.diff(np.append(theta, theta[0] + 2 * math.pi))
        # a gap of pi or more would leave the center on or outside the boundary
        if gaps.max() >= 0.95 * math.pi or gaps.min() < 1e-3:
            continue
        r = rng.uniform(r_min, r_max, n_vertices)
        coords = [(c[0] + ri * math.cos(t), c[1] + ri * math.sin(t)) for ri, t in zip(r, theta)]
        poly = GeodesicPolygon.from_coords(model, coords)
        if not validate(poly):
            return poly, Point(model, *c)
    raise RuntimeError(f"no valid star-shaped polygon after {MAX_ATTEMPTS} attempts")


def random_starshaped(model: ModelId | str, n_vertices: int, seed: int) -> GeodesicPolygon:
    return starshaped_instance(model, n_vertices, seed)[0]


def _untangle(pts: list, max_swaps: int) -> bool:
    """2-opt: reverse the chain between two crossing edges until none cross."""
    n = len(pts)
    for _ in range(max_swaps):
        swapped = False
        for i in range(n):
            for j in range(i + 2, n):
                if i == 0 and j == n - 1:
                    continue
                a, b = pts[i], pts[i + 1]
                c, d = pts[j], pts[(j + 1) % n]
                try:
                    crossing = _hit(a, b, c, d, 1e-12, 1.0) is not None
                except OverlapError:
                    crossing = True
                if crossing:
                    pts[i + 1:j + 1] = pts[i + 1:j + 1][::-1]
                    swapped = True
        if not swapped:
            return True
    return False


def random_simple(model: ModelId | str, n_vertices: int, seed: int,
                  max_retries: int = 20) -> GeodesicPolygon:
    """Random simple polygon obtained by uncrossing random points with 2-opt moves."""
    model = ModelId(model)
    if n_vertices < 3:
        raise ValueError("need at least three vertices")
    seq = np.random.SeedSequence(seed)
    for child in seq.spawn(max_retries):
        rng = np.random.default_rng(child)
        if model is ModelId.KLEIN:
            r = KLEIN_RADIUS_CAP * np.sqrt(rng.uniform(size=n_vertices))
            t = rng.uniform(0, 2 * math.pi, n_vertices)
            pts = list(zip(r * np.cos(t), r * np.sin(t)))
        else:
            pts = [tuple(p) for p in rng.uniform(-1.0, 1.0, (n_vertices, 2))]
        pts = [(float(u), float(v)) for u, v in pts]
        if not _untangle(pts, max_swaps=4 * n_vertices ** 2):
            continue
        if signed_area(pts) < 0:
            pts.reverse()
        poly = GeodesicPolygon.from_coords(model, pts)
        if not validate(poly):
            return poly
    raise RuntimeError(f"random_simple failed after {max_retries} retries")
