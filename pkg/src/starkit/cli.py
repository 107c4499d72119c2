"""Command-line driver.

Exit codes: 0 success, 1 verification found counterexample candidates,
2 unreadable or invalid input, 3 query precondition violated.
"""
from __future__ import annotations

import argparse
import sys
import time

from . import oracle
from .models import GeometryError, ModelId, Point
from .regions import Region, hausdorff
from .render import LAYERS, RenderSpec, build_overlays, render_svg
from .scene import SceneError, read_scene
from .starshape import PreconditionError, certify, extreme_points, kernel_extreme, kernel_halfplane, star
from .verify import FAULTS, run_campaign

EXIT_OK, EXIT_CANDIDATES, EXIT_INPUT, EXIT_PRECONDITION = 0, 1, 2, 3


def _coords(region: Region) -> list[str]:
    if region.is_empty:
        return ["EMPTY"]
    return [f"{u!r} {v!r}" for u, v in region.polygon.coords]


def _write(path, text):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def cmd_kernel(args) -> int:
    scene = read_scene(args.scene)
    A = scene.polygon
    out = []
    regions = {}
    if args.method in ("extreme", "both"):
        regions["extreme"] = kernel_extreme(A)
    if args.method in ("halfplane", "both"):
        regions["halfplane"] = kernel_halfplane(A)
    for name, R in regions.items():
        if args.method == "both":
            out.append(f"# {name}")
        out.extend(_coords(R))
    if args.method == "both":
        out.append(f"hausdorff={hausdorff(regions['extreme'], regions['halfplane']):.3e}")
    print("\n".join(out))
    if args.out:
        K = regions.get("extreme", regions.get("halfplane"))
        spec = RenderSpec(layers=("polygon", "kernel"))
        ov = build_overlays(scene, ())
        ov.kernel = K
        _write(args.out, render_svg(scene, ov, spec))
    return EXIT_OK


def _parse_point(model: ModelId, text: str) -> Point:
    try:
        u, v = (float(x) for x in text.split(","))
    except ValueError:
        raise SceneError(f"cannot parse point {text!r}; expected u,v") from None
    return Point(model, u, v)


def cmd_star(args) -> int:
    scene = read_scene(args.scene)
    p = _parse_point(scene.model, args.point)
    S = star(scene.polygon, p)
    print(f"center={p.u!r},{p.v!r} vertices={len(S.polygon)}")
    print("\n".join(_coords(S.region)))
    return EXIT_OK


def cmd_extreme(args) -> int:
    A = read_scene(args.scene).polygon
    E = extreme_points(A)
    print(f"extreme={len(E)}")
    for i in E.indices:
        u, v = A.coords[i]
        print(f"{i} {u!r} {v!r} angle={E.angles[i]:.12f}")
    return EXIT_OK


def cmd_certify(args) -> int:
    A = read_scene(args.scene).polygon
    rep = certify(A, n_probes=args.probes, seed=args.seed, resolution=args.resolution)
    cc = rep.cross_checks
    if rep.starshaped:
        print(f"STARSHAPED kernel={len(rep.kernel.polygon)} vertices")
    else:
        print("NOT STARSHAPED (B empty)" if rep.B.is_empty else "NOT STARSHAPED (ray condition failed)")
    print(f"extreme={len(rep.extreme)} indices={','.join(map(str, rep.extreme.indices))}")
    passed = sum(ok for _, ok in rep.ray_condition_checked)
    print(f"ray_probes={len(rep.ray_condition_checked)} passed={passed} vacuous={str(rep.ray_condition_vacuous).lower()}")
    print(f"B_vertices={0 if rep.B.is_empty else len(rep.B.polygon)}")
    print(f"halfplane_vertices={0 if cc.halfplane_kernel.is_empty else len(cc.halfplane_kernel.polygon)}")
    print(f"hausdorff_B_vs_halfplane={cc.hausdorff_B_vs_halfplane:.3e}")
    print(f"oracle_agreement={str(cc.oracle_agreement).lower()} oracle_points={cc.oracle_points} "
          f"oracle_violation={cc.oracle_violation:.3e}")
    print(f"flags={','.join(rep.flags) or '-'}")
    print("kernel:")
    print("\n".join(_coords(rep.kernel)))
    return EXIT_OK


def cmd_verify(args) -> int:
    models = list(ModelId) if args.model == "all" else [ModelId(args.model)]
    t0 = time.perf_counter()
    progress = None
    if args.verbose:
        progress = lambda t: print(t.line(), file=sys.stderr)  # noqa: E731
    report = run_campaign(args.trials, args.seed, models, args.nmin, args.nmax,
                          args.resolution, args.inject_bug, progress)
    text = report.text()
    sys.stdout.write(text)
    if args.out:
        _write(args.out, text)
    print(f"elapsed={time.perf_counter() - t0:.2f}s", file=sys.stderr)
    return EXIT_CANDIDATES if report.candidates else EXIT_OK


def cmd_render(args) -> int:
    scene = read_scene(args.scene)
    layers = tuple(args.layers.split(",")) if args.layers else LAYERS
    unknown = set(layers) - set(LAYERS)
    if unknown:
        raise SceneError(f"unknown layers: {', '.join(sorted(unknown))}")
    svg = render_svg(scene, spec=RenderSpec(layers=layers, size=args.size))
    if args.out:
        _write(args.out, svg)
    else:
        sys.stdout.write(svg)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="starkit", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    k = sub.add_parser("kernel", help="print the kernel polygon of a scene")
    k.add_argument("scene")
    k.add_argument("--method", choices=("extreme", "halfplane", "both"), default="extreme")
    k.add_argument("--out", help="also render polygon and kernel to this SVG file")
    k.set_defaults(func=cmd_kernel)

    s = sub.add_parser("star", help="print the star of the polygon at a point")
    s.add_argument("scene")
    s.add_argument("--point", required=True, help="u,v")
    s.set_defaults(func=cmd_star)

    e = sub.add_parser("extreme", help="list extreme vertices")
    e.add_argument("scene")
    e.set_defaults(func=cmd_extreme)

    c = sub.add_parser("certify", help="starshapedness certificate")
    c.add_argument("scene")
    c.add_argument("--probes", type=int, default=32)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--resolution", type=int, default=oracle.DEFAULT_RESOLUTION)
    c.set_defaults(func=cmd_certify)

    v = sub.add_parser("verify", help="Monte-Carlo verification campaign")
    v.add_argument("--trials", type=int, default=200)
    v.add_argument("--seed", type=int, default=42)
    v.add_argument("--model", choices=("all",) + tuple(m.value for m in ModelId), default="all")
    v.add_argument("--nmin", type=int, default=5)
    v.add_argument("--nmax", type=int, default=24)
    v.add_argument("--resolution", type=int, default=oracle.DEFAULT_RESOLUTION)
    v.add_argument("--inject-bug", choices=FAULTS, default=None)
    v.add_argument("--out", help="also write the report to this file")
    v.add_argument("--verbose", action="store_true", help="stream trial lines to stderr")
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("render", help="render a scene to SVG")
    r.add_argument("scene")
    r.add_argument("--layers", help=f"comma-separated subset of {','.join(LAYERS)}")
    r.add_argument("--size", type=int, default=480)
    r.add_argument("--out")
    r.set_defaults(func=cmd_render)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (SceneError, GeometryError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
