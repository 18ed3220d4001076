"""Command-line front end: segment, synth, and gradcheck subcommands.

Exit codes are fixed for scripting: 0 success, 1 usage/I-O/parse errors,
2 contour collapse (empty region), 3 gradient-check failure.
"""

import argparse
import os
import sys

import numpy as np

from .energy import breakdown_from_stats, shape_gradient
from .errors import EmptyRegion, PolysegError
from .evolve import EvolveConfig, init_circle, run, write_trace_csv
from .geometry import Polygon, ensure_ccw, polygon_perimeter, read_polygon, write_polygon
from .image import GRAY, RGB, Image
from .imageio import Rng, add_gaussian_noise, read_pnm, synth_shape, to_gray, write_pnm
from .color import srgb_to_lab
from .raster import SupersampledEvaluator
from .svgout import energy_svg, overlay_svg


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polyseg",
        description="Two-region segmentation by shape-gradient descent on a polygon.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    seg = sub.add_parser("segment", help="run a segmentation")
    seg.add_argument("--input", required=True, help="input PGM/PPM image")
    seg.add_argument("--mode", choices=["gray", "rgb", "lab"], default="gray")
    init = seg.add_mutually_exclusive_group(required=True)
    init.add_argument("--init-circle", metavar="CX,CY,R", help="initial circle")
    init.add_argument("--init-poly", metavar="FILE", help="initial polygon file")
    seg.add_argument("--eta", type=float, default=0.1, help="boundary-length weight")
    seg.add_argument("--dt", type=float, default=None, help="fixed step size")
    seg.add_argument(
        "--dt-adaptive",
        action="store_true",
        help="adaptive step size (default unless --dt is given)",
    )
    seg.add_argument("--dt-cap", type=float, default=1e5)
    seg.add_argument("--iters", type=int, default=500)
    seg.add_argument("--e-thr", type=float, default=1e-4)
    seg.add_argument("--vertices", type=int, default=100)
    seg.add_argument("--resample-every", type=int, default=10)
    seg.add_argument("--window", type=int, default=10)
    seg.add_argument("--snapshot-every", type=int, default=0)
    seg.add_argument("--seed", type=int, default=0)
    seg.add_argument("--out", required=True, help="output directory")
    seg.add_argument(
        "--overlay-link",
        action="store_true",
        help="reference the input raster by path instead of embedding it",
    )

    syn = sub.add_parser("synth", help="generate a synthetic test image")
    syn.add_argument("--kind", required=True, choices=["disk", "rectangle", "annulus", "two_blobs"])
    syn.add_argument("--width", type=int, required=True)
    syn.add_argument("--height", type=int, required=True)
    syn.add_argument("--fg", type=float, default=0.9)
    syn.add_argument("--bg", type=float, default=0.1)
    for name in ("cx", "cy", "r", "x0", "y0", "x1", "y1",
                 "r-inner", "r-outer", "cx1", "cy1", "r1", "cx2", "cy2", "r2"):
        syn.add_argument(f"--{name}", type=float, default=None)
    syn.add_argument("--noise-sd", type=float, default=0.0, help="Gaussian SD on 0-255 scale")
    syn.add_argument("--seed", type=int, default=0)
    syn.add_argument("--out", required=True, help="output PGM path")

    grad = sub.add_parser("gradcheck", help="finite-difference gradient validation")
    grad.add_argument("--input", required=True)
    ginit = grad.add_mutually_exclusive_group(required=True)
    ginit.add_argument("--init-circle", metavar="CX,CY,R")
    ginit.add_argument("--poly", metavar="FILE")
    grad.add_argument("--eta", type=float, default=0.0)
    grad.add_argument("--factor", type=int, default=16, choices=[2, 4, 8, 16])
    grad.add_argument("--h", type=float, default=0.25, help="displacement step (px)")
    grad.add_argument("--threshold", type=float, default=0.1)
    grad.add_argument("--gate", type=float, default=1e-4,
                      help="skip vertices with |analytic| below this")
    grad.add_argument("--vertices", type=int, default=48,
                      help="vertex count for --init-circle")
    grad.add_argument("--negate", action="store_true", help=argparse.SUPPRESS)
    return parser


def _parse_circle(text: str):
    parts = text.split(",")
    if len(parts) != 3:
        raise ValueError("expected CX,CY,R")
    return float(parts[0]), float(parts[1]), float(parts[2])


def _load_for_mode(path: str, mode: str):
    """Returns (image used for segmentation, raw image for overlays)."""
    raw = read_pnm(path)
    if mode == "gray":
        work = to_gray(raw) if raw.colorspace == RGB else raw
    elif mode == "rgb":
        if raw.colorspace != RGB:
            raise PolysegError("--mode rgb requires a PPM (color) input")
        work = raw
    else:  # lab
        if raw.colorspace != RGB:
            raise PolysegError("--mode lab requires a PPM (color) input")
        work = srgb_to_lab(raw)
    return work, raw


def _cmd_segment(args) -> int:
    work, raw = _load_for_mode(args.input, args.mode)
    if args.init_circle:
        cx, cy, r = _parse_circle(args.init_circle)
        p0 = init_circle((cx, cy), r, args.vertices)
    else:
        p0 = ensure_ccw(read_polygon(args.init_poly))
    cfg = EvolveConfig(
        n_vertices=args.vertices,
        dt=None if args.dt_adaptive else args.dt,
        dt_cap=args.dt_cap,
        eta=args.eta,
        max_iters=args.iters,
        e_thr=args.e_thr,
        resample_every=args.resample_every,
        window=args.window,
        seed=args.seed,
    )
    os.makedirs(args.out, exist_ok=True)
    snapshots = []

    def record(k, poly):
        if args.snapshot_every > 0 and k > 0 and k % args.snapshot_every == 0:
            snapshots.append((k, poly))

    try:
        result = run(work, p0, cfg, callback=record)
    except EmptyRegion as exc:
        if exc.partial is not None and exc.partial.trace:
            write_trace_csv(exc.partial.trace, os.path.join(args.out, "trace.csv"))
        print(f"polyseg: contour collapsed: {exc}", file=sys.stderr)
        return 2

    write_trace_csv(result.trace, os.path.join(args.out, "trace.csv"))
    write_polygon(result.final_polygon, os.path.join(args.out, "final_polygon.txt"))
    write_pnm(
        Image(result.final_mask.astype(np.float64), GRAY),
        os.path.join(args.out, "final_mask.pgm"),
    )

    color_mode = args.mode in ("rgb", "lab")
    init_color, final_color = ("blue", "red") if color_mode else ("green", "yellow")
    href = os.path.relpath(args.input, args.out) if args.overlay_link else None
    curves = [(poly, "#999999", 0.6) for _, poly in snapshots]
    curves.append((p0, init_color, 1.0))
    curves.append((result.final_polygon, final_color, 1.0))
    with open(os.path.join(args.out, "overlay.svg"), "w", encoding="ascii") as fh:
        fh.write(overlay_svg(raw, curves, href=href))
    for k, poly in snapshots:
        with open(os.path.join(args.out, f"snapshot_{k}.svg"), "w", encoding="ascii") as fh:
            fh.write(overlay_svg(raw, [(poly, init_color, 1.0)], href=href))
    with open(os.path.join(args.out, "energy.svg"), "w", encoding="ascii") as fh:
        fh.write(energy_svg(result.trace))

    status = "converged" if result.converged else "max-iters"
    print(
        f"polyseg: {status} after {result.iterations_run} iterations, "
        f"E={result.trace[-1].total:.6g}, simple={result.final_simple}"
    )
    return 0


def _cmd_synth(args) -> int:
    params = {}
    for key in ("cx", "cy", "r", "x0", "y0", "x1", "y1",
                "r_inner", "r_outer", "cx1", "cy1", "r1", "cx2", "cy2", "r2"):
        val = getattr(args, key)
        if val is not None:
            params[key] = val
    img = synth_shape(args.kind, args.width, args.height, args.fg, args.bg, params)
    if args.noise_sd > 0:
        img = add_gaussian_noise(img, args.noise_sd, Rng(args.seed))
    write_pnm(img, args.out)
    return 0


def _cmd_gradcheck(args) -> int:
    raw = read_pnm(args.input)
    img = to_gray(raw) if raw.colorspace == RGB else raw
    if args.init_circle:
        cx, cy, r = _parse_circle(args.init_circle)
        p = init_circle((cx, cy), r, args.vertices)
    else:
        p = ensure_ccw(read_polygon(args.poly))

    g = shape_gradient(img, p, args.eta)
    analytic = g.speeds * g.weights
    if args.negate:
        analytic = -analytic
    ev = SupersampledEvaluator(img, args.factor)
    h = args.h
    worst = 0.0
    print(f"{'vertex':>6} {'analytic':>14} {'fd':>14} {'rel_err':>10}")
    for i in range(len(p)):
        nrm = g.normals[i]
        fd_vals = []
        for sign in (+1.0, -1.0):
            pts = p.points.copy()
            pts[i] += sign * h * nrm
            q = Polygon(pts, copy=False)
            eb = breakdown_from_stats(ev.stats(q), polygon_perimeter(q), args.eta)
            fd_vals.append(eb.total)
        fd = (fd_vals[0] - fd_vals[1]) / (2.0 * h)
        if abs(analytic[i]) > args.gate:
            rel = abs(analytic[i] - fd) / abs(analytic[i])
            worst = max(worst, rel)
            print(f"{i:>6} {analytic[i]:>14.6e} {fd:>14.6e} {rel:>10.4f}")
        else:
            print(f"{i:>6} {analytic[i]:>14.6e} {fd:>14.6e} {'(gated)':>10}")
    print(f"max relative error: {worst:.4f} (threshold {args.threshold})")
    return 0 if worst < args.threshold else 3


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; remap to the exit-code contract
        return 0 if exc.code == 0 else 1
    try:
        if args.command == "segment":
            return _cmd_segment(args)
        if args.command == "synth":
            return _cmd_synth(args)
        return _cmd_gradcheck(args)
    except EmptyRegion as exc:
        print(f"polyseg: empty region: {exc}", file=sys.stderr)
        return 2
    except (PolysegError, OSError, ValueError) as exc:
        print(f"polyseg: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
