"""Gradient-descent evolution of the contour polygon.

Each iteration rasterizes the current polygon, accumulates region
statistics, evaluates the energy, computes the per-vertex shape gradient,
and moves every vertex against its normal speed:

    v_i  <-  v_i - dt * speed_i * n_i

with periodic arc-length resampling and a windowed relative-energy
convergence test.  The step size is adaptive by default: dt is capped so
no vertex moves more than half a pixel per iteration and never exceeds
``dt_cap`` (which provides genuine settling near equilibria, where
displacement-normalized steps would jitter forever).
"""

from dataclasses import dataclass, field

import numpy as np

from .energy import (
    GradientField,
    _gradient_from_stats,
    breakdown_from_stats,
    means,
)
from .errors import EmptyRegion
from .geometry import (
    Polygon,
    ensure_ccw,
    is_simple,
    polygon_perimeter,
    resample_uniform,
)
from .image import Image
from .raster import rasterize_mask, region_stats

# Abort threshold: below this many inside pixels the region statistics are
# noise-dominated and the contour is considered collapsed.
COLLAPSE_PIXELS = 16

# Adaptive mode displacement cap (px per iteration) for the fastest vertex.
MAX_STEP_PX = 0.5


@dataclass
class EvolveConfig:
    """Evolution parameters.

    dt=None selects the adaptive step size
    min(dt_cap, 0.5 px / max_i |speed_i|); a positive dt fixes it.
    """

    n_vertices: int = 100
    dt: float | None = None
    dt_cap: float = 1e5
    eta: float = 0.1
    max_iters: int = 500
    e_thr: float = 1e-4
    resample_every: int = 10
    window: int = 10
    seed: int = 0

    def __post_init__(self):
        if self.n_vertices < 3:
            raise ValueError("n_vertices must be at least 3")
        if self.dt is not None and self.dt <= 0:
            raise ValueError("fixed dt must be positive")
        if self.dt_cap <= 0:
            raise ValueError("dt_cap must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        if self.e_thr <= 0:
            raise ValueError("e_thr must be positive")
        if self.resample_every < 1:
            raise ValueError("resample_every must be at least 1")
        if self.window < 1:
            raise ValueError("window must be at least 1")


@dataclass
class TraceRow:
    """Per-iteration record: energy terms and geometry of the pre-step state."""

    iter: int
    e1: float
    e2: float
    e3: float
    total: float
    area: float
    perimeter: float
    max_disp: float


@dataclass
class SegmentationResult:
    final_polygon: Polygon
    final_mask: np.ndarray
    trace: list[TraceRow]
    converged: bool
    iterations_run: int
    final_simple: bool = True
    flagged_steps: int = 0
    snapshots: list = field(default_factory=list)


def init_circle(center, radius: float, n: int) -> Polygon:
    """Regular n-gon inscribed in the circle, CCW with uniform edge lengths."""
    if radius <= 0:
        raise ValueError("radius must be positive")
    if n < 3:
        raise ValueError("need at least 3 vertices")
    theta = 2.0 * np.pi * np.arange(n) / n
    cx, cy = float(center[0]), float(center[1])
    pts = np.column_stack([cx + radius * np.cos(theta), cy + radius * np.sin(theta)])
    return Polygon(pts, copy=False)


def step(p: Polygon, g: GradientField, dt: float, bounds=None) -> Polygon:
    """One descent update: v_i - dt * speed_i * n_i, clamped to the frame.

    bounds, when given, is (width, height); coordinates are clamped to
    [0, W-1] x [0, H-1].
    """
    pts = p.points - dt * g.speeds[:, None] * g.normals
    if bounds is not None:
        w, h = bounds
        pts[:, 0] = np.clip(pts[:, 0], 0.0, w - 1.0)
        pts[:, 1] = np.clip(pts[:, 1], 0.0, h - 1.0)
    return Polygon(pts, copy=False)


def converged(trace: list[TraceRow], e_thr: float, window: int) -> bool:
    """Windowed relative-energy convergence test.

    True iff at least 2*window rows exist and the means of the last two
    windows of total energy differ by less than e_thr in relative terms.
    Window averaging is needed because the rasterized energy fluctuates at
    the single-pixel level.
    """
    if len(trace) < 2 * window:
        return False
    totals = [row.total for row in trace[-2 * window :]]
    prev = float(np.mean(totals[:window]))
    last = float(np.mean(totals[window:]))
    return abs(last - prev) / max(abs(prev), 1e-12) < e_thr


def run(img: Image, p0: Polygon, cfg: EvolveConfig, callback=None) -> SegmentationResult:
    """Evolve p0 on img until convergence, collapse, or max_iters.

    Per iteration: rasterize -> region stats -> energy (recorded in the
    trace) -> shape gradient -> step (with a self-intersection safeguard
    that halves dt up to 4 times, then accepts flagged) -> periodic
    resampling -> convergence check.  ``callback(k, polygon)``, when given,
    is invoked with each pre-step polygon.

    Raises
    ------
    EmptyRegion
        If the contour collapses below 16 inside pixels (or leaves the
        frame); ``partial`` on the exception carries the result so far.
    """
    p = ensure_ccw(p0)
    w, h = img.width, img.height
    trace: list[TraceRow] = []
    flagged = 0
    did_converge = False

    def partial_result(poly):
        return SegmentationResult(
            final_polygon=poly,
            final_mask=np.zeros((h, w), dtype=bool),
            trace=trace,
            converged=False,
            iterations_run=len(trace),
            final_simple=is_simple(poly),
            flagged_steps=flagged,
        )

    for k in range(cfg.max_iters):
        try:
            mask = rasterize_mask(p, w, h)
        except EmptyRegion as exc:
            raise EmptyRegion(str(exc), partial=partial_result(p)) from None
        inside = float(mask.sum())
        if inside < COLLAPSE_PIXELS:
            raise EmptyRegion(
                f"contour collapsed to {int(inside)} pixels at iteration {k}",
                partial=partial_result(p),
            )
        stats = region_stats(img, mask)
        m = means(stats)
        eb = breakdown_from_stats(stats, polygon_perimeter(p), cfg.eta)
        if callback is not None:
            callback(k, p)

        g = _gradient_from_stats(img, p, cfg.eta, m, stats)
        max_speed = float(np.max(np.abs(g.speeds)))
        if cfg.dt is not None:
            dt = cfg.dt
        elif max_speed > 0.0:
            dt = min(cfg.dt_cap, MAX_STEP_PX / max_speed)
        else:
            dt = cfg.dt_cap

        # topology safeguard: halve dt while the step self-intersects
        p_new = step(p, g, dt, bounds=(w, h))
        halvings = 0
        while not is_simple(p_new) and halvings < 4:
            dt *= 0.5
            halvings += 1
            p_new = step(p, g, dt, bounds=(w, h))
        if halvings == 4 and not is_simple(p_new):
            flagged += 1

        disp = p_new.points - p.points
        max_disp = float(np.max(np.hypot(disp[:, 0], disp[:, 1])))
        trace.append(
            TraceRow(
                iter=k,
                e1=eb.e1,
                e2=eb.e2,
                e3=eb.e3,
                total=eb.total,
                area=inside,
                perimeter=eb.e3,
                max_disp=max_disp,
            )
        )
        p = p_new
        if converged(trace, cfg.e_thr, cfg.window):
            did_converge = True
            break
        if (k + 1) % cfg.resample_every == 0:
            p = resample_uniform(p, cfg.n_vertices)

    try:
        final_mask = rasterize_mask(p, w, h)
    except EmptyRegion as exc:
        raise EmptyRegion(str(exc), partial=partial_result(p)) from None
    return SegmentationResult(
        final_polygon=p,
        final_mask=final_mask,
        trace=trace,
        converged=did_converge,
        iterations_run=len(trace),
        final_simple=is_simple(p),
        flagged_steps=flagged,
    )


def write_trace_csv(trace: list[TraceRow], path) -> None:
    """Write the evolution trace as CSV with 10 significant digits."""
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("iter,e1,e2,e3,total,area,perimeter,max_disp\n")
        for r in trace:
            fh.write(
                f"{r.iter},{r.e1:.10g},{r.e2:.10g},{r.e3:.10g},"
                f"{r.total:.10g},{r.area:.10g},{r.perimeter:.10g},{r.max_disp:.10g}\n"
            )
