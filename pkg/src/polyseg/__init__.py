"""polyseg: two-region Mumford-Shah segmentation on an explicit polygon.

The contour is an explicit closed polygon evolved by gradient descent on
the per-vertex shape gradient of a normalized two-region energy -- no level
sets, no curve parametrization.  Hot kernels run in a compiled extension
when available, with a NumPy fallback (see ``polyseg.backend``).
"""

from .backend import BACKEND
from .color import multichannel_gradient, split_channels, srgb_to_lab
from .energy import (
    EnergyBreakdown,
    GradientField,
    RegionMeans,
    breakdown_from_stats,
    energy,
    means,
    region_shape_gradient,
    shape_gradient,
    supersampled_energy,
)
from .errors import (
    BadParams,
    DegeneratePolygon,
    EmptyRegion,
    ParseError,
    PolysegError,
    UnsupportedFormat,
    WrongColorspace,
)
from .evolve import (
    EvolveConfig,
    SegmentationResult,
    TraceRow,
    converged,
    init_circle,
    run,
    step,
    write_trace_csv,
)
from .geometry import (
    Polygon,
    discrete_curvature,
    ensure_ccw,
    is_simple,
    outward_normals,
    polygon_area,
    polygon_perimeter,
    read_polygon,
    resample_uniform,
    vertex_weights,
    write_polygon,
)
from .image import GRAY, LAB, RGB, Image, bilinear_sample
from .imageio import Rng, add_gaussian_noise, read_pnm, synth_shape, to_gray, write_pnm
from .raster import RegionStats, SupersampledEvaluator, rasterize_mask, region_stats

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BadParams",
    "DegeneratePolygon",
    "EmptyRegion",
    "EnergyBreakdown",
    "EvolveConfig",
    "GRAY",
    "GradientField",
    "Image",
    "LAB",
    "ParseError",
    "Polygon",
    "PolysegError",
    "RGB",
    "RegionMeans",
    "RegionStats",
    "Rng",
    "SegmentationResult",
    "SupersampledEvaluator",
    "TraceRow",
    "UnsupportedFormat",
    "WrongColorspace",
    "add_gaussian_noise",
    "bilinear_sample",
    "breakdown_from_stats",
    "converged",
    "discrete_curvature",
    "energy",
    "ensure_ccw",
    "init_circle",
    "is_simple",
    "means",
    "multichannel_gradient",
    "outward_normals",
    "polygon_area",
    "polygon_perimeter",
    "rasterize_mask",
    "read_pnm",
    "read_polygon",
    "region_shape_gradient",
    "region_stats",
    "resample_uniform",
    "run",
    "shape_gradient",
    "split_channels",
    "srgb_to_lab",
    "step",
    "supersampled_energy",
    "synth_shape",
    "to_gray",
    "vertex_weights",
    "write_pnm",
    "write_polygon",
    "write_trace_csv",
]
