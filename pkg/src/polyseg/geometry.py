"""Polygon representation and discrete differential geometry.

A contour is an explicit closed polygon: an ordered (n, 2) list of (x, y)
vertices with the closing edge implicit.  This module provides orientation
normalization, area and perimeter, outward vertex normals, discrete
curvature, uniform arc-length resampling, a simplicity test, and the text
file format for polygons.
"""

import numpy as np

from .errors import DegeneratePolygon, ParseError

# Consecutive vertices closer than this are considered coincident.
MIN_EDGE_LEN = 1e-9

# Signed areas below this magnitude are treated as degenerate.
MIN_AREA = 1e-9


class Polygon:
    """Closed polygon given by an ordered (n, 2) float64 vertex array.

    Construction validates the basic invariants: at least 3 vertices, all
    coordinates finite, and no two consecutive vertices coincident (minimum
    edge length 1e-9 px, closing edge included).  Orientation is *not*
    normalized here; use :func:`ensure_ccw`.

    Vertices are (x, y) pairs in the pixel-center frame: pixel (row r,
    col c) of an image has its center at (x=c, y=r).
    """

    __slots__ = ("points",)

    def __init__(self, points, copy: bool = True):
        pts = np.array(points, dtype=np.float64, copy=copy)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise DegeneratePolygon("polygon requires an (n, 2) vertex array")
        if pts.shape[0] < 3:
            raise DegeneratePolygon("polygon requires at least 3 vertices")
        if not np.all(np.isfinite(pts)):
            raise DegeneratePolygon("polygon vertices must be finite")
        edges = np.roll(pts, -1, axis=0) - pts
        if np.min(np.hypot(edges[:, 0], edges[:, 1])) <= MIN_EDGE_LEN:
            raise DegeneratePolygon("consecutive vertices coincide")
        self.points = pts

    def __len__(self) -> int:
        return self.points.shape[0]

    def __repr__(self) -> str:
        return f"Polygon(n={len(self)})"


def polygon_area(p: Polygon) -> float:
    """Signed shoelace area of the polygon, positive for CCW orientation."""
    x, y = p.points[:, 0], p.points[:, 1]
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    return 0.5 * float(np.sum(x * yn - xn * y))


def polygon_perimeter(p: Polygon) -> float:
    """Total edge length of the closed polygon, closing edge included."""
    edges = np.roll(p.points, -1, axis=0) - p.points
    return float(np.sum(np.hypot(edges[:, 0], edges[:, 1])))


def ensure_ccw(p: Polygon) -> Polygon:
    """Return the polygon with counter-clockwise (positive area) orientation.

    The vertex set is unchanged; for clockwise input the order is reversed
    while keeping the original first vertex first.

    Raises
    ------
    DegeneratePolygon
        If the signed area magnitude is below 1e-9 (collinear/degenerate).
    """
    a = polygon_area(p)
    if abs(a) < MIN_AREA:
        raise DegeneratePolygon("polygon area is (near) zero")
    if a > 0:
        return p
    pts = p.points
    return Polygon(np.concatenate([pts[:1], pts[1:][::-1]]), copy=False)


def outward_normals(p: Polygon) -> np.ndarray:
    """Unit outward normal at each vertex of a CCW polygon.

    The normal at vertex i is the central-difference tangent
    v_{i+1} - v_{i-1} rotated by -90 degrees and normalized, which points
    away from the enclosed region at convex vertices.

    Returns an (n, 2) array of unit vectors.

    Raises
    ------
    DegeneratePolygon
        If v_{i+1} == v_{i-1} for some vertex (undefined tangent).
    """
    pts = p.points
    t = np.roll(pts, -1, axis=0) - np.roll(pts, 1, axis=0)
    norm = np.hypot(t[:, 0], t[:, 1])
    if np.min(norm) < 1e-12:
        raise DegeneratePolygon("neighbors of a vertex coincide")
    n = np.empty_like(t)
    n[:, 0] = t[:, 1] / norm
    n[:, 1] = -t[:, 0] / norm
    return n


def vertex_weights(p: Polygon) -> np.ndarray:
    """Boundary-integral weight per vertex: half the adjacent edge lengths.

    These weights turn per-vertex normal speeds into a midpoint-rule
    quadrature of a boundary integral.
    """
    pts = p.points
    e = np.roll(pts, -1, axis=0) - pts
    length = np.hypot(e[:, 0], e[:, 1])
    return 0.5 * (length + np.roll(length, 1))


def discrete_curvature(p: Polygon) -> np.ndarray:
    """Signed curvature (1/px) at each vertex via the circumscribed circle.

    The curvature at vertex i is the inverse circumradius of
    (v_{i-1}, v_i, v_{i+1}), signed positive where the CCW polygon turns
    left (locally convex).  Collinear triples give exactly 0.  The estimate
    is exact on circles: any three cocircular points reproduce 1/r.
    """
    pts = p.points
    e1 = pts - np.roll(pts, 1, axis=0)
    e2 = np.roll(pts, -1, axis=0) - pts
    chord = e1 + e2
    cross = e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0]
    denom = (
        np.hypot(e1[:, 0], e1[:, 1])
        * np.hypot(e2[:, 0], e2[:, 1])
        * np.hypot(chord[:, 0], chord[:, 1])
    )
    with np.errstate(divide="ignore", invalid="ignore"):
        kappa = np.where(denom > 0.0, 2.0 * cross / denom, 0.0)
    return kappa


def resample_uniform(p: Polygon, n_target: int) -> Polygon:
    """Redistribute vertices uniformly by arc length along the closed curve.

    The first output vertex is anchored at the current first vertex; the
    remaining n_target - 1 vertices are placed at equal arc-length spacing
    along the polyline by linear interpolation.

    Raises
    ------
    DegeneratePolygon
        If n_target < 3 or the perimeter is below 1e-9.
    """
    if n_target < 3:
        raise DegeneratePolygon("resample target must be at least 3 vertices")
    closed = np.concatenate([p.points, p.points[:1]], axis=0)
    seg = np.diff(closed, axis=0)
    seglen = np.hypot(seg[:, 0], seg[:, 1])
    cum = np.concatenate([[0.0], np.cumsum(seglen)])
    perim = cum[-1]
    if perim < MIN_AREA:
        raise DegeneratePolygon("perimeter is (near) zero")
    t = np.arange(n_target) * (perim / n_target)
    xs = np.interp(t, cum, closed[:, 0])
    ys = np.interp(t, cum, closed[:, 1])
    return Polygon(np.column_stack([xs, ys]), copy=False)


def is_simple(p: Polygon) -> bool:
    """True iff no two non-adjacent edges intersect (even touching).

    All-pairs segment intersection test, O(n^2) vectorized.
    """
    pts = p.points
    n = len(p)
    a1 = pts
    a2 = np.roll(pts, -1, axis=0)
    iu, ju = np.triu_indices(n, k=2)
    # (0, n-1) are adjacent through the closing edge
    keep = ~((iu == 0) & (ju == n - 1))
    iu, ju = iu[keep], ju[keep]
    if iu.size == 0:
        return True
    p1, p2 = a1[iu], a2[iu]
    q1, q2 = a1[ju], a2[ju]

    def cross(o, a, b):
        return (a[:, 0] - o[:, 0]) * (b[:, 1] - o[:, 1]) - (a[:, 1] - o[:, 1]) * (
            b[:, 0] - o[:, 0]
        )

    d1 = cross(q1, q2, p1)
    d2 = cross(q1, q2, p2)
    d3 = cross(p1, p2, q1)
    d4 = cross(p1, p2, q2)
    proper = (d1 * d2 < 0) & (d3 * d4 < 0)
    if np.any(proper):
        return False

    def on_seg(a, b, c, d):
        # collinear c on segment a-b
        return (
            (d == 0)
            & (np.minimum(a[:, 0], b[:, 0]) <= c[:, 0])
            & (c[:, 0] <= np.maximum(a[:, 0], b[:, 0]))
            & (np.minimum(a[:, 1], b[:, 1]) <= c[:, 1])
            & (c[:, 1] <= np.maximum(a[:, 1], b[:, 1]))
        )

    touch = (
        on_seg(q1, q2, p1, d1)
        | on_seg(q1, q2, p2, d2)
        | on_seg(p1, p2, q1, d3)
        | on_seg(p1, p2, q2, d4)
    )
    return not bool(np.any(touch))


def read_polygon(path) -> Polygon:
    """Read a polygon from text: one "x y" pair per line, '#' lines ignored."""
    pts = []
    with open(path, "r", encoding="ascii") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            parts = stripped.split()
            if len(parts) != 2:
                raise ParseError(f"{path}:{lineno}: expected 'x y'")
            try:
                pts.append((float(parts[0]), float(parts[1])))
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: bad coordinate") from exc
    if len(pts) < 3:
        raise DegeneratePolygon(f"{path}: fewer than 3 vertices")
    return Polygon(pts)


def write_polygon(p: Polygon, path) -> None:
    """Write the polygon in the text format read by :func:`read_polygon`."""
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        for x, y in p.points:
            fh.write(f"{x:.12g} {y:.12g}\n")
