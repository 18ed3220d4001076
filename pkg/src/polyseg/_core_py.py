"""Pure-NumPy implementations of the hot kernels.

These are the fallback twins of the compiled ``polyseg._core`` extension and
must match it exactly.  Shared semantics:

* Scanlines pass through sample centers.  An edge crosses a scanline at
  height y iff min(y1, y2) <= y < max(y1, y2) (half-open rule: shared
  vertices count once, horizontal edges never).
* A crossing at continuous coordinate x flips the inside parity of every
  center with c >= ceil(x).  Centers exactly on an edge therefore land
  inside at left edges and outside at right edges (top-left convention).
* Crossing coordinates are computed as
  ``x1 + (y - y1) * (x2 - x1) / (y2 - y1)``; the compiled twin evaluates the
  same expression in the same order so masks agree bit for bit.
"""

import numpy as np


def _crossings(xs, ys, lo_of, hi_of, x_of):
    """Row indices and crossing columns for all edges of a closed polygon.

    lo_of/hi_of map an edge's (ymin, ymax) to the first/last scanline index;
    x_of maps (edge attributes, row index) to the flip column.  Returns
    (rows, cols) as int64 arrays.
    """
    x1 = np.asarray(xs, dtype=np.float64)
    y1 = np.asarray(ys, dtype=np.float64)
    x2 = np.roll(x1, -1)
    y2 = np.roll(y1, -1)
    keep = y1 != y2
    x1, y1, x2, y2 = x1[keep], y1[keep], x2[keep], y2[keep]
    if x1.size == 0:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    ylo = np.minimum(y1, y2)
    yhi = np.maximum(y1, y2)
    r0 = lo_of(ylo)
    r1 = hi_of(yhi)
    counts = np.maximum(r1 - r0 + 1, 0)
    total = int(counts.sum())
    if total == 0:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    eidx = np.repeat(np.arange(x1.size), counts)
    starts = np.cumsum(counts) - counts
    offs = np.arange(total) - np.repeat(starts, counts)
    rows = r0[eidx] + offs
    cols = x_of(x1[eidx], y1[eidx], x2[eidx], y2[eidx], rows)
    return rows, cols


def fill_mask(xs, ys, width: int, height: int) -> np.ndarray:
    """Even-odd scanline fill of a closed polygon over pixel centers.

    Returns a (height, width) uint8 mask with 1 for inside pixels.
    """
    def lo_of(ylo):
        return np.maximum(np.ceil(ylo), 0.0).astype(np.int64)

    def hi_of(yhi):
        return np.minimum(np.ceil(yhi) - 1.0, float(height - 1)).astype(np.int64)

    def x_of(x1, y1, x2, y2, rows):
        xc = x1 + (rows - y1) * (x2 - x1) / (y2 - y1)
        return np.clip(np.ceil(xc), 0, width).astype(np.int64)

    rows, cols = _crossings(xs, ys, lo_of, hi_of, x_of)
    flips = np.zeros((height, width + 1), dtype=np.int64)
    if rows.size:
        np.add.at(flips, (rows, cols), 1)
    parity = np.cumsum(flips[:, :width], axis=1) & 1
    return parity.astype(np.uint8)


def mask_stats(data: np.ndarray, mask: np.ndarray):
    """Region moments of (H, W, C) data split by a boolean/uint8 mask.

    Returns (area_in, s1_in, s2_in, s1_all, s2_all) where the s-arrays are
    per-channel sums of f and f^2.
    """
    h, w, c = data.shape
    flat = data.reshape(-1, c)
    m = np.asarray(mask, dtype=bool).reshape(-1)
    sel = flat[m]
    s1_in = sel.sum(axis=0)
    s2_in = (sel * sel).sum(axis=0)
    s1_all = flat.sum(axis=0)
    s2_all = (flat * flat).sum(axis=0)
    return float(m.sum()), s1_in, s2_in, s1_all, s2_all


def ss_stats(prefix1: np.ndarray, prefix2: np.ndarray, xs, ys, factor: int):
    """Fractional region sums of a polygon over the subsample grid.

    prefix1/prefix2 are (Hs, Ws+1, C) row-wise prefix sums of the upsampled
    intensity and its square (column 0 is zero), with subsample (sr, sc)
    centered at ((sc+0.5)/factor - 0.5, (sr+0.5)/factor - 0.5) in pixel
    coordinates.  Returns (n_sub_inside, s1_in, s2_in) in subsample units.
    """
    hs, wcols, _ = prefix1.shape
    ws = wcols - 1
    f = float(factor)

    def lo_of(ylo):
        return np.maximum(np.ceil(f * (ylo + 0.5) - 0.5), 0.0).astype(np.int64)

    def hi_of(yhi):
        return np.minimum(np.ceil(f * (yhi + 0.5) - 0.5) - 1.0, float(hs - 1)).astype(
            np.int64
        )

    def x_of(x1, y1, x2, y2, rows):
        ysub = (rows + 0.5) / f - 0.5
        xc = x1 + (ysub - y1) * (x2 - x1) / (y2 - y1)
        return np.clip(np.ceil(f * (xc + 0.5) - 0.5), 0, ws).astype(np.int64)

    rows, cols = _crossings(xs, ys, lo_of, hi_of, x_of)
    c = prefix1.shape[2]
    if rows.size == 0:
        return 0.0, np.zeros(c), np.zeros(c)
    order = np.lexsort((cols, rows))
    rs = rows[order]
    cs = cols[order]
    if rs.size % 2 or not np.array_equal(rs[0::2], rs[1::2]):
        raise RuntimeError("scanline crossing parity broken")
    ra, ca, cb = rs[0::2], cs[0::2], cs[1::2]
    nsub = float(np.sum(cb - ca))
    s1 = (prefix1[ra, cb] - prefix1[ra, ca]).sum(axis=0)
    s2 = (prefix2[ra, cb] - prefix2[ra, ca]).sum(axis=0)
    return nsub, s1, s2
