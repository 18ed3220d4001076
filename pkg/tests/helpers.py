"""Shared fixtures and independent oracles for the test suite."""

import numpy as np

import polyseg as ps


def blob_image(w: int = 64, h: int = 64) -> ps.Image:
    """Smooth synthetic image: sum of three Gaussian blobs, clipped to [0, 1]."""
    Y, X = np.mgrid[0:h, 0:w].astype(float)
    f = (
        0.12
        + 0.80 * np.exp(-((X - 22) ** 2 + (Y - 20) ** 2) / (2 * 9.0**2))
        + 0.55 * np.exp(-((X - 45) ** 2 + (Y - 40) ** 2) / (2 * 12.0**2))
        + 0.40 * np.exp(-((X - 28) ** 2 + (Y - 50) ** 2) / (2 * 7.0**2))
    )
    return ps.Image(np.clip(f, 0.0, 1.0), ps.GRAY)


def star_polygon(seed, n=40, center=(32.0, 32.0), r_mean=16.0, amp=0.14, kmax=3):
    """Random smooth star-shaped polygon (simple by construction).

    Low-order radial harmonics keep per-vertex turning angles small, so the
    half-edge-sum vertex weights stay close to the exact half-chord area
    derivative.
    """
    rng = np.random.default_rng(seed)
    th = 2 * np.pi * np.arange(n) / n
    r = np.ones(n)
    for k in range(1, kmax + 1):
        r += amp * rng.uniform(0.3, 1.0) / k * np.cos(k * th + rng.uniform(0, 2 * np.pi))
    r *= r_mean
    pts = np.column_stack([center[0] + r * np.cos(th), center[1] + r * np.sin(th)])
    return ps.Polygon(pts)


def hausdorff_to_circle(p: ps.Polygon, center, radius, samples_per_edge=8) -> float:
    """Symmetric Hausdorff distance between a polygon and a circle."""
    pts = p.points
    nxt = np.roll(pts, -1, axis=0)
    ts = np.linspace(0, 1, samples_per_edge, endpoint=False)
    dense = (
        pts[None, :, :] * (1 - ts)[:, None, None] + nxt[None, :, :] * ts[:, None, None]
    ).reshape(-1, 2)
    d_poly = np.abs(
        np.hypot(dense[:, 0] - center[0], dense[:, 1] - center[1]) - radius
    ).max()
    th = np.linspace(0, 2 * np.pi, 720, endpoint=False)
    circ = np.column_stack(
        [center[0] + radius * np.cos(th), center[1] + radius * np.sin(th)]
    )
    d_circ = np.full(len(circ), np.inf)
    for i in range(len(pts)):
        ab = nxt[i] - pts[i]
        t = np.clip(((circ - pts[i]) @ ab) / (ab @ ab), 0.0, 1.0)
        proj = pts[i] + t[:, None] * ab
        d = np.hypot(circ[:, 0] - proj[:, 0], circ[:, 1] - proj[:, 1])
        d_circ = np.minimum(d_circ, d)
    return float(max(d_poly, d_circ.max()))


def brute_force_mask(pts: np.ndarray, width: int, height: int) -> np.ndarray:
    """Even-odd inside test per pixel center by explicit ray casting."""
    out = np.zeros((height, width), dtype=bool)
    n = len(pts)
    for r in range(height):
        for c in range(width):
            cnt = 0
            for i in range(n):
                x1, y1 = pts[i]
                x2, y2 = pts[(i + 1) % n]
                if y1 == y2:
                    continue
                if min(y1, y2) <= r < max(y1, y2):
                    xc = x1 + (r - y1) * (x2 - x1) / (y2 - y1)
                    if xc <= c:
                        cnt += 1
            out[r, c] = cnt % 2 == 1
    return out


def naive_region_sums(data: np.ndarray, mask: np.ndarray):
    """Double-loop accumulation oracle for region statistics."""
    h, w, c = data.shape
    s1_in = np.zeros(c)
    s2_in = np.zeros(c)
    s1_out = np.zeros(c)
    s2_out = np.zeros(c)
    n_in = 0
    for r in range(h):
        for col in range(w):
            for ch in range(c):
                v = data[r, col, ch]
                if mask[r, col]:
                    s1_in[ch] += v
                    s2_in[ch] += v * v
                else:
                    s1_out[ch] += v
                    s2_out[ch] += v * v
            if mask[r, col]:
                n_in += 1
    return n_in, s1_in, s2_in, s1_out, s2_out


def lab_scalar(r: float, g: float, b: float):
    """Independent scalar sRGB -> CIELAB (D65, 2 degree observer)."""

    def inv_gamma(u):
        return u / 12.92 if u <= 0.04045 else ((u + 0.055) / 1.055) ** 2.4

    rl, gl, bl = inv_gamma(r), inv_gamma(g), inv_gamma(b)
    x = 0.4124564 * rl + 0.3575761 * gl + 0.1804375 * bl
    y = 0.2126729 * rl + 0.7151522 * gl + 0.0721750 * bl
    z = 0.0193339 * rl + 0.1191920 * gl + 0.9503041 * bl

    def f(t):
        d = 6.0 / 29.0
        return t ** (1.0 / 3.0) if t > d**3 else t / (3 * d * d) + 4.0 / 29.0

    fx, fy, fz = f(x / 0.95047), f(y / 1.0), f(z / 1.08883)
    return 116 * fy - 16, 500 * (fx - fy), 200 * (fy - fz)


def disk_fixture(noise_sd=0.0, seed=42):
    """The 200x200 disk fixture: radius 60 at (100, 100), values 0.9/0.1."""
    img = ps.synth_shape("disk", 200, 200, 0.9, 0.1, {"cx": 100, "cy": 100, "r": 60})
    if noise_sd > 0:
        img = ps.add_gaussian_noise(img, noise_sd, ps.Rng(seed))
    return img


def supersampled_total(ev, p: ps.Polygon, eta: float) -> float:
    """Total energy from a SupersampledEvaluator's fractional stats."""
    return ps.breakdown_from_stats(ev.stats(p), ps.polygon_perimeter(p), eta).total
