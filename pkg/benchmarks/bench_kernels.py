"""Benchmark the compiled kernels against the NumPy fallback.

Times the three hot kernels (scanline mask fill, region moments,
supersampled stats) and a full segmentation run on each available backend.

    python3 benchmarks/bench_kernels.py
"""

import time

import numpy as np

import polyseg as ps
from polyseg.backend import available_backends
from polyseg.raster import SupersampledEvaluator


def timeit(fn, repeat=5):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def star(n, center, r_mean, seed=0):
    rng = np.random.default_rng(seed)
    th = 2 * np.pi * np.arange(n) / n
    r = r_mean * (1 + 0.12 * np.cos(3 * th + rng.uniform(0, 2 * np.pi)))
    return np.column_stack(
        [center[0] + r * np.cos(th), center[1] + r * np.sin(th)]
    )


def bench_kernels():
    backends = available_backends()
    print(f"backends: {', '.join(backends)} (active: {ps.BACKEND})")
    rows = []

    pts512 = star(200, (256, 256), 180)
    rows.append(
        ("fill_mask 512x512, 200-gon",
         {name: timeit(lambda m=mod: m.fill_mask(pts512[:, 0], pts512[:, 1], 512, 512))
          for name, mod in backends.items()})
    )

    rng = np.random.default_rng(0)
    data = rng.uniform(0, 1, (512, 512, 3))
    mask = (rng.uniform(0, 1, (512, 512)) > 0.5).astype(np.uint8)
    rows.append(
        ("mask_stats 512x512x3",
         {name: timeit(lambda m=mod: m.mask_stats(data, mask))
          for name, mod in backends.items()})
    )

    img = ps.Image(rng.uniform(0, 1, (64, 64)), ps.GRAY)
    ev = SupersampledEvaluator(img, 16)
    pts64 = star(40, (32, 32), 18)
    rows.append(
        ("ss_stats 64x64 @ factor 16",
         {name: timeit(lambda m=mod: m.ss_stats(
             ev._prefix1, ev._prefix2, pts64[:, 0], pts64[:, 1], 16), repeat=20)
          for name, mod in backends.items()})
    )

    print(f"\n{'kernel':<30} " + " ".join(f"{n:>12}" for n in backends) + f" {'speedup':>9}")
    for label, times in rows:
        cells = " ".join(f"{times[n]*1e3:>10.3f}ms" for n in backends)
        if len(times) == 2:
            speedup = times["numpy"] / times["cython"]
            print(f"{label:<30} {cells} {speedup:>8.1f}x")
        else:
            print(f"{label:<30} {cells}")


def bench_segmentation():
    img = ps.synth_shape("disk", 200, 200, 0.9, 0.1, {"cx": 100, "cy": 100, "r": 60})
    img = ps.add_gaussian_noise(img, 25.0, ps.Rng(42))
    p0 = ps.init_circle((100, 100), 90, 100)
    cfg = ps.EvolveConfig(n_vertices=100, eta=5e-4, max_iters=150, e_thr=1e-12)
    t = timeit(lambda: ps.run(img, p0, cfg), repeat=3)
    print(f"\nend-to-end 200x200 noisy disk, 150 iterations ({ps.BACKEND} backend): "
          f"{t:.2f}s ({150/t:.0f} iters/s)")
    print("re-run with POLYSEG_PURE=1 to time the NumPy backend end to end")


if __name__ == "__main__":
    bench_kernels()
    bench_segmentation()
