"""Kernel backend selection: compiled extension with a NumPy fallback.

The hot kernels (scanline mask fill, region-moment accumulation, and the
supersampled fractional stats) exist twice with identical semantics: a
Cython extension ``polyseg._core`` and the NumPy module ``polyseg._core_py``.
The extension is preferred when importable; set ``POLYSEG_PURE=1`` in the
environment to force the fallback.  ``BACKEND`` names the selection.
"""

import os

from . import _core_py

_impl = _core_py
if os.environ.get("POLYSEG_PURE") != "1":
    try:
        from . import _core as _impl  # type: ignore[no-redef]
    except ImportError:
        pass

BACKEND = "numpy" if _impl is _core_py else "cython"

fill_mask = _impl.fill_mask
mask_stats = _impl.mask_stats
ss_stats = _impl.ss_stats


def available_backends() -> dict:
    """Map backend name -> kernel module, for parity tests and benchmarks."""
    out = {"numpy": _core_py}
    try:
        from . import _core

        out["cython"] = _core
    except ImportError:
        pass
    return out
