"""Backend selection for the numerical kernels.

The compiled extension is preferred when it imports cleanly; the NumPy
implementations are the fallback.  Set HILBERT_BODIES_PURE=1 to force the
fallback (useful for timing comparisons and for debugging the extension).
"""

import os

from . import pure

if os.environ.get("HILBERT_BODIES_PURE"):
    _impl = pure
    BACKEND = "pure"
else:
    try:
        from . import _fast as _impl

        BACKEND = "compiled"
    except ImportError:
        _impl = pure
        BACKEND = "pure"

gauge_ellipsoid = _impl.gauge_ellipsoid
gauge_superellipsoid = _impl.gauge_superellipsoid
gauge_perturbed_ellipse = _impl.gauge_perturbed_ellipse
gauge_polygon = _impl.gauge_polygon
cheb_u_series = _impl.cheb_u_series
cheb_t1_series = _impl.cheb_t1_series

__all__ = [
    "BACKEND",
    "cheb_t1_series",
    "cheb_u_series",
    "gauge_ellipsoid",
    "gauge_perturbed_ellipse",
    "gauge_polygon",
    "gauge_superellipsoid",
    "pure",
]
