"""Timing comparison of the compiled kernels against the NumPy reference.

Usage: python benchmarks/bench_kernels.py [--points N] [--repeats R]

Each kernel is timed as min-of-R wall clock on identical inputs; the table
reports both backends and the speedup.  Exits nonzero if the compiled
backend is unavailable, since then there is nothing to compare.
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from hilbert_bodies.kernels import pure

try:
    from hilbert_bodies.kernels import _fast
except ImportError as exc:  # pragma: no cover - environment dependent
    sys.exit(f"compiled backend not importable: {exc}")


def _time(fn, *args, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def _cases(n_points: int):
    rng = np.random.default_rng(7)
    pts2 = rng.normal(size=(n_points, 2))
    pts4 = rng.normal(size=(n_points, 4))
    mat = np.array([[0.9, 0.2, 0.0, 0.0],
                    [0.2, 1.4, 0.1, 0.0],
                    [0.0, 0.1, 0.8, 0.0],
                    [0.0, 0.0, 0.0, 1.1]])
    c4 = np.array([0.05, -0.1, 0.0, 0.2])
    inv_axes = 1.0 / np.array([1.0, 1.1, 0.9, 1.2])
    poly_normals = np.array(
        [[np.cos(a), np.sin(a)] for a in np.linspace(0, 2 * np.pi, 12, endpoint=False)]
    )
    poly_offsets = np.full(12, 1.3)
    u = rng.uniform(-0.999, 0.999, size=n_points)
    coeffs = rng.normal(size=17)
    return [
        ("gauge_ellipsoid (n=4)", "gauge_ellipsoid", (pts4, mat, c4)),
        (
            "gauge_superellipsoid (p=4)",
            "gauge_superellipsoid",
            (pts4, inv_axes, 4.0, c4),
        ),
        (
            "gauge_perturbed_ellipse",
            "gauge_perturbed_ellipse",
            (pts2, 1.3, 1.0, 0.05, 3, np.zeros(2)),
        ),
        ("gauge_polygon (12-gon)", "gauge_polygon", (pts2, poly_normals, poly_offsets)),
        ("cheb_u_series (deg 16)", "cheb_u_series", (u, coeffs)),
        ("cheb_t1_series (deg 16)", "cheb_t1_series", (u, coeffs)),
    ]


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--points", type=int, default=200_000)
    ap.add_argument("--repeats", type=int, default=5)
    ns = ap.parse_args()

    print(f"kernel timings, {ns.points} points, min of {ns.repeats} runs")
    print(f"{'kernel':<28} {'pure (ms)':>10} {'compiled (ms)':>14} {'speedup':>8}")
    for label, name, args in _cases(ns.points):
        fn_pure = getattr(pure, name)
        fn_fast = getattr(_fast, name)
        ref = np.asarray(fn_pure(*args))
        got = np.asarray(fn_fast(*args))
        err = float(np.max(np.abs(ref - got)))
        scale = float(np.max(np.abs(ref))) or 1.0
        if err > 1e-10 * scale:
            sys.exit(f"{name}: backends disagree by {err:.3e}")
        t_pure = _time(fn_pure, *args, repeats=ns.repeats)
        t_fast = _time(fn_fast, *args, repeats=ns.repeats)
        print(
            f"{label:<28} {1e3 * t_pure:>10.3f} {1e3 * t_fast:>14.3f} "
            f"{t_pure / t_fast:>7.1f}x"
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
