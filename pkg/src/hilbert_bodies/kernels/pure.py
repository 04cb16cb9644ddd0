"""NumPy reference implementations of the hot kernels.

Every function here has a compiled twin in _fast.pyx; the package selects
one backend at import time.  Keep the two in sync: the equivalence tests
compare them pointwise.
"""

from __future__ import annotations

import numpy as np


def gauge_ellipsoid(pts, mat, center):
    """sqrt((x-c)^T M (x-c)) for each row x of pts."""
    d = np.atleast_2d(pts) - center
    return np.sqrt(np.einsum("ij,jk,ik->i", d, mat, d))


def gauge_superellipsoid(pts, inv_axes, exponent, center):
    """(sum |(x_i-c_i)/a_i|^p)^(1/p) for each row of pts."""
    d = np.abs((np.atleast_2d(pts) - center) * inv_axes)
    return np.power(np.sum(d**exponent, axis=1), 1.0 / exponent)


def gauge_perturbed_ellipse(pts, axis_a, axis_b, eps, freq, center):
    """Radial gauge |x-c| / R(theta) of a cosine-perturbed ellipse.

    R(theta) = r0(theta) * (1 + eps*cos(freq*theta)) with r0 the radial
    function of the base ellipse.  Exact for the body because it is
    star-shaped about its center.
    """
    d = np.atleast_2d(pts) - center
    rho = np.hypot(d[:, 0], d[:, 1])
    theta = np.arctan2(d[:, 1], d[:, 0])
    r0 = axis_a * axis_b / np.sqrt(
        (axis_b * np.cos(theta)) ** 2 + (axis_a * np.sin(theta)) ** 2
    )
    return rho / (r0 * (1.0 + eps * np.cos(freq * theta)))


def gauge_polygon(pts, normals, offsets):
    """max_i (x . n_i) / d_i over the edge normals; origin must be interior."""
    return np.max(np.atleast_2d(pts) @ normals.T / offsets, axis=1)


def cheb_u_series(u, coeffs):
    """Clenshaw evaluation of sum_k coeffs[k] * U_k(u)."""
    u = np.asarray(u, dtype=float)
    b1 = np.zeros_like(u)
    b2 = np.zeros_like(u)
    for c in coeffs[::-1]:
        b1, b2 = c + 2.0 * u * b1 - b2, b1
    return b1


def cheb_t1_series(u, coeffs):
    """Clenshaw evaluation of sum_k coeffs[k] * T_{k+1}(u)."""
    u = np.asarray(u, dtype=float)
    b1 = np.zeros_like(u)
    b2 = np.zeros_like(u)
    for c in coeffs[::-1]:
        b1, b2 = c + 2.0 * u * b1 - b2, b1
    # shifted series has no T_0 term; the tail of Clenshaw reduces to this
    return u * b1 - b2
