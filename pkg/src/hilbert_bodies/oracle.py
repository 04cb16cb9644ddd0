"""Brute-force reference computations.

Everything in this module is deliberately independent of the fast paths it
is used to check: section volumes come from rejection sampling against the
body's gauge, principal values from a homegrown bisection quadrature, and
polynomial fits from a plain scaled-monomial least squares.  None of it
touches the closed-form geometry formulas or the spectral transform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .geometry import Direction, Ellipsoid, Superellipsoid, contains


@dataclass(frozen=True)
class McEstimate:
    """Monte Carlo value with its standard error and provenance."""

    value: float
    stderr: float
    samples: int
    seed: int

    def __post_init__(self):
        if self.stderr < 0.0 or self.samples <= 0:
            raise ValueError("invalid Monte Carlo metadata")


def _hyperplane_frame(xi: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the hyperplane orthogonal to xi (Householder)."""
    n = xi.size
    e = np.zeros(n)
    e[0] = 1.0
    # sign choice avoids cancellation in v
    v = xi + e if xi[0] >= 0.0 else xi - e
    v = v / np.linalg.norm(v)
    H = np.eye(n) - 2.0 * np.outer(v, v)
    # first column of H is -+xi; the rest span the orthogonal complement
    return H[:, 1:]


def _slice_interior(body, xi, t, frame):
    """Point of the slice deepest inside the body, in slice coordinates.

    Depth is a smooth monotone image of the gauge (squared quadratic form,
    p-th power of the p-norm) so the comparison against 1 is unchanged.
    """

    def depth(y):
        x = t * xi + frame @ y
        if isinstance(body, Ellipsoid):
            d = x - body.center
            return float(d @ body.shape_matrix @ d)
        if isinstance(body, Superellipsoid):
            d = (x - body.center) / body.semi_axes
            return float(np.sum(np.abs(d) ** body.exponent))
        return _gauge_value(body, x)

    y0 = frame.T @ (np.asarray(body.center) - t * xi)
    res = minimize(depth, y0, method="Powell", options={"xtol": 1e-12, "ftol": 1e-14})
    return res.x, depth(res.x)


def _gauge_value(body, x):
    from . import geometry

    return float(geometry._centered_gauge_many(body, np.atleast_2d(x))[0]) ** 2


def _ray_exit(body, xi, t, frame, y_int, e):
    """Distance from y_int to the slice boundary along the unit vector e."""
    step = 1.0
    while _feasible(body, xi, t, frame, y_int + step * e):
        step *= 2.0
        if step > 1e15:
            raise RuntimeError("unbounded slice")
    lo_s, hi_s = 0.0, step
    for _ in range(80):
        mid = 0.5 * (lo_s + hi_s)
        if _feasible(body, xi, t, frame, y_int + mid * e):
            lo_s = mid
        else:
            hi_s = mid
    return 0.5 * (lo_s + hi_s)


def _slice_box(body, xi, t, frame, y_int):
    """Axis-aligned bounding box of the slice, from its support in the
    2(n-1) coordinate directions."""
    n = xi.size
    k = n - 1
    lo = np.empty(k)
    hi = np.empty(k)
    if k == 1:
        # the slice is an interval: feasibility bisection along the axis is exact
        for sign, slot in ((1.0, hi), (-1.0, lo)):
            e = np.array([sign])
            slot[0] = y_int[0] + sign * _ray_exit(body, xi, t, frame, y_int, e)
        return lo, hi

    if isinstance(body, Ellipsoid):
        # In slice coordinates the constraint is the quadratic
        # y^T A y + 2 b^T y + c0 <= 1, i.e. the slice is an ellipsoid with
        # center -A^-1 b; its axis supports are a closed form.
        x0 = t * xi - body.center
        A = frame.T @ body.shape_matrix @ frame
        b = frame.T @ (body.shape_matrix @ x0)
        c0 = float(x0 @ body.shape_matrix @ x0)
        a_inv = np.linalg.inv(A)
        y_star = -a_inv @ b
        r2 = 1.0 - c0 + float(b @ a_inv @ b)
        if r2 <= 0.0:
            raise RuntimeError("empty slice reached the box builder")
        half = np.sqrt(r2 * np.diag(a_inv))
        return y_star - half, y_star + half

    if not isinstance(body, Superellipsoid):
        raise NotImplementedError(
            "no slice support routine for this body type in n >= 3"
        )

    p = body.exponent
    a = body.semi_axes
    c = body.center

    def g_and_grad(y):
        x = t * xi + frame @ y
        d = (x - c) / a
        return float(np.sum(np.abs(d) ** p)) - 1.0, frame.T @ (
            p * np.abs(d) ** (p - 1) * np.sign(d) / a
        )

    cons = {
        "type": "ineq",
        "fun": lambda y: -g_and_grad(y)[0],
        "jac": lambda y: -g_and_grad(y)[1],
    }
    for i in range(k):
        axis = np.zeros(k)
        axis[i] = 1.0
        for sign, slot in ((1.0, hi), (-1.0, lo)):
            # start near the boundary in the target direction: at the slice
            # center the constraint gradient can vanish and stall the solver
            rho = _ray_exit(body, xi, t, frame, y_int, sign * axis)
            starts = (y_int + 0.95 * rho * sign * axis, y_int)
            for start in starts:
                res = minimize(
                    lambda y, s=sign, j=i: -s * float(y[j]),
                    start,
                    jac=lambda y, s=sign, o=axis: -s * o,
                    method="SLSQP",
                    constraints=[cons],
                    options={"maxiter": 300, "ftol": 1e-12},
                )
                if res.success:
                    slot[i] = float(res.x[i])
                    break
            else:
                raise RuntimeError(
                    f"slice support optimization failed: {res.message}"
                )
    return lo, hi


def _feasible(body, xi, t, frame, y):
    x = t * xi + frame @ np.asarray(y, float)
    return bool(contains(body, x[None, :])[0])


def mc_section_volume(body, dir: Direction, t: float, samples: int, seed: int) -> McEstimate:
    """Slice volume by uniform rejection sampling in a slice-aligned box.

    The box comes from the support of the slice itself in the coordinate
    directions of the hyperplane frame, so the hit fraction stays
    order-one even for slices close to the boundary.
    """
    if samples < 10**4:
        raise ValueError("need at least 1e4 samples")
    xi = dir.coords
    frame = _hyperplane_frame(xi)
    y_int, d0 = _slice_interior(body, xi, float(t), frame)
    if d0 >= 1.0 - 1e-12:
        return McEstimate(0.0, 0.0, samples, seed)
    lo, hi = _slice_box(body, xi, float(t), frame, y_int)
    pad = 1e-3 * (hi - lo)
    lo = lo - pad
    hi = hi + pad
    box_vol = float(np.prod(hi - lo))

    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    hits = 0
    left = int(samples)
    while left > 0:
        m = min(left, 1_000_000)
        y = rng.uniform(lo, hi, size=(m, lo.size))
        pts = float(t) * xi + y @ frame.T
        hits += int(np.count_nonzero(contains(body, pts)))
        left -= m
    p = hits / samples
    value = box_vol * p
    stderr = box_vol * math.sqrt(max(p * (1.0 - p), 0.0) / samples)
    return McEstimate(value, stderr, int(samples), int(seed))


# ---------------------------------------------------------------------------
# adaptive principal value


def _adaptive_midpoint(g, lo, hi, tol, max_depth=48):
    """Composite midpoint quadrature with interval bisection.

    Each interval is accepted when the one-panel midpoint value agrees with
    the two-panel refinement to its share of the tolerance; otherwise it is
    split.  The open rule never evaluates the endpoints, which lets the
    integrand carry integrable endpoint cusps.
    """
    total = 0.0
    stack = [(lo, hi, (hi - lo) * g(0.5 * (lo + hi)), tol, 0)]
    while stack:
        a, b, whole, tol_here, depth = stack.pop()
        m = 0.5 * (a + b)
        left = (m - a) * g(0.5 * (a + m))
        right = (b - m) * g(0.5 * (m + b))
        if depth >= max_depth or abs(left + right - whole) < 3.0 * tol_here:
            # midpoint refinement gains a factor ~3 on smooth integrands
            total += left + right + (left + right - whole) / 3.0
        else:
            stack.append((a, m, left, 0.5 * tol_here, depth + 1))
            stack.append((m, b, right, 0.5 * tol_here, depth + 1))
    return total


def adaptive_pv(F, a: float, b: float, t: float, tol: float = 1e-9) -> float:
    """Principal-value transform (1/pi) p.v. integral F(s)/(t-s) ds.

    Same singularity subtraction as the quadrature oracle in the transform
    module, but integrated with a bisection midpoint scheme instead of a
    Gauss rule, so the two never share a quadrature family:

        p.v. integral F(s)/(t-s) ds
            = integral (F(s) - F(t))/(t-s) ds + F(t) ln((t-a)/(b-t)).

    The subtracted integrand is continuous at s = t (value -F'(t)) and the
    open midpoint rule needs no special casing there beyond a guard.
    """
    t = float(t)
    if not a < t < b:
        raise ValueError("t must lie strictly inside (a, b)")
    ft = float(F(t))
    h = 1e-7 * (b - a)

    def integrand(s):
        if abs(s - t) < 1e-13 * (b - a):
            return (float(F(t - h)) - float(F(t + h))) / (2.0 * h)
        return (float(F(s)) - ft) / (t - s)

    v = _adaptive_midpoint(integrand, a, t, 0.5 * tol)
    v += _adaptive_midpoint(integrand, t, b, 0.5 * tol)
    return (v + ft * math.log((t - a) / (b - t))) / math.pi


# ---------------------------------------------------------------------------
# direct least squares


def dense_poly_fit(xs, ys, degree: int):
    """Least-squares polynomial fit on a scaled monomial basis.

    Returns the same report type as the condition checker but is built on
    a plain SVD solve of the scaled Vandermonde system, keeping it
    independent of the Chebyshev-basis fitting path.
    """
    from .classify import PolyFitReport
    from .hilbert import PolyCoeffs

    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.ndim != 1 or xs.shape != ys.shape:
        raise ValueError("xs and ys must be matching 1-d arrays")
    if xs.size < 2 * (degree + 1):
        raise ValueError("need at least 2*(degree+1) sample points")
    if np.unique(xs).size != xs.size:
        raise ValueError("xs must be distinct")
    mid = 0.5 * (xs.max() + xs.min())
    half = 0.5 * (xs.max() - xs.min())
    z = (xs - mid) / half
    V = np.vander(z, degree + 1, increasing=True)
    sol, _, rank, _ = np.linalg.lstsq(V, ys, rcond=None)
    if rank < degree + 1:
        raise ValueError(f"rank-deficient fit: rank {rank} < {degree + 1}")
    fit = V @ sol
    scale = float(np.max(np.abs(ys)))
    resid = float(np.max(np.abs(fit - ys))) / scale if scale > 0.0 else 0.0
    # expand sum c_j ((x-mid)/half)^j into plain monomials in x
    poly = np.polynomial.Polynomial([0.0])
    zpoly = np.polynomial.Polynomial([-mid / half, 1.0 / half])
    for j, c in enumerate(sol):
        poly = poly + c * zpoly**j
    coeffs = poly.coef
    if coeffs.size < degree + 1:
        coeffs = np.pad(coeffs, (0, degree + 1 - coeffs.size))
    return PolyFitReport(
        degree=int(degree),
        coeffs=PolyCoeffs(coeffs),
        sup_residual=resid,
        data_span=(float(xs.min()), float(xs.max())),
    )
