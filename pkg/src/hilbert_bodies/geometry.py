"""Convex bodies: gauges, support intervals, and hyperplane section volumes.

A body is an immutable specification.  Four variants are supported:

* ``Ellipsoid``     {x : (x-c)^T M (x-c) <= 1}, any dimension n >= 2
* ``Superellipsoid``  sum |x_i/a_i|^p <= 1 with even p >= 4
* ``PerturbedEllipse``  polar graph r <= R(theta), R = r0(theta)(1 + eps cos(k theta)), n=2
* ``Polygon``       convex vertex list, n=2, a deliberately non-smooth control case

The section-volume function A(xi, t) is the (n-1)-volume of the slice
{x . xi = t}.  Ellipsoids use a closed form, planar bodies use chord
root-finding, and everything else falls back to Monte Carlo (see
``oracle.mc_section_volume``).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels


class BodySpecError(ValueError):
    """Raised when a body specification violates its invariants."""


class GaugeDomainError(ValueError):
    """Raised when the gauge is requested about a non-interior origin."""


def _readonly(a, dtype=float):
    out = np.array(a, dtype=dtype)
    out.setflags(write=False)
    return out


# ---------------------------------------------------------------------------
# directions


@dataclass(frozen=True, eq=False)
class Direction:
    """Unit vector in R^n, n >= 2."""

    coords: np.ndarray

    def __post_init__(self):
        c = _readonly(self.coords)
        if c.ndim != 1 or c.size < 2:
            raise BodySpecError("direction must be a vector in R^n, n >= 2")
        nrm = float(np.linalg.norm(c))
        if abs(nrm - 1.0) > 1e-12:
            raise BodySpecError(f"direction not unit length: |xi| = {nrm!r}")
        object.__setattr__(self, "coords", c)

    @property
    def dim(self) -> int:
        return self.coords.size


def direction(coords) -> Direction:
    """Normalize a vector into a Direction; rejects the zero vector."""
    c = np.asarray(coords, dtype=float)
    nrm = np.linalg.norm(c)
    if nrm == 0.0 or not np.isfinite(nrm):
        raise BodySpecError("zero or non-finite direction vector")
    return Direction(c / nrm)


def direction_grid(dim: int, count: int, seed: int = 42) -> list[Direction]:
    """Deterministic quasi-uniform directions on the unit sphere.

    n=2 uses equally spaced angles with a seed-derived offset near half the
    spacing, which keeps the grid away from coordinate axes (several test
    bodies have flat boundary points there and Lebesgue-null degenerate
    normals are not worth sampling).  n=3 uses a Fibonacci lattice, higher
    dimensions a shifted Halton sequence pushed through the inverse normal
    CDF.
    """
    if count < 1:
        raise ValueError("count must be positive")
    frac = (seed * 0.6180339887498949) % 1.0
    if dim == 2:
        spacing = 2.0 * np.pi / count
        offset = spacing * (0.4375 + 0.125 * frac)
        angles = offset + spacing * np.arange(count)
        return [Direction(np.array([np.cos(a), np.sin(a)])) for a in angles]
    if dim == 3:
        j = np.arange(count)
        z = 1.0 - (2.0 * j + 1.0) / count
        az = 2.0 * np.pi * ((j * 0.6180339887498949 + frac) % 1.0)
        s = np.sqrt(1.0 - z * z)
        pts = np.stack([s * np.cos(az), s * np.sin(az), z], axis=1)
        return [direction(p) for p in pts]
    from scipy.special import ndtri
    from scipy.stats import qmc

    h = qmc.Halton(d=dim, scramble=False)
    h.fast_forward(1)  # first Halton point is the origin corner
    shift = (frac * (1.0 + np.arange(dim))) % 1.0
    u = (h.random(count) + shift) % 1.0
    g = ndtri(np.clip(u, 1e-12, 1.0 - 1e-12))
    return [direction(row) for row in g]


# ---------------------------------------------------------------------------
# body variants


@dataclass(frozen=True, eq=False)
class Ellipsoid:
    """{x : (x - center)^T shape_matrix (x - center) <= 1}."""

    shape_matrix: np.ndarray
    center: np.ndarray = None

    def __post_init__(self):
        m = _readonly(self.shape_matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 2:
            raise BodySpecError("shape matrix must be square, n >= 2")
        if not np.allclose(m, m.T, rtol=0.0, atol=1e-12 * max(1.0, float(np.abs(m).max()))):
            raise BodySpecError("shape matrix not symmetric")
        eigs = np.linalg.eigvalsh(m)
        if eigs[0] <= 0.0:
            raise BodySpecError(
                f"shape matrix not positive definite: eigenvalue {float(eigs[0])!r} <= 0"
            )
        c = np.zeros(m.shape[0]) if self.center is None else np.asarray(self.center, float)
        if c.shape != (m.shape[0],):
            raise BodySpecError("center dimension mismatch")
        object.__setattr__(self, "shape_matrix", m)
        object.__setattr__(self, "center", _readonly(c))

    @property
    def dim(self) -> int:
        return self.shape_matrix.shape[0]


@dataclass(frozen=True, eq=False)
class Superellipsoid:
    """sum |(x_i - c_i)/a_i|^p <= 1 with even integer exponent p >= 4."""

    semi_axes: np.ndarray
    exponent: int = 4
    center: np.ndarray = None

    def __post_init__(self):
        a = _readonly(self.semi_axes)
        if a.ndim != 1 or a.size < 2:
            raise BodySpecError("semi_axes must be a vector in R^n, n >= 2")
        if np.any(a <= 0.0):
            raise BodySpecError("semi-axes must be positive")
        p = self.exponent
        if not isinstance(p, (int, np.integer)) or p < 4 or p % 2 != 0:
            raise BodySpecError(f"exponent must be an even integer >= 4, got {p!r}")
        c = np.zeros(a.size) if self.center is None else np.asarray(self.center, float)
        if c.shape != (a.size,):
            raise BodySpecError("center dimension mismatch")
        object.__setattr__(self, "semi_axes", a)
        object.__setattr__(self, "exponent", int(p))
        object.__setattr__(self, "center", _readonly(c))

    @property
    def dim(self) -> int:
        return self.semi_axes.size


@dataclass(frozen=True, eq=False)
class PerturbedEllipse:
    """Planar body r <= R(theta) with R = r0(theta) (1 + eps cos(k theta)).

    r0 is the radial function of the ellipse with the given semi-axes.
    Convexity of the perturbed boundary is checked at construction by
    sampling the curvature numerator R^2 + 2 R'^2 - R R'' at 720 angles.
    """

    semi_axes: np.ndarray
    epsilon: float
    frequency: int
    center: np.ndarray = None

    def __post_init__(self):
        a = _readonly(self.semi_axes)
        if a.shape != (2,) or np.any(a <= 0.0):
            raise BodySpecError("perturbed ellipse needs two positive semi-axes")
        if not 0.0 <= self.epsilon <= 0.2:
            raise BodySpecError(f"epsilon must lie in [0, 0.2], got {self.epsilon!r}")
        if not isinstance(self.frequency, (int, np.integer)) or self.frequency < 3:
            raise BodySpecError("frequency must be an integer >= 3")
        c = np.zeros(2) if self.center is None else np.asarray(self.center, float)
        if c.shape != (2,):
            raise BodySpecError("center dimension mismatch")
        object.__setattr__(self, "semi_axes", a)
        object.__setattr__(self, "epsilon", float(self.epsilon))
        object.__setattr__(self, "frequency", int(self.frequency))
        object.__setattr__(self, "center", _readonly(c))
        bad = self._curvature_violation()
        if bad is not None:
            raise BodySpecError(
                f"perturbation breaks convexity near theta = {bad:.4f} rad"
            )

    def _curvature_violation(self):
        th = np.linspace(0.0, 2.0 * np.pi, 720, endpoint=False)
        aa, bb = self.semi_axes
        e, k = self.epsilon, self.frequency
        den = (bb * np.cos(th)) ** 2 + (aa * np.sin(th)) ** 2
        r0 = aa * bb / np.sqrt(den)
        d_den = (aa * aa - bb * bb) * np.sin(2.0 * th)
        r0p = -0.5 * aa * bb * d_den / den**1.5
        dd_den = 2.0 * (aa * aa - bb * bb) * np.cos(2.0 * th)
        r0pp = aa * bb * (0.75 * d_den**2 / den**2.5 - 0.5 * dd_den / den**1.5)
        w = 1.0 + e * np.cos(k * th)
        wp = -e * k * np.sin(k * th)
        wpp = -e * k * k * np.cos(k * th)
        r = r0 * w
        rp = r0p * w + r0 * wp
        rpp = r0pp * w + 2.0 * r0p * wp + r0 * wpp
        num = r * r + 2.0 * rp * rp - r * rpp
        i = int(np.argmin(num))
        if num[i] < -1e-12 * float(np.max(r * r)):
            return float(th[i])
        return None

    @property
    def dim(self) -> int:
        return 2


@dataclass(frozen=True, eq=False)
class Polygon:
    """Convex polygon from a counterclockwise vertex list (n=2).

    Violates the smoothness assumptions of the classification results;
    downstream consumers flag it instead of interpreting its exponents.
    """

    vertices: np.ndarray
    center: np.ndarray = field(init=False)
    _normals: np.ndarray = field(init=False, repr=False)
    _offsets: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        v = _readonly(self.vertices)
        if v.ndim != 2 or v.shape[1] != 2 or v.shape[0] < 3:
            raise BodySpecError("polygon needs at least 3 planar vertices")
        e = np.roll(v, -1, axis=0) - v
        cross = e[:, 0] * np.roll(e, -1, axis=0)[:, 1] - e[:, 1] * np.roll(e, -1, axis=0)[:, 0]
        if np.any(cross <= 0.0):
            raise BodySpecError(
                "vertices must be strictly convex and counterclockwise"
            )
        # area centroid via the shoelace decomposition
        w = v[:, 0] * np.roll(v[:, 1], -1) - np.roll(v[:, 0], -1) * v[:, 1]
        area = 0.5 * np.sum(w)
        cx = np.sum((v[:, 0] + np.roll(v[:, 0], -1)) * w) / (6.0 * area)
        cy = np.sum((v[:, 1] + np.roll(v[:, 1], -1)) * w) / (6.0 * area)
        c = np.array([cx, cy])
        normals = np.stack([e[:, 1], -e[:, 0]], axis=1)
        normals /= np.linalg.norm(normals, axis=1)[:, None]
        offsets = np.einsum("ij,ij->i", normals, v - c)
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "center", _readonly(c))
        object.__setattr__(self, "_normals", _readonly(normals))
        object.__setattr__(self, "_offsets", _readonly(offsets))

    @property
    def dim(self) -> int:
        return 2


Body = Ellipsoid | Superellipsoid | PerturbedEllipse | Polygon


# ---------------------------------------------------------------------------
# gauges


def _centered_gauge_many(body: Body, pts: np.ndarray) -> np.ndarray:
    """Minkowski functional about the body's own center, vectorized."""
    if isinstance(body, Ellipsoid):
        return kernels.gauge_ellipsoid(pts, body.shape_matrix, body.center)
    if isinstance(body, Superellipsoid):
        return kernels.gauge_superellipsoid(
            pts, 1.0 / body.semi_axes, float(body.exponent), body.center
        )
    if isinstance(body, PerturbedEllipse):
        return kernels.gauge_perturbed_ellipse(
            pts,
            float(body.semi_axes[0]),
            float(body.semi_axes[1]),
            body.epsilon,
            float(body.frequency),
            body.center,
        )
    if isinstance(body, Polygon):
        return kernels.gauge_polygon(pts - body.center, body._normals, body._offsets)
    raise TypeError(f"unknown body type {type(body).__name__}")


def contains(body: Body, pts) -> np.ndarray:
    """Membership test, vectorized over rows of pts."""
    return _centered_gauge_many(body, np.atleast_2d(np.asarray(pts, float))) <= 1.0


def gauge_many(body: Body, pts) -> np.ndarray:
    """Minkowski functional about the origin for each row of pts.

    Closed form when the body is centered at the origin; otherwise bisection
    along the ray from the origin (absolute tolerance 1e-12), which requires
    the origin to be interior.
    """
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    if not np.any(body.center):
        return _centered_gauge_many(body, pts)
    origin = np.zeros((1, body.dim))
    if _centered_gauge_many(body, origin)[0] >= 1.0 - 1e-12:
        raise GaugeDomainError("origin not interior to the body")
    nrm = np.linalg.norm(pts, axis=1)
    out = np.zeros(len(pts))
    live = nrm > 0.0
    if not np.any(live):
        return out
    p = pts[live]
    hi = np.ones(len(p))
    # grow until x/hi is inside, i.e. hi >= gauge(x)
    for _ in range(200):
        outside = _centered_gauge_many(body, p / hi[:, None]) > 1.0
        if not np.any(outside):
            break
        hi[outside] *= 2.0
    lo = np.zeros_like(hi)
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        inside = _centered_gauge_many(body, p / np.maximum(mid, 1e-300)[:, None]) <= 1.0
        hi = np.where(inside, mid, hi)
        lo = np.where(inside, lo, mid)
    out[live] = 0.5 * (lo + hi)
    return out


def gauge(body: Body, x) -> float:
    """Scalar Minkowski functional about the origin."""
    return float(gauge_many(body, np.asarray(x, float)[None, :])[0])


# ---------------------------------------------------------------------------
# support intervals


def _boundary_points(body: Body, thetas) -> np.ndarray:
    """Boundary of a planar body at polar angles about its center."""
    th = np.atleast_1d(np.asarray(thetas, dtype=float))
    e = np.stack([np.cos(th), np.sin(th)], axis=1)
    g = _centered_gauge_many(body, body.center + e)
    return body.center + e / g[:, None]


def _support_angle_2d(body: Body, xi: np.ndarray, sign: float) -> float:
    """Polar angle maximizing sign * (boundary(theta) . xi), by coarse scan
    plus golden-section refinement."""

    def f(th):
        return sign * (_boundary_points(body, th) @ xi)

    grid = np.linspace(0.0, 2.0 * np.pi, 4096, endpoint=False)
    vals = f(grid)
    i = int(np.argmax(vals))
    step = 2.0 * np.pi / 4096
    lo, hi = grid[i] - step, grid[i] + step
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = hi - invphi * (hi - lo)
    d = lo + invphi * (hi - lo)
    fc, fd = f([c])[0], f([d])[0]
    for _ in range(120):
        if fc > fd:
            hi, d, fd = d, c, fc
            c = hi - invphi * (hi - lo)
            fc = f([c])[0]
        else:
            lo, c, fc = c, d, fd
            d = lo + invphi * (hi - lo)
            fd = f([d])[0]
    return 0.5 * (lo + hi)


def _superellipsoid_grad(body: Superellipsoid, x: np.ndarray) -> np.ndarray:
    d = x - body.center
    p = body.exponent
    g = float(_centered_gauge_many(body, x[None, :])[0])
    if g == 0.0:
        return np.zeros_like(d)
    return g ** (1 - p) * np.abs(d) ** (p - 1) * np.sign(d) / body.semi_axes**p


def _support_ascent(body: Superellipsoid, xi: np.ndarray, restarts: int = 32) -> float:
    """max x.xi over the centered body via projected gradient ascent on the
    sphere; the objective (u.xi)/gauge(u) is degree-0 homogeneous and has a
    unique maximizer for smooth strictly convex bodies."""
    n = body.dim
    centered = Superellipsoid(body.semi_axes, body.exponent)

    def phi_and_grad(u):
        g = float(_centered_gauge_many(centered, u[None, :])[0])
        val = (u @ xi) / g
        grad = xi / g - (u @ xi) * _superellipsoid_grad(centered, u) / g**2
        grad -= (grad @ u) * u
        return val, grad

    starts = []
    for i in range(n):
        for s in (1.0, -1.0):
            e = np.zeros(n)
            e[i] = s
            starts.append(e)
    rule = 0.6180339887498949
    k = 0
    while len(starts) < restarts:
        k += 1
        v = np.cos(2.0 * np.pi * ((k * rule * (1.0 + np.arange(n))) % 1.0))
        nv = np.linalg.norm(v)
        if nv > 1e-9:
            starts.append(v / nv)
    best = -np.inf
    for u0 in starts[:restarts]:
        u = u0.copy()
        val, grad = phi_and_grad(u)
        alpha = 1.0
        for _ in range(200):
            gn = np.linalg.norm(grad)
            if gn < 1e-12:
                break
            stepped = False
            while alpha > 1e-16:
                cand = u + alpha * grad
                cand /= np.linalg.norm(cand)
                cval, cgrad = phi_and_grad(cand)
                if cval > val + 1e-4 * alpha * gn * gn:
                    u, val, grad = cand, cval, cgrad
                    alpha = min(alpha * 2.0, 1.0)
                    stepped = True
                    break
                alpha *= 0.5
            if not stepped:
                break
        best = max(best, val)
    return best


def support_interval(body: Body, dir: Direction) -> "SupportInterval":
    """(min, max) of x . xi over the body."""
    xi = dir.coords
    if xi.size != body.dim:
        raise BodySpecError("direction dimension does not match the body")
    if isinstance(body, Ellipsoid):
        h = math.sqrt(float(xi @ np.linalg.solve(body.shape_matrix, xi)))
        cdot = float(body.center @ xi)
        return SupportInterval(cdot - h, cdot + h)
    if isinstance(body, Polygon):
        vals = body.vertices @ xi
        return SupportInterval(float(vals.min()), float(vals.max()))
    cdot = float(body.center @ xi)
    if body.dim == 2:
        tp = _support_angle_2d(body, xi, +1.0)
        tm = _support_angle_2d(body, xi, -1.0)
        hp = float(_boundary_points(body, tp)[0] @ xi)
        hm = float(_boundary_points(body, tm)[0] @ xi)
        return SupportInterval(hm, hp)
    hp = _support_ascent(body, xi)
    hm = _support_ascent(body, -xi)
    return SupportInterval(cdot - hm, cdot + hp)


@dataclass(frozen=True)
class SupportInterval:
    """The slice parameter interval (h_minus, h_plus)."""

    h_minus: float
    h_plus: float

    def __post_init__(self):
        object.__setattr__(self, "h_minus", float(self.h_minus))
        object.__setattr__(self, "h_plus", float(self.h_plus))
        if not self.h_minus < self.h_plus:
            raise BodySpecError(
                f"degenerate support interval [{self.h_minus}, {self.h_plus}]"
            )

    @property
    def width(self) -> float:
        return self.h_plus - self.h_minus

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.h_minus + self.h_plus)


# ---------------------------------------------------------------------------
# section volumes


def _unit_ball_volume(d: int) -> float:
    return math.pi ** (d / 2.0) / math.gamma(d / 2.0 + 1.0)


def _ellipsoid_section(body: Ellipsoid, xi: np.ndarray, t) -> np.ndarray:
    """Closed-form slice volume of an ellipsoid.

    With h the support radius about the center and tau the centered slice
    parameter, A = kappa_{n-1} det(M)^{-1/2} h^{-n} (h^2 - tau^2)^{(n-1)/2};
    the constant is fixed by matching the unit-ball case.
    """
    n = body.dim
    h = math.sqrt(float(xi @ np.linalg.solve(body.shape_matrix, xi)))
    tau = np.asarray(t, dtype=float) - float(body.center @ xi)
    det = float(np.linalg.det(body.shape_matrix))
    gap = np.maximum(h * h - tau * tau, 0.0)
    return _unit_ball_volume(n - 1) / math.sqrt(det) / h**n * gap ** ((n - 1) / 2.0)


def _chord_many(body: Body, xi: np.ndarray, ts: np.ndarray) -> np.ndarray:
    """Chord lengths of a planar body, vectorized over slice parameters.

    The boundary is parametrized by polar angle about the center; the slice
    height is strictly monotone on each of the two arcs between the support
    maximizer and minimizer, so bisection applies."""
    tp = _support_angle_2d(body, xi, +1.0)
    tm = _support_angle_2d(body, xi, -1.0)
    hp = float(_boundary_points(body, tp)[0] @ xi)
    hm = float(_boundary_points(body, tm)[0] @ xi)
    if tm < tp:
        tm += 2.0 * np.pi

    def height(th):
        return _boundary_points(body, th) @ xi

    ts = np.asarray(ts, dtype=float)
    out = np.zeros_like(ts)
    inside = (ts > hm) & (ts < hp)
    if not np.any(inside):
        return out
    tt = ts[inside]

    def solve(lo0, hi0):
        lo = np.full(tt.shape, lo0)
        hi = np.full(tt.shape, hi0)
        flo = height(lo) - tt
        for _ in range(100):
            mid = 0.5 * (lo + hi)
            fm = height(mid) - tt
            same = flo * fm > 0.0
            lo = np.where(same, mid, lo)
            flo = np.where(same, fm, flo)
            hi = np.where(same, hi, mid)
        return 0.5 * (lo + hi)

    th1 = solve(tp, tm)
    th2 = solve(tm, tp + 2.0 * np.pi)
    p1 = _boundary_points(body, th1)
    p2 = _boundary_points(body, th2)
    out[inside] = np.linalg.norm(p1 - p2, axis=1)
    return out


def _section_with_err(body, xi, t, mc_samples, seed):
    """(value, stderr, source) triple behind section_volume and profiles."""
    if isinstance(body, Ellipsoid):
        return float(_ellipsoid_section(body, xi, t)), 0.0, "closed-form"
    if body.dim == 2:
        return float(_chord_many(body, xi, np.array([t]))[0]), 0.0, "chord"
    from . import oracle

    est = oracle.mc_section_volume(body, Direction(xi), float(t), mc_samples, seed)
    return est.value, est.stderr, "monte-carlo"


def section_volume(
    body: Body,
    dir: Direction,
    t: float,
    mc_samples: int = 10**6,
    seed: int = 42,
) -> float:
    """A(xi, t): slice volume at height t; zero outside the support interval."""
    value, _, _ = _section_with_err(body, dir.coords, t, mc_samples, seed)
    return value


@dataclass(frozen=True, eq=False)
class SectionProfile:
    """Section volumes sampled at Chebyshev nodes of the support interval."""

    direction: Direction
    interval: SupportInterval
    nodes: np.ndarray
    values: np.ndarray
    source: str
    stderr: np.ndarray = None

    def __post_init__(self):
        object.__setattr__(self, "nodes", _readonly(self.nodes))
        object.__setattr__(self, "values", _readonly(self.values))
        if self.stderr is not None:
            object.__setattr__(self, "stderr", _readonly(self.stderr))
        if np.any(self.values < 0.0):
            raise BodySpecError("negative section volume in profile")


def chebyshev_nodes(interval: SupportInterval, node_count: int) -> np.ndarray:
    """Second-kind Chebyshev nodes mapped to the open interval, ascending."""
    j = np.arange(1, node_count + 1)
    u = np.cos(j * np.pi / (node_count + 1))[::-1]
    return interval.midpoint + 0.5 * interval.width * u


def sample_profile(
    body: Body,
    dir: Direction,
    node_count: int = 128,
    mc_samples: int = 10**6,
    seed: int = 42,
) -> SectionProfile:
    """Evaluate A(xi, .) at interior Chebyshev nodes.

    The endpoints are avoided on purpose: the profile vanishes there with
    half-integer order and its interval Hilbert transform picks up
    logarithmic endpoint terms.
    """
    if node_count < 8:
        raise ValueError("node_count must be at least 8")
    xi = dir.coords
    iv = support_interval(body, dir)
    ts = chebyshev_nodes(iv, node_count)
    if isinstance(body, Ellipsoid):
        return SectionProfile(dir, iv, ts, _ellipsoid_section(body, xi, ts), "closed-form")
    if body.dim == 2:
        return SectionProfile(dir, iv, ts, _chord_many(body, xi, ts), "chord")
    from . import oracle

    vals = np.empty(node_count)
    errs = np.empty(node_count)
    for i, t in enumerate(ts):
        est = oracle.mc_section_volume(body, dir, float(t), mc_samples, seed * 1_000_003 + i)
        vals[i] = est.value
        errs[i] = est.stderr
    return SectionProfile(dir, iv, ts, vals, "monte-carlo", errs)


# ---------------------------------------------------------------------------
# serialization


def body_from_dict(spec: dict) -> Body:
    """Build a body from its JSON-level dictionary."""
    if not isinstance(spec, dict) or "kind" not in spec:
        raise BodySpecError("body spec must be an object with a 'kind' field")
    kind = spec["kind"]
    dim = spec.get("dim")
    try:
        if kind == "ellipsoid":
            body = Ellipsoid(np.array(spec["shape_matrix"], float), spec.get("center"))
        elif kind == "superellipsoid":
            body = Superellipsoid(
                np.array(spec["semi_axes"], float),
                int(spec.get("exponent", 4)),
                spec.get("center"),
            )
        elif kind == "perturbed_ellipse":
            body = PerturbedEllipse(
                np.array(spec["semi_axes"], float),
                float(spec["epsilon"]),
                int(spec["frequency"]),
                spec.get("center"),
            )
        elif kind == "polygon":
            body = Polygon(np.array(spec["vertices"], float))
        else:
            raise BodySpecError(f"unknown body kind {kind!r}")
    except KeyError as exc:
        raise BodySpecError(f"body spec missing field {exc.args[0]!r}") from exc
    except (TypeError, ValueError) as exc:
        if isinstance(exc, BodySpecError):
            raise
        raise BodySpecError(f"bad field in body spec: {exc}") from exc
    if dim is not None and int(dim) != body.dim:
        raise BodySpecError(f"declared dim {dim} does not match body dimension {body.dim}")
    return body


def body_to_dict(body: Body) -> dict:
    if isinstance(body, Ellipsoid):
        return {
            "kind": "ellipsoid",
            "dim": body.dim,
            "shape_matrix": body.shape_matrix.tolist(),
            "center": body.center.tolist(),
        }
    if isinstance(body, Superellipsoid):
        return {
            "kind": "superellipsoid",
            "dim": body.dim,
            "semi_axes": body.semi_axes.tolist(),
            "exponent": body.exponent,
            "center": body.center.tolist(),
        }
    if isinstance(body, PerturbedEllipse):
        return {
            "kind": "perturbed_ellipse",
            "dim": 2,
            "semi_axes": body.semi_axes.tolist(),
            "epsilon": body.epsilon,
            "frequency": body.frequency,
            "center": body.center.tolist(),
        }
    if isinstance(body, Polygon):
        return {"kind": "polygon", "dim": 2, "vertices": body.vertices.tolist()}
    raise TypeError(f"unknown body type {type(body).__name__}")


def load_body(path) -> Body:
    with open(path, "r", encoding="utf-8") as fh:
        spec = json.load(fh)
    return body_from_dict(spec)
