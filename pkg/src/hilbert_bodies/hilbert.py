"""Finite Hilbert transform on an interval.

The workhorse representation is a square-root weighted Chebyshev series

    F(t) = sqrt((b-t)(t-a)) * sum_k g_k U_k(u(t)),   u(t) = (2t-a-b)/(b-a),

for which the principal-value transform has an exact spectral image:

    (1/pi) p.v. integral F(s)/(t-s) ds = r * sum_k g_k T_{k+1}(u(t)),

with r = (b-a)/2.  The k=0 case is the classical arch identity
H(sqrt((b-s)(s-a)))(t) = t - (a+b)/2; the general case follows from the
T/U recurrences.  A quadrature-based principal-value evaluator doubles as
an independent oracle and shares no code with the spectral route.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.fft import dst
from scipy.integrate import quad

from . import kernels


@dataclass(frozen=True, eq=False)
class WeightedSeries:
    """Coefficients g_k of F = sqrt((b-t)(t-a)) * sum g_k U_k(u(t))."""

    a: float
    b: float
    coeffs: np.ndarray

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError("need a < b")
        c = np.array(self.coeffs, dtype=float)
        if c.ndim != 1 or c.size == 0 or not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be a finite 1-d array")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def half_width(self) -> float:
        return 0.5 * (self.b - self.a)

    @property
    def tail_decay(self) -> float:
        """|g_K| / max|g_k|, a cheap truncation diagnostic."""
        peak = float(np.max(np.abs(self.coeffs)))
        if peak == 0.0:
            return 0.0
        return float(abs(self.coeffs[-1])) / peak


@dataclass(frozen=True, eq=False)
class PolyCoeffs:
    """Polynomial sum_j c_j t^j, constant term first."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float)
        if c.ndim != 1 or c.size == 0 or not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be a finite 1-d array")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        """Highest index with |c_j| above 1e-12 of the largest coefficient."""
        c = np.abs(self.coeffs)
        thresh = 1e-12 * float(c.max())
        idx = np.nonzero(c > thresh)[0]
        return int(idx[-1]) if idx.size else 0

    def __call__(self, t):
        return np.polynomial.polynomial.polyval(t, self.coeffs)


def _to_u(a: float, b: float, t):
    return (2.0 * np.asarray(t, dtype=float) - a - b) / (b - a)


def _weight(a: float, b: float, t):
    t = np.asarray(t, dtype=float)
    return np.sqrt(np.maximum((b - t) * (t - a), 0.0))


# ---------------------------------------------------------------------------
# projection and evaluation


def project_samples(a: float, b: float, nodes, values) -> WeightedSeries:
    """Interpolatory projection of samples at second-kind Chebyshev nodes.

    The samples are divided by the square-root weight and projected against
    U_k with the discrete sine transform; the resulting series interpolates
    the data exactly at the nodes.
    """
    nodes = np.asarray(nodes, dtype=float)
    values = np.asarray(values, dtype=float)
    n = nodes.size
    if n < 8 or values.shape != nodes.shape:
        raise ValueError("need matching node/value arrays with at least 8 entries")
    order = np.argsort(nodes)[::-1]  # descending t, i.e. canonical node index
    u = _to_u(a, b, nodes[order])
    j = np.arange(1, n + 1)
    u_ref = np.cos(j * np.pi / (n + 1))
    if np.max(np.abs(u - u_ref)) > 1e-8:
        raise ValueError("nodes are not second-kind Chebyshev nodes of the interval")
    phi = j * np.pi / (n + 1)
    w = _weight(a, b, nodes[order])
    g = dst(values[order] / w * np.sin(phi), type=1) / (n + 1)
    series = WeightedSeries(a, b, g)
    recon = eval_weighted_series(series, nodes)
    err = float(np.max(np.abs(recon - values)))
    scale = float(np.max(np.abs(values))) or 1.0
    if err > 1e-8 * scale:
        raise ValueError(f"projection round trip failed: error {err:.3e}")
    return series


def to_weighted_series(profile) -> WeightedSeries:
    """Spectral representation of a section profile (see project_samples)."""
    iv = profile.interval
    return project_samples(iv.h_minus, iv.h_plus, profile.nodes, profile.values)


def eval_weighted_series(series: WeightedSeries, t):
    """F(t); zero outside [a, b] by convention."""
    arr = np.asarray(t, dtype=float)
    u = np.clip(_to_u(series.a, series.b, arr), -1.0, 1.0)
    out = _weight(series.a, series.b, arr) * kernels.cheb_u_series(u, series.coeffs)
    return float(out[0]) if arr.ndim == 0 else out


# ---------------------------------------------------------------------------
# the transform


def hilbert_on_interval(series: WeightedSeries, t):
    """Spectral transform value at interior t: r * sum g_k T_{k+1}(u)."""
    arr = np.asarray(t, dtype=float)
    if np.any(arr <= series.a) or np.any(arr >= series.b):
        raise ValueError("t outside the open interval; use hilbert_outside")
    u = _to_u(series.a, series.b, arr)
    out = series.half_width * kernels.cheb_t1_series(u, series.coeffs)
    return float(out[0]) if arr.ndim == 0 else out


def hilbert_outside(series: WeightedSeries, t: float) -> float:
    """Transform value strictly outside [a, b], by regular quadrature.

    The integrand F(s)/(t-s) is smooth inside the interval apart from the
    square-root cusps at the endpoints; no principal value is involved.
    """
    t = float(t)
    if series.a <= t <= series.b:
        raise ValueError("t inside the interval; use hilbert_on_interval")

    def integrand(s):
        return eval_weighted_series(series, s) / (t - s)

    val, err = quad(
        integrand, series.a, series.b, epsabs=1e-12, epsrel=1e-11, limit=300
    )
    if err > 1e-10 * max(1.0, abs(val)):
        raise RuntimeError(f"exterior quadrature reached only {err:.2e}")
    return val / math.pi


def moment_sqrt(a: float, b: float, j: int) -> float:
    """integral_a^b s^j sqrt((b-s)(s-a)) ds in closed form.

    Substituting s = m + r u turns the weight into r sqrt(1-u^2) and the
    moment into a binomial sum over even semicircle moments
    W_{2l} = (pi/2) (2l)! / (4^l l! (l+1)!).
    """
    if not a < b:
        raise ValueError("need a < b")
    if j < 0:
        raise ValueError("j must be nonnegative")
    m = 0.5 * (a + b)
    r = 0.5 * (b - a)
    total = 0.0
    for i in range(0, j + 1, 2):
        l = i // 2
        w = 0.5 * math.pi * math.factorial(2 * l) / (
            4**l * math.factorial(l) * math.factorial(l + 1)
        )
        total += math.comb(j, i) * m ** (j - i) * r**i * w
    return r * r * total


def hilbert_sqrt_monomial(a: float, b: float, k: int) -> PolyCoeffs:
    """Exact polynomial H(s^k sqrt((b-s)(s-a)))(t) on (a, b).

    Induction on the multiply-by-s relation: each step multiplies the
    previous polynomial by t and subtracts moment_sqrt(a, b, k-1)/pi from
    the constant term; the base case is the arch identity t - (a+b)/2.
    The result has degree exactly k+1 with unit leading coefficient.
    """
    if not a < b:
        raise ValueError("need a < b")
    if not 0 <= k <= 30:
        raise ValueError("k must lie in [0, 30]")
    coeffs = np.array([-0.5 * (a + b), 1.0])
    for i in range(1, k + 1):
        shifted = np.concatenate([[0.0], coeffs])
        shifted[0] -= moment_sqrt(a, b, i - 1) / math.pi
        coeffs = shifted
    return PolyCoeffs(coeffs)


def finite_hilbert_invert(hvalues, a: float, b: float, total_integral: float, t: float) -> float:
    """Recover F(t) on (a, b) from its transform and its total integral.

    Uses the inversion identity

        sqrt((b-t)(t-a)) F(t) = -H( sqrt((b-s)(s-a)) HF(s) )(t)
                                 + (1/pi) integral_a^b F,

    evaluating the outer transform spectrally on the weighted product.
    """
    t = float(t)
    if not a < t < b:
        raise ValueError("inversion undefined at endpoints")
    n = 256
    j = np.arange(1, n + 1)
    nodes = 0.5 * (a + b) + 0.5 * (b - a) * np.cos(j * np.pi / (n + 1))[::-1]
    hv = np.asarray(hvalues(nodes), dtype=float)
    if hv.shape != nodes.shape:
        hv = np.array([float(hvalues(x)) for x in nodes])
    inner = project_samples(a, b, nodes, _weight(a, b, nodes) * hv)
    outer = hilbert_on_interval(inner, t)
    return (-outer + total_integral / math.pi) / float(_weight(a, b, t))


# ---------------------------------------------------------------------------
# quadrature oracle and the fractional tail integral


def pv_hilbert_oracle(F, a: float, b: float, t: float) -> float:
    """Principal-value transform by singularity-subtracted quadrature.

    (1/pi) [ integral (F(s) - F(t))/(t - s) ds + F(t) ln((t-a)/(b-t)) ].

    Independent of the spectral route; used to validate it.  Tolerance
    1e-9, absolute for order-one functions and relative to the function's
    magnitude above that.
    """
    t = float(t)
    if not a < t < b:
        raise ValueError("t must lie strictly inside (a, b)")
    ft = float(F(t))
    h = 1e-7 * (b - a)

    def integrand(s):
        if abs(s - t) < 1e-13 * (b - a):
            # remove the 0/0 with a centered difference quotient
            return (float(F(t - h)) - float(F(t + h))) / (2.0 * h)
        return (float(F(s)) - ft) / (t - s)

    v1, e1 = quad(integrand, a, t, epsabs=1e-10, epsrel=1e-10, limit=500)
    v2, e2 = quad(integrand, t, b, epsabs=1e-10, epsrel=1e-10, limit=500)
    scale = max(
        1.0, abs(ft), *(abs(float(F(a + (b - a) * f))) for f in (0.25, 0.5, 0.75))
    )
    if e1 + e2 > 1e-9 * scale:
        raise RuntimeError(f"principal value quadrature reached only {e1 + e2:.2e}")
    log_term = ft * math.log((t - a) / (b - t))
    return (v1 + v2 + log_term) / math.pi


def fractional_derivative_at_zero(f, q: float) -> float:
    """Weighted tail integral (1/Gamma(-q)) integral_0^inf t^(-1-q) f(-t) dt.

    Valid for q strictly inside (-1, 0); the integrand's algebraic
    singularity at 0 is handled by weighted quadrature on [0, 1] and the
    tail requires f(-t) to decay at least like 1/t.
    """
    q = float(q)
    if not -1.0 < q < 0.0:
        raise ValueError("q must lie strictly inside (-1, 0)")
    alpha = -1.0 - q

    # Decay probe: the tail integral of t^(-1-q) f(-t) converges only when
    # f(-t) falls off faster than t^q; quad's infinite-interval transform
    # maps a divergent tail to a finite wrong answer with a small error
    # estimate, so non-decay must be caught before quadrature.
    near = max(abs(float(f(-t))) for t in (3e3, 1e4, 3e4))
    far = max(abs(float(f(-t))) for t in (3e7, 1e8, 3e8))
    if near == 0.0:
        if far > 0.0:
            raise RuntimeError("integrand does not decay along the tail")
    else:
        beta = math.inf if far == 0.0 else math.log(near / far) / math.log(1e4)
        if beta <= -q + 1e-3:
            raise RuntimeError(
                f"integrand decays like t^-{beta:.3f}, too slow for q = {q}; "
                "the tail integral diverges"
            )

    head, e1 = quad(
        lambda t: float(f(-t)), 0.0, 1.0, weight="alg", wvar=(alpha, 0.0),
        epsabs=1e-12, epsrel=1e-9, limit=300,
    )
    tail, e2 = quad(
        lambda t: t**alpha * float(f(-t)), 1.0, np.inf,
        epsabs=1e-12, epsrel=1e-9, limit=300,
    )
    val = head + tail
    if e1 + e2 > 1e-8 * max(1.0, abs(val)):
        raise RuntimeError(
            f"tail integral did not converge (error {e1 + e2:.2e}); "
            "integrand may not decay"
        )
    return val / math.gamma(-q)
