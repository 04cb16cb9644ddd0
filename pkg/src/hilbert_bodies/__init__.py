"""Section-volume functions of convex bodies, the finite Hilbert transform
on an interval, and numerical tests of the ellipsoid polynomiality
conditions."""

from .geometry import (
    BodySpecError,
    Direction,
    GaugeDomainError,
    Ellipsoid,
    PerturbedEllipse,
    Polygon,
    SectionProfile,
    Superellipsoid,
    SupportInterval,
    body_from_dict,
    body_to_dict,
    direction,
    direction_grid,
    gauge,
    gauge_many,
    load_body,
    sample_profile,
    section_volume,
    support_interval,
)
from .hilbert import (
    PolyCoeffs,
    WeightedSeries,
    eval_weighted_series,
    finite_hilbert_invert,
    fractional_derivative_at_zero,
    hilbert_on_interval,
    hilbert_outside,
    hilbert_sqrt_monomial,
    moment_sqrt,
    pv_hilbert_oracle,
    to_weighted_series,
)
from .classify import (
    AsymptoticsReport,
    BodyVerdict,
    DirectionVerdict,
    MultiFitReport,
    NoiseFloorError,
    PolyFitReport,
    QFactor,
    check_condition,
    estimate_exponent,
    fit_q,
    minkowski_parity_check,
    verdict,
)
from .oracle import (
    McEstimate,
    adaptive_pv,
    dense_poly_fit,
    mc_section_volume,
)
from .kernels import BACKEND

__version__ = "0.1.0"
