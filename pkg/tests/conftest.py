"""Shared fixtures: canonical test bodies and a random-ellipsoid factory."""

import numpy as np
import pytest

from hilbert_bodies import Ellipsoid, PerturbedEllipse, Polygon, Superellipsoid


def random_ellipsoid(rng: np.random.Generator, n: int, centered: bool = False) -> Ellipsoid:
    """Rotated ellipsoid with semi-axes in [0.6, 2.2] and a small center shift.

    The shape matrix is Q diag(1/axes^2) Q^T for a Haar-ish rotation Q, then
    symmetrized so the construction-time symmetry check never trips on
    rounding.
    """
    q, _ = np.linalg.qr(rng.normal(size=(n, n)))
    axes = rng.uniform(0.6, 2.2, size=n)
    m = q @ np.diag(1.0 / axes**2) @ q.T
    m = 0.5 * (m + m.T)
    center = None if centered else rng.uniform(-0.4, 0.4, size=n)
    return Ellipsoid(m, center)


@pytest.fixture(scope="session")
def disk():
    return Ellipsoid(np.eye(2))


@pytest.fixture(scope="session")
def ellipse21():
    """Axis-aligned ellipse with semi-axes (2, 1): x^2/4 + y^2 <= 1."""
    return Ellipsoid(np.diag([0.25, 1.0]))


@pytest.fixture(scope="session")
def ball3():
    return Ellipsoid(np.eye(3))


@pytest.fixture(scope="session")
def ball4():
    return Ellipsoid(np.eye(4))


@pytest.fixture(scope="session")
def superellipse():
    """Unit p=4 ball in the plane, the canonical smooth non-ellipsoid."""
    return Superellipsoid(np.array([1.0, 1.0]), 4)


@pytest.fixture(scope="session")
def perturbed():
    """Convex cos(3 theta) perturbation of the (1.3, 1) ellipse."""
    return PerturbedEllipse(np.array([1.3, 1.0]), 0.05, 3)


@pytest.fixture(scope="session")
def square():
    return Polygon(np.array([[1.0, -1.0], [1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0]]))
