"""Shared fixtures: the closed-form fields used across the test modules."""

import numpy as np
import pytest

from pminsurf import families


@pytest.fixture
def field_xy():
    """u = xy: p-minimal with singular curve {x = 0}."""
    return families.make_quadratic_family(1.0, 0.0, families.g_zero())


@pytest.fixture
def field_neg_xy():
    """u = -xy: p-minimal with singular curve {y = 0}."""
    return families.make_quadratic_family(0.0, 1.0, families.g_zero())


@pytest.fixture
def field_radial():
    """u = (x^2 + y^2)/2: H = 1/(sqrt(2) r), isolated singular point at 0."""
    return families.radial_paraboloid()


@pytest.fixture
def field_zero():
    """u = 0: the plane with a = b = c = 0."""
    return families.make_plane(0.0, 0.0, 0.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
