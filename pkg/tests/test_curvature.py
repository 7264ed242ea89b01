import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pminsurf import families
from pminsurf.curvature import (Domain2, disk_area_integral, first_order_data,
                                p_area, p_mean_curvature, pmge_numerator,
                                simpson_2d, tangential_sublaplacian_check)
from pminsurf.errors import SingularError
from pminsurf.fields import rotated_field


# ---------------------------------------------------------------------------
# first_order_data
# ---------------------------------------------------------------------------

def test_first_order_data_xy(field_xy):
    fod = first_order_data(field_xy, (1.0, 2.0))
    assert fod.d == pytest.approx(2.0, abs=1e-15)
    assert np.allclose(fod.n, (0.0, 1.0))
    assert np.allclose(fod.nperp, (1.0, 0.0))
    assert fod.theta == pytest.approx(math.pi / 2)


def test_first_order_data_zero_plane(field_zero):
    fod = first_order_data(field_zero, (1.0, 0.0))
    assert fod.d == pytest.approx(1.0)
    assert np.allclose(fod.n, (0.0, 1.0))


def test_first_order_data_singular_on_curve(field_xy):
    with pytest.raises(SingularError):
        first_order_data(field_xy, (0.0, 0.37))   # {x = 0} is the singular set


def test_first_order_data_orthonormal(field_radial):
    fod = first_order_data(field_radial, (0.3, -1.2))
    assert abs(fod.n @ fod.nperp) < 1e-15
    assert abs(np.linalg.norm(fod.n) - 1) < 1e-15
    assert abs(np.linalg.norm(fod.nperp) - 1) < 1e-15
    assert np.allclose(fod.n, (math.cos(fod.theta), math.sin(fod.theta)))


# ---------------------------------------------------------------------------
# p_mean_curvature and the minimality numerator
# ---------------------------------------------------------------------------

def test_radial_curvature_closed_form(field_radial):
    assert p_mean_curvature(field_radial, (1.0, 0.0)) == pytest.approx(
        2 ** -0.5, rel=1e-14)
    for r in (0.2, 0.7, 3.0):
        assert p_mean_curvature(field_radial, (r / math.sqrt(2), r / math.sqrt(2))
                                ) == pytest.approx(2 ** -0.5 / r, rel=1e-12)


def test_plane_curvature_zero():
    f = families.make_plane(1.0, 2.0, 3.0)
    assert p_mean_curvature(f, (0.4, -0.9)) == 0.0


def test_xy_curvature_zero(field_xy):
    assert p_mean_curvature(field_xy, (1.0, 1.0)) == 0.0


def test_singular_raises(field_radial):
    with pytest.raises(SingularError):
        p_mean_curvature(field_radial, (0.0, 0.0))


def test_pmge_numerator_values(field_neg_xy, field_radial, field_zero):
    assert pmge_numerator(field_neg_xy, (0.83, -2.1)) == 0.0
    assert pmge_numerator(field_radial, (1.0, 0.0)) == pytest.approx(2.0, abs=1e-15)
    assert pmge_numerator(field_zero, (0.0, 0.0)) == 0.0   # defined at singular points


@given(st.floats(-8, 8), st.floats(-8, 8), st.floats(0, 2 * math.pi))
@settings(max_examples=60, deadline=None)
def test_pmge_zero_on_quadratic_family(x, y, ang):
    f = families.make_quadratic_family(math.cos(ang), math.sin(ang),
                                       families.g_sin(0.7, 1.3))
    gx, gy = f.shifted_gradient(x, y)
    scale = (gx * gx + gy * gy) * 10.0
    assert abs(pmge_numerator(f, (x, y))) <= 1e-12 * (1.0 + scale)


# ---------------------------------------------------------------------------
# p-area quadrature against exact oracles
# ---------------------------------------------------------------------------

def test_p_area_unit_disk(field_zero):
    # For u = 0, D = r; the exact polar integral over the unit disk is 2 pi / 3.
    val = disk_area_integral(field_zero, (0.0, 0.0), 1.0, n=65)
    assert val == pytest.approx(2 * math.pi / 3, abs=1e-12)
    # Same value through the Domain2 API: rectangle minus (rectangle minus disk).
    full = p_area(field_zero, Domain2((-1, -1, 1, 1)), n=129)
    rest = p_area(field_zero, Domain2((-1, -1, 1, 1), exclusions=((0, 0, 1),)), n=129)
    assert full - rest == pytest.approx(2 * math.pi / 3, abs=1e-12)


def test_p_area_unit_square(field_zero):
    # Exact integral of sqrt(x^2 + y^2) over [0,1]^2: (sqrt 2 + asinh 1)/3.
    exact = (math.sqrt(2) + math.asinh(1.0)) / 3.0
    val = p_area(field_zero, Domain2((0, 0, 1, 1)), n=513)
    assert val == pytest.approx(exact, abs=2e-6)


def test_p_area_scaling(field_zero):
    # D is 1-homogeneous for u = 0: doubling the domain scales the area by 8,
    # exactly, node for node, in the composite rule.
    a = p_area(field_zero, Domain2((-1, -1, 1, 1)), n=65)
    b = p_area(field_zero, Domain2((-2, -2, 2, 2)), n=65)
    assert b == pytest.approx(8.0 * a, rel=1e-14)


def test_simpson_exactness():
    assert simpson_2d(lambda X, Y: X**2 * Y**3, (0, 0, 1, 2), n=9) == pytest.approx(
        (1 / 3) * (16 / 4), rel=1e-13)


# ---------------------------------------------------------------------------
# Tangential sublaplacian identities along the characteristic flow
# ---------------------------------------------------------------------------

def test_sublaplacian_minimal(field_neg_xy):
    gaps = tangential_sublaplacian_check(field_neg_xy, (1.0, 1.0))
    assert max(abs(g) for g in gaps) < 1e-8


def test_sublaplacian_radial(field_radial):
    gx, gy, gu = tangential_sublaplacian_check(field_radial, (1.0, 0.0))
    assert abs(gu) < 1e-6
    assert abs(gx) < 1e-6 and abs(gy) < 1e-6


def test_sublaplacian_zero_plane(field_zero):
    gaps = tangential_sublaplacian_check(field_zero, (0.0, 1.0))
    assert max(abs(g) for g in gaps) < 1e-6


# ---------------------------------------------------------------------------
# Invariants
# ---------------------------------------------------------------------------

def test_rotation_invariance():
    f = families.make_quadratic_family(0.6, 0.8, families.g_sin())
    for ang in (0.3, 1.1, 2.7):
        ft = rotated_field(f, ang)
        a, b = math.cos(ang), math.sin(ang)
        for (xt, yt) in ((0.9, 0.2), (-1.1, 0.6), (0.2, -1.4)):
            x, y = a * xt - b * yt, b * xt + a * yt
            try:
                h0 = p_mean_curvature(f, (x, y))
            except SingularError:
                continue
            assert p_mean_curvature(ft, (xt, yt)) == pytest.approx(h0, abs=1e-10)


def test_sign_convention_coherence(field_radial):
    # H written through the normal angle is invariant under the branch flip
    # theta -> theta + pi (both factors flip together).
    x, y = 0.8, -0.4
    fod = first_order_data(field_radial, (x, y))
    uxx, uxy, uyy = field_radial.hessian(x, y)

    def h_from_theta(th):
        st_, ct = math.sin(th), math.cos(th)
        return (st_ * st_ * uxx - 2 * st_ * ct * uxy + ct * ct * uyy) / fod.d

    ha = h_from_theta(fod.theta)
    hb = h_from_theta(fod.theta + math.pi)
    assert ha == pytest.approx(hb, rel=1e-14)
    assert ha == pytest.approx(p_mean_curvature(field_radial, (x, y)), rel=1e-12)


def test_h_equals_divergence_of_n(field_radial):
    f = families.make_quadratic_family(0.6, 0.8, families.g_cos(0.5, 2.0))
    for fld, pt in ((field_radial, (1.3, 0.4)), (f, (0.7, -0.3))):
        h = 1e-5
        x, y = pt

        def n_of(xx, yy):
            return first_order_data(fld, (xx, yy)).n

        div = ((n_of(x + h, y)[0] - n_of(x - h, y)[0]) / (2 * h)
               + (n_of(x, y + h)[1] - n_of(x, y - h)[1]) / (2 * h))
        assert div == pytest.approx(p_mean_curvature(fld, pt), abs=1e-5)
