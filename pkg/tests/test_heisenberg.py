import numpy as np
from hypothesis import given, settings, strategies as st

from pminsurf import heisenberg as hb

coord = st.floats(min_value=-10, max_value=10, allow_nan=False)
point = st.tuples(coord, coord, coord)


def test_identity_element():
    assert np.allclose(hb.group_multiply((0, 0, 0), (2.5, -1, 7)), (2.5, -1, 7))
    assert np.allclose(hb.group_multiply((2.5, -1, 7), (0, 0, 0)), (2.5, -1, 7))


def test_hand_product():
    assert np.allclose(hb.group_multiply((1, 0, 0), (0, 1, 0)), (1, 1, -1))


@given(point)
@settings(max_examples=50, deadline=None)
def test_inverse(p):
    assert np.allclose(hb.group_multiply(p, hb.group_inverse(p)), (0, 0, 0), atol=1e-12)
    assert np.allclose(hb.group_multiply(hb.group_inverse(p), p), (0, 0, 0), atol=1e-12)


@given(point, point, point)
@settings(max_examples=100, deadline=None)
def test_associativity(p, q, r):
    lhs = hb.group_multiply(hb.group_multiply(p, q), r)
    rhs = hb.group_multiply(p, hb.group_multiply(q, r))
    assert np.allclose(lhs, rhs, atol=1e-9)


def test_left_frame_origin_and_hand_value():
    fr = hb.left_frame((0, 0, 0))
    assert np.allclose(fr.e1hat, (1, 0, 0))
    assert np.allclose(fr.e2hat, (0, 1, 0))
    fr = hb.left_frame((2, 3, 5))
    assert np.allclose(fr.e1hat, (1, 0, 3))
    assert np.allclose(fr.e2hat, (0, 1, -2))
    assert np.allclose(fr.t0, (0, 0, 1))


def test_theta0_hand_values():
    assert hb.theta0_eval((7, -3, 2), (0, 0, 1)) == 1.0   # Reeb normalization
    assert hb.theta0_eval((1, 0, 0), (0, 1, 0)) == 1.0
    assert hb.theta0_eval((1, 2, 0), (1, 0, 2)) == 0.0    # e1hat is Legendrian


@given(point)
@settings(max_examples=50, deadline=None)
def test_frame_spans_contact_plane(p):
    fr = hb.left_frame(p)
    assert abs(hb.theta0_eval(p, fr.e1hat)) < 1e-12
    assert abs(hb.theta0_eval(p, fr.e2hat)) < 1e-12
    assert abs(hb.theta0_eval(p, fr.t0) - 1.0) < 1e-12
