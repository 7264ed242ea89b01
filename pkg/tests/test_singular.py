import json
import math

import numpy as np
import pytest

from pminsurf import families
from pminsurf import singular as sg
from pminsurf.curvature import Domain2, first_order_data
from pminsurf.errors import (NotSingularError, RankFullError, UnstableWindingError)


# ---------------------------------------------------------------------------
# U matrix
# ---------------------------------------------------------------------------

def test_u_matrix_radial(field_radial):
    u = sg.u_matrix(field_radial, (0.0, 0.0))
    assert np.allclose(u, [[1, -1], [1, 1]])
    assert np.linalg.det(u) == pytest.approx(2.0)


def test_u_matrix_example3():
    u = sg.u_matrix(families.example3_field(3.0), (0.0, 0.0))
    assert np.allclose(u, [[1, -1], [1, -1]])
    assert abs(np.linalg.det(u)) < 1e-15


def test_u_matrix_neg_xy(field_neg_xy):
    u = sg.u_matrix(field_neg_xy, (0.0, 0.0))
    assert np.allclose(u, [[0, -2], [0, 0]])
    assert np.linalg.det(u) == 0.0


def test_u_matrix_never_zero(rng):
    # off-diagonal entries differ by 2, so U cannot vanish
    f = families.make_quadratic_family(0.6, 0.8, families.g_sin())
    for _ in range(50):
        p = rng.uniform(-3, 3, size=2)
        u = sg.u_matrix(f, p)
        assert np.max(np.abs(u)) >= 1.0 - 1e-12


# ---------------------------------------------------------------------------
# scan_singular
# ---------------------------------------------------------------------------

def test_scan_plane_single_point():
    f = families.make_plane(1.0, 2.0, 3.0)
    rep = sg.scan_singular(f, Domain2((-4, -2, 2, 4)), resolution=48)
    assert len(rep.points) == 1
    loc = rep.points[0].location
    assert math.hypot(loc[0] + 2.0, loc[1] - 1.0) < 1e-10
    assert rep.points[0].verdict == "Isolated"
    assert rep.points[0].g_residual < 1e-9
    assert not rep.curves


def test_scan_neg_xy_curve(field_neg_xy):
    rep = sg.scan_singular(field_neg_xy, Domain2((-2, -2, 2, 2)), resolution=48)
    assert len(rep.curves) == 1
    poly = rep.curves[0]
    assert np.max(np.abs(poly[:, 1])) < 1e-8
    assert poly[:, 0].max() - poly[:, 0].min() > 3.0
    assert all(p.verdict == "OnCurve" for p in rep.points)


def test_scan_example1_accumulating_points():
    f = families.example1_field()
    rep = sg.scan_singular(f, Domain2((-0.2, -0.36, 0.2, -0.058)), resolution=96)
    assert len(rep.points) == 5
    heights = sorted(p.location[1] for p in rep.points)
    expected = sorted(families.example1_singular_heights(5))
    for got, want in zip(heights, expected):
        assert abs(got - want) < 1e-8
    for p in rep.points:
        assert abs(p.location[0]) < 1e-8


def test_scan_empty_region(field_radial):
    rep = sg.scan_singular(field_radial, Domain2((2, 2, 4, 4)), resolution=24)
    assert rep.points == [] and rep.curves == []


def test_scan_report_json(field_neg_xy):
    rep = sg.scan_singular(field_neg_xy, Domain2((-1, -1, 1, 1)), resolution=24)
    d = json.loads(rep.to_json())
    assert d["schema"] == 1
    assert d["curves"] and d["points"]
    assert set(d["points"][0]) == {"location", "g_residual", "det_u", "verdict", "index"}


# ---------------------------------------------------------------------------
# classify
# ---------------------------------------------------------------------------

def test_classify_radial_isolated(field_radial):
    cls = sg.classify(field_radial, (0.0, 0.0), scan_radius=0.05)
    assert cls.verdict == "Isolated"
    assert cls.det_u == pytest.approx(2.0)


def test_classify_neg_xy_on_curve(field_neg_xy):
    cls = sg.classify(field_neg_xy, (0.5, 0.0), scan_radius=0.05)
    assert cls.verdict == "OnCurve"
    assert abs(cls.det_u) < cls.det_tol
    assert cls.neighbors


def test_classify_example3_undetermined():
    cls = sg.classify(families.example3_field(3.0), (0.0, 0.0), scan_radius=0.05)
    assert cls.verdict == "Undetermined"
    assert abs(cls.det_u) < cls.det_tol
    assert not cls.neighbors


def test_classify_not_singular(field_radial):
    with pytest.raises(NotSingularError):
        sg.classify(field_radial, (1.0, 0.0), scan_radius=0.05)


# ---------------------------------------------------------------------------
# winding index
# ---------------------------------------------------------------------------

def test_index_plane_translate_of_identity():
    f = families.make_plane(2.0, -1.0, 0.5)
    assert sg.index(f, (1.0, 2.0)) == 1          # point (-b, a)


def test_index_radial(field_radial):
    assert sg.index(field_radial, (0.0, 0.0), m=720) == 1


def test_index_tlog():
    assert sg.index(families.tlog_field(), (0.0, 0.0), r0=0.05) == 1


def test_index_example1_outermost_point():
    f = families.example1_field()
    y1 = families.example1_singular_heights(1)[0]
    assert sg.index(f, (0.0, y1), r0=0.02) == 1


def test_index_stable_in_samples_and_radius(field_radial):
    vals = [sg.index(field_radial, (0.0, 0.0), m=m) for m in (360, 720, 1440)]
    assert vals == [1, 1, 1]
    vals = [sg.index(field_radial, (0.0, 0.0), r0=r) for r in (0.2, 0.05, 0.01)]
    assert vals == [1, 1, 1]


# ---------------------------------------------------------------------------
# hessian vanishing at well-behaved isolated points
# ---------------------------------------------------------------------------

def test_hessian_vanishing_plane():
    f = families.make_plane(1.0, -2.0, 0.0)
    assert sg.hessian_vanishing_check(f, (2.0, 1.0)) == 0.0


def test_hessian_vanishing_tlog():
    assert sg.hessian_vanishing_check(families.tlog_field(), (0.0, 0.0)) == 0.0


def test_hessian_vanishing_radial_sharpness(field_radial):
    # H is exactly of order 1/r here, the borderline where the vanishing
    # conclusion fails: the check returns 1, documenting the sharpness.
    assert sg.hessian_vanishing_check(field_radial, (0.0, 0.0)) == 1.0


def test_hessian_vanishing_requires_singular(field_radial):
    with pytest.raises(NotSingularError):
        sg.hessian_vanishing_check(field_radial, (0.5, 0.5))


# ---------------------------------------------------------------------------
# singular curve continuation
# ---------------------------------------------------------------------------

def test_trace_curve_neg_xy(field_neg_xy):
    poly = sg.trace_singular_curve(field_neg_xy, (1.0, 0.0), step=0.01,
                                   max_length=3.0, dom=Domain2((-2, -2, 2, 2)))
    assert np.max(np.abs(poly[:, 1])) < 1e-8
    assert len(poly) > 10


def test_trace_curve_g_t2():
    # a = 0, b = 1, g(t) = t^2: the singular curve is y = x
    f = families.make_quadratic_family(0.0, 1.0, families.g_poly(0.0, 0.0, 1.0))
    poly = sg.trace_singular_curve(f, (0.0, 0.0), step=0.01, max_length=2.0,
                                   dom=Domain2((-2, -2, 2, 2)))
    assert np.max(np.abs(poly[:, 1] - poly[:, 0])) < 1e-6


def test_trace_curve_rank_full(field_radial):
    with pytest.raises(RankFullError):
        sg.trace_singular_curve(field_radial, (0.0, 0.0))


def test_newton_polish_order(rng):
    # Gauss-Newton on G with Jacobian U converges with observed order >= 1.8
    # on an analytic fixture with a nondegenerate singular point: the radial
    # paraboloid plus a cubic term keeps the origin singular with det U = 2
    # while making G genuinely nonlinear.
    f = families.AnalyticField(
        lambda x, y: 0.5 * (np.asarray(x) ** 2 + np.asarray(y) ** 2)
        + np.asarray(x) ** 3 / 3.0,
        lambda x, y: np.asarray(x) + np.asarray(x) ** 2 + 0.0 * np.asarray(y),
        lambda x, y: np.asarray(y) + 0.0 * np.asarray(x),
        lambda x, y: 1.0 + 2.0 * np.asarray(x) + 0.0 * np.asarray(y),
        lambda x, y: 0.0 * np.asarray(x),
        lambda x, y: 1.0 + 0.0 * np.asarray(x), name="radial+cubic")
    q = np.array([0.3, 0.2])
    errs = [np.linalg.norm(q)]
    for _ in range(5):
        gx, gy = f.shifted_gradient(q[0], q[1])
        g = np.array([float(gx), float(gy)])
        step, *_ = np.linalg.lstsq(sg.u_matrix(f, q), -g, rcond=None)
        q = q + step
        errs.append(np.linalg.norm(q))
        if errs[-1] < 1e-14:
            break
    orders = [math.log(errs[i + 2] / errs[i + 1]) / math.log(errs[i + 1] / errs[i])
              for i in range(len(errs) - 2) if errs[i + 2] > 0]
    assert max(orders) >= 1.8


# ---------------------------------------------------------------------------
# one-sided normal flip across singular curves
# ---------------------------------------------------------------------------

def test_normal_flip_across_curve(field_neg_xy):
    d = 1e-6
    n_plus = first_order_data(field_neg_xy, (1.0, d)).n
    n_minus = first_order_data(field_neg_xy, (1.0, -d)).n
    ang = math.acos(np.clip(n_plus @ n_minus, -1, 1))
    assert abs(ang - math.pi) < 1e-4


def test_normal_flip_quadratic_family():
    f = families.make_quadratic_family(0.6, 0.8, families.g_sin(0.3))
    # cross the singular curve w(x, y) = 0 along the normal direction (a, b)
    w = families.quadratic_family_singular_curve(0.6, 0.8, families.g_sin(0.3))
    from scipy.optimize import brentq
    xs = brentq(lambda x: float(w(x, 0.0)), -3, 3)
    d = 1e-6
    n_plus = first_order_data(f, (xs + 0.6 * d, 0.8 * d)).n
    n_minus = first_order_data(f, (xs - 0.6 * d, -0.8 * d)).n
    ang = math.acos(np.clip(n_plus @ n_minus, -1, 1))
    assert abs(ang - math.pi) < 1e-4


def test_ring_h_max_radial(field_radial):
    # max |H| on a circle of radius r about the origin is 1/(sqrt(2) r)
    assert sg.ring_h_max(field_radial, (0.0, 0.0), 0.25) == pytest.approx(
        2 ** -0.5 / 0.25, rel=1e-10)
