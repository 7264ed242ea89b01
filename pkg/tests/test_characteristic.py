import math

import numpy as np
import pytest

from pminsurf import characteristic as ch
from pminsurf import families
from pminsurf.curvature import Domain2, first_order_data, p_mean_curvature
from pminsurf.errors import (NotOnSingularCurveError, StartSingularError)


# ---------------------------------------------------------------------------
# trace
# ---------------------------------------------------------------------------

def test_trace_zero_plane_reaches_origin(field_zero):
    t = ch.trace(field_zero, (1.0, 0.0), orientation=-1, max_arclength=3.0)
    assert t.termination.kind == "ReachedSingular"
    assert np.hypot(*t.termination.point) < 1e-8
    assert t.s[-1] == pytest.approx(1.0, abs=1e-6)   # arrival at s = start radius
    # straight segment along the radial line
    assert np.max(np.abs(t.y)) < 1e-9
    # u stays 0 along the characteristic of the zero plane
    assert np.max(np.abs(t.u)) < 1e-12


def test_trace_neg_xy_vertical_line(field_neg_xy):
    t = ch.trace(field_neg_xy, (1.0, 1.0), orientation=-1, max_arclength=3.0)
    assert t.termination.kind == "ReachedSingular"
    px, py = t.termination.point
    assert px == pytest.approx(1.0, abs=1e-8)
    assert abs(py) < 1e-8
    assert np.max(np.abs(t.x - 1.0)) < 1e-10


def test_trace_radial_curls(field_radial):
    t = ch.trace(field_radial, (1.0, 0.0), orientation=1, max_arclength=1.0,
                 max_step=2e-3)
    # dtheta/ds = -H integrates to the quadrature of -H along the path
    # (trapezoid on the dense samples is the independent oracle here)
    dth = t.theta[-1] - t.theta[0]
    hq = -np.trapezoid(t.h, t.s)
    assert dth == pytest.approx(hq, abs=2e-6)
    assert abs(dth) > 0.3   # it really curls


def test_trace_start_singular_raises(field_radial):
    with pytest.raises(StartSingularError):
        ch.trace(field_radial, (0.0, 0.0))


def test_trace_domain_exit(field_neg_xy):
    dom = Domain2((0.0, 0.5, 2.0, 2.0))
    t = ch.trace(field_neg_xy, (1.0, 1.0), orientation=1, max_arclength=10.0,
                 domain=dom)
    assert t.termination.kind == "ReachedBoundary"
    assert t.y[-1] >= 2.0 - 1e-9


def test_trace_max_arclength(field_neg_xy):
    t = ch.trace(field_neg_xy, (1.0, 1.0), orientation=1, max_arclength=0.5)
    assert t.termination.kind == "MaxArclength"
    assert t.s[-1] == pytest.approx(0.5, abs=1e-12)


def test_trace_unit_speed_and_monotone_s(field_radial):
    t = ch.trace(field_radial, (1.0, 0.0), max_arclength=0.8, max_step=0.01)
    ds = np.diff(t.s)
    assert np.all(ds > 0)
    chords = np.hypot(np.diff(t.x), np.diff(t.y))
    # chord <= arc with cubic-in-step defect for a curved path
    assert np.all(chords <= ds * (1 + 1e-9))
    assert np.all(ds - chords <= ds**3 + 1e-12)


def test_trace_theta_consistent_with_pointwise(field_radial):
    t = ch.trace(field_radial, (1.0, 0.0), max_arclength=0.8)
    for i in range(0, len(t.s) - 1, 7):
        th_pt = first_order_data(field_radial, (t.x[i], t.y[i])).theta
        gap = (t.theta[i] - th_pt) % (2 * math.pi)
        gap = min(gap, 2 * math.pi - gap)
        assert gap < 1e-8


def test_trace_theta_no_jumps(field_radial):
    t = ch.trace(field_radial, (0.5, 0.0), orientation=-1, max_arclength=2.0)
    assert np.max(np.abs(np.diff(t.theta[np.isfinite(t.theta)]))) <= math.pi


def test_arrival_arclength_radial(field_radial):
    # Inward characteristics of the radial paraboloid are logarithmic
    # spirals with |dr/ds| = 1/sqrt(2): arrival after sqrt(2) * r0.
    for r0 in (0.5, 1.0):
        t = ch.trace(field_radial, (r0, 0.0), orientation=-1, max_arclength=5.0)
        assert t.termination.kind == "ReachedSingular"
        assert t.s[-1] == pytest.approx(math.sqrt(2.0) * r0, abs=1e-6)


def test_trace_csv_export(tmp_path, field_neg_xy):
    t = ch.trace(field_neg_xy, (1.0, 1.0), orientation=-1, max_arclength=3.0)
    path = str(tmp_path / "trace.csv")
    t.to_csv(path)
    lines = open(path).read().strip().splitlines()
    assert lines[0] == "s,x,y,u,theta,H"
    assert lines[-1].startswith("# termination=ReachedSingular point=")
    assert len(lines) == len(t.s) + 2


# ---------------------------------------------------------------------------
# straightness
# ---------------------------------------------------------------------------

def test_straightness_minimal_fixtures(field_neg_xy):
    t = ch.trace(field_neg_xy, (1.0, 1.0), orientation=1, max_arclength=2.0)
    rep = ch.straightness_report(t)
    assert rep.max_chord_deviation < 1e-8
    assert abs(rep.endpoint_collinearity) < 1e-8

    f = families.make_quadratic_family(1.0, 0.0, families.g_sin())
    t2 = ch.trace(f, (2.0, 0.3), orientation=1, max_arclength=2.0)
    assert ch.straightness_report(t2).max_chord_deviation < 1e-8


def test_straightness_radial_not_straight(field_radial):
    t = ch.trace(field_radial, (1.0, 0.0), max_arclength=2.0)
    assert ch.straightness_report(t).max_chord_deviation > 1e-3


# ---------------------------------------------------------------------------
# line curvature law kappa = -H
# ---------------------------------------------------------------------------

def test_curvature_of_trace_zero_plane(field_zero):
    t = ch.trace(field_zero, (1.0, 0.0), orientation=1, max_arclength=1.0)
    _, kap, mh = ch.curvature_of_trace(t)
    assert np.max(np.abs(kap)) < 1e-9
    assert np.max(np.abs(mh)) < 1e-12


def test_curvature_of_trace_radial(field_radial):
    t = ch.trace(field_radial, (1.0, 0.0), max_arclength=0.9, max_step=5e-3)
    s, kap, mh = ch.curvature_of_trace(t)
    # kappa = -H = -1/(sqrt(2) r) along the trace, checked at the first
    # returned sample against the closed form at its own radius
    i = np.searchsorted(t.s, s[0])
    r0 = math.hypot(t.x[i], t.y[i])
    assert kap[0] == pytest.approx(-(2 ** -0.5) / r0, abs=1e-6)
    assert np.max(np.abs(kap - mh)) < 1e-5


def test_curvature_of_trace_orientation_convention(field_radial):
    # kappa refers to the +Nperp parameterization for either orientation.
    tm = ch.trace(field_radial, (1.0, 0.0), orientation=-1, max_arclength=0.3)
    _, kap, mh = ch.curvature_of_trace(tm)
    assert np.max(np.abs(kap - mh)) < 1e-5


def test_curvature_refinement_sweep(field_radial):
    # With the sampling step tied to tol^(1/4) the kappa gap tracks the
    # integrator tolerance linearly: each 16x tolerance cut (four halvings)
    # must cut the gap by at least 2^3 = 8, i.e. halving the tolerance
    # halves the gap or better in aggregate.
    gaps = []
    for tol in (1.6e-5, 1e-6, 6.25e-8, 1e-9):
        ms = 0.01 * (tol / 1e-9) ** 0.25
        t = ch.trace(field_radial, (1.0, 0.0), max_arclength=0.9,
                     rtol=tol, atol=tol, max_step=ms)
        _, kap, mh = ch.curvature_of_trace(t)
        gaps.append(float(np.max(np.abs(kap - mh))))
    for a, b in zip(gaps, gaps[1:]):
        assert b <= a / 8.0


# ---------------------------------------------------------------------------
# extension through singular curves
# ---------------------------------------------------------------------------

def test_extend_through_neg_xy(field_neg_xy):
    t = ch.trace(field_neg_xy, (1.0, 1.0), orientation=-1, max_arclength=3.0)
    ext = ch.extend_through_singularity(field_neg_xy, t, 1.5)
    assert ext.termination.kind in ("MaxArclength", "ReachedBoundary")
    assert ext.y[-1] < -1.0            # continued into y < 0
    assert np.max(np.abs(ext.x - 1.0)) < 1e-8   # same vertical line
    rep = ch.straightness_report(ext)
    assert rep.max_chord_deviation < 1e-8


def test_extend_through_g_t2_curve():
    f = families.make_quadratic_family(0.0, 1.0, families.g_poly(0.0, 0.0, 1.0))
    t = ch.trace(f, (1.0, 2.0), orientation=-1, max_arclength=5.0)
    assert t.termination.kind == "ReachedSingular"
    # the singular curve of this instance is y = x
    px, py = t.termination.point
    assert abs(py - px) < 1e-6
    ext = ch.extend_through_singularity(f, t, 1.5)
    assert ch.straightness_report(ext).max_chord_deviation < 1e-8


def test_extend_isolated_rejected(field_zero):
    t = ch.trace(field_zero, (1.0, 0.0), orientation=-1, max_arclength=2.0)
    with pytest.raises(NotOnSingularCurveError):
        ch.extend_through_singularity(field_zero, t, 1.0)


def test_extend_requires_singular_termination(field_neg_xy):
    t = ch.trace(field_neg_xy, (1.0, 1.0), orientation=1, max_arclength=0.5)
    with pytest.raises(NotOnSingularCurveError):
        ch.extend_through_singularity(field_neg_xy, t, 1.0)


def test_flip_crossing_is_c1(field_neg_xy):
    # One-sided normals flip across the singular curve, so the tangent of
    # the concatenation is continuous: compare directions on both sides.
    t = ch.trace(field_neg_xy, (1.0, 1.0), orientation=-1, max_arclength=3.0)
    ext = ch.extend_through_singularity(field_neg_xy, t, 1.0)
    k = len(t.s)
    d1 = np.array([ext.x[k - 1] - ext.x[k - 3], ext.y[k - 1] - ext.y[k - 3]])
    d2 = np.array([ext.x[k + 2] - ext.x[k], ext.y[k + 2] - ext.y[k]])
    c = d1 @ d2 / np.linalg.norm(d1) / np.linalg.norm(d2)
    assert c == pytest.approx(1.0, abs=1e-8)


# ---------------------------------------------------------------------------
# divergent-winding fixture: finite arclength, unbounded angle
# ---------------------------------------------------------------------------

def test_tlog_spiral_unbounded_theta():
    f = families.tlog_field()
    spans = []
    for stop in (1e-4, 1e-7):
        t = ch.trace(f, (0.4, 0.0), orientation=-1, max_arclength=2.0,
                     stop_tol=stop, tol_sing=stop / 100.0)
        assert t.termination.kind == "ReachedSingular"
        th = t.theta[np.isfinite(t.theta)]
        spans.append(float(np.max(th) - np.min(th)))
    # shrinking the stop radius keeps adding winding (no limiting tangent)
    assert spans[1] > spans[0] + 0.2


def test_tlog_vanishing_hessian_large_curvature():
    # all second derivatives vanish at the origin while H ~ -1/(r log r)
    f = families.tlog_field()
    uxx, uxy, uyy = f.hessian(0.0, 0.0)
    assert max(abs(uxx), abs(uxy), abs(uyy)) == 0.0
    r = 1e-3
    h = p_mean_curvature(f, (r, 0.0))
    assert abs(h) * r < 0.5          # H = o(1/r)
    assert abs(h) * r * abs(math.log(r)) > 0.1
