"""Characteristic curves of a graph: tracing, straightness, line curvature.

The plane projections of the characteristic curves are the integral curves
of Nperp.  Along a unit-speed characteristic, with theta the normal angle,

    dx/ds = sin(theta),  dy/ds = -cos(theta),
    du/ds = x cos(theta) + y sin(theta),
    dtheta/ds = -H(x, y),

so that -H is exactly the signed line curvature of the projected curve; on
a p-minimal graph the characteristics are straight line segments.  The
tracer integrates this system with an adaptive embedded Runge-Kutta pair
(Dormand-Prince 5(4)), stops on domain exit, arclength budget, step
collapse, or on approach to the singular set (D below a stop tolerance),
in which case the arrival point is estimated by extrapolation.

Traces continue through singular curves: the one-sided limits of N from the
two sides of a singular curve differ exactly by sign, so the incoming
characteristic and the outgoing one on the far side join to a C^1 curve
(one straight line when H = 0).
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .curvature import first_order_data, p_mean_curvature, singular_tolerance
from .errors import (AmbiguousTangentError, NotOnSingularCurveError, SingularError,
                     StartSingularError)

# Dormand-Prince 5(4) tableau.
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    np.array([]),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
    np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]),
]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200,
                187 / 2100, 1 / 40])


@dataclass(frozen=True)
class Termination:
    """Why a trace stopped: ReachedBoundary | ReachedSingular | MaxArclength | StepFailure."""

    kind: str
    point: tuple = None
    message: str = ""


@dataclass
class Trace:
    """Arclength-parameterized characteristic polyline.

    Arrays share the index: sample i sits at arclength ``s[i]`` with plane
    position (x[i], y[i]), graph height u[i], normal angle theta[i]
    (continuously unwrapped), and p-mean curvature h[i] (nan where D is
    below tolerance, e.g. at an extrapolated singular arrival).
    """

    s: np.ndarray
    x: np.ndarray
    y: np.ndarray
    u: np.ndarray
    theta: np.ndarray
    h: np.ndarray
    termination: Termination
    orientation: int = 1

    def points(self):
        return np.stack([self.x, self.y], axis=1)

    @property
    def arclength(self):
        return float(self.s[-1] - self.s[0])

    def to_csv(self, path_or_buf):
        """CSV columns s,x,y,u,theta,H plus a termination footer comment."""
        own = isinstance(path_or_buf, str)
        buf = open(path_or_buf, "w") if own else path_or_buf
        try:
            buf.write("s,x,y,u,theta,H\n")
            for i in range(len(self.s)):
                buf.write(f"{float(self.s[i])!r},{float(self.x[i])!r},"
                          f"{float(self.y[i])!r},{float(self.u[i])!r},"
                          f"{float(self.theta[i])!r},{float(self.h[i])!r}\n")
            term = self.termination
            buf.write(f"# termination={term.kind}")
            if term.point is not None:
                buf.write(f" point={float(term.point[0])!r},{float(term.point[1])!r}")
            buf.write("\n")
        finally:
            if own:
                buf.close()


def _in_rect(rect, x, y):
    x0, y0, x1, y1 = rect
    return x0 <= x <= x1 and y0 <= y <= y1


def trace(f, start, orientation=1, max_arclength=10.0, rtol=1e-9, atol=1e-9,
          tol_sing=None, stop_tol=None, max_step=0.01, domain=None):
    """Integrate a characteristic curve of ``f`` from a nonsingular start point.

    Parameters
    ----------
    orientation : +1 traces along +Nperp, -1 along -Nperp.
    max_arclength : arclength budget; reaching it ends the trace (MaxArclength).
    stop_tol : D threshold for declaring arrival at the singular set; defaults
        to 100x the singular tolerance.  The arrival point is estimated by
        extrapolating the last samples to D = 0 (the right side of the ODE
        flips across the singular set, so integrating into it is avoided).
    domain : optional Domain2; leaving its rectangle ends the trace
        (ReachedBoundary).

    Raises
    ------
    StartSingularError when D(start) is at or below the singular tolerance.
    """
    sg = int(orientation)
    if sg not in (-1, 1):
        raise ValueError("orientation must be +1 or -1")
    x0, y0 = float(start[0]), float(start[1])
    tol0 = singular_tolerance(f, (x0, y0), tol_sing)
    try:
        fod = first_order_data(f, (x0, y0), tol_sing=tol0)
    except SingularError as exc:
        raise StartSingularError(str(exc), d_value=exc.d_value) from exc
    if stop_tol is None:
        stop_tol = 100.0 * tol0

    def rhs(state):
        x, y, u, th = state
        hcur = p_mean_curvature(f, (x, y), tol_sing=tol_sing)
        return np.array([sg * math.sin(th), -sg * math.cos(th),
                         sg * (x * math.cos(th) + y * math.sin(th)), -sg * hcur])

    def d_at(x, y):
        gx, gy = f.shifted_gradient(x, y)
        return math.hypot(float(gx), float(gy))

    state = np.array([x0, y0, float(f.value(x0, y0)), fod.theta])
    s_cur = 0.0
    d_cur = fod.d
    samples = [(s_cur, *state, p_mean_curvature(f, (x0, y0), tol_sing=tol_sing))]
    termination = None

    h_step = min(max_step, max_arclength / 10.0, 1e-2)
    h_floor = 1e-13 * max(1.0, max_arclength)
    k1 = rhs(state)
    while termination is None:
        # Never step further than half the distance-like D: the right side
        # flips across the singular set, and this makes approaches geometric
        # so that arrival is always detected at an accepted sample.
        h_step = min(h_step, max_arclength - s_cur, max_step, 0.5 * d_cur)
        try:
            ks = [k1]
            for i in range(1, 7):
                yi = state + h_step * (np.asarray(_A[i]) @ np.array(ks[:i]))
                ks.append(rhs(yi))
            ks = np.array(ks)
            y5 = state + h_step * (_B5 @ ks)
            y4 = state + h_step * (_B4 @ ks)
            err = y5 - y4
            scale = atol + rtol * np.maximum(np.abs(state), np.abs(y5))
            err_norm = math.sqrt(float(np.mean((err / scale) ** 2)))
            failed = not math.isfinite(err_norm)
        except SingularError:
            err_norm, failed = math.inf, True
            y5 = None

        if (not failed) and err_norm <= 1.0 and abs(y5[3] - state[3]) <= math.pi / 2:
            state_new, s_new = y5, s_cur + h_step
            d_new = d_at(state_new[0], state_new[1])
            if d_new < stop_tol:
                termination = _finish_singular(f, samples, (s_new, state_new, d_new),
                                               tol_sing)
                break
            try:
                h_val = p_mean_curvature(f, (state_new[0], state_new[1]),
                                         tol_sing=tol_sing)
            except SingularError:
                h_val = math.nan
            samples.append((s_new, *state_new, h_val))
            state, s_cur, d_cur = state_new, s_new, d_new
            if domain is not None and not _in_rect(domain.rect, state[0], state[1]):
                termination = Termination("ReachedBoundary",
                                          point=(float(state[0]), float(state[1])))
                break
            if s_cur >= max_arclength - 1e-14 * max(1.0, max_arclength):
                termination = Termination("MaxArclength")
                break
            k1 = rhs(state)  # first stage of the next step (same point)
            if err_norm > 0:
                h_step = h_step * min(5.0, max(0.2, 0.9 * err_norm ** -0.2))
            else:
                h_step *= 5.0
        else:
            h_step *= 0.5 if not math.isfinite(err_norm) else \
                max(0.2, 0.9 * err_norm ** -0.2)
            if h_step < h_floor:
                d_here = d_at(state[0], state[1])
                if d_here < 10.0 * stop_tol:
                    termination = _finish_singular(f, samples,
                                                   (s_cur, state, d_here), tol_sing)
                else:
                    termination = Termination(
                        "StepFailure", point=(float(state[0]), float(state[1])),
                        message=f"step collapsed at s={s_cur:.6g}")
                break

    arr = np.array(samples, dtype=float)
    return Trace(s=arr[:, 0], x=arr[:, 1], y=arr[:, 2], u=arr[:, 3],
                 theta=arr[:, 4], h=arr[:, 5], termination=termination,
                 orientation=sg)


def _finish_singular(f, samples, last, tol_sing):
    """Append the extrapolated singular-arrival sample; return the termination.

    D shrinks essentially linearly on approach, so the arrival parameter is
    estimated from the last D slope and the track is extrapolated there with
    a least-squares quadratic in s.
    """
    s_new, state_new, d_new = last
    samples.append((s_new, *state_new, math.nan))
    arr = np.array(samples[-4:], dtype=float)
    ss = arr[:, 0]

    def d_of(i):
        gx, gy = f.shifted_gradient(arr[i, 1], arr[i, 2])
        return math.hypot(float(gx), float(gy))

    ds = np.array([d_of(i) for i in range(len(arr))])
    if len(arr) >= 2 and ds[-1] < ds[-2]:
        slope = (ds[-1] - ds[-2]) / (ss[-1] - ss[-2])
        s_star = ss[-1] + ds[-1] / (-slope)
    else:
        s_star = ss[-1] + ds[-1]

    deg = min(2, len(arr) - 1)
    t = ss - ss[-1]
    fit = [np.polynomial.polynomial.polyfit(t, arr[:, j], deg) for j in (1, 2, 3)]
    tv = s_star - ss[-1]
    x_s, y_s, u_s = (float(np.polynomial.polynomial.polyval(tv, c)) for c in fit)
    if len(arr) >= 2:
        th_s = float(arr[-1, 4] + (arr[-1, 4] - arr[-2, 4])
                     / (ss[-1] - ss[-2]) * tv)
    else:
        th_s = float(arr[-1, 4])
    samples.append((float(s_star), x_s, y_s, u_s, th_s, math.nan))
    return Termination("ReachedSingular", point=(x_s, y_s),
                       message=f"D={ds[-1]:.3e} at cutoff, arrival extrapolated")


@dataclass(frozen=True)
class StraightnessReport:
    """Chord-based straightness of a trace.

    max_chord_deviation is the largest distance from a sample to the chord
    through the endpoints, divided by the total arclength;
    endpoint_collinearity is 1 - |chord| / arclength (0 for a straight run).
    """

    max_chord_deviation: float
    endpoint_collinearity: float


def straightness_report(t):
    """Straightness metrics of a trace with at least 3 samples."""
    pts = t.points()
    if len(pts) < 3:
        raise ValueError("straightness needs at least 3 samples")
    p0, p1 = pts[0], pts[-1]
    chord = p1 - p0
    clen = float(np.linalg.norm(chord))
    arclen = max(t.arclength, 1e-300)
    if clen == 0.0:
        return StraightnessReport(math.inf, 1.0)
    nrm = np.array([-chord[1], chord[0]]) / clen
    dev = float(np.max(np.abs((pts - p0) @ nrm)))
    return StraightnessReport(dev / arclen, 1.0 - clen / arclen)


def curvature_of_trace(t):
    """Per-sample (s, kappa, -H) with kappa from differentiating the tangent.

    The unit tangent of the traced path is orientation * (sin theta,
    -cos theta), so its angle differs from the stored theta by a constant;
    kappa is obtained by a local quartic least-squares derivative of the
    tangent angle over 5-sample windows, sign-adjusted to refer to the
    +Nperp parameterization (for which the line-curvature law reads
    kappa = -H).
    """
    n = len(t.s)
    if n < 5:
        raise ValueError("curvature_of_trace needs at least 5 samples")
    keep = np.isfinite(t.h)
    s, th, mh = t.s[keep], t.theta[keep], -t.h[keep]
    n = len(s)
    if n < 5:
        raise ValueError("not enough finite-curvature samples")
    idx = np.arange(2, n - 2)
    # Batched quartic fit of theta(s) on the 5-point window centered at i.
    offsets = np.arange(-2, 3)
    S = s[idx[:, None] + offsets] - s[idx][:, None]          # (m, 5)
    V = S[:, :, None] ** np.arange(5)[None, None, :]          # (m, 5, 5)
    TH = th[idx[:, None] + offsets]
    coef = np.linalg.solve(V, TH[:, :, None])[:, :, 0]
    dtheta = coef[:, 1]
    kappa = t.orientation * dtheta
    return s[idx], kappa, mh[idx]


def _fit_direction(pts):
    """Leading direction of a point cloud by principal component, unit norm."""
    c = pts - pts.mean(axis=0)
    _, sv, vt = np.linalg.svd(c, full_matrices=False)
    d = vt[0]
    if np.dot(pts[-1] - pts[0], d) < 0:
        d = -d
    resid = float(np.max(np.abs(c @ np.array([-d[1], d[0]]))))
    return d, resid


def extend_through_singularity(f, t, continuation_arclength, classify_radius=None,
                               **trace_kwargs):
    """Continue a trace through the singular curve it arrived at.

    The terminal point must classify as lying on a singular curve; the
    incoming tangent is estimated by a least-squares line fit of the last
    10 samples, the trace restarts on the far side along that tangent with
    the normal-angle branch flipped by pi (automatic, since N flips sign
    across the curve), and the concatenation is C^1; when H = 0 on both
    sides it is a single straight line.

    Raises NotOnSingularCurveError when the terminal point is isolated (or
    cannot be certified to sit on a curve), AmbiguousTangentError when the
    limiting tangent cannot be estimated to tolerance.
    """
    from . import singular as _singular

    if t.termination.kind != "ReachedSingular":
        raise NotOnSingularCurveError(
            f"trace terminated with {t.termination.kind}, not ReachedSingular")
    p_star = np.array(t.termination.point, dtype=float)
    scale = 1.0 + float(np.linalg.norm(p_star))
    if classify_radius is None:
        classify_radius = 0.05 * scale
    verdict = _singular.classify(f, p_star, scan_radius=classify_radius)
    if verdict.verdict != "OnCurve":
        raise NotOnSingularCurveError(
            f"terminal point classifies {verdict.verdict}, need OnCurve")

    pts = t.points()
    m = min(10, len(pts))
    if m < 3:
        raise AmbiguousTangentError("too few samples to estimate the tangent")
    d, resid = _fit_direction(pts[-m:])
    span = float(np.linalg.norm(pts[-1] - pts[-m]))
    if span == 0.0 or resid / span > 1e-3:
        raise AmbiguousTangentError(
            f"tangent fit residual {resid:.2e} over span {span:.2e}")

    tol0 = singular_tolerance(f, p_star, trace_kwargs.get("tol_sing"))
    stop_tol = trace_kwargs.get("stop_tol") or 100.0 * tol0
    p_far = None
    delta = 2.0 * stop_tol * scale
    for _ in range(60):
        cand = p_star + delta * d
        gx, gy = f.shifted_gradient(cand[0], cand[1])
        if math.hypot(float(gx), float(gy)) > 2.0 * stop_tol:
            p_far = cand
            break
        delta *= 2.0
    if p_far is None:
        raise AmbiguousTangentError("no nonsingular restart point along the tangent")

    fod = first_order_data(f, p_far)
    side = float(np.dot(fod.nperp, d))
    if side == 0.0:
        raise AmbiguousTangentError("characteristic direction orthogonal to tangent")
    sg2 = 1 if side > 0 else -1
    t2 = trace(f, p_far, orientation=sg2, max_arclength=continuation_arclength,
               **trace_kwargs)

    shift = t.s[-1] + float(np.linalg.norm(p_far - p_star))
    return Trace(
        s=np.concatenate([t.s, t2.s + shift]),
        x=np.concatenate([t.x, t2.x]),
        y=np.concatenate([t.y, t2.y]),
        u=np.concatenate([t.u, t2.u]),
        theta=np.concatenate([t.theta, t2.theta]),
        h=np.concatenate([t.h, t2.h]),
        termination=t2.termination,
        orientation=t.orientation)
