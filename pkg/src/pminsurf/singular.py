"""Location and classification of the singular set S(u).

S(u) is the zero set of G(x, y) = (u_x - y, u_y + x).  The Jacobian of G is

    U = [[u_xx, u_xy - 1], [u_xy + 1, u_yy]],

which is never the zero matrix (the off-diagonal entries differ by 2).
det U separates the two local shapes of S(u): under a C/r bound on the
p-mean curvature near a singular point p0,

    p0 non-isolated  <=>  det U(p0) = 0  <=>  S(u) is a C^1 curve near p0,

and the curve's tangent spans the kernel of U.  Without the curvature
bound, det U = 0 with no neighbors is possible (a degenerate isolated
point), so classification reports evidence rather than forcing a verdict.

At an isolated singular point the characteristic vector field scaled by D,

    V = Nperp * D = (u_y + x, -(u_x - y)),

has a well-defined winding index; when H = o(1/r) near p0 the differential
of V at p0 is the identity, all second derivatives of u vanish there, and
the index is +1 (the observation behind the Euler-characteristic audit on
spherical ambient manifolds).
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .curvature import shifted_gradient
from .errors import NotSingularError, RankFullError, UnstableWindingError


def u_matrix(f, p):
    """U = [[u_xx, u_xy - 1], [u_xy + 1, u_yy]] at p (the Jacobian of G)."""
    a, b, c, d = f.u_entries(float(p[0]), float(p[1]))
    return np.array([[float(a), float(b)], [float(c), float(d)]])


def g_residual(f, p):
    """|G(p)|: the distance-like defect to the singular set."""
    gx, gy = shifted_gradient(f, float(p[0]), float(p[1]))
    return math.hypot(float(gx), float(gy))


def det_threshold(u_mat):
    """Scale-invariant zero threshold for det U: 1e-8 * ||U||_F^2."""
    return 1e-8 * float(np.sum(u_mat * u_mat))


def _polish(f, p, tol, max_iter=80, step_cap=None):
    """Gauss-Newton polish of a singular-point seed on G with Jacobian U.

    Uses a least-squares step so rank-1 Jacobians (singular curves) are
    handled; on those the minimum-norm step is automatically orthogonal to
    the curve tangent.  Acceptance requires both |G| <= tol and a converged
    step: a small residual alone is not trusted, since |G| can be tiny far
    from the zero set when the field decays fast.  Returns
    (point, |G|, iterations) or None.
    """
    q = np.array([float(p[0]), float(p[1])])
    converged = False
    for it in range(max_iter):
        gx, gy = shifted_gradient(f, q[0], q[1])
        g = np.array([float(gx), float(gy)])
        umat = u_matrix(f, q)
        # Row equilibration: the two components of G can live on wildly
        # different scales (fast-decaying fields), and without it the
        # least-squares cutoff silently zeroes the informative row.
        rn = np.linalg.norm(umat, axis=1)
        sc = np.where(rn > 0, 1.0 / np.maximum(rn, 1e-300), 1.0)
        step, *_ = np.linalg.lstsq(umat * sc[:, None], -g * sc, rcond=1e-12)
        norm = float(np.linalg.norm(step))
        if step_cap is not None and norm > step_cap:
            step *= step_cap / norm
            norm = step_cap
        q = q + step
        if not np.all(np.isfinite(q)):
            return None
        if norm < 1e-13 * (1.0 + float(np.linalg.norm(q))):
            converged = True
            break
    res = g_residual(f, q)
    if converged and res <= tol:
        return q, res, it + 1
    return None


@dataclass
class SingularPoint:
    """One located singular point with its classification evidence."""

    location: tuple
    g_residual: float
    det_u: float
    verdict: str                 # Isolated | OnCurve | Undetermined
    index: int = None


@dataclass
class SingularReport:
    """Points and polyline curves of the singular set found by a scan."""

    points: list = field(default_factory=list)
    curves: list = field(default_factory=list)

    def to_json(self):
        return json.dumps({
            "schema": 1,
            "points": [{
                "location": [pt.location[0], pt.location[1]],
                "g_residual": pt.g_residual,
                "det_u": pt.det_u,
                "verdict": pt.verdict,
                "index": pt.index,
            } for pt in self.points],
            "curves": [[[float(a), float(b)] for a, b in c] for c in self.curves],
        }, sort_keys=True)


@dataclass
class Classification:
    """Verdict plus the evidence it rests on."""

    verdict: str
    det_u: float
    det_tol: float
    neighbors: list
    radii: tuple


def classify(f, p0, scan_radius, tol=None, ring_samples=96):
    """Classify a singular point as Isolated / OnCurve / Undetermined.

    det U away from zero certifies isolation outright (non-isolated points
    force det U = 0 with no hypothesis on the curvature).  When det U is
    numerically zero the neighborhood is probed: on each of three rings of
    radius scan_radius * (1, 1/2, 1/4) the best few |G| minima are polished;
    a polished singular point at a ring-scale distance from p0 witnesses a
    curve (OnCurve), and finding none leaves the verdict Undetermined, since
    zero determinant alone does not imply a curve without a 1/r curvature
    bound.

    Raises NotSingularError when p0 is not singular to tolerance.
    """
    p0 = np.array([float(p0[0]), float(p0[1])])
    scale = 1.0 + float(np.linalg.norm(p0))
    if tol is None:
        tol = 1e-6 * scale
    res0 = g_residual(f, p0)
    if res0 >= tol:
        raise NotSingularError(f"|G| = {res0:.3e} >= tol = {tol:.3e} at {tuple(p0)}")

    umat = u_matrix(f, p0)
    det = float(np.linalg.det(umat))
    dtol = det_threshold(umat)
    radii = (scan_radius, scan_radius / 2.0, scan_radius / 4.0)
    if abs(det) >= dtol:
        return Classification("Isolated", det, dtol, [], radii)

    neighbors = []
    angles = np.linspace(0.0, 2.0 * math.pi, ring_samples, endpoint=False)
    for r in radii:
        ring = p0[None, :] + r * np.stack([np.cos(angles), np.sin(angles)], axis=1)
        gx, gy = shifted_gradient(f, ring[:, 0], ring[:, 1])
        mag = np.hypot(np.asarray(gx, dtype=float), np.asarray(gy, dtype=float))
        for k in np.argsort(mag)[:4]:
            hit = _polish(f, ring[k], tol, step_cap=r)
            if hit is None:
                continue
            q, _, _ = hit
            dist = float(np.linalg.norm(q - p0))
            if radii[-1] / 4.0 <= dist <= 2.0 * scan_radius:
                neighbors.append((float(q[0]), float(q[1])))
    if neighbors:
        return Classification("OnCurve", det, dtol, neighbors, radii)
    return Classification("Undetermined", det, dtol, [], radii)


def index(f, p0, r0=None, m=720, max_shrinks=8):
    """Winding number of V = Nperp * D = (u_y + x, -(u_x - y)) around p0.

    Samples m points on a circle, accumulates the unwrapped angle of V, and
    divides by 2 pi.  The radius shrinks geometrically until two consecutive
    radii agree on the integer; UnstableWindingError after ``max_shrinks``
    shrinks without agreement.
    """
    p0 = np.array([float(p0[0]), float(p0[1])])
    if r0 is None:
        r0 = 0.1 * (1.0 + float(np.linalg.norm(p0)))

    def winding(r):
        angv = np.linspace(0.0, 2.0 * math.pi, m + 1)
        xs = p0[0] + r * np.cos(angv)
        ys = p0[1] + r * np.sin(angv)
        gx, gy = shifted_gradient(f, xs, ys)
        vx = np.asarray(gy, dtype=float)
        vy = -np.asarray(gx, dtype=float)
        mag = np.hypot(vx, vy)
        if np.min(mag) < 1e-300:
            return None
        phi = np.unwrap(np.arctan2(vy, vx))
        w = (phi[-1] - phi[0]) / (2.0 * math.pi)
        if abs(w - round(w)) > 0.05:
            return None
        return int(round(w))

    prev = None
    r = r0
    for _ in range(max_shrinks + 1):
        w = winding(r)
        if w is not None and prev is not None and w == prev:
            return w
        prev = w
        r *= 0.5
    raise UnstableWindingError(
        f"winding did not stabilize after {max_shrinks} shrinks from r0={r0!r}")


def hessian_vanishing_check(f, p0, tol=None):
    """max(|u_xx|, |u_xy|, |u_yy|) at a singular point p0.

    At an isolated singular point with H = o(1/r), all three vanish (the
    caller asserts the growth hypothesis; the radial paraboloid, with
    H exactly of order 1/r, returns 1 and documents the sharpness).

    Raises NotSingularError when p0 is not singular to tolerance.
    """
    p0 = (float(p0[0]), float(p0[1]))
    scale = 1.0 + math.hypot(*p0)
    if tol is None:
        tol = 1e-6 * scale
    if g_residual(f, p0) >= tol:
        raise NotSingularError(f"point {p0} is not singular to tolerance {tol:.2e}")
    uxx, uxy, uyy = f.hessian(p0[0], p0[1])
    return max(abs(float(uxx)), abs(float(uxy)), abs(float(uyy)))


def _kernel_direction(umat):
    """Unit right-kernel direction of a (near) rank-1 U via SVD."""
    _, _, vt = np.linalg.svd(umat)
    return vt[-1]


def trace_singular_curve(f, p0, step=1e-2, max_length=10.0, dom=None, tol=None):
    """Predictor-corrector continuation of the singular curve through p0.

    The predictor advances along the kernel direction of U (the curve
    tangent); the corrector is Gauss-Newton on G.  The step adapts to the
    turning rate estimated from the last three points, clamped to
    [1e-4, 1e-1].  Both directions from p0 are traced and joined.  Stops on
    leaving ``dom``'s rectangle, exceeding ``max_length`` per direction,
    corrector failure, or rank-full U (the curve ends there).

    Raises RankFullError if U already has no kernel at p0.
    """
    p0 = np.array([float(p0[0]), float(p0[1])])
    scale = 1.0 + float(np.linalg.norm(p0))
    if tol is None:
        tol = 1e-9 * scale
    u0 = u_matrix(f, p0)
    if abs(np.linalg.det(u0)) >= det_threshold(u0):
        raise RankFullError(f"U has no kernel at {tuple(p0)}: det = {np.linalg.det(u0):.3e}")

    def march(direction):
        pts = []
        q = p0.copy()
        tan = direction
        length = 0.0
        cur_step = float(step)
        while length < max_length:
            umat = u_matrix(f, q)
            if abs(np.linalg.det(umat)) >= det_threshold(umat):
                break  # rank-full: the curve ends here
            k = _kernel_direction(umat)
            if np.dot(k, tan) < 0:
                k = -k
            pred = q + cur_step * k
            hit = _polish(f, pred, tol, max_iter=25, step_cap=cur_step)
            if hit is None:
                break
            qn = hit[0]
            if dom is not None and not bool(np.all(dom.contains(qn[0], qn[1]))):
                break
            adv = float(np.linalg.norm(qn - q))
            if adv < 1e-15:
                break
            length += adv
            tan = (qn - q) / adv
            pts.append((float(qn[0]), float(qn[1])))
            if len(pts) >= 3:
                a = np.array(pts[-3]); b = np.array(pts[-2]); c = np.array(pts[-1])
                v1, v2 = b - a, c - b
                ang = math.atan2(abs(v1[0] * v2[1] - v1[1] * v2[0]), float(v1 @ v2))
                kappa = ang / max(adv, 1e-300)
                cur_step = min(1e-1, max(1e-4, 0.05 / max(kappa, 1e-9)))
            q = qn
        return pts

    tangent = _kernel_direction(u0)
    fwd = march(tangent)
    bwd = march(-tangent)
    poly = [tuple(p) for p in reversed(bwd)] + [(float(p0[0]), float(p0[1]))] + fwd
    return np.array(poly)


def scan_singular(f, dom, resolution=64, tol=1e-9, with_indices=False,
                  classify_fraction=0.5):
    """Locate the singular set inside a Domain2 and classify what is found.

    Seeds come from the cells of a resolution x resolution grid where both
    components of G change sign, or where |G| at a corner is below a coarse,
    locally scaled tolerance; each seed is polished by Gauss-Newton on G
    with Jacobian U, deduplicated within 2 cell sizes, classified, and the
    points certified OnCurve are grown into polylines by continuation.

    An empty report is a valid outcome.
    """
    x0, y0, x1, y1 = dom.rect
    nx = ny = int(resolution) + 1
    xs = np.linspace(x0, x1, nx)
    ys = np.linspace(y0, y1, ny)
    cell = max((x1 - x0) / (nx - 1), (y1 - y0) / (ny - 1))
    X, Y = np.meshgrid(xs, ys)
    gx, gy = shifted_gradient(f, X, Y)
    gx = np.asarray(gx, dtype=float)
    gy = np.asarray(gy, dtype=float)
    mag = np.hypot(gx, gy)
    uxx, uxy, uyy = f.hessian(X, Y)
    ufro = np.sqrt(np.asarray(uxx, float) ** 2 + (np.asarray(uxy, float) - 1) ** 2
                   + (np.asarray(uxy, float) + 1) ** 2 + np.asarray(uyy, float) ** 2)

    def corners(a):
        return np.stack([a[:-1, :-1], a[:-1, 1:], a[1:, :-1], a[1:, 1:]])

    cx = corners(gx)
    cy = corners(gy)
    sign_change = ((cx.min(axis=0) <= 0) & (cx.max(axis=0) >= 0)
                   & (cy.min(axis=0) <= 0) & (cy.max(axis=0) >= 0))
    coarse = corners(mag).min(axis=0) <= 2.0 * cell * corners(ufro).max(axis=0)
    seeds = np.argwhere(sign_change | coarse)

    found = []
    for j, i in seeds:
        c0 = np.array([0.5 * (xs[i] + xs[i + 1]), 0.5 * (ys[j] + ys[j + 1])])
        hit = _polish(f, c0, tol, step_cap=4.0 * cell)
        if hit is None:
            continue
        q, res, _ = hit
        if not bool(np.all(dom.contains(q[0], q[1]))):
            continue
        if any(np.hypot(q[0] - p[0], q[1] - p[1]) < 2.0 * cell for p, _ in found):
            continue
        found.append((tuple(float(v) for v in q), res))

    report = SingularReport()
    curve_members = []
    for loc, res in found:
        cls = classify(f, loc, scan_radius=max(cell, 1e-4),
                       tol=max(10.0 * tol, 1e-8))
        pt = SingularPoint(location=loc, g_residual=res, det_u=cls.det_u,
                           verdict=cls.verdict)
        if with_indices and cls.verdict == "Isolated":
            try:
                pt.index = index(f, loc, r0=min(0.5 * cell * resolution, 1.0) * 0.1)
            except UnstableWindingError:
                pt.index = None
        report.points.append(pt)
        if cls.verdict == "OnCurve":
            curve_members.append(loc)

    covered = []
    for loc in curve_members:
        if any(_near_polyline(loc, c, 2.0 * cell) for c in report.curves):
            continue
        try:
            poly = trace_singular_curve(f, loc, step=cell / 2.0,
                                        max_length=2.0 * dom.diameter, dom=dom,
                                        tol=max(tol, 1e-12))
        except RankFullError:
            continue
        if len(poly) >= 2:
            report.curves.append(poly)
    return report


def _near_polyline(p, poly, eps):
    d = np.hypot(poly[:, 0] - p[0], poly[:, 1] - p[1])
    return bool(np.min(d) < eps)


def ring_h_max(f, p0, r, m=720):
    """max |H| over m samples of the circle of radius r about p0.

    A sampled stand-in for the exact circle maximum of |H| used in
    finite-arclength / tangent-existence hypotheses; the sampling density
    needed for a guaranteed maximum is not derivable from point values.
    """
    from .curvature import p_mean_curvature_grid

    ang = np.linspace(0.0, 2.0 * math.pi, m, endpoint=False)
    xs = float(p0[0]) + r * np.cos(ang)
    ys = float(p0[1]) + r * np.sin(ang)
    vals = np.abs(p_mean_curvature_grid(f, xs, ys))
    return float(np.max(vals[np.isfinite(vals)]))
