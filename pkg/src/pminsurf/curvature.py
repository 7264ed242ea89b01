"""Pointwise pseudohermitian quantities of a graph (x, y, u(x, y)) in H1.

For a C^2 field u the horizontal gradient shifted by the contact form is

    G(x, y) = (u_x - y, u_y + x),        D = |G|.

Away from the singular set S(u) = {G = 0} one writes

    cos(theta) = (u_x - y) / D,   sin(theta) = (u_y + x) / D,
    N      = (cos theta, sin theta)          (plane Legendrian normal),
    Nperp  = (sin theta, -cos theta)         (characteristic direction),

and the p-mean curvature of the graph is

    H = D^-3 [ (u_y+x)^2 u_xx - 2 (u_y+x)(u_x-y) u_xy + (u_x-y)^2 u_yy ].

H equals the plane divergence of N, and -H is the line curvature of the
characteristic curves (the integral curves of Nperp).  The numerator alone,
P(u), is defined on all of the plane; P identically zero characterizes
p-minimal graphs.  The p-area of the graph over a plane domain is the
integral of D.

Everything here is pure; the array-valued entry points broadcast over
numpy arrays of query points.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import OutOfDomainError, SingularError
from .fields import GridField


def singular_tolerance(f, p, tol_sing=None):
    """Default tolerance below which D flags a singular query.

    Analytic fields use 1e-8 * (1 + |p|); grid fields additionally floor the
    tolerance at 10x the estimated derivative noise of the stencils, since D
    enters the curvature formula cubed in the denominator.
    """
    if tol_sing is not None:
        return float(tol_sing)
    scale = 1e-8 * (1.0 + math.hypot(float(p[0]), float(p[1])))
    if isinstance(f, GridField):
        return max(scale, 10.0 * f.derivative_noise)
    return scale


def shifted_gradient(f, x, y):
    """G = (u_x - y, u_y + x), the vector whose norm is D.  Broadcasts.

    Routed through the field so closed-form backings can avoid the
    cancellation in u_x - y near the singular set.
    """
    return f.shifted_gradient(x, y)


@dataclass(frozen=True)
class FirstOrderData:
    """D, the unit normal N, the characteristic direction Nperp, and theta."""

    d: float
    n: np.ndarray
    nperp: np.ndarray
    theta: float


def first_order_data(f, p, tol_sing=None):
    """First-order data (D, N, Nperp, theta) of the graph at a plane point.

    Raises
    ------
    SingularError
        when D <= tol_sing; the caller is at or near the singular set.
    """
    x, y = float(p[0]), float(p[1])
    gx, gy = shifted_gradient(f, x, y)
    d = math.hypot(gx, gy)
    tol = singular_tolerance(f, p, tol_sing)
    if d <= tol:
        raise SingularError(f"singular point: D={d:.3e} <= tol={tol:.3e} at {(x, y)}",
                            d_value=d)
    theta = math.atan2(gy, gx)
    n = np.array([gx / d, gy / d])
    nperp = np.array([n[1], -n[0]])
    return FirstOrderData(d=d, n=n, nperp=nperp, theta=theta)


def pmge_numerator(f, p):
    """P(u) = (u_y+x)^2 u_xx - 2 (u_y+x)(u_x-y) u_xy + (u_x-y)^2 u_yy.

    Defined on singular points too; vanishing of P on a whole domain is the
    graph-minimality equation.  Broadcasts over arrays (p = (x, y) with array
    components).
    """
    x, y = p
    gx, gy = shifted_gradient(f, x, y)
    uxx, uxy, uyy = f.hessian(x, y)
    return gy * gy * uxx - 2.0 * gy * gx * uxy + gx * gx * uyy


def p_mean_curvature(f, p, tol_sing=None):
    """p-mean curvature H = P(u) / D^3 at a nonsingular point.

    Raises SingularError when D <= tol_sing.
    """
    x, y = float(p[0]), float(p[1])
    gx, gy = shifted_gradient(f, x, y)
    d = math.hypot(gx, gy)
    tol = singular_tolerance(f, p, tol_sing)
    if d <= tol:
        raise SingularError(f"p_mean_curvature at singular point, D={d:.3e}", d_value=d)
    return float(pmge_numerator(f, (x, y))) / d**3


def p_mean_curvature_grid(f, x, y):
    """Vectorized H on arrays of points; singular entries come out as inf/nan."""
    gx, gy = shifted_gradient(f, x, y)
    d = np.hypot(gx, gy)
    uxx, uxy, uyy = f.hessian(x, y)
    num = gy * gy * uxx - 2.0 * gy * gx * uxy + gx * gx * uyy
    with np.errstate(divide="ignore", invalid="ignore"):
        return num / d**3


@dataclass(frozen=True)
class Domain2:
    """Axis-aligned rectangle with optional circular exclusions.

    ``rect`` is (x0, y0, x1, y1); each exclusion is (cx, cy, radius) and must
    lie inside the rectangle.  The effective region is the rectangle minus
    the open disks.
    """

    rect: tuple
    exclusions: tuple = ()

    def __post_init__(self):
        x0, y0, x1, y1 = self.rect
        if not (x0 < x1 and y0 < y1):
            raise ValueError("rectangle must satisfy x0 < x1 and y0 < y1")
        for cx, cy, r in self.exclusions:
            if not r > 0:
                raise ValueError("exclusion radii must be positive")

    @property
    def diameter(self):
        x0, y0, x1, y1 = self.rect
        return math.hypot(x1 - x0, y1 - y0)

    def contains(self, x, y):
        """Boolean mask: inside the rectangle and outside every exclusion disk."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        x0, y0, x1, y1 = self.rect
        ok = (x >= x0) & (x <= x1) & (y >= y0) & (y <= y1)
        for cx, cy, r in self.exclusions:
            ok &= (x - cx) ** 2 + (y - cy) ** 2 >= r * r
        return ok

    def sample(self, rng, n):
        """n points uniform on the region (rejection over the rectangle)."""
        x0, y0, x1, y1 = self.rect
        xs, ys = [], []
        need = n
        while need > 0:
            cx = rng.uniform(x0, x1, size=2 * need + 8)
            cy = rng.uniform(y0, y1, size=2 * need + 8)
            keep = self.contains(cx, cy)
            xs.append(cx[keep][:need])
            ys.append(cy[keep][:need])
            need = n - sum(len(a) for a in xs)
        return np.concatenate(xs), np.concatenate(ys)


def _simpson_weights(n):
    if n < 3 or n % 2 == 0:
        raise ValueError("composite Simpson needs an odd number of nodes >= 3")
    w = np.ones(n)
    w[1:-1:2] = 4.0
    w[2:-2:2] = 2.0
    return w / 3.0


def simpson_2d(func, rect, n=129):
    """Composite Simpson integral of func(X, Y) over a rectangle, n odd per axis."""
    if n % 2 == 0:
        n += 1
    x0, y0, x1, y1 = rect
    xs = np.linspace(x0, x1, n)
    ys = np.linspace(y0, y1, n)
    hx = (x1 - x0) / (n - 1)
    hy = (y1 - y0) / (n - 1)
    X, Y = np.meshgrid(xs, ys)
    w = _simpson_weights(n)
    vals = np.asarray(func(X, Y), dtype=float)
    return float(hx * hy * w @ vals @ w)


def disk_area_integral(f, center, radius, n=129):
    """Integral of D over a disk, in polar coordinates with Simpson in r and angle.

    D extends continuously by 0 over singular points, and near an isolated
    singular point it behaves like a multiple of the distance, so the radial
    integrand r * D is well suited to polar quadrature.
    """
    if n % 2 == 0:
        n += 1
    cx, cy = center
    rs = np.linspace(0.0, radius, n)
    ts = np.linspace(0.0, 2.0 * math.pi, 2 * n - 1)
    R, T = np.meshgrid(rs, ts)
    X = cx + R * np.cos(T)
    Y = cy + R * np.sin(T)
    gx, gy = shifted_gradient(f, X, Y)
    vals = np.hypot(gx, gy) * R
    wr = _simpson_weights(n) * (radius / (n - 1))
    wt = _simpson_weights(2 * n - 1) * (2.0 * math.pi / (2 * n - 2))
    return float(wt @ vals @ wr)


def p_area(f, dom, n=129):
    """p-area integral of the graph over a Domain2: the integral of D.

    Composite Simpson over the rectangle; each exclusion disk is integrated
    separately in polar coordinates and subtracted, so kinks of D inside an
    exclusion do not pollute the rectangle rule.
    """
    def integrand(X, Y):
        gx, gy = shifted_gradient(f, X, Y)
        return np.hypot(gx, gy)

    total = simpson_2d(integrand, dom.rect, n=n)
    x0, y0, x1, y1 = dom.rect
    for cx, cy, r in dom.exclusions:
        if not (x0 <= cx - r and cx + r <= x1 and y0 <= cy - r and cy + r <= y1):
            raise OutOfDomainError("exclusion disk must lie inside the rectangle")
        total -= disk_area_integral(f, (cx, cy), r, n=n)
    return total


def characteristic_flow_points(f, p, step, orientation=1.0):
    """Points at flow-parameter -step, 0, +step along the Nperp integral curve.

    Two RK4 half-steps of dx/ds = Nperp in each direction; used to take
    second derivatives along the characteristic flow.
    """
    def rhs(q):
        fod = first_order_data(f, q)
        return orientation * fod.nperp

    def rk4(q, h):
        k1 = rhs(q)
        k2 = rhs(q + 0.5 * h * k1)
        k3 = rhs(q + 0.5 * h * k2)
        k4 = rhs(q + h * k3)
        return q + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)

    q0 = np.array([float(p[0]), float(p[1])])
    plus = rk4(rk4(q0, step / 2.0), step / 2.0)
    minus = rk4(rk4(q0, -step / 2.0), -step / 2.0)
    return minus, q0, plus


def tangential_sublaplacian_check(f, p, fd_step=5e-4):
    """Residuals of the second flow derivatives of x, y, u against H.

    Along the characteristic flow the coordinate functions satisfy

        (Nperp)^2 x = -cos(theta) H,
        (Nperp)^2 y = -sin(theta) H,
        (Nperp)^2 u =  H (x sin(theta) - y cos(theta)).

    The left sides are computed with a central second difference of the
    quantity along the traced flow (step ``fd_step``); the return value is
    the triple of gaps (computed - expected).
    """
    fod = first_order_data(f, p)
    h_val = p_mean_curvature(f, p)
    pm, p0, pp = characteristic_flow_points(f, p, fd_step)

    def second(vals):
        return (vals[0] - 2.0 * vals[1] + vals[2]) / fd_step**2

    d2x = second([pm[0], p0[0], pp[0]])
    d2y = second([pm[1], p0[1], pp[1]])
    d2u = second([float(f.value(*pm)), float(f.value(*p0)), float(f.value(*pp))])

    ct, st = math.cos(fod.theta), math.sin(fod.theta)
    gap_x = d2x - (-ct * h_val)
    gap_y = d2y - (-st * h_val)
    gap_u = d2u - h_val * (p0[0] * st - p0[1] * ct)
    return gap_x, gap_y, gap_u
