"""Variational checks for the p-area energy E(u) = integral of D.

For a compactly supported C^2 variation v of a graph u:

  * first variation:   d/de E(u + e v) |_0 = - integral v H dx dy,
    so the derivative vanishes for every admissible v exactly when H = 0;
  * second variation (u p-minimal on the support, ambient H1):

        delta2 = integral { (e1(alpha v))^2
                            + (alpha v)^2 [ -4 e1(alpha) - 4 alpha^2 ] } D dx dy

    with alpha = -1/D and e1 the characteristic direction as a plane
    operator (e1 = -Nperp on functions of (x, y)); the bracket has the
    closed form

        -4 e1(alpha) - 4 alpha^2
            = 4 { (u_x - y)(u_y + x)(u_xx - u_yy)
                  + [ (u_y + x)^2 - (u_x - y)^2 ] u_xy } / D^4;

  * the same second variation equals d^2/de^2 E(u + e v) |_0 and the
    quadrature of D^{-1} (e1 v)^2, giving a three-way consistency check;
  * (e1)^2 + 2 alpha e1 is self-adjoint for the weight D dx dy:

        int [phi (e1)^2 psi - psi (e1)^2 phi] D
            = 2 int [psi e1(phi) - phi e1(psi)] alpha D;

  * a p-minimal graph with no singular points minimizes p-area among
    competitors with the same boundary, so E(u + e v) - E(u) >= 0.

Curved ambients enter only through the constant-coefficient form of the
second-variation bracket, -2 W + 2 Im A11 - 4 e1(alpha) - 4 alpha^2, used
with (W, A11) = (2, 0) for the standard 3-sphere.
"""

import math
from dataclasses import dataclass

import numpy as np

from .curvature import (p_area, p_mean_curvature_grid, pmge_numerator,
                        shifted_gradient, simpson_2d)
from .errors import (NotMinimalError, SingularInDomainError, SupportViolationError)
from .fields import AnalyticField, CombinedField


@dataclass(frozen=True)
class VariationField:
    """A compactly supported C^2 variation with its support certificate.

    ``field`` evaluates v (value/gradient/hessian contract); v and grad v
    vanish on and outside the boundary of ``support`` = (x0, y0, x1, y1).
    """

    field: AnalyticField
    support: tuple


def make_bump(support, amplitude=1.0):
    """Separable polynomial bump A (1-s^2)^3 (1-t^2)^3 on a rectangle.

    s, t are the rectangle coordinates scaled to [-1, 1]; value, gradient
    and Hessian all vanish on the support boundary (C^2 with room to spare)
    and are exactly zero outside.
    """
    x0, y0, x1, y1 = support
    if not (x1 > x0 and y1 > y0):
        raise ValueError("support rectangle must be nondegenerate")
    a = float(amplitude)
    sx, sy = 2.0 / (x1 - x0), 2.0 / (y1 - y0)
    mx, my = 0.5 * (x0 + x1), 0.5 * (y0 + y1)

    def phi(t):
        t = np.asarray(t, dtype=float)
        return np.where(np.abs(t) < 1.0, (1.0 - t * t) ** 3, 0.0)

    def dphi(t):
        t = np.asarray(t, dtype=float)
        return np.where(np.abs(t) < 1.0, -6.0 * t * (1.0 - t * t) ** 2, 0.0)

    def d2phi(t):
        t = np.asarray(t, dtype=float)
        return np.where(np.abs(t) < 1.0, (1.0 - t * t) * (30.0 * t * t - 6.0), 0.0)

    def s_of(x):
        return (np.asarray(x, dtype=float) - mx) * sx

    def t_of(y):
        return (np.asarray(y, dtype=float) - my) * sy

    f = AnalyticField(
        lambda x, y: a * phi(s_of(x)) * phi(t_of(y)),
        lambda x, y: a * sx * dphi(s_of(x)) * phi(t_of(y)),
        lambda x, y: a * sy * phi(s_of(x)) * dphi(t_of(y)),
        lambda x, y: a * sx * sx * d2phi(s_of(x)) * phi(t_of(y)),
        lambda x, y: a * sx * sy * dphi(s_of(x)) * dphi(t_of(y)),
        lambda x, y: a * sy * sy * phi(s_of(x)) * d2phi(t_of(y)),
        name=f"bump{support}")
    return VariationField(field=f, support=(x0, y0, x1, y1))


def _d_grid(f, X, Y):
    gx, gy = shifted_gradient(f, X, Y)
    return np.hypot(np.asarray(gx, dtype=float), np.asarray(gy, dtype=float))


def _check_support(f, v, dom, n, tol=1e-7):
    x0, y0, x1, y1 = v.support
    dx0, dy0, dx1, dy1 = dom.rect
    if not (dx0 <= x0 and x1 <= dx1 and dy0 <= y0 and y1 <= dy1):
        raise SupportViolationError("variation support leaves the domain rectangle")
    xs = np.linspace(x0, x1, n)
    ys = np.linspace(y0, y1, n)
    X, Y = np.meshgrid(xs, ys)
    dmin = float(np.min(_d_grid(f, X, Y)))
    if dmin <= tol:
        raise SupportViolationError(
            f"singular set meets the support: min D = {dmin:.3e}")


@dataclass(frozen=True)
class AlphaData:
    """alpha = -1/D and its derivative along the characteristic direction."""

    alpha: float
    e1_alpha: float


def e1_directional(f, func, X, Y, step):
    """Derivative of func along e1 = -Nperp, 5-point stencil, vectorized.

    ``func(X, Y)`` must broadcast; the stencil walks the straight line in
    the frozen direction, which is exact for first derivatives.
    """
    gx, gy = shifted_gradient(f, X, Y)
    d = np.hypot(np.asarray(gx, float), np.asarray(gy, float))
    ex = -np.asarray(gy, float) / d
    ey = np.asarray(gx, float) / d
    vals = [func(X + k * step * ex, Y + k * step * ey) for k in (-2, -1, 1, 2)]
    return (vals[0] - 8.0 * vals[1] + 8.0 * vals[2] - vals[3]) / (12.0 * step)


def alpha_data(f, p, step=1e-4):
    """alpha = -1/D and e1(alpha) at a point (stencil along e1)."""
    X = np.asarray([float(p[0])])
    Y = np.asarray([float(p[1])])
    d = _d_grid(f, X, Y)

    def alpha_of(XX, YY):
        return -1.0 / _d_grid(f, XX, YY)

    e1a = e1_directional(f, alpha_of, X, Y, step)
    return AlphaData(alpha=float(-1.0 / d[0]), e1_alpha=float(e1a[0]))


def stability_bracket(f, p):
    """The closed form 4[(u_x-y)(u_y+x)(u_xx-u_yy) + ((u_y+x)^2-(u_x-y)^2)u_xy]/D^4.

    Equals -4 e1(alpha) - 4 alpha^2 on the nonsingular set.  Broadcasts
    when p = (x, y) holds arrays.
    """
    x, y = p
    gx, gy = shifted_gradient(f, x, y)
    uxx, uxy, uyy = f.hessian(x, y)
    d2 = gx * gx + gy * gy
    return 4.0 * (gx * gy * (uxx - uyy) + (gy * gy - gx * gx) * uxy) / (d2 * d2)


def ambient_bracket(w_curv, im_a11, e1_alpha, alpha):
    """-2 W + 2 Im A11 - 4 e1(alpha) - 4 alpha^2 for a curved ambient."""
    return -2.0 * w_curv + 2.0 * im_a11 - 4.0 * e1_alpha - 4.0 * alpha * alpha


def energy(f, dom, n=129):
    """p-area energy E(u) over a Domain2 (delegates to the area quadrature)."""
    return p_area(f, dom, n=n)


def _support_energy(f, v, eps, n):
    """E(u + eps v) restricted to the support rectangle (Simpson)."""
    pert = CombinedField(f, v.field, 1.0, eps) if eps != 0.0 else f

    def integrand(X, Y):
        return _d_grid(pert, X, Y)

    return simpson_2d(integrand, v.support, n=n)


def first_variation_gap(f, v, dom, fd_eps=1e-3, n=129):
    """| d/de E(u + e v)|_0 + integral v H dx dy |.

    The derivative is a central difference with step ``fd_eps`` (restricted
    to the support, where all the e-dependence lives); the integral uses
    the same Simpson rule.  Gap -> 0 quadratically in fd_eps; it vanishes
    identically iff H = 0 on the support.
    """
    _check_support(f, v, dom, n)
    e_plus = _support_energy(f, v, fd_eps, n)
    e_minus = _support_energy(f, v, -fd_eps, n)
    de = (e_plus - e_minus) / (2.0 * fd_eps)

    def vh(X, Y):
        return np.asarray(v.field.value(X, Y), float) * p_mean_curvature_grid(f, X, Y)

    integral = simpson_2d(vh, v.support, n=n)
    return abs(de + integral)


def first_variation_value(f, v, dom, fd_eps=1e-3, n=129):
    """d/de E(u + e v)|_0 by the same central difference (for sign studies)."""
    _check_support(f, v, dom, n)
    return (_support_energy(f, v, fd_eps, n)
            - _support_energy(f, v, -fd_eps, n)) / (2.0 * fd_eps)


def second_variation(f, v, dom, n=129, e1_step=None, minimal_tol=1e-8):
    """The second-variation integral for a p-minimal u and variation v.

        integral { (e1(alpha v))^2 + (alpha v)^2 [-4 e1(alpha) - 4 alpha^2] } D

    with the bracket in closed form and e1 applied as a 5-point stencil
    along -Nperp.  Raises NotMinimalError when P(u) is not numerically zero
    on the support, SupportViolationError when the support is bad.
    """
    _check_support(f, v, dom, n)
    if e1_step is None:
        e1_step = 1e-4 * dom.diameter
    xs = np.linspace(v.support[0], v.support[2], n if n % 2 else n + 1)
    ys = np.linspace(v.support[1], v.support[3], n if n % 2 else n + 1)
    X, Y = np.meshgrid(xs, ys)
    pres = np.asarray(pmge_numerator(f, (X, Y)), dtype=float)
    gx, gy = shifted_gradient(f, X, Y)
    uxx, uxy, uyy = f.hessian(X, Y)
    scale = (np.asarray(gy, float) ** 2 * np.abs(uxx)
             + 2.0 * np.abs(gy * gx * uxy) + np.asarray(gx, float) ** 2 * np.abs(uyy))
    if np.max(np.abs(pres)) > minimal_tol * (1.0 + float(np.max(scale))):
        raise NotMinimalError(
            f"field is not p-minimal on the support: max |P| = {np.max(np.abs(pres)):.3e}")

    def q_of(XX, YY):
        return -np.asarray(v.field.value(XX, YY), float) / _d_grid(f, XX, YY)

    def integrand(XX, YY):
        d = _d_grid(f, XX, YY)
        q = q_of(XX, YY)
        e1q = e1_directional(f, q_of, XX, YY, e1_step)
        bracket = stability_bracket(f, (XX, YY))
        return (e1q * e1q + q * q * bracket) * d

    return simpson_2d(integrand, v.support, n=n)


def energy_hessian_fd(f, v, dom, fd_eps=1e-3, n=129, e1_step=None):
    """Second difference of E and the quadrature of D^{-1} (e1 v)^2.

    Returns (fd_value, quadrature_value, relative_gap); the two agree up to
    finite-difference and quadrature error (O(fd_eps^2)).
    """
    _check_support(f, v, dom, n)
    if e1_step is None:
        e1_step = 1e-4 * dom.diameter
    e0 = _support_energy(f, v, 0.0, n)
    ep = _support_energy(f, v, fd_eps, n)
    em = _support_energy(f, v, -fd_eps, n)
    fd2 = (ep - 2.0 * e0 + em) / fd_eps**2

    def vfun(XX, YY):
        return np.asarray(v.field.value(XX, YY), float)

    def integrand(XX, YY):
        e1v = e1_directional(f, vfun, XX, YY, e1_step)
        return e1v * e1v / _d_grid(f, XX, YY)

    quad = simpson_2d(integrand, v.support, n=n)
    denom = max(abs(fd2), abs(quad), 1e-300)
    return fd2, quad, abs(fd2 - quad) / denom


def _flow_offsets(f, X, Y, step):
    """Points reached by +-step along the Nperp flow (two RK4 half-steps)."""
    def nperp(XX, YY):
        gx, gy = shifted_gradient(f, XX, YY)
        d = np.hypot(np.asarray(gx, float), np.asarray(gy, float))
        return np.asarray(gy, float) / d, -np.asarray(gx, float) / d

    def rk4(XX, YY, h):
        k1x, k1y = nperp(XX, YY)
        k2x, k2y = nperp(XX + 0.5 * h * k1x, YY + 0.5 * h * k1y)
        k3x, k3y = nperp(XX + 0.5 * h * k2x, YY + 0.5 * h * k2y)
        k4x, k4y = nperp(XX + h * k3x, YY + h * k3y)
        return (XX + (h / 6.0) * (k1x + 2 * k2x + 2 * k3x + k4x),
                YY + (h / 6.0) * (k1y + 2 * k2y + 2 * k3y + k4y))

    Xp, Yp = rk4(*rk4(X, Y, step / 2.0), step / 2.0)
    Xm, Ym = rk4(*rk4(X, Y, -step / 2.0), -step / 2.0)
    return (Xm, Ym), (Xp, Yp)


def self_adjointness_gap(f, phi, psi, dom, n=61, flow_step=1e-3):
    """Residual of the self-adjointness identity of (e1)^2 + 2 alpha e1.

        int [phi (e1)^2 psi - psi (e1)^2 phi] D dx dy
          - 2 int [psi e1(phi) - phi e1(psi)] alpha D dx dy

    (e1)^2 is the second derivative along the characteristic flow (central
    difference of step ``flow_step`` on the traced flow); the quadrature
    covers the union of the two supports.  Antisymmetric under swapping
    phi and psi by construction of both sides.
    """
    for v in (phi, psi):
        _check_support(f, v, dom, n)
    x0 = min(phi.support[0], psi.support[0])
    y0 = min(phi.support[1], psi.support[1])
    x1 = max(phi.support[2], psi.support[2])
    y1 = max(phi.support[3], psi.support[3])

    def integrand(X, Y):
        (Xm, Ym), (Xp, Yp) = _flow_offsets(f, X, Y, flow_step)
        d = _d_grid(f, X, Y)
        alpha = -1.0 / d
        out = 0.0
        vals = {}
        for name, v in (("phi", phi), ("psi", psi)):
            v0 = np.asarray(v.field.value(X, Y), float)
            vp = np.asarray(v.field.value(Xp, Yp), float)
            vm = np.asarray(v.field.value(Xm, Ym), float)
            lap = (vp - 2.0 * v0 + vm) / flow_step**2
            e1v = -(vp - vm) / (2.0 * flow_step)   # e1 = -(flow derivative)
            vals[name] = (v0, lap, e1v)
        (p0, plap, pe1), (q0, qlap, qe1) = vals["phi"], vals["psi"]
        lhs = (p0 * qlap - q0 * plap) * d
        rhs = 2.0 * (q0 * pe1 - p0 * qe1) * alpha * d
        return lhs - rhs

    return simpson_2d(integrand, (x0, y0, x1, y1), n=n)


def minimizing_check(f, v, dom, eps_values=(0.1, -0.1, 0.5, -0.5, 1.0, -1.0),
                     n=129, tol=1e-7):
    """Table of E(u + e v) - E(u) over an e grid for a singular-free domain.

    For a p-minimal graph with no singular points over ``dom`` every entry
    is nonnegative up to quadrature error.  Raises SingularInDomainError
    when the base field has singular points in the domain.
    """
    xs = np.linspace(dom.rect[0], dom.rect[2], n if n % 2 else n + 1)
    ys = np.linspace(dom.rect[1], dom.rect[3], n if n % 2 else n + 1)
    X, Y = np.meshgrid(xs, ys)
    if float(np.min(_d_grid(f, X, Y))) <= tol:
        raise SingularInDomainError("base field is singular inside the domain")
    _check_support(f, v, dom, n)
    e0 = _support_energy(f, v, 0.0, n)
    return [(float(e), _support_energy(f, v, float(e), n) - e0) for e in eps_values]
