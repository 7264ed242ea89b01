"""Plane scalar fields u(x, y) with value, gradient and Hessian access.

Every geometric routine in this package consumes a field through the same
duck-typed contract:

    f.value(x, y)    -> u
    f.gradient(x, y) -> (u_x, u_y)
    f.hessian(x, y)  -> (u_xx, u_xy, u_yy)      (symmetric by construction)

where ``x`` and ``y`` may be scalars or numpy arrays (broadcast together).
Two backings are provided: :class:`AnalyticField` wraps closed-form
derivatives, :class:`GridField` differentiates uniformly sampled data with
finite-difference stencils (4th-order gradient, 2nd-order Hessian) and
interpolates the resulting derivative grids between nodes.

Fields are immutable after construction and safe to share across threads.
"""

import io

import numpy as np
from scipy.interpolate import RectBivariateSpline

from .errors import OutOfDomainError


class Field2:
    """Base class for plane scalar fields; subclasses implement the contract."""

    name = "field"

    def value(self, x, y):
        raise NotImplementedError

    def gradient(self, x, y):
        raise NotImplementedError

    def hessian(self, x, y):
        raise NotImplementedError

    def shifted_gradient(self, x, y):
        """G = (u_x - y, u_y + x), the contact-shifted gradient.

        The default derives G from the gradient; fields with closed forms
        may override to avoid the subtraction (near the singular set the
        informative part of G can be far below one ulp of the gradient).
        """
        ux, uy = self.gradient(x, y)
        return ux - np.asarray(y), uy + np.asarray(x)

    def u_entries(self, x, y):
        """Entries (u_xx, u_xy - 1, u_xy + 1, u_yy) of the Jacobian of G.

        Overridable for the same cancellation reason as shifted_gradient.
        """
        uxx, uxy, uyy = self.hessian(x, y)
        return uxx, uxy - 1.0, uxy + 1.0, uyy


def field_eval(f, p):
    """Evaluate a field at a single plane point.

    Returns ``(value, gradient, hessian)`` with the gradient as a length-2
    array and the Hessian as a symmetric 2x2 array.
    """
    x, y = float(p[0]), float(p[1])
    u = float(f.value(x, y))
    ux, uy = f.gradient(x, y)
    uxx, uxy, uyy = f.hessian(x, y)
    grad = np.array([float(ux), float(uy)])
    hess = np.array([[float(uxx), float(uxy)], [float(uxy), float(uyy)]])
    return u, grad, hess


class AnalyticField(Field2):
    """Field backed by closed-form value and derivatives.

    All six callables take (x, y) and must broadcast over numpy arrays.
    """

    def __init__(self, u, ux, uy, uxx, uxy, uyy, name="analytic",
                 shifted_gradient=None, u_entries=None):
        self._u, self._ux, self._uy = u, ux, uy
        self._uxx, self._uxy, self._uyy = uxx, uxy, uyy
        self._shifted = shifted_gradient
        self._uent = u_entries
        self.name = name

    def value(self, x, y):
        return self._u(x, y)

    def gradient(self, x, y):
        return self._ux(x, y), self._uy(x, y)

    def hessian(self, x, y):
        return self._uxx(x, y), self._uxy(x, y), self._uyy(x, y)

    def shifted_gradient(self, x, y):
        if self._shifted is not None:
            return self._shifted(x, y)
        return super().shifted_gradient(x, y)

    def u_entries(self, x, y):
        if self._uent is not None:
            return self._uent(x, y)
        return super().u_entries(x, y)


def _const_fn(c):
    def fn(x, y):
        return c + 0.0 * (np.asarray(x) + np.asarray(y))
    return fn


def constant_field(c=0.0, name=None):
    """The constant field u = c (graph of a horizontal plane)."""
    zero = _const_fn(0.0)
    return AnalyticField(_const_fn(float(c)), zero, zero, zero, zero, zero,
                         name=name or f"const({c})")


class CombinedField(Field2):
    """Linear combination a*f + b*g of two fields (used for u + eps*v)."""

    def __init__(self, f, g, a=1.0, b=1.0, name=None):
        self.f, self.g, self.a, self.b = f, g, float(a), float(b)
        self.name = name or f"{a}*{f.name}+{b}*{g.name}"

    def value(self, x, y):
        return self.a * self.f.value(x, y) + self.b * self.g.value(x, y)

    def gradient(self, x, y):
        fx, fy = self.f.gradient(x, y)
        gx, gy = self.g.gradient(x, y)
        return self.a * fx + self.b * gx, self.a * fy + self.b * gy

    def hessian(self, x, y):
        fxx, fxy, fyy = self.f.hessian(x, y)
        gxx, gxy, gyy = self.g.hessian(x, y)
        return (self.a * fxx + self.b * gxx,
                self.a * fxy + self.b * gxy,
                self.a * fyy + self.b * gyy)


def rotated_field(f, angle):
    """Field u~(x~, y~) = u(a x~ - b y~, b x~ + a y~) for a rotation by ``angle``.

    Derivatives follow from the chain rule, so an analytic input stays exact.
    """
    a, b = np.cos(angle), np.sin(angle)

    def xy(xt, yt):
        return a * xt - b * yt, b * xt + a * yt

    def u(xt, yt):
        return f.value(*xy(xt, yt))

    def ux(xt, yt):
        fx, fy = f.gradient(*xy(xt, yt))
        return a * fx + b * fy

    def uy(xt, yt):
        fx, fy = f.gradient(*xy(xt, yt))
        return -b * fx + a * fy

    def uxx(xt, yt):
        fxx, fxy, fyy = f.hessian(*xy(xt, yt))
        return a * a * fxx + 2 * a * b * fxy + b * b * fyy

    def uxy(xt, yt):
        fxx, fxy, fyy = f.hessian(*xy(xt, yt))
        return -a * b * fxx + (a * a - b * b) * fxy + a * b * fyy

    def uyy(xt, yt):
        fxx, fxy, fyy = f.hessian(*xy(xt, yt))
        return b * b * fxx - 2 * a * b * fxy + a * a * fyy

    return AnalyticField(u, ux, uy, uxx, uxy, uyy, name=f"rot({f.name},{angle:.3g})")


def _d1(vals, h, axis):
    """First-derivative grid: 4th-order central inside, 2nd-order near edges."""
    v = np.moveaxis(vals, axis, 1)
    out = np.empty_like(v)
    out[:, 2:-2] = (v[:, :-4] - 8 * v[:, 1:-3] + 8 * v[:, 3:-1] - v[:, 4:]) / (12 * h)
    out[:, 1] = (v[:, 2] - v[:, 0]) / (2 * h)
    out[:, -2] = (v[:, -1] - v[:, -3]) / (2 * h)
    out[:, 0] = (-3 * v[:, 0] + 4 * v[:, 1] - v[:, 2]) / (2 * h)
    out[:, -1] = (3 * v[:, -1] - 4 * v[:, -2] + v[:, -3]) / (2 * h)
    return np.moveaxis(out, 1, axis)


def _d1_low(vals, h, axis):
    """Plain 2nd-order first-derivative grid (central inside, one-sided edges)."""
    v = np.moveaxis(vals, axis, 1)
    out = np.empty_like(v)
    out[:, 1:-1] = (v[:, 2:] - v[:, :-2]) / (2 * h)
    out[:, 0] = (-3 * v[:, 0] + 4 * v[:, 1] - v[:, 2]) / (2 * h)
    out[:, -1] = (3 * v[:, -1] - 4 * v[:, -2] + v[:, -3]) / (2 * h)
    return np.moveaxis(out, 1, axis)


def _d2(vals, h, axis):
    """Second-derivative grid: 2nd-order central inside, one-sided at edges."""
    v = np.moveaxis(vals, axis, 1)
    out = np.empty_like(v)
    out[:, 1:-1] = (v[:, 2:] - 2 * v[:, 1:-1] + v[:, :-2]) / (h * h)
    out[:, 0] = (2 * v[:, 0] - 5 * v[:, 1] + 4 * v[:, 2] - v[:, 3]) / (h * h)
    out[:, -1] = (2 * v[:, -1] - 5 * v[:, -2] + 4 * v[:, -3] - v[:, -4]) / (h * h)
    return np.moveaxis(out, 1, axis)


class GridField(Field2):
    """Field sampled on a uniform grid, differentiated by stencils.

    Parameters
    ----------
    x0, y0 : floats, coordinates of the first sample (row 0, column 0).
    h : grid spacing (> 0), shared by both axes.
    values : (ny, nx) array, row-major with y increasing by row.
    allow_onesided : when False (default), queries must keep a 2-cell margin
        from the hull so only the full-width interior stencils are used;
        when True the whole hull is queryable and the one-sided 2nd-order
        edge stencils participate.

    The gradient uses 4th-order central differences, the Hessian 2nd-order
    stencils, and the mixed derivative commutes (d/dx then d/dy of the same
    2nd-order operator), so the returned Hessian is symmetric exactly.
    Between nodes each derivative grid is interpolated with a bicubic
    spline; at the nodes the stencil values are reproduced exactly.
    """

    def __init__(self, x0, y0, h, values, allow_onesided=False, name="grid"):
        values = np.asarray(values, dtype=float)
        if values.ndim != 2:
            raise ValueError("values must be a 2-d array (ny, nx)")
        ny, nx = values.shape
        if nx < 5 or ny < 5:
            raise ValueError("grid must be at least 5x5")
        if not h > 0:
            raise ValueError("grid spacing h must be positive")
        self.x0, self.y0, self.h = float(x0), float(y0), float(h)
        self.nx, self.ny = nx, ny
        self.values = values.copy()
        self.values.setflags(write=False)
        self.allow_onesided = bool(allow_onesided)
        self.name = name

        ux = _d1(values, h, axis=1)
        uy = _d1(values, h, axis=0)
        uxx = _d2(values, h, axis=1)
        uyy = _d2(values, h, axis=0)
        uxy = _d1_low(_d1_low(values, h, axis=1), h, axis=0)

        ux2 = _d1_low(values, h, axis=1)
        uy2 = _d1_low(values, h, axis=0)
        inner = (slice(2, -2), slice(2, -2))
        self.derivative_noise = float(
            max(np.median(np.abs(ux[inner] - ux2[inner])),
                np.median(np.abs(uy[inner] - uy2[inner]))) + 1e-14)

        xa = x0 + h * np.arange(nx)
        ya = y0 + h * np.arange(ny)
        self._xa, self._ya = xa, ya
        self._spl = {
            "u": RectBivariateSpline(ya, xa, values, kx=3, ky=3),
            "ux": RectBivariateSpline(ya, xa, ux, kx=3, ky=3),
            "uy": RectBivariateSpline(ya, xa, uy, kx=3, ky=3),
            "uxx": RectBivariateSpline(ya, xa, uxx, kx=3, ky=3),
            "uxy": RectBivariateSpline(ya, xa, uxy, kx=3, ky=3),
            "uyy": RectBivariateSpline(ya, xa, uyy, kx=3, ky=3),
        }

    @classmethod
    def from_function(cls, func, x0, y0, h, nx, ny, **kw):
        """Sample ``func(x, y)`` on the grid and build the field."""
        xa = x0 + h * np.arange(nx)
        ya = y0 + h * np.arange(ny)
        X, Y = np.meshgrid(xa, ya)
        return cls(x0, y0, h, func(X, Y), **kw)

    @property
    def hull(self):
        """(x0, y0, x1, y1) of the sampled rectangle."""
        return (self.x0, self.y0,
                self.x0 + self.h * (self.nx - 1), self.y0 + self.h * (self.ny - 1))

    def _check(self, x, y):
        margin = 0.0 if self.allow_onesided else 2.0 * self.h
        x0, y0, x1, y1 = self.hull
        slack = 1e-9 * self.h
        bad = ((np.asarray(x) < x0 + margin - slack) | (np.asarray(x) > x1 - margin + slack)
               | (np.asarray(y) < y0 + margin - slack) | (np.asarray(y) > y1 - margin + slack))
        if np.any(bad):
            raise OutOfDomainError(
                f"query outside grid hull minus margin (allow_onesided={self.allow_onesided})")

    def _ev(self, key, x, y):
        out = self._spl[key].ev(np.asarray(y, dtype=float), np.asarray(x, dtype=float))
        if np.ndim(x) == 0 and np.ndim(y) == 0:
            return float(out)
        return out

    def value(self, x, y):
        self._check(x, y)
        return self._ev("u", x, y)

    def gradient(self, x, y):
        self._check(x, y)
        return self._ev("ux", x, y), self._ev("uy", x, y)

    def hessian(self, x, y):
        self._check(x, y)
        return self._ev("uxx", x, y), self._ev("uxy", x, y), self._ev("uyy", x, y)


def write_grid_csv(field, path_or_buf):
    """Write a GridField as CSV: a header comment line, then ny rows of nx values.

    Format: ``# x0=<f> y0=<f> h=<f> nx=<d> ny=<d>`` followed by row-major
    samples with y increasing by row.
    """
    own = isinstance(path_or_buf, (str,))
    buf = open(path_or_buf, "w") if own else path_or_buf
    try:
        buf.write(f"# x0={field.x0!r} y0={field.y0!r} h={field.h!r} "
                  f"nx={field.nx} ny={field.ny}\n")
        for row in field.values:
            buf.write(",".join(repr(float(v)) for v in row) + "\n")
    finally:
        if own:
            buf.close()


def read_grid_csv(path_or_buf, allow_onesided=False):
    """Read a GridField written by :func:`write_grid_csv`."""
    own = isinstance(path_or_buf, (str,))
    buf = open(path_or_buf, "r") if own else path_or_buf
    try:
        header = buf.readline().strip()
        if not header.startswith("#"):
            raise ValueError("grid CSV must start with a '# x0=... y0=...' header line")
        meta = dict(tok.split("=") for tok in header[1:].split())
        rows = np.loadtxt(io.StringIO(buf.read()), delimiter=",", ndmin=2)
    finally:
        if own:
            buf.close()
    nx, ny = int(meta["nx"]), int(meta["ny"])
    if rows.shape != (ny, nx):
        raise ValueError(f"grid CSV body has shape {rows.shape}, header says {(ny, nx)}")
    return GridField(float(meta["x0"]), float(meta["y0"]), float(meta["h"]),
                     rows, allow_onesided=allow_onesided)
