"""Closed-form entire p-minimal graphs, Legendrian lines and ruled surfaces.

The two families of entire solutions of the graph-minimality equation are

    u = a x + b y + c                                  (planes), and
    u = -a b x^2 + (a^2 - b^2) x y + a b y^2 + g(-b x + a y),
        a^2 + b^2 = 1, g in C^2                        (quadratic family).

A plane has the single singular point (-b, a); the quadratic family has the
singular curve 2(ax + by) + g'(-bx + ay) = 0 and no isolated singular
points.  In H1 = R^3 the p-minimal surfaces are exactly the ruled surfaces
swept by Legendrian lines

    s -> p0 + s [c1 e1hat(p0) + c2 e2hat(p0)],   c1^2 + c2^2 = 1,

and a graph-type ruled surface satisfies the Monge relation
r + 2 s a + t a^2 = 0 with a = -(p - y)/(q + x) built from first and second
derivatives (p, q, r, s, t) = (u_x, u_y, u_xx, u_xy, u_yy).

This module also hosts the named test fields used throughout the package
(radial paraboloid, an oscillating singular-set example, a degenerate
U-matrix example, and the -t/log t radial graph) plus the sampling-based
entire-solution classifier.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import characteristic
from .curvature import p_mean_curvature_grid, pmge_numerator, shifted_gradient
from .errors import BadParamsError, SingularError, VerticalRulingError
from .fields import AnalyticField, _const_fn
from .heisenberg import left_frame, theta0_eval


# ---------------------------------------------------------------------------
# g-profiles for the quadratic family: value plus two exact derivatives.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GTriple:
    """A C^2 profile supplied as exact callables (g, g', g'')."""

    g: callable
    dg: callable
    d2g: callable
    name: str = "g"


def g_zero():
    z = _const_fn(0.0)
    return GTriple(lambda t: 0.0 * np.asarray(t, dtype=float),
                   lambda t: 0.0 * np.asarray(t, dtype=float),
                   lambda t: 0.0 * np.asarray(t, dtype=float), name="zero")


def g_poly(*coeffs):
    """Polynomial profile sum_k coeffs[k] t^k with exact derivatives."""
    c = np.asarray(coeffs, dtype=float)
    d1 = np.polynomial.polynomial.polyder(c) if len(c) > 1 else np.zeros(1)
    d2 = np.polynomial.polynomial.polyder(c, 2) if len(c) > 2 else np.zeros(1)
    pv = np.polynomial.polynomial.polyval
    return GTriple(lambda t: pv(t, c), lambda t: pv(t, d1), lambda t: pv(t, d2),
                   name=f"poly{tuple(round(v, 6) for v in c)}")


def g_sin(amplitude=1.0, frequency=1.0):
    a, w = float(amplitude), float(frequency)
    return GTriple(lambda t: a * np.sin(w * t),
                   lambda t: a * w * np.cos(w * t),
                   lambda t: -a * w * w * np.sin(w * t), name=f"sin(a={a},w={w})")


def g_cos(amplitude=1.0, frequency=1.0):
    a, w = float(amplitude), float(frequency)
    return GTriple(lambda t: a * np.cos(w * t),
                   lambda t: -a * w * np.sin(w * t),
                   lambda t: -a * w * w * np.cos(w * t), name=f"cos(a={a},w={w})")


G_REGISTRY = {
    "zero": g_zero,
    "t": lambda: g_poly(0.0, 1.0),
    "t2": lambda: g_poly(0.0, 0.0, 1.0),
    "t3": lambda: g_poly(0.0, 0.0, 0.0, 1.0),
    "sin": g_sin,
    "cos": g_cos,
}


# ---------------------------------------------------------------------------
# The two entire families.
# ---------------------------------------------------------------------------

def make_plane(a, b, c):
    """Entire plane u = a x + b y + c; its singular point is (-b, a)."""
    a, b, c = float(a), float(b), float(c)
    zero = _const_fn(0.0)
    return AnalyticField(
        lambda x, y: a * np.asarray(x, dtype=float) + b * np.asarray(y, dtype=float) + c,
        _const_fn(a), _const_fn(b), zero, zero, zero,
        name=f"plane({a},{b},{c})")


def plane_singular_point(a, b, c=0.0):
    """The unique singular point of the plane u = ax + by + c."""
    return (-float(b), float(a))


def make_quadratic_family(a, b, g, normalize=False):
    """u = -a b x^2 + (a^2 - b^2) x y + a b y^2 + g(-b x + a y).

    ``g`` is a :class:`GTriple` (exact derivatives, no CAS involved).  The
    direction (a, b) must be unit; with ``normalize=True`` it is rescaled,
    otherwise a deviation beyond 1e-12 raises BadParamsError.
    """
    norm2 = a * a + b * b
    if abs(norm2 - 1.0) > 1e-12:
        if not normalize:
            raise BadParamsError(f"a^2 + b^2 = {norm2!r} differs from 1 beyond 1e-12")
        s = math.sqrt(norm2)
        a, b = a / s, b / s
    a, b = float(a), float(b)

    def t_of(x, y):
        return -b * np.asarray(x, dtype=float) + a * np.asarray(y, dtype=float)

    def u(x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return -a * b * x * x + (a * a - b * b) * x * y + a * b * y * y + g.g(t_of(x, y))

    def ux(x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return -2 * a * b * x + (a * a - b * b) * y - b * g.dg(t_of(x, y))

    def uy(x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return (a * a - b * b) * x + 2 * a * b * y + a * g.dg(t_of(x, y))

    def uxx(x, y):
        return -2 * a * b + b * b * g.d2g(t_of(x, y))

    def uxy(x, y):
        return (a * a - b * b) - a * b * g.d2g(t_of(x, y))

    def uyy(x, y):
        return 2 * a * b + a * a * g.d2g(t_of(x, y))

    return AnalyticField(u, ux, uy, uxx, uxy, uyy,
                         name=f"quad(a={a},b={b},g={g.name})")


def quadratic_family_singular_curve(a, b, g):
    """Implicit description w(x, y) = 2(ax + by) + g'(-bx + ay) of the singular curve."""
    def w(x, y):
        return 2.0 * (a * np.asarray(x) + b * np.asarray(y)) + g.dg(
            -b * np.asarray(x) + a * np.asarray(y))
    return w


# ---------------------------------------------------------------------------
# Named non-minimal / counterexample fixtures.
# ---------------------------------------------------------------------------

def radial_paraboloid(sign=1.0):
    """u = sign * (x^2 + y^2) / 2; one isolated singular point at the origin.

    Its p-mean curvature is sign / (sqrt(2) r): the borderline 1/r blow-up.
    """
    s = float(sign)
    return AnalyticField(
        lambda x, y: 0.5 * s * (np.asarray(x, dtype=float) ** 2 + np.asarray(y, dtype=float) ** 2),
        lambda x, y: s * np.asarray(x, dtype=float) + 0.0 * np.asarray(y),
        lambda x, y: s * np.asarray(y, dtype=float) + 0.0 * np.asarray(x),
        _const_fn(s), _const_fn(0.0), _const_fn(s),
        name=f"radial({s:+g})")


def _example1_g_parts(y):
    """exp(-1/y^2), sin(-1/y), cos(-1/y) with the removable limit at y = 0."""
    y = np.asarray(y, dtype=float)
    safe = np.where(np.abs(y) > 1e-30, y, 1.0)
    with np.errstate(over="ignore", under="ignore"):
        e = np.where(np.abs(y) > 1e-30, np.exp(-1.0 / safe**2), 0.0)
    s = np.sin(-1.0 / safe)
    c = np.cos(-1.0 / safe)
    return e, s, c, safe


def example1_field():
    """u = x g(y) with g(y) = exp(-1/y^2) sin(-1/y) + y.

    The singular set accumulates at the origin along x = 0 at the heights
    y = -1/(k pi) (and their mirror images), while the curvature blows up
    faster than any power of 1/r along a suitable sequence; the points are
    non-isolated in the limit yet lie on no singular curve.

    Because g(y) - y = exp(-1/y^2) sin(-1/y) drops below one ulp of y away
    from the origin, the field also carries exact closed forms for the
    shifted gradient and its Jacobian: deriving them from the generic
    gradient would wipe out the entire singular-set signal by cancellation.
    """
    def g(y):
        e, s, _, _ = _example1_g_parts(y)
        return e * s + np.asarray(y, dtype=float)

    def dg_minus_1(y):
        e, s, c, safe = _example1_g_parts(y)
        return e * (2.0 * s / safe**3 + c / safe**2)

    def dg(y):
        return dg_minus_1(y) + 1.0

    def d2g(y):
        e, s, c, safe = _example1_g_parts(y)
        return e * (4.0 * s / safe**6 - 7.0 * s / safe**4
                    + 4.0 * c / safe**5 - 2.0 * c / safe**3)

    def u(x, y):
        return np.asarray(x, dtype=float) * g(y)

    def shifted(x, y):
        e, s, _, _ = _example1_g_parts(y)
        # (u_x - y, u_y + x) without forming g(y) - y.
        return e * s + 0.0 * np.asarray(x), np.asarray(x, dtype=float) * (dg(y) + 1.0)

    def uent(x, y):
        # rows of the Jacobian of the shifted gradient: (u_xx, u_xy - 1,
        # u_xy + 1, u_yy) with u_xy - 1 = g'(y) - 1 kept in product form.
        zero = 0.0 * (np.asarray(x, dtype=float) + np.asarray(y, dtype=float))
        return (zero, dg_minus_1(y) + zero, dg(y) + 1.0 + zero,
                np.asarray(x, dtype=float) * d2g(y))

    return AnalyticField(
        u,
        lambda x, y: g(y) + 0.0 * np.asarray(x),
        lambda x, y: np.asarray(x, dtype=float) * dg(y),
        _const_fn(0.0),
        lambda x, y: dg(y) + 0.0 * np.asarray(x),
        lambda x, y: np.asarray(x, dtype=float) * d2g(y),
        name="example1",
        shifted_gradient=shifted,
        u_entries=uent)


def example1_singular_heights(kmax):
    """The accumulation heights y = -1/(k pi), k = 1..kmax, on the x = 0 axis."""
    return [-1.0 / (k * math.pi) for k in range(1, kmax + 1)]


def example3_field(beta=3.0):
    """u = (x^2 - y^2)/2 + (sgn(x)|x|^beta - sgn(y)|y|^beta)/beta, beta > 2.

    The origin is an isolated singular point although det U = 0 there: the
    determinant test for non-isolated points needs a 1/r bound on H, which
    this field violates only in the sharper direction (H ~ r^{1-beta}).
    """
    if not beta > 2:
        raise BadParamsError("example3 needs beta > 2 for C^2 smoothness")
    b = float(beta)

    def odd_pow(t, p):
        t = np.asarray(t, dtype=float)
        return np.sign(t) * np.abs(t) ** p

    return AnalyticField(
        lambda x, y: 0.5 * (np.asarray(x, dtype=float) ** 2 - np.asarray(y, dtype=float) ** 2)
        + (odd_pow(x, b) - odd_pow(y, b)) / b,
        lambda x, y: np.asarray(x, dtype=float) + np.abs(x) ** (b - 1.0) + 0.0 * np.asarray(y),
        lambda x, y: -np.asarray(y, dtype=float) - np.abs(y) ** (b - 1.0) + 0.0 * np.asarray(x),
        lambda x, y: 1.0 + (b - 1.0) * odd_pow(x, b - 2.0) + 0.0 * np.asarray(y),
        _const_fn(0.0),
        lambda x, y: -1.0 - (b - 1.0) * odd_pow(y, b - 2.0) + 0.0 * np.asarray(x),
        name=f"example3(beta={b})")


def tlog_field():
    """Radial graph u = f(r^2) with f(t) = -t / log(t) (u(0) = 0), for r < 1.

    All second derivatives vanish at the origin and H ~ -1/(r log r), which
    is o(1/r) but not integrably small: characteristic curves reach the
    origin in finite length while their direction angle diverges (a slow
    spiral), so no single tangent line is selected.
    """
    def parts(x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        t = x * x + y * y
        safe = np.where(t > 0.0, t, 0.5)
        lg = np.log(safe)
        fp = (1.0 - lg) / lg**2
        fpp = (1.0 / safe) * (1.0 / lg**2 - 2.0 / lg**3)
        fp = np.where(t > 0.0, fp, 0.0)
        fpp_t = np.where(t > 0.0, fpp, 0.0)
        return x, y, t, fp, fpp_t

    def u(x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        t = x * x + y * y
        safe = np.where(t > 0.0, t, 0.5)
        return np.where(t > 0.0, -safe / np.log(safe), 0.0)

    def ux(x, y):
        x, y, t, fp, _ = parts(x, y)
        return 2.0 * x * fp

    def uy(x, y):
        x, y, t, fp, _ = parts(x, y)
        return 2.0 * y * fp

    def uxx(x, y):
        x, y, t, fp, fpp = parts(x, y)
        return 2.0 * fp + 4.0 * x * x * fpp

    def uxy(x, y):
        x, y, t, fp, fpp = parts(x, y)
        return 4.0 * x * y * fpp

    def uyy(x, y):
        x, y, t, fp, fpp = parts(x, y)
        return 2.0 * fp + 4.0 * y * y * fpp

    return AnalyticField(u, ux, uy, uxx, uxy, uyy, name="tlog")


# ---------------------------------------------------------------------------
# Legendrian lines and ruled surfaces.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LegendrianLine:
    """The line s -> p0 + s (c1 e1hat(p0) + c2 e2hat(p0)); tangent to the contact planes."""

    p0: np.ndarray
    direction: np.ndarray
    c1: float
    c2: float

    def point(self, s):
        s = np.asarray(s, dtype=float)
        return self.p0 + np.multiply.outer(s, self.direction)


def legendrian_line(p0, c1, c2):
    """Legendrian line through p0 with contact direction (c1, c2), c1^2+c2^2 = 1."""
    if abs(c1 * c1 + c2 * c2 - 1.0) > 1e-12:
        raise BadParamsError("direction constants must satisfy c1^2 + c2^2 = 1")
    p0 = np.asarray(p0, dtype=float)
    fr = left_frame(p0)
    direction = c1 * fr.e1hat + c2 * fr.e2hat
    return LegendrianLine(p0=p0, direction=direction, c1=float(c1), c2=float(c2))


@dataclass(frozen=True)
class RuledSurface:
    """Directrix gamma(tau) plus a ruling angle theta(tau).

    The surface is (tau, s) -> gamma(tau) + s * ruling(tau) with

        ruling(tau) = sin(theta) (1, 0, y0(tau)) - cos(theta) (0, 1, -x0(tau)),

    a unit contact vector at every point of the line it generates.
    """

    gamma: callable
    theta_of_tau: callable
    tau_range: tuple
    s_range: tuple
    name: str = "ruled"

    def ruling(self, tau):
        g = np.asarray(self.gamma(tau), dtype=float)
        th = float(self.theta_of_tau(tau))
        fr = left_frame(g)
        return math.sin(th) * fr.e1hat - math.cos(th) * fr.e2hat

    def point(self, tau, s):
        return np.asarray(self.gamma(tau), dtype=float) + s * self.ruling(tau)


class RuledSurfaceMesh:
    """Sampled ruled surface with quad connectivity and OBJ/CSV export."""

    def __init__(self, surface, n_tau=64, n_s=16):
        if n_tau < 2 or n_s < 2:
            raise BadParamsError("mesh needs at least 2 samples per parameter")
        self.surface = surface
        t0, t1 = surface.tau_range
        s0, s1 = surface.s_range
        if not (t1 > t0 and s1 > s0):
            raise BadParamsError("parameter ranges must be nonempty")
        self.taus = np.linspace(t0, t1, n_tau)
        self.ss = np.linspace(s0, s1, n_s)
        pts = np.empty((n_tau, n_s, 3))
        for i, tau in enumerate(self.taus):
            g = np.asarray(surface.gamma(tau), dtype=float)
            r = surface.ruling(tau)
            pts[i] = g[None, :] + self.ss[:, None] * r[None, :]
        self.points = pts

    def ruling_contact_residuals(self):
        """Theta0 evaluated on the ruling direction at every mesh sample."""
        res = np.empty(self.points.shape[:2])
        for i, tau in enumerate(self.taus):
            r = self.surface.ruling(tau)
            res[i] = theta0_eval(self.points[i], r)
        return res

    def quads(self):
        n_tau, n_s = self.points.shape[:2]
        idx = np.arange(n_tau * n_s).reshape(n_tau, n_s)
        a = idx[:-1, :-1].ravel()
        b = idx[1:, :-1].ravel()
        c = idx[1:, 1:].ravel()
        d = idx[:-1, 1:].ravel()
        return np.stack([a, b, c, d], axis=1)

    def to_obj(self, path_or_buf):
        """Wavefront OBJ text: v lines then f quads (1-based indices)."""
        own = isinstance(path_or_buf, str)
        buf = open(path_or_buf, "w") if own else path_or_buf
        try:
            for p in self.points.reshape(-1, 3):
                buf.write(f"v {float(p[0])!r} {float(p[1])!r} {float(p[2])!r}\n")
            for q in self.quads():
                buf.write(f"f {q[0]+1} {q[1]+1} {q[2]+1} {q[3]+1}\n")
        finally:
            if own:
                buf.close()

    def to_csv(self, path_or_buf):
        """CSV with columns tau,s,x,y,z over the sample lattice."""
        own = isinstance(path_or_buf, str)
        buf = open(path_or_buf, "w") if own else path_or_buf
        try:
            buf.write("tau,s,x,y,z\n")
            for i, tau in enumerate(self.taus):
                for j, s in enumerate(self.ss):
                    p = self.points[i, j]
                    buf.write(f"{float(tau)!r},{float(s)!r},{float(p[0])!r},"
                              f"{float(p[1])!r},{float(p[2])!r}\n")
        finally:
            if own:
                buf.close()


def make_ruled_surface(surface, n_tau=64, n_s=16):
    """Mesh sampler for a RuledSurface."""
    return RuledSurfaceMesh(surface, n_tau=n_tau, n_s=n_s)


def hyperboloid_ruled(s_range=(-1.5, 1.5)):
    """Directrix the unit circle with theta(tau) = tau: sweeps z^2 = x^2 + y^2 - 1."""
    return RuledSurface(
        gamma=lambda tau: np.array([math.cos(tau), math.sin(tau), 0.0]),
        theta_of_tau=lambda tau: tau,
        tau_range=(0.0, 2.0 * math.pi), s_range=s_range, name="hyperboloid")


def xz_graph_ruled(tau_range=(-1.5, 1.5), s_range=(-2.0, 2.0)):
    """Vertical directrix (0, 0, tau) ruled so the surface is the graph y = x z."""
    def theta(tau):
        return math.atan2(1.0, -tau)

    return RuledSurface(
        gamma=lambda tau: np.array([0.0, 0.0, tau]),
        theta_of_tau=theta,
        tau_range=tau_range, s_range=s_range, name="y=xz")


def contact_plane_ruled(p0, s_range=(-1.0, 1.0)):
    """Degenerate directrix (a point): the union of Legendrian lines = contact plane."""
    p0 = np.asarray(p0, dtype=float)
    return RuledSurface(
        gamma=lambda tau: p0,
        theta_of_tau=lambda tau: tau,
        tau_range=(0.0, 2.0 * math.pi), s_range=s_range, name="contact-plane")


# ---------------------------------------------------------------------------
# Monge relation for graph-type ruled surfaces.
# ---------------------------------------------------------------------------

def monge_residual(f, p, tol=None):
    """r + 2 s a + t a^2 with a = -(p - y)/(q + x); zero exactly where the graph
    is ruled by Legendrian lines with x as the running parameter.

    Raises VerticalRulingError when q + x vanishes but p - y does not (the
    ruling cannot be parametrized by x), and SingularError when both vanish.
    """
    x, y = float(p[0]), float(p[1])
    pu, qu = f.gradient(x, y)
    r, s, t = f.hessian(x, y)
    if tol is None:
        tol = 1e-10 * (1.0 + abs(x) + abs(y))
    denom = qu + x
    numer = pu - y
    if abs(denom) < tol:
        if abs(numer) < tol:
            raise SingularError("Monge slope undefined at a singular point", d_value=0.0)
        raise VerticalRulingError("q + x vanishes: ruling is vertical in x")
    a = -numer / denom
    return float(r + 2.0 * s * a + t * a * a)


# ---------------------------------------------------------------------------
# Evidence-based entire-solution classifier.
# ---------------------------------------------------------------------------

@dataclass
class EntireClassification:
    """Sampling verdict for an entire analytic field."""

    verdict: str                       # "ConsistentWithMinimal" | "NotMinimal"
    witness: tuple = None              # point with P(u) != 0 when NotMinimal
    case: int = None                   # 1 = concurrent lines, 2 = parallel lines
    center: tuple = None               # common point of characteristics (case 1)
    direction_spread: float = None     # angular spread of trace directions
    max_residual: float = 0.0
    boxes: tuple = (1.0, 2.0, 4.0, 8.0, 16.0)
    starts: list = field(default_factory=list)


def classify_entire(f, pts_per_box=1000, boxes=(1.0, 2.0, 4.0, 8.0, 16.0),
                    rng=None, trace_starts=20, start_radius=1.5):
    """Sample P(u) over expanding boxes; if consistent with zero, probe the
    characteristic-line structure (concurrent versus parallel).

    This is evidence, not a decision procedure: minimality is checked at
    finitely many points and the structure at finitely many traces.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    worst = 0.0
    for half in boxes:
        xs = rng.uniform(-half, half, pts_per_box)
        ys = rng.uniform(-half, half, pts_per_box)
        res = np.asarray(pmge_numerator(f, (xs, ys)), dtype=float)
        gx, gy = shifted_gradient(f, xs, ys)
        uxx, uxy, uyy = f.hessian(xs, ys)
        scale = (gy * gy * np.abs(uxx) + 2.0 * np.abs(gy * gx * uxy)
                 + gx * gx * np.abs(uyy))
        bad = np.abs(res) > 1e-10 + 1e-10 * scale
        if np.any(bad):
            k = int(np.argmax(np.abs(res)))
            return EntireClassification(
                verdict="NotMinimal", witness=(float(xs[k]), float(ys[k])),
                max_residual=float(np.max(np.abs(res))), boxes=tuple(boxes))
        worst = max(worst, float(np.max(np.abs(res))))

    # Structure probe: short traces from a circle of starts.
    dirs, starts = [], []
    for k in range(trace_starts):
        ang = 2.0 * math.pi * k / trace_starts
        start = (start_radius * math.cos(ang), start_radius * math.sin(ang) + 0.05)
        try:
            t = characteristic.trace(f, start, orientation=1, max_arclength=0.5)
        except SingularError:
            continue
        if len(t.s) < 2:
            continue
        d = np.array([t.x[-1] - t.x[0], t.y[-1] - t.y[0]])
        nd = np.linalg.norm(d)
        if nd == 0:
            continue
        dirs.append(d / nd)
        starts.append(start)
    dirs = np.asarray(dirs)
    angles = np.mod(np.arctan2(dirs[:, 1], dirs[:, 0]), math.pi)
    angles = np.sort(angles)
    gaps = np.diff(np.concatenate([angles, [angles[0] + math.pi]]))
    spread = math.pi - float(np.max(gaps))

    out = EntireClassification(verdict="ConsistentWithMinimal",
                               max_residual=worst, boxes=tuple(boxes),
                               direction_spread=spread, starts=starts)
    if spread < 1e-6:
        out.case = 2
        return out

    # Concurrent case: least-squares common point of the trace lines.
    A, rhs = [], []
    for (sx, sy), d in zip(starts, dirs):
        nrm = np.array([-d[1], d[0]])
        A.append(nrm)
        rhs.append(nrm @ np.array([sx, sy]))
    center, *_ = np.linalg.lstsq(np.asarray(A), np.asarray(rhs), rcond=None)
    dists = np.abs(np.asarray(A) @ center - np.asarray(rhs))
    out.case = 1
    out.center = (float(center[0]), float(center[1]))
    out.direction_spread = spread
    if float(np.max(dists)) > 1e-5 * (1.0 + np.linalg.norm(center)):
        out.case = None  # lines neither parallel nor concurrent: report raw evidence
    return out
