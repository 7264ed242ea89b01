"""Structural identity, regularized Dirichlet solver, comparison audits.

For C^1 functions u, v on a domain of R^n and a continuous vector field F,
write alpha = grad u + F and beta = grad v + F.  Away from the zeros of
alpha and beta the structural equality

    (grad u - grad v) . (alpha/|alpha| - beta/|beta|)
        = (|alpha| + |beta|)/2 * |alpha/|alpha| - beta/|beta||^2

holds; in particular the left side vanishes iff the two unit fields agree.
This "elliptic" identity drives comparison and uniqueness statements for
the graph-minimality equation (n = 2, F = (-y, x)) and its 2m-dimensional
analogues F = (-y_1, x_1, ..., -y_m, x_m), for which div F* = 2m with
F* = (x_1, y_1, ..., x_m, y_m).

The Dirichlet solver minimizes the regularized p-area

    E_eps(u) = integral sqrt(eps^2 + |grad u + F|^2) dx dy,

a convex functional whose critical points solve div((grad u + F)/D_eps)=0,
by damped Newton (Armijo backtracking) on a bilinear-element discretization
with 2x2 Gauss quadrature per cell, continued over a decreasing eps
schedule with warm starts.  The limit eps -> 0 recovers p-area; boundary
data enters as fixed node values.
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spl

from .curvature import shifted_gradient
from .errors import SingularError
from .fields import Field2, GridField


# ---------------------------------------------------------------------------
# General contact-type vector fields and the structural identity.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GeneralF:
    """A continuous vector field F on R^n with its rotated companion F*.

    For the Heisenberg choice in dimension n = 2m, F* equals the position
    field and div F* = 2m exactly.
    """

    n: int
    func: callable                    # (k, n) points -> (k, n) values
    fstar: callable = None
    name: str = "F"

    def __call__(self, p):
        return self.func(np.asarray(p, dtype=float))


def heisenberg_f(m):
    """F = (-y_1, x_1, ..., -y_m, x_m) on R^{2m}, with F* the position field."""
    def func(p):
        p = np.atleast_2d(np.asarray(p, dtype=float))
        out = np.empty_like(p)
        out[:, 0::2] = -p[:, 1::2]
        out[:, 1::2] = p[:, 0::2]
        return out

    def fstar(p):
        return np.atleast_2d(np.asarray(p, dtype=float)).copy()

    return GeneralF(n=2 * m, func=func, fstar=fstar, name=f"heisenberg(m={m})")


def zero_f(n):
    def func(p):
        return 0.0 * np.atleast_2d(np.asarray(p, dtype=float))
    return GeneralF(n=n, func=func, fstar=func, name="zero")


def _gradient_of(u, p):
    """Gradient rows of u at points p (k, n); accepts plane fields, callables,
    or objects exposing gradient(p)."""
    p = np.atleast_2d(np.asarray(p, dtype=float))
    if isinstance(u, Field2):
        gx, gy = u.gradient(p[:, 0], p[:, 1])
        return np.stack([np.asarray(gx, dtype=float),
                         np.asarray(gy, dtype=float)], axis=1)
    if callable(u):
        return np.atleast_2d(np.asarray(u(p), dtype=float))
    return np.atleast_2d(np.asarray(u.gradient(p), dtype=float))


def structural_identity_gap(u, v, p, general_f=None, tol=1e-12):
    """Both sides of the structural equality and their gap at point(s) p.

    ``u`` and ``v`` provide gradients (plane fields, callables p -> grad, or
    objects with a gradient method); ``general_f`` defaults to the n = 2
    Heisenberg field.  Returns (lhs, rhs, gap), arrays when p is a batch.

    Raises SingularError when alpha or beta vanishes at a query point.
    """
    p = np.atleast_2d(np.asarray(p, dtype=float))
    if general_f is None:
        general_f = heisenberg_f(p.shape[1] // 2)
    fv = general_f(p)
    alpha = _gradient_of(u, p) + fv
    beta = _gradient_of(v, p) + fv
    na = np.linalg.norm(alpha, axis=1)
    nb = np.linalg.norm(beta, axis=1)
    if np.any(na <= tol) or np.any(nb <= tol):
        raise SingularError("alpha or beta vanishes at a query point",
                            d_value=float(min(na.min(), nb.min())))
    diff_unit = alpha / na[:, None] - beta / nb[:, None]
    lhs = np.sum((alpha - beta) * diff_unit, axis=1)
    rhs = 0.5 * (na + nb) * np.sum(diff_unit * diff_unit, axis=1)
    gap = lhs - rhs
    if gap.size == 1:
        return float(lhs[0]), float(rhs[0]), float(gap[0])
    return lhs, rhs, gap


# ---------------------------------------------------------------------------
# Dirichlet problem on a uniform grid.
# ---------------------------------------------------------------------------

@dataclass
class DirichletProblem:
    """Grid geometry, boundary values, eps schedule and Newton tolerances.

    ``boundary`` is a full (ny, nx) array whose rim holds the Dirichlet
    values (interior entries seed the first Newton solve and may be zero).
    """

    x0: float
    y0: float
    h: float
    nx: int
    ny: int
    boundary: np.ndarray
    eps_schedule: tuple = (1.0, 1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6)
    newton_tol: float = 1e-10
    max_iter: int = 60

    def __post_init__(self):
        if self.nx < 9 or self.ny < 9:
            raise ValueError("Dirichlet grid must be at least 9x9")
        if not self.h > 0:
            raise ValueError("grid spacing must be positive")
        eps = tuple(float(e) for e in self.eps_schedule)
        if any(e <= 0 for e in eps) or any(b >= a for a, b in zip(eps, eps[1:])):
            raise ValueError("eps schedule must be positive and strictly decreasing")
        self.eps_schedule = eps
        self.boundary = np.asarray(self.boundary, dtype=float)
        if self.boundary.shape != (self.ny, self.nx):
            raise ValueError("boundary array must have shape (ny, nx)")


def problem_from_function(rect, n, func, **kw):
    """Square-grid problem on ``rect`` with boundary values sampled from func."""
    x0, y0, x1, y1 = rect
    h = (x1 - x0) / (n - 1)
    if abs((y1 - y0) / (n - 1) - h) > 1e-12 * max(1.0, h):
        raise ValueError("problem_from_function wants a square rectangle")
    xa = x0 + h * np.arange(n)
    ya = y0 + h * np.arange(n)
    X, Y = np.meshgrid(xa, ya)
    vals = np.asarray(func(X, Y), dtype=float).copy()
    vals[1:-1, 1:-1] = 0.0
    return DirichletProblem(x0=x0, y0=y0, h=h, nx=n, ny=n, boundary=vals, **kw)


def boundary_ccw_to_array(values, nx, ny):
    """Boundary values ordered counterclockwise from (x0, y0) -> (ny, nx) array.

    Order: bottom row left to right (nx), right column upward (ny - 1),
    top row right to left (nx - 1), left column downward (ny - 2);
    total 2 (nx + ny) - 4 values.  Interior is zero-filled.
    """
    values = np.asarray(values, dtype=float)
    need = 2 * (nx + ny) - 4
    if values.shape != (need,):
        raise ValueError(f"expected {need} boundary values, got {values.shape}")
    arr = np.zeros((ny, nx))
    k = 0
    arr[0, :] = values[k:k + nx]; k += nx
    arr[1:, -1] = values[k:k + ny - 1]; k += ny - 1
    arr[-1, -2::-1] = values[k:k + nx - 1]; k += nx - 1
    arr[-2:0:-1, 0] = values[k:k + ny - 2]
    return arr


def boundary_array_to_ccw(arr):
    """Inverse of :func:`boundary_ccw_to_array` (reads the rim of ``arr``)."""
    arr = np.asarray(arr, dtype=float)
    return np.concatenate([arr[0, :], arr[1:, -1], arr[-1, -2::-1], arr[-2:0:-1, 0]])


def read_boundary_csv(path, nx, ny):
    """Boundary CSV: one value per line, counterclockwise from (x0, y0)."""
    return boundary_ccw_to_array(np.loadtxt(path, delimiter=","), nx, ny)


@dataclass
class EpsStage:
    eps: float
    iterations: int
    residual: float
    energy: float
    energies: list = field(default_factory=list)


@dataclass
class ConvergenceReport:
    stages: list = field(default_factory=list)
    converged: bool = True
    failed_eps: float = None
    failed_residual: float = None
    unregularized_residual: float = None
    flagged_cells: int = 0

    def to_json(self):
        return json.dumps({
            "schema": 1,
            "stages": [{"eps": s.eps, "iterations": s.iterations,
                        "residual": s.residual, "energy": s.energy}
                       for s in self.stages],
            "converged": self.converged,
            "failed_eps": self.failed_eps,
            "failed_residual": self.failed_residual,
            "unregularized_residual": self.unregularized_residual,
            "flagged_cells": self.flagged_cells,
        }, sort_keys=True)


_GAUSS = 0.5 - 0.5 / math.sqrt(3.0), 0.5 + 0.5 / math.sqrt(3.0)


class _Discretization:
    """Bilinear cells with 2x2 Gauss points for E_eps and its derivatives."""

    def __init__(self, prob):
        self.prob = prob
        nx, ny, h = prob.nx, prob.ny, prob.h
        self.h = h
        xa = prob.x0 + h * np.arange(nx)
        ya = prob.y0 + h * np.arange(ny)
        self.X, self.Y = np.meshgrid(xa, ya)
        self.interior = np.zeros((ny, nx), dtype=bool)
        self.interior[1:-1, 1:-1] = True
        idx = -np.ones((ny, nx), dtype=np.int64)
        idx[self.interior] = np.arange((ny - 2) * (nx - 2))
        J, I = np.meshgrid(np.arange(ny - 1), np.arange(nx - 1), indexing="ij")
        self.corner_idx = np.stack(
            [idx[J, I], idx[J, I + 1], idx[J + 1, I], idx[J + 1, I + 1]], axis=-1)
        self.cx, self.cy = xa[I], ya[J]
        self._JI = (J, I)
        self.gauss = []
        for xi in _GAUSS:
            for eta in _GAUSS:
                dndx = np.array([-(1 - eta), (1 - eta), -eta, eta]) / h
                dndy = np.array([-(1 - xi), -xi, (1 - xi), xi]) / h
                shape = np.array([(1 - xi) * (1 - eta), xi * (1 - eta),
                                  (1 - xi) * eta, xi * eta])
                self.gauss.append((xi, eta, 0.25, dndx, dndy, shape))
        self.n_unknown = (ny - 2) * (nx - 2)

    def corners(self, u):
        J, I = self._JI
        return np.stack([u[J, I], u[J, I + 1], u[J + 1, I], u[J + 1, I + 1]], axis=-1)

    def energy_grad(self, u, eps, want_hess=False):
        h = self.h
        uc = self.corners(u)
        e_val = 0.0
        grad = np.zeros(self.n_unknown)
        rows, cols, vals = [], [], []
        cell_min_d0 = np.full(self.cx.shape, np.inf)
        for xi, eta, w, dndx, dndy, _ in self.gauss:
            gx = uc @ dndx
            gy = uc @ dndy
            ax = gx - (self.cy + eta * h)
            ay = gy + (self.cx + xi * h)
            d0sq = ax * ax + ay * ay
            cell_min_d0 = np.minimum(cell_min_d0, np.sqrt(d0sq))
            d = np.sqrt(eps * eps + d0sq)
            e_val += w * h * h * float(np.sum(d))
            wx, wy = ax / d, ay / d
            for k in range(4):
                gk = w * h * h * (wx * dndx[k] + wy * dndy[k])
                mask = self.corner_idx[..., k] >= 0
                np.add.at(grad, self.corner_idx[..., k][mask], gk[mask])
            if want_hess:
                cxx = (1.0 - wx * wx) / d
                cxy = -wx * wy / d
                cyy = (1.0 - wy * wy) / d
                for kr in range(4):
                    for kc in range(4):
                        hk = w * h * h * (cxx * dndx[kr] * dndx[kc]
                                          + cxy * (dndx[kr] * dndy[kc]
                                                   + dndy[kr] * dndx[kc])
                                          + cyy * dndy[kr] * dndy[kc])
                        mask = ((self.corner_idx[..., kr] >= 0)
                                & (self.corner_idx[..., kc] >= 0))
                        rows.append(self.corner_idx[..., kr][mask])
                        cols.append(self.corner_idx[..., kc][mask])
                        vals.append(hk[mask])
        hess = None
        if want_hess:
            hess = sp.coo_matrix(
                (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                shape=(self.n_unknown, self.n_unknown)).tocsc()
        return e_val, grad, hess, cell_min_d0


def solve(prob):
    """Minimize E_eps over the eps schedule with warm starts.

    Returns ``(grid_field, report)``.  Newton steps are damped by Armijo
    backtracking (parameter 1e-4, halving), so the discrete energy is
    non-increasing across accepted steps; failure to meet the residual
    tolerance within ``max_iter`` marks the report as not converged and the
    partial iterate is still returned.

    The report also carries the residual of the unregularized operator
    (eps = 0 energy gradient in divergence units) over nodes not touching
    flagged near-singular cells; on those cells no claim is made.
    """
    disc = _Discretization(prob)
    u = prob.boundary.copy()
    report = ConvergenceReport()
    h = prob.h
    for eps in prob.eps_schedule:
        stage = EpsStage(eps=eps, iterations=0, residual=math.inf, energy=math.nan)
        for _ in range(prob.max_iter):
            e0, grad, hess, _ = disc.energy_grad(u, eps, want_hess=True)
            stage.energies.append(e0)
            res = float(np.max(np.abs(grad))) / (h * h)
            stage.residual = res
            stage.energy = e0
            if res < prob.newton_tol:
                break
            step = spl.spsolve(hess, -grad)
            gd = float(grad @ step)
            if not np.all(np.isfinite(step)) or gd >= 0.0:
                step = -grad / max(1e-30, float(np.max(np.abs(grad))) / (h * h))
                gd = float(grad @ step)
            t = 1.0
            while t > 1e-14:
                u_try = u.copy()
                u_try[disc.interior] = u[disc.interior] + t * step
                e_try, _, _, _ = disc.energy_grad(u_try, eps)
                if e_try <= e0 + 1e-4 * t * gd:
                    break
                t *= 0.5
            u = u_try
            stage.iterations += 1
        else:
            report.converged = False
            report.failed_eps = eps
            report.failed_residual = stage.residual
        report.stages.append(stage)

    # Residual of the unregularized operator away from near-singular cells.
    _, grad0, _, cell_d0 = disc.energy_grad(u, 0.0)
    flagged = cell_d0 < 10.0 * h
    report.flagged_cells = int(np.count_nonzero(flagged))
    node_ok = np.ones(disc.n_unknown, dtype=bool)
    for k in range(4):
        ci = disc.corner_idx[..., k][flagged]
        node_ok[ci[ci >= 0]] = False
    if np.any(node_ok):
        report.unregularized_residual = float(np.max(np.abs(grad0[node_ok]))) / (h * h)
    out = GridField(prob.x0, prob.y0, h, u, allow_onesided=True, name="dirichlet")
    return out, report


# ---------------------------------------------------------------------------
# Comparison-principle audit.
# ---------------------------------------------------------------------------

@dataclass
class ComparisonReport:
    samples: int
    singular_fraction: float
    hypothesis_divergence_violations: int
    hypothesis_boundary_violations: int
    conclusion_violations: int
    worst_conclusion_gap: float
    hypotheses_hold: bool
    conclusion_holds: bool

    def to_json(self):
        return json.dumps({
            "schema": 1,
            "samples": self.samples,
            "singular_fraction": self.singular_fraction,
            "hypothesis_divergence_violations": self.hypothesis_divergence_violations,
            "hypothesis_boundary_violations": self.hypothesis_boundary_violations,
            "conclusion_violations": self.conclusion_violations,
            "worst_conclusion_gap": self.worst_conclusion_gap,
            "hypotheses_hold": self.hypotheses_hold,
            "conclusion_holds": self.conclusion_holds,
        }, sort_keys=True)


def _div_n(f, x, y, step):
    """Plane divergence of N by central differences of the unit field."""
    def n_at(xx, yy):
        gx, gy = shifted_gradient(f, xx, yy)
        d = math.hypot(float(gx), float(gy))
        if d < 1e-12:
            raise SingularError("divergence query at a singular point", d_value=d)
        return float(gx) / d, float(gy) / d

    nxp = n_at(x + step, y)[0]
    nxm = n_at(x - step, y)[0]
    nyp = n_at(x, y + step)[1]
    nym = n_at(x, y - step)[1]
    return (nxp - nxm) / (2 * step) + (nyp - nym) / (2 * step)


def comparison_audit(u, v, dom, samples=400, rng=None, fd_step=1e-5, tol=1e-8,
                     hyp_tol=1e-4):
    """Empirical audit of the comparison principle for div N.

    Hypotheses checked on samples: div N(u) >= div N(v) at interior
    nonsingular points (finite-difference divergence, slack ``hyp_tol``),
    and u <= v on boundary samples.  Conclusion checked: u <= v + tol at
    interior samples.  The fraction of singular samples is reported instead
    of any measure-theoretic smallness of the singular set, which point
    samples cannot certify.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    xs, ys = dom.sample(rng, samples)
    x0, y0, x1, y1 = dom.rect
    n_sing = 0
    div_viol = 0
    for x, y in zip(xs, ys):
        try:
            du = _div_n(u, float(x), float(y), fd_step)
            dv = _div_n(v, float(x), float(y), fd_step)
        except SingularError:
            n_sing += 1
            continue
        if du < dv - hyp_tol:
            div_viol += 1

    t = np.linspace(0.0, 1.0, max(16, samples // 4))
    bx = np.concatenate([x0 + (x1 - x0) * t, np.full_like(t, x1),
                         x1 - (x1 - x0) * t, np.full_like(t, x0)])
    by = np.concatenate([np.full_like(t, y0), y0 + (y1 - y0) * t,
                         np.full_like(t, y1), y1 - (y1 - y0) * t])
    bu = np.asarray(u.value(bx, by), dtype=float)
    bv = np.asarray(v.value(bx, by), dtype=float)
    bdry_viol = int(np.count_nonzero(bu > bv + tol))

    iu = np.asarray(u.value(xs, ys), dtype=float)
    iv = np.asarray(v.value(xs, ys), dtype=float)
    gaps = iu - iv
    concl_viol = int(np.count_nonzero(gaps > tol))
    return ComparisonReport(
        samples=int(samples),
        singular_fraction=n_sing / float(samples),
        hypothesis_divergence_violations=div_viol,
        hypothesis_boundary_violations=bdry_viol,
        conclusion_violations=concl_viol,
        worst_conclusion_gap=float(np.max(gaps)),
        hypotheses_hold=(div_viol == 0 and bdry_viol == 0),
        conclusion_holds=(concl_viol == 0))


# ---------------------------------------------------------------------------
# Radial counterexample: matching unit gradients, distinct functions.
# ---------------------------------------------------------------------------

@dataclass
class RadialPairFixture:
    """Annulus 1 < r < 2, F = 0, u = f(r), v = g(r) with matching ends.

    Both unit gradient fields equal the radial direction everywhere, yet
    u differs from v inside: with F = 0 (so div F* = 0, not positive) equal
    unit fields do not force equality, which is exactly why the positive
    div F* hypothesis cannot be dropped from the higher-dimensional
    uniqueness argument.
    """

    f: callable
    g: callable
    df: callable
    dg: callable

    def u_gradient(self, p):
        p = np.atleast_2d(np.asarray(p, dtype=float))
        r = np.linalg.norm(p, axis=1, keepdims=True)
        return self.df(r) * p / r

    def v_gradient(self, p):
        p = np.atleast_2d(np.asarray(p, dtype=float))
        r = np.linalg.norm(p, axis=1, keepdims=True)
        return self.dg(r) * p / r


def radial_counterexample_fixture(samples=1000, rng=None):
    """Build the annulus fixture and verify its defining properties.

    Returns (fixture, report) where the report holds the maximal deviation
    of the unit gradients from the radial direction, the endpoint matching
    defects, and the largest |u - v| witnessed inside.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    f = lambda r: np.asarray(r, dtype=float)
    df = lambda r: np.ones_like(np.asarray(r, dtype=float))
    g = lambda r: 1.0 + (np.asarray(r) - 1.0) + 0.5 * (np.asarray(r) - 1.0) * (2.0 - np.asarray(r))
    dg = lambda r: 1.0 + 0.5 * (3.0 - 2.0 * np.asarray(r))
    fx = RadialPairFixture(f=f, g=g, df=df, dg=dg)

    r = rng.uniform(1.0, 2.0, samples)
    t = rng.uniform(0.0, 2.0 * math.pi, samples)
    pts = np.stack([r * np.cos(t), r * np.sin(t)], axis=1)
    rad = pts / r[:, None]
    gu = fx.u_gradient(pts)
    gv = fx.v_gradient(pts)
    dev_u = np.max(np.linalg.norm(gu / np.linalg.norm(gu, axis=1, keepdims=True) - rad, axis=1))
    dev_v = np.max(np.linalg.norm(gv / np.linalg.norm(gv, axis=1, keepdims=True) - rad, axis=1))
    report = {
        "max_unit_gradient_deviation": float(max(dev_u, dev_v)),
        "end_defect": float(max(abs(f(1.0) - g(1.0)), abs(f(2.0) - g(2.0)))),
        "max_interior_difference": float(np.max(np.abs(f(r) - g(r)))),
        "min_df": float(np.min(df(r))),
        "min_dg": float(np.min(dg(r))),
    }
    return fx, report


# ---------------------------------------------------------------------------
# Rank bound for the singular-set map in dimension 2m.
# ---------------------------------------------------------------------------

def symplectic_blocks(m):
    """Block-diagonal matrix of m copies of [[0, -1], [1, 0]]."""
    j = np.zeros((2 * m, 2 * m))
    for k in range(m):
        j[2 * k, 2 * k + 1] = -1.0
        j[2 * k + 1, 2 * k] = 1.0
    return j


def rank_audit(hessian, m, svd_tol=1e-10):
    """Numerical rank of dG = hessian + J and the bound rank >= m.

    dG - dG^T = 2 J has full rank 2m (hessians are symmetric), which forces
    rank(dG) >= m; the audit computes the numerical rank by SVD threshold
    and reports whether the bound holds.
    """
    hessian = np.asarray(hessian, dtype=float)
    if hessian.shape != (2 * m, 2 * m):
        raise ValueError("hessian must be 2m x 2m")
    dg = hessian + symplectic_blocks(m)
    s = np.linalg.svd(dg, compute_uv=False)
    rank = int(np.count_nonzero(s > svd_tol * s[0]))
    return rank, rank >= m


def rank_audit_batch(hessians, m, svd_tol=1e-10):
    """Vectorized rank audit over a stack of symmetric 2m x 2m matrices."""
    hs = np.asarray(hessians, dtype=float)
    dg = hs + symplectic_blocks(m)[None, :, :]
    s = np.linalg.svd(dg, compute_uv=False)
    ranks = np.count_nonzero(s > svd_tol * s[:, :1], axis=1)
    return ranks, bool(np.all(ranks >= m))
