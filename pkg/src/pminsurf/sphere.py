"""The standard pseudohermitian 3-sphere and its Legendrian great circles.

Points of S^3 in C^2 are written (zeta1, zeta2) = (x1 + i y1, x2 + i y2),
stored as real 4-vectors (x1, y1, x2, y2).  The contact form is

    Theta_hat = x1 dy1 - y1 dx1 + x2 dy2 - y2 dx2,

with frame

    e1hat = (x2, -y2, -x1, y1),  e2hat = (y2, x2, -y1, -x1),
    T_hat = (-y1, x1, -y2, x2),

the first two spanning the contact planes and T_hat the Reeb field.  The
Legendrian geodesics are exactly the Legendrian great circles

    gamma(s) = cos(s) alpha + sin(s) beta,

where beta is determined from a unit alpha and direction constants
(c1, c2), c1^2 + c2^2 = 1, by

    (beta1, beta2) = (alpha3, alpha4) [[c1, c2], [c2, -c1]],
    (beta3, beta4) = (alpha1, alpha2) [[-c1, -c2], [-c2, c1]],

and Legendrian tangency is equivalent to the contact condition

    alpha_1perp . beta_1 + alpha_2perp . beta_2 = 0,   (e, f)perp = (-f, e).

The Cayley transform F maps S^3 minus (zeta2 = -1) onto H1,

    x = Re(zeta1 / (1 + zeta2)),  y = Im(zeta1 / (1 + zeta2)),
    z = Re(i (1 - zeta2) / (1 + zeta2)) / 2,

and is a contact diffeomorphism: Theta_hat = F^*(lambda^2 Theta0) with
lambda^2 = 4 / (4 z^2 + (x^2 + y^2 + 1)^2).  Under a conformal change
Theta~ = lambda^2 Theta the p-mean curvature transforms as

    H~ = (lambda H - 3 e2(lambda)) / lambda^2.

The torus rho1 = c in polar coordinates zeta_j = rho_j exp(i phi_j) has
constant p-mean curvature H = rho2/rho1 - rho1/rho2 and no singular
points; it is p-minimal exactly at c = sqrt(2)/2, where the ambient
curvature W = 2 makes the second-variation bracket the negative constant
-2W (instability).  Coordinate 2-spheres are p-minimal with two foliation
singular points of winding index +1 each, matching Euler characteristic 2.
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import singular as _singular
from .errors import (AtPoleError, BadParamsError, InvalidPairError,
                     NotOnSphereError)
from .fields import constant_field


def _check_unit4(p, tol=1e-12, what="point"):
    p = np.asarray(p, dtype=float)
    if p.shape != (4,):
        raise NotOnSphereError(f"{what} must be a 4-vector")
    if abs(float(p @ p) - 1.0) > tol:
        raise NotOnSphereError(f"{what} is off the unit sphere: |p|^2 = {p @ p!r}")
    return p


def theta_hat_eval(p, v):
    """Theta_hat at p applied to a 4-vector v (both broadcast over rows)."""
    p = np.asarray(p, dtype=float)
    v = np.asarray(v, dtype=float)
    return (p[..., 0] * v[..., 1] - p[..., 1] * v[..., 0]
            + p[..., 2] * v[..., 3] - p[..., 3] * v[..., 2])


def frame_hat(p):
    """(e1hat, e2hat, T_hat) at a unit 4-vector p."""
    p = _check_unit4(p)
    x1, y1, x2, y2 = p
    e1 = np.array([x2, -y2, -x1, y1])
    e2 = np.array([y2, x2, -y1, -x1])
    t = np.array([-y1, x1, -y2, x2])
    return e1, e2, t


def beta_from_alpha(alpha, c1, c2):
    """The companion vector of a Legendrian great circle through alpha.

    Requires |alpha| = 1 and c1^2 + c2^2 = 1 (to 1e-12).  The result is a
    unit vector orthogonal to alpha satisfying the contact condition, so
    (alpha, beta, c1, c2) is a valid great-circle pair.
    """
    alpha = np.asarray(alpha, dtype=float)
    if abs(float(alpha @ alpha) - 1.0) > 1e-12:
        raise BadParamsError("alpha must be a unit 4-vector")
    if abs(c1 * c1 + c2 * c2 - 1.0) > 1e-12:
        raise BadParamsError("direction constants must satisfy c1^2 + c2^2 = 1")
    a1, a2, a3, a4 = alpha
    return np.array([
        a3 * c1 + a4 * c2,
        a3 * c2 - a4 * c1,
        -a1 * c1 - a2 * c2,
        -a1 * c2 + a2 * c1,
    ])


def legendrian_pair_residual(alpha, beta):
    """alpha_1perp . beta_1 + alpha_2perp . beta_2; zero iff beta is contact at alpha."""
    a = np.asarray(alpha, dtype=float)
    b = np.asarray(beta, dtype=float)
    return (-a[1] * b[0] + a[0] * b[1] - a[3] * b[2] + a[2] * b[3])


@dataclass(frozen=True)
class GreatCirclePair:
    """Orthonormal (alpha, beta) spanning a Legendrian great circle."""

    alpha: np.ndarray
    beta: np.ndarray
    c1: float
    c2: float

    @classmethod
    def from_alpha(cls, alpha, c1, c2):
        beta = beta_from_alpha(alpha, c1, c2)
        return cls(alpha=np.asarray(alpha, dtype=float), beta=beta,
                   c1=float(c1), c2=float(c2))


@dataclass
class S3Curve:
    """Sampled Legendrian great circle with its defining pair."""

    s: np.ndarray
    points: np.ndarray          # (n, 4)
    pair: GreatCirclePair

    def tangents(self):
        a, b = self.pair.alpha, self.pair.beta
        return (-np.sin(self.s)[:, None] * a[None, :]
                + np.cos(self.s)[:, None] * b[None, :])

    def to_csv(self, path_or_buf):
        own = isinstance(path_or_buf, str)
        buf = open(path_or_buf, "w") if own else path_or_buf
        try:
            buf.write("s,x1,y1,x2,y2\n")
            for si, p in zip(self.s, self.points):
                buf.write(f"{float(si)!r},{float(p[0])!r},{float(p[1])!r},"
                          f"{float(p[2])!r},{float(p[3])!r}\n")
        finally:
            if own:
                buf.close()


def great_circle(pair, samples=256):
    """Sample gamma(s) = cos(s) alpha + sin(s) beta on [0, 2 pi].

    Raises InvalidPairError when the pair fails unit/orthogonality or the
    contact condition beyond 1e-10.
    """
    a = np.asarray(pair.alpha, dtype=float)
    b = np.asarray(pair.beta, dtype=float)
    if (abs(float(a @ a) - 1.0) > 1e-10 or abs(float(b @ b) - 1.0) > 1e-10
            or abs(float(a @ b)) > 1e-10
            or abs(legendrian_pair_residual(a, b)) > 1e-10):
        raise InvalidPairError("great-circle pair violates the contact conditions")
    s = np.linspace(0.0, 2.0 * math.pi, samples)
    pts = np.cos(s)[:, None] * a[None, :] + np.sin(s)[:, None] * b[None, :]
    return S3Curve(s=s, points=pts, pair=pair)


# ---------------------------------------------------------------------------
# Cayley transform.
# ---------------------------------------------------------------------------

def _to_complex(p):
    p = np.asarray(p, dtype=float)
    return p[..., 0] + 1j * p[..., 1], p[..., 2] + 1j * p[..., 3]


def cayley(p, pole_tol=1e-12):
    """Cayley transform S^3 minus the pole (zeta2 = -1) to H1 = R^3.

    Accepts a 4-vector or an (n, 4) batch; raises AtPoleError when
    |1 + zeta2| <= pole_tol anywhere in the batch.
    """
    z1, z2 = _to_complex(p)
    denom = 1.0 + z2
    if np.any(np.abs(denom) <= pole_tol):
        raise AtPoleError("Cayley transform evaluated at its pole (zeta2 = -1)")
    w = z1 / denom
    zc = 0.5 * (1j * (1.0 - z2) / denom)
    return np.stack([np.real(w), np.imag(w), np.real(zc)], axis=-1)


def conformal_lambda(q):
    """lambda(q) = 2 / sqrt(4 z^2 + (x^2 + y^2 + 1)^2) > 0 on H1."""
    q = np.asarray(q, dtype=float)
    x, y, z = q[..., 0], q[..., 1], q[..., 2]
    return 2.0 / np.sqrt(4.0 * z * z + (x * x + y * y + 1.0) ** 2)


def cayley_pullback_gap(p, v, fd_step=1e-6):
    """Theta_hat(v) - lambda^2(F(p)) Theta0(dF v) for a tangent v of S^3 at p.

    dF is taken by a central difference along v of the ambient formula (the
    transform extends off the sphere), so the gap is finite-difference
    limited at about fd_step^2.
    """
    from .heisenberg import theta0_eval

    p = np.asarray(p, dtype=float)
    v = np.asarray(v, dtype=float)
    fp = cayley(p)
    dfv = (cayley(p + fd_step * v) - cayley(p - fd_step * v)) / (2.0 * fd_step)
    lam = float(conformal_lambda(fp))
    return float(theta_hat_eval(p, v) - lam * lam * theta0_eval(fp, dfv))


def pmc_transform(h_val, lam, e2_lambda):
    """p-mean curvature under Theta~ = lambda^2 Theta: (lambda H - 3 e2(lambda)) / lambda^2."""
    if not lam > 0:
        raise BadParamsError("conformal factor lambda must be positive")
    return (lam * h_val - 3.0 * e2_lambda) / (lam * lam)


def torus_pmc(c):
    """Constant p-mean curvature of the torus rho1 = c: rho2/rho1 - rho1/rho2."""
    if not 0.0 < c < 1.0:
        raise BadParamsError("torus parameter must satisfy 0 < c < 1")
    rho2 = math.sqrt(1.0 - c * c)
    return rho2 / c - c / rho2


# ---------------------------------------------------------------------------
# Foliation audit: singular points, winding indices, Euler characteristic.
# ---------------------------------------------------------------------------

_AXES = ("x1", "y1", "x2", "y2")
_PARTNER = {"x1": "y1", "y1": "x1", "x2": "y2", "y2": "x2"}


def coordinate_sphere_mesh(axis, n=48):
    """Unit-sphere mesh of the coordinate 2-sphere {axis = 0} in S^3."""
    if axis not in _AXES:
        raise BadParamsError(f"axis must be one of {_AXES}")
    th = np.linspace(0.0, math.pi, n)
    ph = np.linspace(0.0, 2.0 * math.pi, 2 * n)
    TH, PH = np.meshgrid(th, ph)
    tri = np.stack([np.sin(TH) * np.cos(PH), np.sin(TH) * np.sin(PH),
                    np.cos(TH)], axis=-1).reshape(-1, 3)
    out = np.zeros((tri.shape[0], 4))
    cols = [k for k, a in enumerate(_AXES) if a != axis]
    out[:, cols] = tri
    return out


def clifford_torus_mesh(c=math.sqrt(0.5), n=64):
    """Mesh of the torus rho1 = c parameterized by the two phases."""
    p1 = np.linspace(0.0, 2.0 * math.pi, n)
    p2 = np.linspace(0.0, 2.0 * math.pi, n)
    P1, P2 = np.meshgrid(p1, p2)
    rho2 = math.sqrt(1.0 - c * c)
    return np.stack([c * np.cos(P1), c * np.sin(P1),
                     rho2 * np.cos(P2), rho2 * np.sin(P2)], axis=-1).reshape(-1, 4)


def _apply_unitary(mat2, pts):
    """Apply a 2x2 complex unitary to real 4-vectors (rows)."""
    z1, z2 = _to_complex(pts)
    w1 = mat2[0, 0] * z1 + mat2[0, 1] * z2
    w2 = mat2[1, 0] * z1 + mat2[1, 1] * z2
    return np.stack([np.real(w1), np.imag(w1), np.real(w2), np.imag(w2)], axis=-1)


def _reduction_unitary(mesh, point):
    """A pseudohermitian automorphism of S^3 (a U(2) matrix) taking the
    meshed coordinate sphere into {y2 = 0} and ``point`` to (0, 0, 1, 0).

    Searched over the finite family (optional swap of zeta1, zeta2) followed
    by a unit scaling of zeta2; both preserve Theta_hat and the CR
    structure.  Raises BadParamsError when none fits (not a coordinate
    sphere / pole situation outside the family).
    """
    swap = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
    eye = np.eye(2, dtype=complex)
    target = np.array([0.0, 0.0, 1.0, 0.0])
    for base in (eye, swap):
        for u in (1.0, -1.0, 1j, -1j):
            mat = np.array([[1.0, 0.0], [0.0, u]], dtype=complex) @ base
            img = _apply_unitary(mat, mesh)
            if np.max(np.abs(img[:, 3])) > 1e-12:
                continue
            pimg = _apply_unitary(mat, point[None, :])[0]
            if np.linalg.norm(pimg - target) < 1e-12:
                return mat
    raise BadParamsError("no reduction unitary found for this surface/point")


@dataclass
class FoliationAudit:
    """Foliation singular points, their indices, and the index sum."""

    surface: str
    singular_points: list
    indices: list
    chi: int
    checks: dict = field(default_factory=dict)

    def to_json(self):
        return json.dumps({
            "schema": 1,
            "surface": self.surface,
            "singular_points": [[float(c) for c in p] for p in self.singular_points],
            "indices": self.indices,
            "chi": self.chi,
            "checks": self.checks,
        }, sort_keys=True)


def foliation_index_audit(surface):
    """Index audit of the characteristic foliation of a model surface.

    ``surface`` is "clifford-torus" or "coordinate-sphere:<axis>" with axis
    in {x1, y1, x2, y2}.  For the coordinate sphere the two foliation
    singular points (the common points of its Legendrian great-circle
    family) are verified from the tangency condition, each is moved by a
    sphere automorphism into the Cayley chart, the image surface is checked
    to be the plane z = 0, and the winding index of the characteristic
    field of the graph u = 0 is computed there; the indices sum to the
    Euler characteristic 2.  The torus is verified to have no singular
    points, matching chi = 0.
    """
    checks = {}
    if surface == "clifford-torus":
        mesh = clifford_torus_mesh()
        # Tangency defect of the contact plane against the torus tangents.
        x1, y1, x2, y2 = mesh.T
        t1 = np.stack([-y1, x1, np.zeros_like(x1), np.zeros_like(x1)], axis=-1)
        t2 = np.stack([np.zeros_like(x1), np.zeros_like(x1), -y2, x2], axis=-1)
        res = np.maximum(np.abs(theta_hat_eval(mesh, t1)),
                         np.abs(theta_hat_eval(mesh, t2)))
        checks["min_tangency_residual"] = float(np.min(res))
        checks["singular_free"] = bool(np.min(res) > 1e-6)
        return FoliationAudit(surface=surface, singular_points=[], indices=[],
                              chi=0, checks=checks)

    if not surface.startswith("coordinate-sphere:"):
        raise BadParamsError("surface must be 'clifford-torus' or 'coordinate-sphere:<axis>'")
    axis = surface.split(":", 1)[1]
    if axis not in _AXES:
        raise BadParamsError(f"axis must be one of {_AXES}")
    mesh = coordinate_sphere_mesh(axis)
    partner_col = _AXES.index(_PARTNER[axis])
    pts = []
    for sign in (1.0, -1.0):
        p = np.zeros(4)
        p[partner_col] = sign
        pts.append(p)

    # Singularity condition: both contact frame vectors tangent to the
    # surface, i.e. their ``axis`` components vanish.
    acol = _AXES.index(axis)
    e1c = np.array([frame_hat(_check_unit4(p))[0][acol] for p in pts])
    e2c = np.array([frame_hat(_check_unit4(p))[1][acol] for p in pts])
    checks["singular_condition_residual"] = float(np.max(np.abs(np.concatenate([e1c, e2c]))))

    # No other singular points: away from the two poles the tangency
    # residual stays positive on the mesh.
    e1m = np.stack([frame_hat(q / np.linalg.norm(q))[0] for q in mesh])
    e2m = np.stack([frame_hat(q / np.linalg.norm(q))[1] for q in mesh])
    res = np.maximum(np.abs(e1m[:, acol]), np.abs(e2m[:, acol]))
    far = np.min([np.linalg.norm(mesh - p[None, :], axis=1) for p in pts], axis=0) > 0.3
    checks["min_offpole_tangency_residual"] = float(np.min(res[far]))

    zero_graph = constant_field(0.0)
    indices = []
    max_plane_defect = 0.0
    for p in pts:
        mat = _reduction_unitary(mesh, p)
        img = _apply_unitary(mat, mesh)
        keep = np.abs(1.0 + (img[:, 2] + 1j * img[:, 3])) > 1e-6
        cay = cayley(img[keep])
        max_plane_defect = max(max_plane_defect, float(np.max(np.abs(cay[:, 2]))))
        origin = cayley(_apply_unitary(mat, p[None, :])[0])
        checks.setdefault("singular_point_image_norm", 0.0)
        checks["singular_point_image_norm"] = max(
            checks["singular_point_image_norm"], float(np.linalg.norm(origin)))
        indices.append(_singular.index(zero_graph, (origin[0], origin[1])))
    checks["max_cayley_plane_defect"] = max_plane_defect
    return FoliationAudit(surface=surface, singular_points=[tuple(p) for p in pts],
                          indices=indices, chi=int(sum(indices)), checks=checks)


def two_route_pmc_check(samples=25, fd_step=1e-6, rng=None):
    """Audit of the curvature transformation on the coordinate sphere {y2=0}.

    Its Cayley image is the p-minimal graph u = 0, whose curvature by the
    graph formula is 0; transporting that back with the conformal factor
    must reproduce the sphere's zero p-mean curvature:

        H_hat = (lambda * H_graph - 3 e2(lambda)) / lambda^2 = 0,

    with e2(lambda) taken by finite differences along the computed
    Legendrian normal of the graph.  Returns the max |H_hat| over samples.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    worst = 0.0
    for _ in range(samples):
        x, y = rng.uniform(-1.5, 1.5, size=2)
        r = math.hypot(x, y)
        if r < 0.2:
            continue
        q = np.array([x, y, 0.0])
        e2 = np.array([y, -x, x * x + y * y]) / r    # Legendrian normal of u = 0
        lam = float(conformal_lambda(q))
        lp = float(conformal_lambda(q + fd_step * e2))
        lm = float(conformal_lambda(q - fd_step * e2))
        e2_lam = (lp - lm) / (2.0 * fd_step)
        h_graph = 0.0                                # graph formula on u = 0
        worst = max(worst, abs(pmc_transform(h_graph, lam, e2_lam)))
    return worst
