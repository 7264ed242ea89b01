"""Heisenberg group primitives.

The 3-dimensional Heisenberg group H1 is R^3 with the multiplication

    (x, y, z) o (x', y', z') = (x + x', y + y', z + z' + y x' - x y').

The left-invariant frame

    e1hat = d/dx + y d/dz,   e2hat = d/dy - x d/dz,   T0 = d/dz

spans the tangent bundle; e1hat and e2hat span the kernel of the standard
contact form

    Theta0 = dz + x dy - y dx,

and T0 is its Reeb field (Theta0(T0) = 1).  All functions here are pure and
accept plain sequences or numpy arrays of shape (3,).
"""

from dataclasses import dataclass

import numpy as np


def group_multiply(p, q):
    """Heisenberg product p o q of two points of H1 = R^3."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    return np.array([
        p[0] + q[0],
        p[1] + q[1],
        p[2] + q[2] + p[1] * q[0] - p[0] * q[1],
    ])


def group_inverse(p):
    """Group inverse; (x, y, z)^-1 = (-x, -y, -z)."""
    return -np.asarray(p, dtype=float)


@dataclass(frozen=True)
class Frame3:
    """Left-invariant frame at a point: two contact directions and the Reeb field."""

    e1hat: np.ndarray
    e2hat: np.ndarray
    t0: np.ndarray


def left_frame(p):
    """Left-invariant frame (e1hat, e2hat, T0) at p = (x, y, z).

    e1hat = (1, 0, y) and e2hat = (0, 1, -x) span the contact plane at p;
    t0 = (0, 0, 1) is the Reeb field.
    """
    p = np.asarray(p, dtype=float)
    return Frame3(
        e1hat=np.array([1.0, 0.0, p[1]]),
        e2hat=np.array([0.0, 1.0, -p[0]]),
        t0=np.array([0.0, 0.0, 1.0]),
    )


def theta0_eval(p, v):
    """Evaluate the contact form Theta0 = dz + x dy - y dx at p on a vector v."""
    p = np.asarray(p, dtype=float)
    v = np.asarray(v, dtype=float)
    return v[..., 2] + p[..., 0] * v[..., 1] - p[..., 1] * v[..., 0]
