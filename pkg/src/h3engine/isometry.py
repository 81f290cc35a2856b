"""Isometries of H3 as matrices in SO(3,1).

Translations come from the closed-form exponential of the symmetric
generator with the move vector in its last row and column:

    exp M = Id + (sinh|dr|/|dr|) M + ((cosh|dr|-1)/|dr|^2) M^2

which collapses the full series via M^3 = |dr|^2 M.  Rotations fix the
origin and act on the spatial block; orientation-reversing maps are kept
apart as reflections and used only to build face pairings.
"""

import math
from dataclasses import dataclass

import numpy as np

from .minkowski import METRIC, ORIGIN, GeometryError, mink_dot

FORM_TOL = 1e-9
# below this |dr| the sinh/cosh quotients go through their Taylor limits
SMALL_DELTA = 1e-7
MAX_STEP = 10.0

IDENTITY = np.eye(4)


@dataclass(frozen=True)
class MoveDelta:
    """A per-frame translation request (dx, dy, dz) in hyperbolic units."""

    dx: float
    dy: float
    dz: float

    def __post_init__(self):
        if not all(math.isfinite(c) for c in (self.dx, self.dy, self.dz)):
            raise GeometryError("move delta must be finite")
        if self.magnitude >= MAX_STEP:
            raise GeometryError("absurd single-frame move: |dr| >= %g" % MAX_STEP)

    @property
    def magnitude(self):
        return math.sqrt(self.dx * self.dx + self.dy * self.dy + self.dz * self.dz)

    def as_array(self):
        return np.array((self.dx, self.dy, self.dz))

    def __neg__(self):
        return MoveDelta(-self.dx, -self.dy, -self.dz)


def _delta_array(d):
    if isinstance(d, MoveDelta):
        return d.as_array()
    d = np.asarray(d, dtype=float)
    if d.shape != (3,):
        raise GeometryError("expected a 3-component move delta")
    return d


def generator(d):
    """Infinitesimal translation: dx,dy,dz in the last row and column."""
    dx, dy, dz = _delta_array(d)
    m = np.zeros((4, 4))
    m[0, 3] = m[3, 0] = dx
    m[1, 3] = m[3, 1] = dy
    m[2, 3] = m[3, 2] = dz
    return m


def exp_translation(d):
    """Closed-form exponential of the translation generator for d."""
    vec = _delta_array(d)
    m = generator(vec)
    r = math.sqrt(float(vec @ vec))
    if r < SMALL_DELTA:
        a = 1.0 + r * r / 6.0
        b = 0.5 + r * r / 24.0
    else:
        a = math.sinh(r) / r
        b = (math.cosh(r) - 1.0) / (r * r)
    return IDENTITY + a * m + b * (m @ m)


def rotation(axis, angle):
    """Isometry fixing the origin: an SO(3) rotation in the spatial block."""
    axis = np.asarray(axis, dtype=float)
    n = np.linalg.norm(axis)
    if abs(n - 1.0) > FORM_TOL:
        raise GeometryError("rotation axis must be a unit vector")
    x, y, z = axis
    c, s = math.cos(angle), math.sin(angle)
    k = np.array(((0.0, -z, y), (z, 0.0, -x), (-y, x, 0.0)))
    block = np.eye(3) + s * k + (1.0 - c) * (k @ k)
    out = np.eye(4)
    out[:3, :3] = block
    return out


def compose(a, b):
    """Apply b first, then a."""
    return a @ b


def invert(g):
    """Form-inverse J g^T J: exact on the group, no pivoting noise."""
    return METRIC @ g.T @ METRIC


def form_error(g):
    """Frobenius norm of g^T J g - J; zero exactly on O(3,1)."""
    return float(np.linalg.norm(g.T @ METRIC @ g - METRIC))


def is_isometry(g, tol=FORM_TOL):
    return form_error(g) <= tol and g[3, 3] > 0 and np.linalg.det(g) > 0


def reorthonormalize(g):
    """Minkowski Gram-Schmidt: columns 0..2 to <c,c>=+1, column 3 to -1.

    Repairs slow drift from long composition chains; raises if a column's
    norm has the wrong sign, which means the matrix is no longer close to
    the group.
    """
    cols = []
    signs = (1.0, 1.0, 1.0, -1.0)
    for j in range(4):
        v = g[:, j].copy()
        for u, su in cols:
            v -= (mink_dot(v, u) / su) * u
        n = mink_dot(v, v)
        if n * signs[j] <= 0:
            raise GeometryError("unrecoverable drift")
        cols.append((v / math.sqrt(abs(n)), signs[j]))
    out = np.column_stack([u for u, _ in cols])
    if out[3, 3] < 0:
        out[:, 3] = -out[:, 3]
    return out


def translation_to(p):
    """Pure translation taking the origin to the hyperboloid point p."""
    p = np.asarray(p, dtype=float)
    dist = math.acosh(max(1.0, -float(mink_dot(p, ORIGIN))))
    spatial = p[:3]
    n = np.linalg.norm(spatial)
    if n < 1e-15 or dist == 0.0:
        return IDENTITY.copy()
    return exp_translation(dist * spatial / n)


def decompose(g):
    """Split g into (translation, rotation) with translation * rotation = g.

    The translation takes the origin to g(origin); the rotation fixes the
    origin and carries the residual orientation, e.g. the holonomy left
    after transporting a frame around a loop.
    """
    t = translation_to(g @ ORIGIN)
    r = invert(t) @ g
    return t, r


def rotation_angle_axis(rot):
    """Angle and axis of an origin-fixing isometry's spatial block.

    Degenerate angles near 0 or pi fall back to the symmetric part
    (eigenvector extraction) instead of the vanishing antisymmetric part.
    """
    r = rot[:3, :3]
    angle = math.acos(max(-1.0, min(1.0, (np.trace(r) - 1.0) / 2.0)))
    anti = np.array((r[2, 1] - r[1, 2], r[0, 2] - r[2, 0], r[1, 0] - r[0, 1]))
    s = np.linalg.norm(anti)
    if s > 1e-9:
        return angle, anti / s
    if angle < 1e-6:
        return angle, np.array((0.0, 0.0, 1.0))
    # angle ~ pi: axis from the dominant column of r + I
    m = r + np.eye(3)
    axis = m[:, int(np.argmax(np.diag(m)))]
    return angle, axis / np.linalg.norm(axis)


def reflection_in_plane(n):
    """Reflection x - 2<x,n>n in the plane <x,n> = 0 (n unit space-like)."""
    n = np.asarray(n, dtype=float)
    nn = mink_dot(n, n)
    if abs(nn - 1.0) > FORM_TOL:
        raise GeometryError("plane normal must be unit space-like")
    return np.eye(4) - 2.0 * np.outer(n, n) @ METRIC


def is_reflection(m, tol=FORM_TOL):
    return (form_error(m) <= tol and np.linalg.det(m) < 0
            and float(np.abs(m @ m - IDENTITY).max()) <= tol)
