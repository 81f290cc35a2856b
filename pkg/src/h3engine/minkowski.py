"""Minkowski-space linear algebra for the hyperboloid model of H3.

Vectors live in E^{3,1} with signature (+,+,+,-) and coordinate order
(x, y, z, w), w time-like.  Points of H3 are the upper sheet of
<v,v> = -1; ideal points are null directions normalized to w = 1;
tangent vectors at the origin have w = 0.  All values are plain numpy
arrays of shape (..., 4); all functions are pure.
"""

import math

import numpy as np

HPOINT_TOL = 1e-9
RENORM_TOL = 1e-12

METRIC = np.diag((1.0, 1.0, 1.0, -1.0))
ORIGIN = np.array((0.0, 0.0, 0.0, 1.0))


class GeometryError(ValueError):
    """A vector or matrix violates the geometric contract of an operation."""


def mink_vector(x, y, z, w):
    return np.array((x, y, z, w), dtype=float)


def mink_dot(a, b):
    """Bilinear form of E^{3,1}: a.x b.x + a.y b.y + a.z b.z - a.w b.w.

    Broadcasts over leading axes.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return (a[..., :3] * b[..., :3]).sum(axis=-1) - a[..., 3] * b[..., 3]


def hyp_distance(p, q):
    """Hyperbolic distance arccosh(-<p,q>) between hyperboloid points.

    The argument is clamped at 1 from below so that roundoff between
    nearly equal points yields 0 rather than NaN.
    """
    return np.arccosh(np.maximum(-mink_dot(p, q), 1.0))


def normalize_to_hyperboloid(v):
    """Rescale a time-like upper-sheet vector onto <v,v> = -1."""
    v = np.asarray(v, dtype=float)
    n = mink_dot(v, v)
    if n >= 0 or v[3] <= 0:
        raise GeometryError("not time-like upper sheet")
    return v / math.sqrt(-n)


def hpoint(v, tol=HPOINT_TOL):
    """Validate v as a hyperboloid point and return it as an array."""
    v = np.asarray(v, dtype=float)
    if abs(mink_dot(v, v) + 1.0) > tol or v[3] < 1.0 - tol:
        raise GeometryError("not a hyperboloid point: %r" % (v,))
    return v


def ideal_point(v, tol=HPOINT_TOL):
    """Normalize a null direction to w = 1 and validate it."""
    v = np.asarray(v, dtype=float)
    if v[3] <= 0:
        raise GeometryError("ideal point must have w > 0")
    v = v / v[3]
    if abs(mink_dot(v, v)) > tol:
        raise GeometryError("not a light-cone direction: %r" % (v,))
    return v


def tangent(d):
    """Embed a spatial 3-vector as a tangent vector (w = 0) at the origin."""
    d = np.asarray(d, dtype=float)
    return np.array((d[0], d[1], d[2], 0.0))


def distance_to_plane(p, n):
    """Signed distance arcsinh(<p,n>) from p to the plane <x,n> = 0.

    n must be a unit space-like normal; the sign says which side p is on.
    """
    return np.arcsinh(mink_dot(p, n))
