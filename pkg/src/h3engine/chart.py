"""Maps between the hyperboloid and the viewer's euclidean tangent space.

Klein projection divides by w, sending hyperboloid points into the open
unit ball and ideal points onto its boundary sphere; geodesics become
euclidean straight lines, so the renderer can draw chords.  The log map
recovers direction-times-distance in the tangent space at the origin; its
direction agrees with the Klein image, which is why projection alone
suffices for drawing.
"""

import math
from dataclasses import dataclass

import numpy as np

from .minkowski import ORIGIN, GeometryError, hyp_distance


def klein_project(p):
    """Central projection (x/w, y/w, z/w) onto the w = 1 slice.

    Broadcasts over leading axes.
    """
    p = np.asarray(p, dtype=float)
    return p[..., :3] / p[..., 3:4]


def log_map(p):
    """Inverse riemannian exponential at the origin: distance * direction.

    Returns the spatial 3-vector of the tangent; exp_translation of the
    result maps the origin back to p.
    """
    p = np.asarray(p, dtype=float)
    d = float(hyp_distance(ORIGIN, p))
    spatial = p[:3]
    n = np.linalg.norm(spatial)
    if n < 1e-15:
        return np.zeros(3)
    return d * spatial / n


@dataclass(frozen=True)
class CameraParams:
    """Pinhole camera at the tangent-space origin looking down -z."""

    width: int = 400
    height: int = 400
    fov: float = math.pi / 2  # vertical, radians
    near: float = 1e-6

    def __post_init__(self):
        if self.near <= 0:
            raise GeometryError("near plane must be positive")
        if not 0 < self.fov < math.pi:
            raise GeometryError("fov must be in (0, pi)")

    @property
    def focal(self):
        return (self.height / 2.0) / math.tan(self.fov / 2.0)


def camera_project(k, cam):
    """Project a Klein point to (px, py, depth), or None when behind.

    depth is the hyperbolic distance of the source point from the viewer
    (arctanh of the Klein radius), for fog and sorting; euclidean z would
    misrepresent the metric.
    """
    kx, ky, kz = float(k[0]), float(k[1]), float(k[2])
    if -kz < cam.near:
        return None
    r = math.sqrt(kx * kx + ky * ky + kz * kz)
    depth = math.atanh(r) if r < 1.0 else math.inf
    f = cam.focal
    px = cam.width / 2.0 + f * kx / (-kz)
    py = cam.height / 2.0 - f * ky / (-kz)
    return px, py, depth
