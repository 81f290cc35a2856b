"""Per-frame drawable batches: Klein-projected edges and triangles.

build_scene transforms every cell's geometry by the world transform,
Klein-projects it, and attaches palette indices and hyperbolic depth
keys.  Edges are single chords (geodesics are straight in the Klein
model); nothing is culled here, so element counts are exactly linear in
the cell count and the output order is the external contract.
"""

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .minkowski import GeometryError
from .honeycomb import CUBE_EDGES, Tiling

MODES = ("cubes", "truncated", "triangles-only")

# central-cell triangle side = 2*t0, the face-to-face distance
DEFAULT_HORO_PARAM = 1.0 / math.sqrt(3.0)

# eight well-separated RGB values; index = honeycomb color_index
DEFAULT_PALETTE = (
    (230, 40, 40),    # red
    (60, 200, 60),    # green
    (70, 90, 240),    # blue
    (240, 220, 40),   # yellow
    (220, 60, 220),   # magenta
    (60, 220, 220),   # cyan
    (245, 245, 245),  # white
    (245, 140, 30),   # orange
)

_EDGE_IDX = np.array(CUBE_EDGES)


@dataclass(frozen=True)
class RenderConfig:
    width: int = 400
    height: int = 400
    fov: float = math.pi / 2
    mode: str = "cubes"
    max_depth: int = 6
    fog_scale: float = 6.0
    palette: tuple = DEFAULT_PALETTE
    horo_param: float = DEFAULT_HORO_PARAM

    def __post_init__(self):
        if not (16 <= self.width <= 8192 and 16 <= self.height <= 8192):
            raise GeometryError("image size must be within [16, 8192]")
        if not 0 < self.fov < math.pi:
            raise GeometryError("fov must be in (0, pi)")
        if not 0 <= self.max_depth <= 8:
            raise GeometryError("max_depth must be in [0, 8]")
        if self.mode not in MODES:
            raise GeometryError("unknown render mode %r" % (self.mode,))
        if len(self.palette) != 8:
            raise GeometryError("palette must hold 8 colors")

    def as_dict(self):
        return {
            "width": self.width, "height": self.height, "fov": self.fov,
            "mode": self.mode, "max_depth": self.max_depth,
            "fog_scale": self.fog_scale,
            "palette": [list(c) for c in self.palette],
            "horo_param": self.horo_param,
        }


@dataclass
class SceneBatch:
    """Drawable set: Klein chords and triangles with colors and depths."""

    edges_k: np.ndarray      # (e, 2, 3)
    edges_color: np.ndarray  # (e,) int
    edges_depth: np.ndarray  # (e,)
    tris_k: np.ndarray       # (t, 3, 3)
    tris_color: np.ndarray
    tris_depth: np.ndarray

    @staticmethod
    def empty():
        return SceneBatch(
            np.zeros((0, 2, 3)), np.zeros(0, dtype=int), np.zeros(0),
            np.zeros((0, 3, 3)), np.zeros(0, dtype=int), np.zeros(0))

    @property
    def edge_count(self):
        return self.edges_k.shape[0]

    @property
    def triangle_count(self):
        return self.tris_k.shape[0]

    def max_klein_norm(self):
        vals = [0.0]
        if self.edge_count:
            vals.append(float(np.linalg.norm(self.edges_k, axis=-1).max()))
        if self.triangle_count:
            vals.append(float(np.linalg.norm(self.tris_k, axis=-1).max()))
        return max(vals)


def _hyper_depth(klein_points):
    """arctanh of Klein radii: hyperbolic distance from the viewer."""
    r = np.linalg.norm(klein_points, axis=-1)
    return np.arctanh(np.clip(r, 0.0, 1.0 - 1e-15))


def build_scene(tiling: Tiling, world_from_model, cfg: RenderConfig):
    """Transform, project and tag every cell's geometry, in cell order."""
    w = np.asarray(world_from_model, dtype=float)
    colors = np.array([c.color_index for c in tiling.cells])
    n = len(tiling.cells)

    edges_k = np.zeros((0, 2, 3))
    edges_color = np.zeros(0, dtype=int)
    edges_depth = np.zeros(0)
    tris_k = np.zeros((0, 3, 3))
    tris_color = np.zeros(0, dtype=int)
    tris_depth = np.zeros(0)

    if cfg.mode in ("cubes", "truncated"):
        verts = np.einsum("ij,nvj->nvi", w, tiling.vertices_model())
        klein = verts[..., :3] / verts[..., 3:4]          # (n, 8, 3)
        seg = klein[:, _EDGE_IDX, :]                      # (n, 12, 2, 3)
        edges_k = seg.reshape(n * 12, 2, 3)
        edges_color = np.repeat(colors, 12)
        edges_depth = _hyper_depth(edges_k.mean(axis=1))

    if cfg.mode in ("truncated", "triangles-only"):
        tri = np.einsum("ij,ntkj->ntki", w, tiling.triangles_model(cfg.horo_param))
        tk = tri[..., :3] / tri[..., 3:4]                 # (n, 8, 3, 3)
        tris_k = tk.reshape(n * 8, 3, 3)
        tris_color = np.repeat(colors, 8)
        tris_depth = _hyper_depth(tris_k.mean(axis=1))

    return SceneBatch(edges_k, edges_color, edges_depth,
                      tris_k, tris_color, tris_depth)


def batch_to_protocol(batch: SceneBatch):
    """JSON-ready edges/tris lists for the wire protocol."""
    edges = [
        [list(map(float, e[0])), list(map(float, e[1])), int(c), float(d)]
        for e, c, d in zip(batch.edges_k, batch.edges_color, batch.edges_depth)
    ]
    tris = [
        [list(map(float, t[0])), list(map(float, t[1])), list(map(float, t[2])),
         int(c), float(d)]
        for t, c, d in zip(batch.tris_k, batch.tris_color, batch.tris_depth)
    ]
    return edges, tris
