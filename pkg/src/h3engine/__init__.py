"""h3engine: a hyperboloid-model H3 geometry engine.

Points live on the upper sheet of the unit hyperboloid in E^{3,1},
motion is by closed-form SO(3,1) exponentials, the scenery is the
{4,3,6} cubical honeycomb with its 8-coloring lifted from the hypercube,
and frames come out of a deterministic Klein-projection rasterizer.
"""

from .minkowski import (GeometryError, METRIC, ORIGIN, hyp_distance,
                        ideal_point, mink_dot, normalize_to_hyperboloid)
from .isometry import (MoveDelta, compose, decompose, exp_translation,
                       generator, invert, reorthonormalize, rotation)
from .chart import CameraParams, camera_project, klein_project, log_map
from .honeycomb import (Cell, ColorState, Tiling, color, edge_walk,
                        enumerate_tiling, face_pairing, fundamental_cube,
                        truncation_geometry)
from .nav import (Holonomy, WorldState, apply_move, apply_rotation,
                  compensation_mode, parse_script, recenter, run_script)
from .scene import RenderConfig, SceneBatch, build_scene
from .raster import ppm_bytes, rasterize

__version__ = "0.1.0"
