"""Navigation state machine: world transforms, recentering, holonomy.

The viewer stays at the origin; movement left-composes exp(-dr) onto the
accumulated world transform (the sensors report the headset displacement
as -dr, so the world slides the opposite way).  Recentering swaps the
accumulated transform for an equivalent one through a face pairing
whenever the viewer leaves the fundamental cube, keeping coordinates
small; the rendered scene is unchanged because the honeycomb is periodic
under the pairings.
"""

import math
from dataclasses import dataclass, replace
from typing import NamedTuple, Optional

import numpy as np

from .minkowski import ORIGIN, GeometryError, mink_dot
from .isometry import (MoveDelta, decompose, exp_translation, invert,
                       reorthonormalize, rotation, rotation_angle_axis)
from .honeycomb import FACE_LABELS, face_normal, face_pairing

REORTHONORMALIZE_EVERY = 64

COMPENSATION_MODES = ("off", "fix_rotation", "track_feet")

FLOOR_NORMAL = np.array((0.0, 0.0, 1.0, 0.0))


@dataclass(frozen=True)
class WorldState:
    """Accumulated world-from-model transform plus drift bookkeeping."""

    world_from_model: np.ndarray
    compose_count: int = 0
    recenter_log: tuple = ()

    @staticmethod
    def identity():
        return WorldState(np.eye(4))

    def viewer_model_position(self):
        """Where the viewer sits in model coordinates."""
        return invert(self.world_from_model) @ ORIGIN


class Holonomy(NamedTuple):
    translation_magnitude: float
    rotation_angle: float
    rotation_axis: np.ndarray


def _compose_step(state, step_matrix):
    w = step_matrix @ state.world_from_model
    count = state.compose_count + 1
    if count >= REORTHONORMALIZE_EVERY:
        w = reorthonormalize(w)
        count = 0
    return replace(state, world_from_model=w, compose_count=count)


def apply_move(state, delta):
    """Viewer moves by delta in their current frame: world gets exp(-dr)."""
    if not isinstance(delta, MoveDelta):
        d = np.asarray(delta, dtype=float)
        delta = MoveDelta(d[0], d[1], d[2])
    return _compose_step(state, exp_translation(-delta))


def apply_rotation(state, axis, angle):
    """Viewer turns by angle about axis: the world counter-rotates."""
    return _compose_step(state, rotation(axis, -angle))


def recenter(state):
    """Pull the viewer back into the fundamental cube through one face.

    Applies at most one face pairing per call (re-check next frame if a
    corner was crossed); a no-op while the viewer is inside.
    """
    q = state.viewer_model_position()
    for lbl in FACE_LABELS:
        if mink_dot(q, face_normal(lbl)) > 0:
            return replace(
                state,
                world_from_model=state.world_from_model @ face_pairing(lbl),
                recenter_log=state.recenter_log + (lbl,),
            )
    return state


def parse_script(text):
    """Move-script text: one `move dx dy dz` or `rotate ax ay az angle`
    per line, `#` comments, decimals read as host doubles."""
    steps = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "move" and len(parts) == 4:
                steps.append(("move", np.array([float(p) for p in parts[1:]])))
            elif parts[0] == "rotate" and len(parts) == 5:
                vals = [float(p) for p in parts[1:]]
                steps.append(("rotate", np.array(vals[:3]), vals[3]))
            else:
                raise ValueError
        except ValueError:
            raise ValueError("bad script line %d: %r" % (ln, raw)) from None
    return steps


def square_loop_script(side):
    """The four moves of the parallel-transport square: +x, +y, -x, -y."""
    s = float(side)
    return [
        ("move", np.array((s, 0.0, 0.0))),
        ("move", np.array((0.0, s, 0.0))),
        ("move", np.array((-s, 0.0, 0.0))),
        ("move", np.array((0.0, -s, 0.0))),
    ]


def run_script(steps, state=None):
    """Apply steps in order and report the holonomy of the result.

    No recentering happens here: the decomposition of the raw accumulated
    transform is what carries the loop's translation defect and frame
    rotation.
    """
    if state is None:
        state = WorldState.identity()
    for step in steps:
        if step[0] == "move":
            state = apply_move(state, step[1])
        elif step[0] == "rotate":
            state = apply_rotation(state, step[1], step[2])
        else:
            raise ValueError("unknown step kind %r" % (step[0],))
    return state, holonomy_of(state.world_from_model)


def holonomy_of(world_from_model):
    translation, rot = decompose(world_from_model)
    dist = float(np.arccosh(max(1.0, -mink_dot(translation @ ORIGIN, ORIGIN))))
    angle, axis = rotation_angle_axis(rot)
    return Holonomy(dist, angle, axis)


@dataclass(frozen=True)
class UserPose:
    head_height: float = 0.0


def transported_floor_up(world_from_model):
    """Unit view-space direction of the floor plane's transported normal."""
    n = world_from_model @ FLOOR_NORMAL
    u = n[:3]
    return u / np.linalg.norm(u)


def compensation_mode(mode, state, pose):
    """Render transform for the chosen floor hack.

    off passes the world through; fix_rotation counter-rotates the view so
    the transported floor normal lines up with +z again; track_feet treats
    the state as the feet point and lifts the camera by the head offset.
    Both hacks deliberately hide parallel transport, so off is the default
    elsewhere.
    """
    if mode not in COMPENSATION_MODES:
        raise GeometryError("unknown compensation mode %r" % (mode,))
    w = state.world_from_model
    if mode == "off":
        return w
    if mode == "track_feet":
        h = pose.head_height
        if h == 0.0:
            return w
        return exp_translation((0.0, -h, 0.0)) @ w
    # fix_rotation
    up = transported_floor_up(w)
    target = np.array((0.0, 0.0, 1.0))
    c = float(np.clip(up @ target, -1.0, 1.0))
    if c > 1.0 - 1e-15:
        return w
    axis = np.cross(up, target)
    n = np.linalg.norm(axis)
    if n < 1e-12:
        axis = np.array((1.0, 0.0, 0.0))  # antipodal: any perpendicular axis
        n = 1.0
    return rotation(axis / n, math.acos(c)) @ w
