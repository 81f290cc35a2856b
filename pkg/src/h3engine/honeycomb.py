"""The {4,3,6} cubical honeycomb: fundamental cube, enumeration, coloring.

The fundamental cube is centered at the origin with face planes at
hyperbolic distance t0 = arcsinh(1/sqrt 2), the unique distance at which
adjacent faces meet at 60 degrees so six cubes fit around every edge.
Its vertices are ideal: the eight null directions (+-1,+-1,+-1,sqrt 3).

Cells are enumerated by breadth-first search over the six face-pairing
translations, deduplicated by a rounded-matrix fingerprint, so a cell is
an *element of the face-pairing group* (a placement).  The group contains
the three axis half-turns of the cube (first reached at word length 6),
so a geometric cube can recur under rotated placements; colors are still
well defined per cube because those half-turns fix the seed facet's axis.

The 8-coloring tracks a position in the hypercube {4,3,3}: a facet
(axis, sign) plus a frame mapping local face labels to hypercube axes.
Crossing a face rolls the state; the walk around any honeycomb edge
closes after 12 crossings (twice around: the cover branches along edges
with order-2 holonomy, a cube half-turn after 6 crossings).
"""

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .minkowski import ORIGIN, GeometryError, mink_dot
from .isometry import exp_translation, invert

SCHLAFLI = (4, 3, 6)

# face-plane distance from the cube center: sinh^2 t0 = cos(pi/3)
T0 = math.asinh(1.0 / math.sqrt(2.0))

FACE_LABELS = ("+X", "-X", "+Y", "-Y", "+Z", "-Z")
OPPOSITE = {"+X": "-X", "-X": "+X", "+Y": "-Y", "-Y": "+Y", "+Z": "-Z", "-Z": "+Z"}
_AXIS_SIGN = {
    "+X": (0, 1), "-X": (0, -1),
    "+Y": (1, 1), "-Y": (1, -1),
    "+Z": (2, 1), "-Z": (2, -1),
}

FINGERPRINT_DECIMALS = 6
COLLISION_DISTANCE = 1e-4
MAX_ENUM_DEPTH = 8
EDGE_INCIDENCE_TOL = 1e-9

# vertex order: sign triples lexicographic with +1 before -1
CUBE_VERTICES = np.array([
    (sx / math.sqrt(3.0), sy / math.sqrt(3.0), sz / math.sqrt(3.0), 1.0)
    for sx in (1, -1) for sy in (1, -1) for sz in (1, -1)
])

# index pairs of vertices differing in exactly one sign, lexicographic
CUBE_EDGES = tuple(
    (i, j)
    for i in range(8) for j in range(i + 1, 8)
    if bin(i ^ j).count("1") == 1
)

# per vertex, the three incident edge partners in index order
VERTEX_NEIGHBORS = tuple(
    tuple(j for j in range(8) if bin(i ^ j).count("1") == 1) for i in range(8)
)


class TilingError(GeometryError):
    """The enumeration or its invariants broke down."""


class TruncationOverlapError(GeometryError):
    """horo_param is so large that corner triangles of one cell meet."""


@dataclass(frozen=True)
class FacePlane:
    label: str
    normal: np.ndarray


def face_normal(label):
    """Unit space-like normal of a fundamental-cube face plane."""
    axis, sign = _AXIS_SIGN[label]
    n = np.zeros(4)
    n[axis] = sign * math.cosh(T0)
    n[3] = math.sinh(T0)
    return n


@dataclass(frozen=True)
class FundamentalCube:
    faces: tuple
    vertices: np.ndarray  # (8, 4) ideal, w = 1
    face_distance: float


def fundamental_cube():
    faces = tuple(FacePlane(lbl, face_normal(lbl)) for lbl in FACE_LABELS)
    return FundamentalCube(faces=faces, vertices=CUBE_VERTICES.copy(),
                           face_distance=T0)


_PAIRINGS = {}


def face_pairing(label):
    """Translation gluing the cube to its neighbor across the given face."""
    if label not in _PAIRINGS:
        axis, sign = _AXIS_SIGN[label]
        d = np.zeros(3)
        d[axis] = sign * 2.0 * T0
        _PAIRINGS[label] = exp_translation(d)
    return _PAIRINGS[label]


class ColorState(NamedTuple):
    """Position in the branched cover of the hypercube {4,3,3}.

    facet_axis/facet_sign name one of its 8 cubical cells; frame holds the
    hypercube images (axis 1..4, sign) of the local +X, +Y, +Z directions,
    always avoiding facet_axis and respecting negation.
    """

    facet_axis: int
    facet_sign: int
    frame: tuple  # ((axis, sign) for +X, +Y, +Z)

    @property
    def color_index(self):
        return 2 * (self.facet_axis - 1) + (0 if self.facet_sign > 0 else 1)


INITIAL_COLOR_STATE = ColorState(4, 1, ((1, 1), (2, 1), (3, 1)))


def color(state, crossing):
    """Roll the cover state across a face.

    With phi(crossing) = sigma e_b the new facet is (b, sigma); the
    crossing direction now images to -s e_a (you entered the new facet
    through its x_a = s face), and the four directions orthogonal to the
    crossing keep their images.
    """
    axis, sign = _AXIS_SIGN[crossing]
    a, s = state.facet_axis, state.facet_sign
    b, sigma = state.frame[axis]
    sigma *= sign
    frame = list(state.frame)
    frame[axis] = (a, -s * sign)
    return ColorState(b, sigma, tuple(frame))


@dataclass(frozen=True)
class Cell:
    placement: np.ndarray  # 4x4 isometry taking the fundamental cube here
    depth: int
    color_state: ColorState

    @property
    def color_index(self):
        return self.color_state.color_index


def fingerprint(m):
    """Dedup key: entries rounded to 1e-6 (with -0.0 normalized away)."""
    return (np.round(m, FINGERPRINT_DECIMALS) + 0.0).tobytes()


def _sort_key(m):
    return tuple((np.round(m, FINGERPRINT_DECIMALS) + 0.0).ravel())


def _coarse_key(m):
    return (np.round(m / (2.0 * COLLISION_DISTANCE)) + 0.0).tobytes()


@dataclass
class Tiling:
    """An enumerated ball of the {4,3,6} honeycomb.

    cells are in BFS-layer order, each layer sorted by fingerprint;
    adjacency[i][k] is the index across FACE_LABELS[k], or None at the
    frontier.  Immutable once built; _cache holds derived render geometry.
    """

    schlafli: tuple
    max_depth: int
    cells: list
    adjacency: list
    cube: FundamentalCube
    index_of: dict = field(repr=False)
    _cache: dict = field(default_factory=dict, repr=False)

    def __len__(self):
        return len(self.cells)

    def cell_count_at(self, depth):
        return sum(1 for c in self.cells if c.depth == depth)

    def placements(self):
        arr = self._cache.get("placements")
        if arr is None:
            arr = np.stack([c.placement for c in self.cells])
            self._cache["placements"] = arr
        return arr

    def vertices_model(self):
        """Ideal vertices of every cell, w = 1, shape (n, 8, 4)."""
        arr = self._cache.get("vertices")
        if arr is None:
            raw = np.einsum("nij,vj->nvi", self.placements(), CUBE_VERTICES)
            arr = raw / raw[..., 3:4]
            self._cache["vertices"] = arr
        return arr

    def triangles_model(self, horo_param):
        """Truncation triangles of every cell, shape (n, 8, 3, 4)."""
        key = ("triangles", horo_param)
        arr = self._cache.get(key)
        if arr is None:
            arr = np.stack([
                truncation_geometry(c, horo_param, check_overlap=False)
                for c in self.cells
            ])
            self._cache[key] = arr
        return arr


def enumerate_tiling(max_depth):
    """BFS over the six face pairings with fingerprint dedup.

    Deterministic: layers emitted in order, each sorted lexicographically
    by rounded matrix.  Transported color states are checked at every
    re-encounter; a mismatch (never observed, and impossible while cycles
    are genuine matrix identities) raises TilingError.  A coarse second
    grid guards the dedup tolerance sandwich: two distinct fingerprints
    closer than 1e-4 raise.
    """
    if not 0 <= max_depth <= MAX_ENUM_DEPTH:
        raise ValueError("max_depth must be in [0, %d]" % MAX_ENUM_DEPTH)

    pairings = [(lbl, face_pairing(lbl)) for lbl in FACE_LABELS]
    start = np.eye(4)
    cells = [Cell(start, 0, INITIAL_COLOR_STATE)]
    index_of = {fingerprint(start): 0}
    coarse = {_coarse_key(start): start}
    layer = [cells[0]]

    for depth in range(1, max_depth + 1):
        found = {}
        for cell in layer:
            for lbl, p in pairings:
                m = cell.placement @ p
                key = fingerprint(m)
                state = color(cell.color_state, lbl)
                if key in index_of:
                    if cells[index_of[key]].color_state != state:
                        raise TilingError("color transport mismatch at re-encounter")
                elif key in found:
                    if found[key].color_state != state:
                        raise TilingError("color transport mismatch at re-encounter")
                else:
                    ck = _coarse_key(m)
                    other = coarse.get(ck)
                    if other is not None and float(np.abs(other - m).max()) < COLLISION_DISTANCE:
                        raise TilingError("dedup collision suspected")
                    coarse[ck] = m
                    found[key] = Cell(m, depth, state)
        layer = [found[k] for k in sorted(found, key=lambda k: _sort_key(found[k].placement))]
        for cell in layer:
            index_of[fingerprint(cell.placement)] = len(cells)
            cells.append(cell)

    adjacency = []
    for cell in cells:
        row = []
        for lbl, p in pairings:
            row.append(index_of.get(fingerprint(cell.placement @ p)))
        adjacency.append(row)

    return Tiling(schlafli=SCHLAFLI, max_depth=max_depth, cells=cells,
                  adjacency=adjacency, cube=fundamental_cube(),
                  index_of=index_of)


def faces_containing_edge(placement, va, vb, tol=EDGE_INCIDENCE_TOL):
    """Local face labels of a cell whose planes contain both ideal points."""
    gi = invert(placement)
    a = gi @ va
    b = gi @ vb
    out = []
    for lbl in FACE_LABELS:
        n = face_normal(lbl)
        if abs(mink_dot(a, n)) < tol * a[3] and abs(mink_dot(b, n)) < tol * b[3]:
            out.append(lbl)
    return out


def edge_walk(start_placement, va, vb, max_steps=24):
    """Walk cell to cell around the edge (va, vb) until the placement returns.

    Returns (labels, placements); placements[0] == placements[-1] within
    1e-9.  For this honeycomb the walk always closes after 12 crossings,
    visiting the 6 cubes around the edge twice each: after 6 crossings the
    accumulated product is a half-turn of the cube, the order-2 holonomy
    of the branched cover, and the second lap cancels it.
    """
    g = np.asarray(start_placement, dtype=float)
    entered = None
    labels = []
    placements = [g]
    for _ in range(max_steps):
        faces = faces_containing_edge(g, va, vb)
        if len(faces) != 2:
            raise TilingError("edge does not lie on exactly two faces: %r" % (faces,))
        lbl = faces[0] if faces[0] != entered else faces[1]
        labels.append(lbl)
        g = g @ face_pairing(lbl)
        entered = OPPOSITE[lbl]
        placements.append(g)
        if float(np.abs(g - placements[0]).max()) < 1e-9:
            return labels, placements
    raise TilingError("edge walk failed to close")


def _w1(v):
    return v / v[..., 3:4]


def truncation_geometry(cell, horo_param, check_overlap=True):
    """Corner triangles of one cell, shape (8, 3, 4) hyperboloid points.

    Triangle i sits on the horosphere <x, v_i> = -horo_param around the
    cell's i-th ideal vertex (w = 1 normalization fixes the horosphere
    consistently across cells sharing the vertex); its corners lie on the
    three incident edges, ordered by neighbor vertex index.  Every such
    triangle is equilateral in the hyperbolic metric.

    With check_overlap, raises TruncationOverlapError if triangles from
    the two ends of some edge of this cell would meet or cross, which
    happens once 2 h^2 > -<u,v> for that edge.
    """
    if horo_param <= 0:
        raise GeometryError("horo_param must be positive")
    placement = cell.placement if isinstance(cell, Cell) else np.asarray(cell, dtype=float)
    verts = _w1((placement @ CUBE_VERTICES.T).T)
    h = float(horo_param)

    if check_overlap:
        for i, j in CUBE_EDGES:
            q = -float(mink_dot(verts[i], verts[j]))
            if 2.0 * h * h > q * (1.0 + 1e-12):
                raise TruncationOverlapError(
                    "horo_param %g overlaps corner triangles across an edge" % h)

    tris = np.empty((8, 3, 4))
    for i in range(8):
        v = verts[i]
        for k, j in enumerate(VERTEX_NEIGHBORS[i]):
            u = verts[j]
            q = -float(mink_dot(u, v))
            tris[i, k] = v / (2.0 * h) + (h / q) * u
    return tris


def horosphere_chart(q, p, v, horo_param):
    """Flat-chart coordinates of horosphere point q relative to base p.

    The horosphere <x,v> = -h with the induced metric is euclidean; this
    returns the tangent offset t with q = p + t + (|t|^2/2h) v, so angles
    and lengths among the t's are the intrinsic flat ones.
    """
    beta = (-1.0 - float(mink_dot(q, p))) / horo_param
    return q - p - beta * v


def cells_around_edge(start_placement, va, vb):
    """The 6 distinct cubes around an edge, one placement each, walk order."""
    _, placements = edge_walk(start_placement, va, vb)
    out = []
    seen = []
    for g in placements[:-1]:
        center = g @ ORIGIN
        if any(np.abs(center - c).max() < 1e-9 for c in seen):
            continue
        seen.append(center)
        out.append(g)
    return out
