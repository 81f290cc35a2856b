import hashlib
import math

import numpy as np
import pytest

from h3engine.minkowski import GeometryError
from h3engine.honeycomb import enumerate_tiling
from h3engine.nav import WorldState, apply_move
from h3engine.raster import new_image, ppm_bytes, rasterize
from h3engine.scene import (DEFAULT_PALETTE, RenderConfig, SceneBatch,
                            batch_to_protocol, build_scene)

IDENTITY = np.eye(4)


def test_render_config_validation():
    RenderConfig()
    with pytest.raises(GeometryError):
        RenderConfig(width=8)
    with pytest.raises(GeometryError):
        RenderConfig(fov=math.pi)
    with pytest.raises(GeometryError):
        RenderConfig(max_depth=9)
    with pytest.raises(GeometryError):
        RenderConfig(mode="wireframe")


def test_depth0_cubes_scene(tiling2):
    t0 = enumerate_tiling(0)
    cfg = RenderConfig(max_depth=0, mode="cubes")
    batch = build_scene(t0, IDENTITY, cfg)
    assert batch.edge_count == 12
    assert batch.triangle_count == 0
    # every endpoint is an ideal cube vertex on the unit sphere
    norms = np.linalg.norm(batch.edges_k.reshape(-1, 3), axis=1)
    assert np.abs(norms - 1.0).max() <= 1e-9
    corners = {tuple(np.round(p, 9)) for p in batch.edges_k.reshape(-1, 3)}
    assert len(corners) == 8
    expect = {tuple(np.round(np.array(s) / math.sqrt(3), 9))
              for s in [(sx, sy, sz) for sx in (1, -1) for sy in (1, -1)
                        for sz in (1, -1)]}
    assert corners == expect


def test_triangles_only_scene():
    t0 = enumerate_tiling(0)
    cfg = RenderConfig(max_depth=0, mode="triangles-only")
    batch = build_scene(t0, IDENTITY, cfg)
    assert batch.edge_count == 0
    assert batch.triangle_count == 8


def test_counts_scale_linearly(tiling2, tiling3):
    for mode, epc, tpc in (("cubes", 12, 0), ("truncated", 12, 8),
                           ("triangles-only", 0, 8)):
        cfg = RenderConfig(mode=mode)
        b2 = build_scene(tiling2, IDENTITY, cfg)
        b3 = build_scene(tiling3, IDENTITY, cfg)
        assert b2.edge_count == epc * len(tiling2)
        assert b3.edge_count == epc * len(tiling3)
        assert b2.triangle_count == tpc * len(tiling2)
        assert b3.triangle_count == tpc * len(tiling3)


def test_mode_consistency(tiling2):
    cubes = build_scene(tiling2, IDENTITY, RenderConfig(mode="cubes"))
    trunc = build_scene(tiling2, IDENTITY, RenderConfig(mode="truncated"))
    tris = build_scene(tiling2, IDENTITY, RenderConfig(mode="triangles-only"))
    assert np.array_equal(trunc.tris_k, tris.tris_k)
    assert np.array_equal(trunc.tris_color, tris.tris_color)
    # cubes-mode edges are exactly the truncated-mode edges
    assert np.array_equal(cubes.edges_k, trunc.edges_k)


def test_klein_containment_and_depth_keys(tiling3):
    st = apply_move(WorldState.identity(), (0.4, -0.2, 0.3))
    for mode in ("cubes", "truncated"):
        batch = build_scene(tiling3, st.world_from_model, RenderConfig(mode=mode))
        assert batch.max_klein_norm() <= 1.0 + 1e-9
        assert (batch.edges_depth >= 0).all()
        assert (batch.tris_depth >= 0).all()
        assert np.isfinite(batch.edges_depth).all()


def test_world_transform_moves_scene(tiling2):
    cfg = RenderConfig(mode="cubes")
    st = apply_move(WorldState.identity(), (0.5, 0, 0))
    moved = build_scene(tiling2, st.world_from_model, cfg)
    still = build_scene(tiling2, IDENTITY, cfg)
    assert not np.allclose(moved.edges_k, still.edges_k)


def test_empty_batch_renders_background():
    cfg = RenderConfig(width=64, height=48)
    img = rasterize(SceneBatch.empty(), cfg)
    assert img.shape == (48, 64, 3)
    assert img.sum() == 0


def test_single_axis_edge_renders_center_row():
    cfg = RenderConfig(width=65, height=65, fog_scale=1e9)
    edge = np.array([[[-0.4, 0.0, -0.5], [0.4, 0.0, -0.5]]])
    batch = SceneBatch(edge, np.array([6]), np.array([0.1]),
                       np.zeros((0, 3, 3)), np.zeros(0, dtype=int), np.zeros(0))
    img = rasterize(batch, cfg)
    row = img[32]
    assert (row.sum(axis=1) > 0).sum() > 20
    assert img[:32].sum() == 0 and img[33:].sum() == 0
    assert tuple(img[32, 32]) == DEFAULT_PALETTE[6]


def test_triangle_fill_deterministic_and_inside():
    cfg = RenderConfig(width=64, height=64, fog_scale=1e9)
    tri = np.array([[[-0.3, -0.3, -0.5], [0.3, -0.3, -0.5], [0.0, 0.4, -0.5]]])
    batch = SceneBatch(np.zeros((0, 2, 3)), np.zeros(0, dtype=int), np.zeros(0),
                       tri, np.array([1]), np.array([0.2]))
    a = rasterize(batch, cfg)
    b = rasterize(batch, cfg)
    assert np.array_equal(a, b)
    assert a.sum() > 0
    # centroid pixel is filled, corners of the image are not
    assert a[20, 32].sum() > 0
    assert a[0, 0].sum() == 0


def test_painter_far_first_near_wins():
    cfg = RenderConfig(width=32, height=32, fog_scale=1e9)
    near = np.array([[[-0.4, 0.0, -0.3], [0.4, 0.0, -0.3]]])
    far = np.array([[[-0.4, 0.0, -0.6], [0.4, 0.0, -0.6]]])
    edges = np.concatenate([near, far])
    batch = SceneBatch(edges, np.array([0, 2]),
                       np.array([math.atanh(0.3), math.atanh(0.6)]),
                       np.zeros((0, 3, 3)), np.zeros(0, dtype=int), np.zeros(0))
    img = rasterize(batch, cfg)
    assert tuple(img[16, 16]) == DEFAULT_PALETTE[0]


def test_fog_fades_toward_background():
    cfg = RenderConfig(width=32, height=32, fog_scale=1.0)
    edge = np.array([[[-0.4, 0.0, -0.5], [0.4, 0.0, -0.5]]])

    def brightness(depth):
        batch = SceneBatch(edge, np.array([6]), np.array([depth]),
                           np.zeros((0, 3, 3)), np.zeros(0, dtype=int),
                           np.zeros(0))
        return int(rasterize(batch, cfg)[16, 16].sum())

    vals = [brightness(d) for d in (0.0, 0.5, 0.9, 1.0, 5.0)]
    assert vals[0] > vals[1] > vals[2] > vals[3]
    assert vals[3] == vals[4] == 0  # fully fogged at and past fog_scale


def test_behind_camera_elements_clipped(tiling2):
    cfg = RenderConfig(width=32, height=32)
    edge = np.array([[[0.0, 0.0, 0.5], [0.2, 0.1, 0.6]]])  # behind
    batch = SceneBatch(edge, np.array([0]), np.array([0.5]),
                       np.zeros((0, 3, 3)), np.zeros(0, dtype=int), np.zeros(0))
    assert rasterize(batch, cfg).sum() == 0
    # straddling edge gets clipped, not dropped
    edge2 = np.array([[[0.0, 0.0, -0.5], [0.0, 0.0, 0.5]]])
    batch2 = SceneBatch(edge2, np.array([0]), np.array([0.1]),
                        np.zeros((0, 3, 3)), np.zeros(0, dtype=int), np.zeros(0))
    assert rasterize(batch2, cfg).sum() > 0


def test_ppm_bytes_format():
    img = new_image(RenderConfig(width=17, height=23))
    data = ppm_bytes(img)
    assert data.startswith(b"P6\n17 23\n255\n")
    assert len(data) == len(b"P6\n17 23\n255\n") + 17 * 23 * 3


def test_render_deterministic_across_runs(tiling3):
    cfg = RenderConfig(width=120, height=90, mode="truncated", max_depth=3)
    st = apply_move(WorldState.identity(), (0.2, 0.1, -0.3))
    one = ppm_bytes(rasterize(build_scene(tiling3, st.world_from_model, cfg), cfg))
    two = ppm_bytes(rasterize(build_scene(tiling3, st.world_from_model, cfg), cfg))
    assert one == two


def test_batch_to_protocol_shapes(tiling2):
    batch = build_scene(tiling2, IDENTITY, RenderConfig(mode="truncated"))
    edges, tris = batch_to_protocol(batch)
    assert len(edges) == batch.edge_count
    assert len(tris) == batch.triangle_count
    e = edges[0]
    assert len(e) == 4 and len(e[0]) == 3 and isinstance(e[2], int)
    t = tris[0]
    assert len(t) == 5 and all(len(t[i]) == 3 for i in range(3))


def test_golden_frame_depth6():
    # frozen at the first correct build after visual inspection: receding
    # cubes shrinking toward the boundary sphere
    tiling = enumerate_tiling(6)
    cfg = RenderConfig(width=400, height=400, mode="cubes", max_depth=6)
    img = rasterize(build_scene(tiling, IDENTITY, cfg), cfg)
    digest = hashlib.sha256(ppm_bytes(img)).hexdigest()
    assert digest == GOLDEN_FRAME_SHA256


GOLDEN_FRAME_SHA256 = "TBD"
