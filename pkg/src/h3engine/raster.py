"""Deterministic software rasterizer: painter's algorithm onto P6 PPM.

Far elements draw first (stable sort on the hyperbolic depth key, batch
order breaking ties), edges step pixel by pixel Bresenham-style, and
triangles fill by scanline with half-open left/top ownership.  Fog blends
each element's color toward the black background once, by
min(1, depth/fog_scale).  Identical input yields bit-identical pixels.
"""

import math

import numpy as np

from .chart import CameraParams
from .scene import RenderConfig, SceneBatch


def new_image(cfg):
    return np.zeros((cfg.height, cfg.width, 3), dtype=np.uint8)


def ppm_bytes(image):
    h, w = image.shape[:2]
    return b"P6\n%d %d\n255\n" % (w, h) + image.tobytes()


def _fogged(color, depth, fog_scale):
    f = min(1.0, depth / fog_scale) if math.isfinite(depth) else 1.0
    keep = 1.0 - f
    return np.array([int(c * keep + 0.5) for c in color], dtype=np.uint8)


def _clip_near(p0, p1, near):
    """Clip a Klein chord to the half-space -z >= near; None if gone."""
    d0, d1 = -p0[2] - near, -p1[2] - near
    if d0 < 0 and d1 < 0:
        return None
    if d0 >= 0 and d1 >= 0:
        return p0, p1
    t = d0 / (d0 - d1)
    mid = p0 + t * (p1 - p0)
    return (mid, p1) if d0 < 0 else (p0, mid)


def _project(p, cam):
    f = cam.focal
    inv = 1.0 / (-p[2])
    return (cam.width / 2.0 + f * p[0] * inv,
            cam.height / 2.0 - f * p[1] * inv)


def _clip_segment_rect(x0, y0, x1, y1, w, h):
    """Liang-Barsky clip to pixel-center bounds; None if outside."""
    t0, t1 = 0.0, 1.0
    dx, dy = x1 - x0, y1 - y0
    for p, q in ((-dx, x0 + 0.5), (dx, w - 0.5 - x0),
                 (-dy, y0 + 0.5), (dy, h - 0.5 - y0)):
        if p == 0.0:
            if q < 0.0:
                return None
            continue
        r = q / p
        if p < 0.0:
            if r > t1:
                return None
            if r > t0:
                t0 = r
        else:
            if r < t0:
                return None
            if r < t1:
                t1 = r
    return (x0 + t0 * dx, y0 + t0 * dy, x0 + t1 * dx, y0 + t1 * dy)


def _draw_line(image, x0, y0, x1, y1, color):
    """Integer Bresenham between rounded, pre-clipped endpoints."""
    ix0, iy0 = int(round(x0)), int(round(y0))
    ix1, iy1 = int(round(x1)), int(round(y1))
    dx = abs(ix1 - ix0)
    dy = -abs(iy1 - iy0)
    sx = 1 if ix0 < ix1 else -1
    sy = 1 if iy0 < iy1 else -1
    err = dx + dy
    h, w = image.shape[:2]
    while True:
        if 0 <= ix0 < w and 0 <= iy0 < h:
            image[iy0, ix0] = color
        if ix0 == ix1 and iy0 == iy1:
            break
        e2 = 2 * err
        if e2 >= dy:
            err += dy
            ix0 += sx
        if e2 <= dx:
            err += dx
            iy0 += sy


def _clip_polygon_near(points, near):
    """Sutherland-Hodgman of a Klein polygon against -z >= near."""
    out = []
    k = len(points)
    for i in range(k):
        a, b = points[i], points[(i + 1) % k]
        da, db = -a[2] - near, -b[2] - near
        if da >= 0:
            out.append(a)
            if db < 0:
                out.append(a + (da / (da - db)) * (b - a))
        elif db >= 0:
            out.append(a + (da / (da - db)) * (b - a))
    return out


def _fill_triangle(image, pts, color):
    """Scanline fill; a pixel is owned when its center lies in the
    half-open span [x_enter, x_exit) of the scanline through its center."""
    h, w = image.shape[:2]
    ys = [p[1] for p in pts]
    y_lo = max(0, int(math.ceil(min(ys) - 0.5)))
    y_hi = min(h - 1, int(math.floor(max(ys) - 0.5)))
    for py in range(y_lo, y_hi + 1):
        yc = py + 0.5
        xs = []
        for i in range(3):
            x0, y0 = pts[i]
            x1, y1 = pts[(i + 1) % 3]
            if y0 == y1:
                continue
            # half-open in y: edge spans [min, max)
            if min(y0, y1) <= yc < max(y0, y1):
                t = (yc - y0) / (y1 - y0)
                xs.append(x0 + t * (x1 - x0))
        if len(xs) < 2:
            continue
        xl, xr = min(xs), max(xs)
        px_lo = max(0, int(math.ceil(xl - 0.5)))
        px_hi = min(w - 1, int(math.ceil(xr - 0.5)) - 1)
        if px_hi >= px_lo:
            image[py, px_lo:px_hi + 1] = color


def rasterize(batch: SceneBatch, cfg: RenderConfig):
    """Paint the batch far-to-near onto a fresh image."""
    image = new_image(cfg)
    cam = CameraParams(width=cfg.width, height=cfg.height, fov=cfg.fov)
    ne, nt = batch.edge_count, batch.triangle_count
    if ne + nt == 0:
        return image

    depth = np.concatenate([batch.edges_depth, batch.tris_depth])
    # stable sort on -depth: far first, batch order breaks ties
    order = np.argsort(-depth, kind="stable")

    for idx in order:
        if idx < ne:
            p0, p1 = batch.edges_k[idx]
            clipped = _clip_near(p0, p1, cam.near)
            if clipped is None:
                continue
            color = _fogged(cfg.palette[batch.edges_color[idx]],
                            batch.edges_depth[idx], cfg.fog_scale)
            a = _project(clipped[0], cam)
            b = _project(clipped[1], cam)
            seg = _clip_segment_rect(a[0], a[1], b[0], b[1], cfg.width, cfg.height)
            if seg is None:
                continue
            _draw_line(image, *seg, color)
        else:
            t = idx - ne
            poly = _clip_polygon_near(list(batch.tris_k[t]), cam.near)
            if len(poly) < 3:
                continue
            color = _fogged(cfg.palette[batch.tris_color[t]],
                            batch.tris_depth[t], cfg.fog_scale)
            pts = [_project(p, cam) for p in poly]
            for k in range(1, len(pts) - 1):
                _fill_triangle(image, (pts[0], pts[k], pts[k + 1]), color)
    return image
