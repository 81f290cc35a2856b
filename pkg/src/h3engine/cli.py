"""Command-line entry points: tile export, scripted rendering, holonomy
reports, and the explorer service.

Exit codes: 0 success, 1 usage error, 2 validation failure.  Diagnostics
go to stderr; data goes to files or stdout.
"""

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from .minkowski import GeometryError
from .honeycomb import enumerate_tiling
from .nav import (WorldState, apply_move, apply_rotation, parse_script,
                  recenter, run_script, square_loop_script)
from .raster import ppm_bytes, rasterize
from .scene import DEFAULT_HORO_PARAM, MODES, RenderConfig, build_scene
from .tiling_io import SCHEMA_DOC, tiling_json_bytes
from . import server as server_mod


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser():
    parser = _Parser(prog="h3engine", description=__doc__)
    sub = parser.add_subparsers(dest="command", metavar="command")

    tile = sub.add_parser("tile", help="export a tiling as JSON")
    tile.add_argument("--depth", type=int, default=6)
    tile.add_argument("--out", type=Path, required=True)
    tile.add_argument("--schema", action="store_true",
                      help="print the JSON schema to stdout")

    render = sub.add_parser("render", help="render a move script to PPM frames")
    render.add_argument("--script", type=Path, required=True)
    render.add_argument("--size", default="400x400", metavar="WxH")
    render.add_argument("--fov", type=float, default=90.0, metavar="DEG")
    render.add_argument("--mode", choices=MODES, default="cubes")
    render.add_argument("--depth", type=int, default=6)
    render.add_argument("--fog", type=float, default=6.0)
    render.add_argument("--horo", type=float, default=DEFAULT_HORO_PARAM)
    render.add_argument("--no-recenter", action="store_true")
    render.add_argument("--out", type=Path, required=True)

    hol = sub.add_parser("holonomy", help="holonomy of a closed input loop")
    group = hol.add_mutually_exclusive_group(required=True)
    group.add_argument("--square", type=float, metavar="S")
    group.add_argument("--script", type=Path)
    hol.add_argument("--format", choices=("text", "json"), default="text")

    serve = sub.add_parser("serve", help="run the explorer protocol endpoint")
    serve.add_argument("--port", type=int, required=True)
    serve.add_argument("--depth", type=int, default=3)
    serve.add_argument("--host", default="127.0.0.1")

    return parser


def _parse_size(text):
    try:
        w, h = text.lower().split("x")
        return int(w), int(h)
    except ValueError:
        raise UsageError("--size must look like 400x400") from None


def _cmd_tile(args):
    tiling = enumerate_tiling(args.depth)
    data = tiling_json_bytes(tiling)
    args.out.write_bytes(data)
    if args.schema:
        sys.stdout.write(SCHEMA_DOC)
    print("wrote %d cells to %s" % (len(tiling), args.out), file=sys.stderr)
    return 0


def _cmd_render(args):
    width, height = _parse_size(args.size)
    cfg = RenderConfig(width=width, height=height,
                       fov=math.radians(args.fov), mode=args.mode,
                       max_depth=args.depth, fog_scale=args.fog,
                       horo_param=args.horo)
    steps = parse_script(args.script.read_text())
    tiling = enumerate_tiling(cfg.max_depth)
    args.out.mkdir(parents=True, exist_ok=True)
    state = WorldState.identity()
    for i, step in enumerate(steps):
        if step[0] == "move":
            state = apply_move(state, step[1])
        else:
            state = apply_rotation(state, step[1], step[2])
        if not args.no_recenter:
            state = recenter(state)
        image = rasterize(build_scene(tiling, state.world_from_model, cfg), cfg)
        (args.out / ("frame_%05d.ppm" % i)).write_bytes(ppm_bytes(image))
    print("wrote %d frames to %s" % (len(steps), args.out), file=sys.stderr)
    return 0


def _cmd_holonomy(args):
    if args.square is not None:
        steps = square_loop_script(args.square)
    else:
        steps = parse_script(args.script.read_text())
    _, hol = run_script(steps)
    if args.format == "json":
        print(json.dumps({
            "rotation_angle": hol.rotation_angle,
            "axis": [float(c) for c in hol.rotation_axis],
            "translation": hol.translation_magnitude,
        }))
    else:
        print("rotation_angle=%.17g axis=%.17g %.17g %.17g translation=%.17g"
              % (hol.rotation_angle, *hol.rotation_axis,
                 hol.translation_magnitude))
    return 0


def _cmd_serve(args):
    tiling = enumerate_tiling(args.depth)
    cfg = RenderConfig(max_depth=args.depth)
    print("serving on ws://%s:%d" % (args.host, args.port), file=sys.stderr)
    server_mod.run_blocking(tiling, cfg, host=args.host, port=args.port)
    return 0


_COMMANDS = {
    "tile": _cmd_tile,
    "render": _cmd_render,
    "holonomy": _cmd_holonomy,
    "serve": _cmd_serve,
}


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required")
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print("usage error: %s" % exc, file=sys.stderr)
        return 1
    except (GeometryError, ValueError, OSError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
