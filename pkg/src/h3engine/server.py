"""Explorer protocol endpoint: WebSocket text frames carrying JSON.

One session at a time.  Every move/rotate/set_mode message is answered
with a fresh scene batch; malformed messages get an error frame and the
session continues.  Session state (world transform, render mode) is
discarded on disconnect.

Client -> server:
    {"type": "hello", "version": "1"}
    {"type": "move", "dr": [dx, dy, dz]}
    {"type": "rotate", "axis": [x, y, z], "angle": a}
    {"type": "set_mode", "mode": "cubes" | "truncated" | "triangles-only"}
Server -> client:
    {"type": "hello_ack", "version": "1", "config": {...}}
    {"type": "batch", "edges": [...], "tris": [...],
     "pose": {"holonomy_angle": theta}}
    {"type": "error", "message": "..."}
"""

import asyncio
import json
import math
import threading
from dataclasses import replace

import numpy as np
from websockets.asyncio.server import serve as ws_serve

from .minkowski import GeometryError
from .nav import WorldState, apply_move, apply_rotation, holonomy_of, recenter
from .scene import MODES, RenderConfig, batch_to_protocol, build_scene

PROTOCOL_VERSION = "1"
MOVE_LIMIT = 0.1


class _Session:
    def __init__(self, tiling, cfg):
        self.tiling = tiling
        self.cfg = cfg
        self.state = WorldState.identity()

    def batch_message(self):
        batch = build_scene(self.tiling, self.state.world_from_model, self.cfg)
        edges, tris = batch_to_protocol(batch)
        hol = holonomy_of(self.state.world_from_model)
        return {"type": "batch", "edges": edges, "tris": tris,
                "pose": {"holonomy_angle": hol.rotation_angle}}

    def handle(self, msg):
        """Returns the reply dict for one decoded client message."""
        kind = msg.get("type")
        if kind == "hello":
            if msg.get("version") != PROTOCOL_VERSION:
                return {"type": "error",
                        "message": "incompatible protocol version"}
            return {"type": "hello_ack", "version": PROTOCOL_VERSION,
                    "config": self.cfg.as_dict()}
        if kind == "move":
            dr = msg.get("dr")
            if (not isinstance(dr, list) or len(dr) != 3
                    or not all(isinstance(c, (int, float)) and math.isfinite(c)
                               for c in dr)):
                return {"type": "error", "message": "malformed move"}
            if math.sqrt(sum(c * c for c in dr)) > MOVE_LIMIT:
                return {"type": "error", "message": "move exceeds per-frame limit"}
            self.state = recenter(apply_move(self.state, np.array(dr, dtype=float)))
            return self.batch_message()
        if kind == "rotate":
            axis = msg.get("axis")
            angle = msg.get("angle")
            if (not isinstance(axis, list) or len(axis) != 3
                    or not isinstance(angle, (int, float))
                    or not math.isfinite(angle)):
                return {"type": "error", "message": "malformed rotate"}
            try:
                self.state = apply_rotation(self.state, np.array(axis, dtype=float),
                                            float(angle))
            except GeometryError as exc:
                return {"type": "error", "message": str(exc)}
            return self.batch_message()
        if kind == "set_mode":
            mode = msg.get("mode")
            if mode not in MODES:
                return {"type": "error", "message": "unknown mode"}
            self.cfg = replace(self.cfg, mode=mode)
            return self.batch_message()
        return {"type": "error", "message": "unknown message type"}


class ExplorerService:
    """Runs the endpoint on its own event loop; usable from tests."""

    def __init__(self, tiling, cfg=None, host="127.0.0.1", port=0):
        self.tiling = tiling
        self.cfg = cfg if cfg is not None else RenderConfig(max_depth=tiling.max_depth)
        self.host = host
        self.port = port
        self._busy = False
        self._loop = None
        self._stop = None
        self._thread = None
        self._started = threading.Event()

    async def _handler(self, websocket):
        if self._busy:
            await websocket.send(json.dumps(
                {"type": "error", "message": "busy: one session at a time"}))
            await websocket.close()
            return
        self._busy = True
        session = _Session(self.tiling, self.cfg)
        try:
            async for raw in websocket:
                try:
                    msg = json.loads(raw)
                    if not isinstance(msg, dict):
                        raise ValueError
                except ValueError:
                    reply = {"type": "error", "message": "malformed message"}
                else:
                    reply = session.handle(msg)
                await websocket.send(json.dumps(reply))
        finally:
            self._busy = False

    async def _main(self):
        async with ws_serve(self._handler, self.host, self.port) as server:
            self.port = server.sockets[0].getsockname()[1]
            self._stop = asyncio.get_running_loop().create_future()
            self._started.set()
            await self._stop

    def start(self):
        def runner():
            self._loop = asyncio.new_event_loop()
            asyncio.set_event_loop(self._loop)
            self._loop.run_until_complete(self._main())
            self._loop.close()

        self._thread = threading.Thread(target=runner, daemon=True)
        self._thread.start()
        if not self._started.wait(timeout=10):
            raise RuntimeError("explorer service failed to start")
        return self

    def stop(self):
        if self._loop and self._stop:
            self._loop.call_soon_threadsafe(
                lambda: self._stop.done() or self._stop.set_result(None))
        if self._thread:
            self._thread.join(timeout=10)

    @property
    def url(self):
        return "ws://%s:%d" % (self.host, self.port)


def run_blocking(tiling, cfg, host, port):
    """CLI entry: serve until interrupted."""
    service = ExplorerService(tiling, cfg, host=host, port=port)
    asyncio.run(service._main())
