"""FastAPI wiring: REST for offline work, UDP + WebSocket for the live wire.

The live clock is real time; all protocol state lives in the sans-io
LiveEngine, so the endpoints only move messages.
"""

import asyncio
import json
import logging
import time
import warnings
from contextlib import asynccontextmanager
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, HTTPException, WebSocket, WebSocketDisconnect
from fastapi.responses import RedirectResponse
from fastapi.staticfiles import StaticFiles

from .. import osc
from ..audiofiles import read_wav
from ..config import EngineConfig
from ..engine import render_offline, validate_files
from ..live import LiveEngine
from ..osc import ControlMessage, OscError
from ..protocol import DISCONNECT_ADDRESS, ERROR_ADDRESS, message_from_json, message_to_json
from ..resonance import load_model
from ..simplex import load_map
from ..trajectory import load_trajectory
from .models import (RenderRequest, RenderResponse, StatusResponse,
                     ValidateRequest, ValidateResponse)

log = logging.getLogger(__name__)


def build_live_engine(config: EngineConfig) -> Optional[LiveEngine]:
    """A live engine needs a model and a map; everything else is optional."""
    if not config.model_path or not config.map_path:
        return None
    model = load_model(config.model_path)
    mapping = load_map(config.map_path)
    trajectory = (load_trajectory(config.trajectory_path, mode=config.trajectory_mode)
                  if config.trajectory_path else None)
    audio = None
    if config.audio_path:
        rate, audio = read_wav(config.audio_path)
        if rate != config.sample_rate:
            warnings.warn(f"audio file rate {rate} overrides configured "
                          f"sample_rate {config.sample_rate}", RuntimeWarning)
            config.sample_rate = float(rate)
    return LiveEngine(model, mapping, config, trajectory=trajectory, audio=audio)


class _OscDatagramProtocol(asyncio.DatagramProtocol):
    def __init__(self, app: FastAPI):
        self.app = app
        self.transport = None

    def connection_made(self, transport):
        self.transport = transport

    def datagram_received(self, data, addr):
        state = self.app.state
        endpoint = ("udp", addr)
        if endpoint not in state.senders:
            state.senders[endpoint] = self._sender_for(addr)
        try:
            msg = osc.decode(data)
        except OscError as exc:
            reply = ControlMessage(ERROR_ADDRESS, (f"{exc.reason}: {exc}",))
            self.transport.sendto(osc.encode(reply), addr)
            return
        now = state.clock()
        for target, reply in state.engine.handle_message(endpoint, msg, now):
            if target[0] == "udp":
                self.transport.sendto(osc.encode(reply), target[1])
        if msg.address == DISCONNECT_ADDRESS:
            state.senders.pop(endpoint, None)

    def _sender_for(self, addr):
        async def send(msg: ControlMessage):
            self.transport.sendto(osc.encode(msg), addr)
        return send


async def _tick_loop(app: FastAPI):
    state = app.state
    period = state.config.control_tick_ms / 1000.0
    while True:
        await asyncio.sleep(period)
        now = state.clock()
        state.engine.advance_to(now)
        for endpoint, msg in state.engine.control_tick(now):
            sender = state.senders.get(endpoint)
            if sender is not None:
                try:
                    await sender(msg)
                except Exception:
                    state.senders.pop(endpoint, None)


def create_app(config: Optional[EngineConfig] = None,
               ui_dir: Optional[str] = None) -> FastAPI:
    config = config or EngineConfig()
    engine = build_live_engine(config)

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        t0 = time.monotonic()
        app.state.clock = lambda: (time.monotonic() - t0) * 1000.0
        app.state.senders = {}
        transport = None
        tick_task = None
        if engine is not None:
            if config.osc_port:
                loop = asyncio.get_running_loop()
                transport, _ = await loop.create_datagram_endpoint(
                    lambda: _OscDatagramProtocol(app),
                    local_addr=(config.host, config.osc_port))
            tick_task = asyncio.create_task(_tick_loop(app))
        try:
            yield
        finally:
            if tick_task is not None:
                tick_task.cancel()
                try:
                    await tick_task
                except asyncio.CancelledError:
                    pass
            if transport is not None:
                transport.close()

    app = FastAPI(title="resopad", lifespan=lifespan)
    app.state.config = config
    app.state.engine = engine

    @app.get("/status", response_model=StatusResponse)
    def status() -> StatusResponse:
        running = engine is not None
        return StatusResponse(
            running=running,
            engine_time_s=engine.core.time if running else 0.0,
            clients=len(engine.server.clients) if running else 0,
            model_name=engine.core.model.name if running else None,
            resonance_count=len(engine.core.model.resonances) if running else None,
            sample_rate=config.sample_rate,
            block_size=config.block_size,
            control_tick_ms=config.control_tick_ms,
            osc_port=config.osc_port,
            bridge_port=config.bridge_port,
        )

    @app.get("/map")
    def get_map() -> dict:
        if engine is None:
            raise HTTPException(status_code=404, detail="no map loaded")
        return json.loads(engine.map_json())

    @app.post("/render", response_model=RenderResponse)
    def render(req: RenderRequest) -> RenderResponse:
        run_config = EngineConfig(block_size=req.block_size, seed=req.seed,
                                  noise_mix=req.noise_mix,
                                  trajectory_mode=req.trajectory_mode)
        try:
            stats = render_offline(req.input_path, req.trajectory_path,
                                   req.model_path, req.map_path, req.output_path,
                                   config=run_config, log_path=req.log_path)
        except (ValueError, OSError) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return RenderResponse(**stats)

    @app.post("/validate", response_model=ValidateResponse)
    def validate(req: ValidateRequest) -> ValidateResponse:
        return ValidateResponse(**validate_files(req.model_path, req.map_path,
                                                 req.min_bandwidth_hz))

    @app.websocket("/bridge")
    async def bridge(ws: WebSocket):
        if engine is None:
            await ws.close(code=1011, reason="no live engine")
            return
        await ws.accept()
        endpoint = ("ws", id(ws))

        async def sender(msg: ControlMessage):
            await ws.send_text(message_to_json(msg))

        app.state.senders[endpoint] = sender
        try:
            while True:
                line = await ws.receive_text()
                try:
                    msg = message_from_json(line)
                except OscError as exc:
                    await sender(ControlMessage(ERROR_ADDRESS,
                                                (f"{exc.reason}: {exc}",)))
                    continue
                now = app.state.clock()
                for target, reply in engine.handle_message(endpoint, msg, now):
                    target_sender = app.state.senders.get(target)
                    if target_sender is not None:
                        await target_sender(reply)
        except WebSocketDisconnect:
            pass
        finally:
            app.state.senders.pop(endpoint, None)
            engine.server.disconnect(endpoint)

    if ui_dir and Path(ui_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

        @app.get("/")
        def index():
            return RedirectResponse(url="/ui/")

    return app
