"""Request/response schemas for the HTTP API."""

from typing import List, Optional

from pydantic import BaseModel


class RenderRequest(BaseModel):
    input_path: str
    trajectory_path: str
    model_path: str
    map_path: str
    output_path: str
    log_path: Optional[str] = None
    seed: int = 0
    block_size: int = 256
    noise_mix: float = 0.0
    trajectory_mode: str = "linear"


class RenderResponse(BaseModel):
    samples: int
    blocks: int
    dropped_resonances: int
    clamped_frequencies: int
    input_rms: float
    output_rms: float


class ValidateRequest(BaseModel):
    model_path: str
    map_path: str
    min_bandwidth_hz: float = 5.0


class ValidateResponse(BaseModel):
    ok: bool
    resonance_count: Optional[int] = None
    param_dim: Optional[int] = None
    map_dim: Optional[int] = None
    map_points: Optional[int] = None
    map_triangles: Optional[int] = None
    clamped_bandwidths: Optional[int] = None
    messages: List[str] = []


class StatusResponse(BaseModel):
    running: bool
    engine_time_s: float = 0.0
    clients: int = 0
    model_name: Optional[str] = None
    resonance_count: Optional[int] = None
    sample_rate: float
    block_size: int
    control_tick_ms: int
    osc_port: int
    bridge_port: int
