"""Rate-subscription server core, transport-free.

Clients Connect, then request named parameters at chosen report intervals;
tick() drains whatever is due.  All I/O lives elsewhere: callers feed decoded
messages in and send the returned (endpoint, message) pairs themselves.
"""

import json
import logging
from dataclasses import dataclass, field
from typing import Callable, Optional

from .osc import ControlMessage, OscError, float32

log = logging.getLogger(__name__)

PARAM_NAMES = (
    "Amplitude", "Pitch", "Centroid",
    "X", "Y", "Z", "Yaw", "Pitch2", "Roll",
    "BowX", "BowY", "BowZ", "BowYaw", "BowPitch", "BowRoll",
)
PARAM_PREFIX = "/ViolinControl/Param/"
PARAM_ADDRESSES = tuple(PARAM_PREFIX + name for name in PARAM_NAMES)

CONNECT_ADDRESS = "/ViolinControl/Connect"
DISCONNECT_ADDRESS = "/ViolinControl/Disconnect"
ERROR_ADDRESS = "/ViolinControl/Error"
MAP_ADDRESS = "/ViolinControl/Map"
PARAMS_ADDRESS = "/ViolinControl/Params"  # active parameter vector, n floats
INPUT_PREFIX = "/ViolinControl/Input/"

DEFAULT_TICK_MS = 5
TICK_RANGE_MS = (1, 50)


class ParameterStore:
    """Current value of every subscribable parameter, keyed by address."""

    def __init__(self):
        self._values = {addr: 0.0 for addr in PARAM_ADDRESSES}

    def set(self, name: str, value: float):
        addr = name if name.startswith("/") else PARAM_PREFIX + name
        if addr not in self._values:
            raise KeyError(f"unknown parameter {name!r}")
        self._values[addr] = float(value)

    def get(self, name: str) -> float:
        addr = name if name.startswith("/") else PARAM_PREFIX + name
        return self._values[addr]

    def __contains__(self, address: str) -> bool:
        return address in self._values


@dataclass
class Subscription:
    interval_ms: int  # 0 = every tick; never negative
    last_sent: Optional[float] = None  # ms; None = never, report on next tick


@dataclass
class ClientRegistry:
    subscriptions: "dict[str, Subscription]" = field(default_factory=dict)


class ControlServer:
    """Session + subscription state machine.

    handle_message() and tick() must be called from a single owner; they
    return (endpoint, ControlMessage) pairs for the caller to deliver.
    """

    def __init__(self, store: ParameterStore,
                 map_provider: Optional[Callable[[], str]] = None,
                 input_sink: Optional[Callable[[str, tuple], None]] = None):
        self.store = store
        self.map_provider = map_provider
        self.input_sink = input_sink
        self.clients: "dict[object, ClientRegistry]" = {}
        # addresses whose reports carry a whole float vector, not one scalar
        self.vector_providers: "dict[str, Callable[[], tuple]]" = {}

    # -- session ------------------------------------------------------------

    def connect(self, endpoint):
        # idempotent: a repeat Connect keeps existing subscriptions
        self.clients.setdefault(endpoint, ClientRegistry())

    def disconnect(self, endpoint):
        if self.clients.pop(endpoint, None) is None:
            log.info("disconnect from unknown client %r ignored", endpoint)

    # -- requests -----------------------------------------------------------

    def handle_message(self, endpoint, msg: ControlMessage, now_ms: float):
        """Apply one inbound message; returns immediate replies."""
        if msg.address == CONNECT_ADDRESS:
            self.connect(endpoint)
            return []
        if msg.address == DISCONNECT_ADDRESS:
            self.disconnect(endpoint)
            return []
        if msg.address.startswith(INPUT_PREFIX):
            if self.input_sink is not None:
                self.input_sink(msg.address[len(INPUT_PREFIX):], msg.args)
            return []
        if endpoint not in self.clients:
            return [(endpoint, self._error(f"not connected: {msg.address}"))]
        if msg.address == MAP_ADDRESS:
            if self.map_provider is None:
                return [(endpoint, self._error("no map loaded"))]
            return [(endpoint, ControlMessage(MAP_ADDRESS, (self.map_provider(),)))]
        if msg.address in self.store or msg.address in self.vector_providers:
            return self._apply_request(endpoint, msg)
        return [(endpoint, self._error(f"unknown address: {msg.address}"))]

    def _apply_request(self, endpoint, msg: ControlMessage):
        if len(msg.args) != 1 or not isinstance(msg.args[0], int):
            return [(endpoint, self._error(
                f"expected one int interval for {msg.address}"))]
        interval = msg.args[0]
        subs = self.clients[endpoint].subscriptions
        if interval < 0:
            subs.pop(msg.address, None)  # halt; absent is fine
            return []
        existing = subs.get(msg.address)
        if existing is not None and existing.interval_ms == interval:
            return []  # idempotent re-request keeps the phase
        subs[msg.address] = Subscription(interval_ms=interval)
        return []

    # -- reporting ----------------------------------------------------------

    def tick(self, now_ms: float):
        """Emit one report per due subscription; last_sent := now."""
        out = []
        for endpoint, registry in self.clients.items():
            for address, sub in registry.subscriptions.items():
                due = (sub.last_sent is None or sub.interval_ms == 0
                       or now_ms - sub.last_sent >= sub.interval_ms)
                if due:
                    provider = self.vector_providers.get(address)
                    if provider is not None:
                        args = tuple(float32(v) for v in provider())
                    else:
                        args = (float32(self.store.get(address)),)
                    out.append((endpoint, ControlMessage(address, args)))
                    sub.last_sent = now_ms
        return out

    def _error(self, reason: str) -> ControlMessage:
        return ControlMessage(ERROR_ADDRESS, (reason,))


# -- JSON bridge codec: same address/args semantics as the binary wire ------

def message_to_json(msg: ControlMessage) -> str:
    return json.dumps({"address": msg.address, "args": list(msg.args)})


def message_from_json(line: str) -> ControlMessage:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise OscError("bad_json", f"bridge message is not JSON: {exc}") from exc
    if not isinstance(obj, dict) or not isinstance(obj.get("address"), str):
        raise OscError("bad_json", "bridge message needs an 'address' string")
    args = obj.get("args", [])
    if not isinstance(args, list):
        raise OscError("bad_json", "'args' must be a list")
    for a in args:
        if isinstance(a, bool) or not isinstance(a, (int, float, str)):
            raise OscError("bad_type", f"unsupported bridge arg {a!r}")
    return ControlMessage(obj["address"], tuple(args))
