"""OSC 1.0 subset codec: int32 / float32 / string arguments, one message per datagram.

Byte layout: NUL-terminated address padded to a 4-byte multiple, then a
type-tag string starting with ',' padded the same way, then big-endian
4-byte ints and floats and NUL-padded strings.  No bundles, no timetags.
"""

import struct
from dataclasses import dataclass, field


class OscError(ValueError):
    """Codec failure; `reason` is a stable diagnostic code."""

    def __init__(self, reason: str, message: str):
        self.reason = reason
        super().__init__(message)


@dataclass(frozen=True)
class ControlMessage:
    """One wire message: an address path plus typed arguments."""

    address: str
    args: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


def _validate_address(address: str):
    if not address.startswith("/"):
        raise OscError("bad_address", f"address must start with '/', got {address!r}")
    if not address.isascii():
        raise OscError("bad_address", f"address must be ASCII, got {address!r}")
    if "\x00" in address:
        raise OscError("bad_address", "address contains NUL")
    if any(not seg for seg in address[1:].split("/")):
        raise OscError("bad_address", f"address has an empty segment: {address!r}")


def _pad_string(data: bytes) -> bytes:
    out = data + b"\x00"
    if len(out) % 4:
        out += b"\x00" * (4 - len(out) % 4)
    return out


def encode(msg: ControlMessage) -> bytes:
    """Byte-exact OSC 1.0 encoding.  Floats are quantized to IEEE-754 single."""
    _validate_address(msg.address)
    tags = ","
    payload = b""
    for arg in msg.args:
        if isinstance(arg, bool):
            raise OscError("bad_type", "bool is not an OSC argument type")
        if isinstance(arg, int):
            if not -(2**31) <= arg < 2**31:
                raise OscError("bad_type", f"int32 out of range: {arg}")
            tags += "i"
            payload += struct.pack(">i", arg)
        elif isinstance(arg, float):
            tags += "f"
            payload += struct.pack(">f", arg)
        elif isinstance(arg, str):
            if not arg.isascii():
                raise OscError("bad_type", f"string must be ASCII: {arg!r}")
            if "\x00" in arg:
                raise OscError("bad_type", "string contains NUL")
            tags += "s"
            payload += _pad_string(arg.encode("ascii"))
        else:
            raise OscError("bad_type", f"unsupported argument type {type(arg).__name__}")
    return _pad_string(msg.address.encode("ascii")) + _pad_string(tags.encode("ascii")) + payload


def _read_string(data: bytes, offset: int):
    end = data.find(b"\x00", offset)
    if end < 0:
        raise OscError("truncated", "unterminated string")
    raw = data[offset:end]
    next_off = end + 1
    next_off += (4 - next_off % 4) % 4
    if next_off > len(data):
        raise OscError("truncated", "string padding runs past packet end")
    if data[end:next_off].strip(b"\x00"):
        raise OscError("bad_padding", "non-NUL bytes in string padding")
    return raw.decode("ascii", errors="replace"), next_off


def decode(data: bytes) -> ControlMessage:
    """Inverse of encode; raises OscError with reasons truncated / bad_address /
    missing_typetag / bad_padding / bad_type."""
    if len(data) == 0:
        raise OscError("truncated", "empty packet")
    if len(data) % 4:
        raise OscError("bad_padding", f"packet length {len(data)} not a multiple of 4")
    address, offset = _read_string(data, 0)
    if not address.startswith("/"):
        raise OscError("bad_address", f"address must start with '/', got {address!r}")
    if offset >= len(data):
        raise OscError("missing_typetag", "packet ends before the type-tag string")
    tags, offset = _read_string(data, offset)
    if not tags.startswith(","):
        raise OscError("missing_typetag", f"type tags must start with ',', got {tags!r}")
    args = []
    for tag in tags[1:]:
        if tag == "i":
            if offset + 4 > len(data):
                raise OscError("truncated", "int32 argument truncated")
            args.append(struct.unpack_from(">i", data, offset)[0])
            offset += 4
        elif tag == "f":
            if offset + 4 > len(data):
                raise OscError("truncated", "float32 argument truncated")
            args.append(struct.unpack_from(">f", data, offset)[0])
            offset += 4
        elif tag == "s":
            value, offset = _read_string(data, offset)
            args.append(value)
        else:
            raise OscError("bad_type", f"unsupported type tag {tag!r}")
    return ControlMessage(address=address, args=tuple(args))


def float32(value: float) -> float:
    """Quantize to the nearest IEEE-754 single, as the wire will."""
    return struct.unpack(">f", struct.pack(">f", value))[0]
