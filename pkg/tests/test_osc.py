import struct

import pytest
from hypothesis import given, strategies as st

from resopad.osc import ControlMessage, OscError, decode, encode, float32


def test_subscription_packet_byte_exact():
    # 24-byte padded address + ",i\0\0" + big-endian 100
    msg = ControlMessage("/ViolinControl/Param/Z", (100,))
    data = encode(msg)
    assert len(data) == 32
    expected = (b"/ViolinControl/Param/Z\x00\x00" + b",i\x00\x00" +
                b"\x00\x00\x00\x64")
    assert data == expected


def test_reply_float_bytes():
    data = encode(ControlMessage("/ViolinControl/Param/Z", (float(0.3),)))
    assert data[-4:] == bytes.fromhex("3E99999A".lower())


def test_minimal_message():
    assert encode(ControlMessage("/a")) == b"/a\x00\x00,\x00\x00\x00"


def test_string_argument_padding():
    data = encode(ControlMessage("/s", ("abc",)))
    assert data == b"/s\x00\x00,s\x00\x00abc\x00"
    assert decode(data).args == ("abc",)


ADDRESS_SEGMENT = st.text(
    alphabet=st.characters(min_codepoint=33, max_codepoint=126,
                           exclude_characters="/#*,?[]{}"),
    min_size=1, max_size=8)
ADDRESSES = st.lists(ADDRESS_SEGMENT, min_size=1, max_size=4).map(
    lambda segs: "/" + "/".join(segs))
ARGS = st.lists(
    st.one_of(
        st.integers(min_value=-(2**31), max_value=2**31 - 1),
        st.floats(width=32, allow_nan=False, allow_infinity=False),
        st.text(alphabet=st.characters(min_codepoint=32, max_codepoint=126),
                max_size=12),
    ),
    max_size=6)


@given(ADDRESSES, ARGS)
def test_roundtrip_identity(address, args):
    msg = ControlMessage(address, tuple(args))
    data = encode(msg)
    assert len(data) % 4 == 0
    back = decode(data)
    assert back.address == msg.address
    assert len(back.args) == len(msg.args)
    for got, want in zip(back.args, msg.args):
        if isinstance(want, float):
            assert got == float32(want)
        else:
            assert got == want


def test_thousand_randomized_roundtrips():
    import random

    rnd = random.Random(99)
    for _ in range(1000):
        address = "/" + "/".join(
            "".join(rnd.choice("abcXYZ019_-") for _ in range(rnd.randint(1, 6)))
            for _ in range(rnd.randint(1, 3)))
        args = []
        for _ in range(rnd.randint(0, 5)):
            kind = rnd.randint(0, 2)
            if kind == 0:
                args.append(rnd.randint(-(2**31), 2**31 - 1))
            elif kind == 1:
                args.append(float32(rnd.uniform(-1e6, 1e6)))
            else:
                args.append("".join(rnd.choice("abc def") for _ in range(rnd.randint(0, 8))))
        msg = ControlMessage(address, tuple(args))
        data = encode(msg)
        assert len(data) % 4 == 0
        assert decode(data) == msg


def test_decode_empty_is_truncated():
    with pytest.raises(OscError) as err:
        decode(b"")
    assert err.value.reason == "truncated"


def test_decode_bad_address():
    with pytest.raises(OscError) as err:
        decode(b"abcd\x00\x00\x00\x00,\x00\x00\x00")
    assert err.value.reason == "bad_address"


def test_decode_missing_typetag():
    with pytest.raises(OscError) as err:
        decode(b"/ab\x00")
    assert err.value.reason == "missing_typetag"
    # present but not starting with ','
    with pytest.raises(OscError) as err:
        decode(b"/ab\x00i\x00\x00\x00")
    assert err.value.reason == "missing_typetag"


def test_decode_truncated_argument():
    data = encode(ControlMessage("/a", (7,)))
    with pytest.raises(OscError) as err:
        decode(data[:-4])
    assert err.value.reason == "truncated"


def test_decode_bad_length_padding():
    with pytest.raises(OscError) as err:
        decode(b"/a\x00\x00,\x00\x00")
    assert err.value.reason == "bad_padding"


def test_encode_rejects_unsupported_types():
    with pytest.raises(OscError):
        encode(ControlMessage("/a", (b"bytes",)))
    with pytest.raises(OscError):
        encode(ControlMessage("/a", (True,)))
    with pytest.raises(OscError):
        encode(ControlMessage("/a", (2**31,)))
    with pytest.raises(OscError):
        encode(ControlMessage("no-slash", ()))


def test_float32_quantization():
    assert struct.pack(">f", float32(0.3)) == struct.pack(">f", 0.3)
    assert float32(0.5) == 0.5
