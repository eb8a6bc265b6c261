import struct

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lossyhom.errors import DomainError, ParseError
from lossyhom.streams import (
    HEADER,
    TimestampStream,
    encode_binary,
    encode_csv,
    parse_stream,
    read_streams,
    write_streams,
)


def pair(a, b, clock=1e8):
    return {"A": TimestampStream("A", a, clock), "B": TimestampStream("B", b, clock)}


def test_csv_example():
    s = parse_stream("A,100\nB,103\n")
    assert s["A"].ticks.tolist() == [100]
    assert s["B"].ticks.tolist() == [103]
    assert s["A"].clock_frequency == 1e8


def test_csv_header_and_blank_lines():
    s = parse_stream("channel,tick\n\nA,1\nA,5\nB,2\n")
    assert s["A"].ticks.tolist() == [1, 5]
    assert s["B"].ticks.tolist() == [2]


def test_csv_decreasing_ticks_named():
    with pytest.raises(ParseError) as err:
        parse_stream("A,100\nB,3\nA,99\n")
    assert err.value.location == "line 3"
    assert "99" in str(err.value)


@pytest.mark.parametrize(
    "text, where",
    [
        ("A,1\nC,2\n", "line 2"),
        ("A,1\nB,-2\n", "line 2"),
        ("A,1\nB\n", "line 2"),
        (f"A,{2**64}\n", "line 1"),
        ("A,5\nA,5\n", "line 2"),
    ],
)
def test_csv_rejects_malformed(text, where):
    with pytest.raises(ParseError) as err:
        parse_stream(text)
    assert err.value.location == where


def test_binary_layout():
    data = encode_binary(pair([7], [3]))
    assert data[:4] == b"HOMT"
    assert data[4] == 1
    assert struct.unpack("<d", data[5:13])[0] == 1e8
    assert data[13] == 1 and struct.unpack("<Q", data[14:22])[0] == 3
    assert data[22] == 0 and struct.unpack("<Q", data[23:31])[0] == 7
    assert len(data) == HEADER.size + 2 * 9


def test_binary_truncated():
    data = encode_binary(pair([1, 2], [3]))
    with pytest.raises(ParseError) as err:
        parse_stream(data[:-4])
    assert err.value.location == f"byte {HEADER.size + 2 * 9}"
    with pytest.raises(ParseError):
        parse_stream(b"HOMT\x01")


def test_binary_bad_channel_and_version():
    data = bytearray(encode_binary(pair([1], [])))
    data[HEADER.size] = 5
    with pytest.raises(ParseError, match="unknown channel byte 5"):
        parse_stream(bytes(data))
    data = bytearray(encode_binary(pair([1], [])))
    data[4] = 9
    with pytest.raises(ParseError, match="version"):
        parse_stream(bytes(data))


def test_binary_non_monotone():
    body = b"".join(struct.pack("<BQ", 0, t) for t in (5, 9, 4))
    with pytest.raises(ParseError, match="record 2"):
        parse_stream(HEADER.pack(b"HOMT", 1, 1e8) + body)


ticks = st.lists(st.integers(0, 2**64 - 1), unique=True, max_size=50).map(sorted)


@settings(max_examples=100, deadline=None)
@given(a=ticks, b=ticks, clock=st.sampled_from([1e8, 2.5e9, 123.0]))
def test_binary_round_trip(a, b, clock):
    streams = pair(a, b, clock)
    data = encode_binary(streams)
    back = parse_stream(data)
    assert back["A"] == streams["A"] and back["B"] == streams["B"]
    assert encode_binary(back) == data


@settings(max_examples=50, deadline=None)
@given(a=ticks, b=ticks)
def test_csv_round_trip(a, b):
    streams = pair(a, b)
    text = encode_csv(streams)
    back = parse_stream(text)
    assert back["A"] == streams["A"] and back["B"] == streams["B"]
    assert encode_csv(back) == text


def test_files(tmp_path):
    streams = pair([1, 2, 3], [2])
    for fmt in ("binary", "csv"):
        path = write_streams(tmp_path / f"s.{fmt}", streams, fmt)
        back = read_streams(path)
        assert back["A"] == streams["A"]
    empty = tmp_path / "empty"
    empty.write_bytes(b"")
    assert len(read_streams(empty)["A"]) == 0


def test_stream_validation():
    with pytest.raises(DomainError):
        TimestampStream("C", [1])
    with pytest.raises(DomainError):
        encode_binary(pair([1], [2]) | {"B": TimestampStream("B", [2], 1e9)})
    assert TimestampStream("A", [1, 2]).is_strictly_increasing()
    assert not TimestampStream("A", [2, 2]).is_strictly_increasing()
