"""Detector click streams and their on-disk formats.

Two encodings are supported.

CSV
    One record per line, ``CHANNEL,TICK`` with ``CHANNEL`` in ``{A, B}`` and
    ``TICK`` an unsigned decimal integer. A single header line is allowed.

Binary
    ``b"HOMT"``, one version byte (``1``), the clock frequency as a
    little-endian float64, then 9-byte records: channel byte (0 = A, 1 = B)
    followed by the tick as a little-endian uint64.

Ticks must be strictly increasing within each channel.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DomainError, ParseError

CHANNELS = ("A", "B")
MAGIC = b"HOMT"
VERSION = 1
HEADER = struct.Struct("<4sBd")
RECORD_DTYPE = np.dtype([("channel", "u1"), ("tick", "<u8")])
DEFAULT_CLOCK = 1e8
_UINT64_MAX = 2**64 - 1


@dataclass(eq=False)
class TimestampStream:
    channel: str
    ticks: np.ndarray
    clock_frequency: float = DEFAULT_CLOCK
    duration: float | None = None  # seconds, if known

    def __post_init__(self):
        if self.channel not in CHANNELS:
            raise DomainError(f"unknown channel {self.channel!r}")
        self.ticks = np.asarray(self.ticks, dtype=np.uint64).ravel()
        if self.clock_frequency <= 0:
            raise DomainError("clock_frequency must be positive")

    def __len__(self):
        return len(self.ticks)

    def __eq__(self, other):
        if not isinstance(other, TimestampStream):
            return NotImplemented
        return (
            self.channel == other.channel
            and self.clock_frequency == other.clock_frequency
            and np.array_equal(self.ticks, other.ticks)
        )

    def is_strictly_increasing(self):
        return bool(np.all(self.ticks[1:] > self.ticks[:-1]))

    def times(self):
        """Tick times in seconds."""
        return self.ticks.astype(float) / self.clock_frequency


def _empty_pair(clock):
    return {ch: TimestampStream(ch, np.empty(0, np.uint64), clock) for ch in CHANNELS}


def encode_binary(streams) -> bytes:
    a, b = _as_pair(streams)
    ticks = np.concatenate([a.ticks, b.ticks])
    chans = np.concatenate([np.zeros(len(a), "u1"), np.ones(len(b), "u1")])
    order = np.lexsort((chans, ticks))
    rec = np.empty(len(ticks), RECORD_DTYPE)
    rec["channel"] = chans[order]
    rec["tick"] = ticks[order]
    return HEADER.pack(MAGIC, VERSION, float(a.clock_frequency)) + rec.tobytes()


def encode_csv(streams) -> str:
    a, b = _as_pair(streams)
    ticks = np.concatenate([a.ticks, b.ticks])
    chans = np.concatenate([np.zeros(len(a), "u1"), np.ones(len(b), "u1")])
    order = np.lexsort((chans, ticks))
    lines = [f"{CHANNELS[c]},{int(t)}" for c, t in zip(chans[order], ticks[order])]
    return "".join(line + "\n" for line in lines)


def _as_pair(streams):
    if isinstance(streams, dict):
        a, b = streams["A"], streams["B"]
    else:
        a, b = streams
    if a.channel != "A" or b.channel != "B":
        raise DomainError("expected streams for channels A and B")
    if a.clock_frequency != b.clock_frequency:
        raise DomainError("streams use different clock frequencies")
    return a, b


def parse_stream(data, clock_frequency=DEFAULT_CLOCK) -> dict[str, TimestampStream]:
    """Parse CSV text or binary bytes into per-channel streams.

    ``clock_frequency`` applies to CSV input only; binary files carry their own.
    """
    if isinstance(data, (bytes, bytearray, memoryview)):
        data = bytes(data)
        if data[:4] == MAGIC:
            return _parse_binary(data)
        try:
            data = data.decode("ascii")
        except UnicodeDecodeError as exc:
            raise ParseError("not a HOMT binary file and not ASCII text", f"byte {exc.start}")
    return _parse_csv(data, clock_frequency)


def _parse_csv(text, clock):
    ticks = {"A": [], "B": []}
    seen_record = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        fields = [f.strip() for f in line.split(",")]
        if len(fields) != 2:
            raise ParseError(f"expected CHANNEL,TICK, got {raw!r}", f"line {lineno}")
        chan, tick = fields
        if not seen_record and not tick.isdigit() and chan.upper() not in CHANNELS:
            seen_record = True  # header line
            continue
        seen_record = True
        if chan not in CHANNELS:
            raise ParseError(f"unknown channel tag {chan!r}", f"line {lineno}")
        if not tick.isdigit():
            raise ParseError(f"tick is not an unsigned integer: {tick!r}", f"line {lineno}")
        value = int(tick)
        if value > _UINT64_MAX:
            raise ParseError(f"tick {value} does not fit in 64 bits", f"line {lineno}")
        prev = ticks[chan]
        if prev and value <= prev[-1][0]:
            raise ParseError(
                f"channel {chan} tick {value} not after previous tick {prev[-1][0]} "
                f"(line {prev[-1][1]})",
                f"line {lineno}",
            )
        prev.append((value, lineno))
    out = {}
    for ch in CHANNELS:
        arr = np.array([v for v, _ in ticks[ch]], dtype=np.uint64)
        out[ch] = TimestampStream(ch, arr, clock)
    return out


def _parse_binary(data):
    if len(data) < HEADER.size:
        raise ParseError("truncated header", f"byte {len(data)}")
    magic, version, clock = HEADER.unpack_from(data)
    if version != VERSION:
        raise ParseError(f"unsupported version {version}", "byte 4")
    if not clock > 0:
        raise ParseError(f"invalid clock frequency {clock}", "byte 5")
    body = data[HEADER.size:]
    n, rest = divmod(len(body), RECORD_DTYPE.itemsize)
    if rest:
        offset = HEADER.size + n * RECORD_DTYPE.itemsize
        raise ParseError(f"truncated record {n} ({rest} of 9 bytes)", f"byte {offset}")
    rec = np.frombuffer(body, RECORD_DTYPE, count=n)
    bad = np.flatnonzero(rec["channel"] > 1)
    if bad.size:
        k = int(bad[0])
        raise ParseError(
            f"unknown channel byte {rec['channel'][k]} in record {k}",
            f"byte {HEADER.size + k * RECORD_DTYPE.itemsize}",
        )
    out = {}
    for code, ch in enumerate(CHANNELS):
        idx = np.flatnonzero(rec["channel"] == code)
        t = rec["tick"][idx].astype(np.uint64)
        bad = np.flatnonzero(t[1:] <= t[:-1])
        if bad.size:
            k = int(idx[bad[0] + 1])
            raise ParseError(
                f"channel {ch} tick {int(rec['tick'][k])} not after previous tick in record {k}",
                f"byte {HEADER.size + k * RECORD_DTYPE.itemsize}",
            )
        out[ch] = TimestampStream(ch, t, clock)
    return out


def read_streams(path, clock_frequency=DEFAULT_CLOCK):
    """Read a stream file; the format is detected from its first bytes."""
    data = Path(path).read_bytes()
    if not data:
        return _empty_pair(clock_frequency)
    return parse_stream(data, clock_frequency)


def write_streams(path, streams, fmt="binary"):
    path = Path(path)
    if fmt == "binary":
        path.write_bytes(encode_binary(streams))
    elif fmt == "csv":
        path.write_text(encode_csv(streams))
    else:
        raise ValueError(f"unknown stream format {fmt!r}")
    return path
