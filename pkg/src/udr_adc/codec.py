"""Bit-exact container for converter output.

Layout (all little endian)::

    magic        4 bytes  b"UADC"
    version      u16      1 = bipolar fold, 2 = unipolar fold (same layout)
    total_bits   u16      n, bits per sample including the two reset bits
    v_ref        f64
    sample_rate  f64
    sample_count u64
    records      sample_count * ceil(n / 8) bytes

Each record is an unsigned little-endian word: bits ``[n-3 .. 0]`` hold the
quantizer code, bits ``[n-1 .. n-2]`` hold ``R1R0`` and any padding above
bit ``n-1`` is zero.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, CorruptionError, FormatError, LengthError
from .frontend import AdcConfig, ResetCode

__all__ = ["MAGIC", "HEADER", "StreamHeader", "ModuloStream", "pack", "unpack", "record_bytes"]

MAGIC = b"UADC"
HEADER = struct.Struct("<4sHHddQ")
VERSION_BIPOLAR = 1
VERSION_UNIPOLAR = 2
MAX_BITS = 64
_VALID_RESETS = np.array([r.value for r in ResetCode], dtype=np.uint8)


def record_bytes(total_bits):
    return -(-total_bits // 8)


@dataclass(frozen=True)
class StreamHeader:
    total_bits: int
    v_ref: float
    sample_rate: float
    sample_count: int
    unipolar: bool = False

    def __post_init__(self):
        if not 3 <= self.total_bits <= MAX_BITS:
            raise ConfigError(f"total_bits must be in [3, {MAX_BITS}], got {self.total_bits}")
        if not (0 < self.v_ref < math.inf and 0 < self.sample_rate < math.inf):
            raise ConfigError("v_ref and sample_rate must be positive and finite")
        if self.sample_count < 0:
            raise ConfigError("sample_count must be non-negative")

    @property
    def version(self):
        return VERSION_UNIPOLAR if self.unipolar else VERSION_BIPOLAR

    @property
    def quant_bits(self):
        return self.total_bits - 2

    def config(self, **overrides) -> AdcConfig:
        return AdcConfig(
            v_ref=self.v_ref, total_bits=self.total_bits, unipolar=self.unipolar, **overrides
        )


@dataclass(frozen=True, eq=False)
class ModuloStream:
    """Per-sample ``(reset, code)`` records plus the header describing them.

    ``resets`` holds raw ``R1R0`` patterns (``uint8``), ``codes`` the
    quantizer codes (``int64``).
    """

    header: StreamHeader
    resets: np.ndarray
    codes: np.ndarray

    def __post_init__(self):
        resets = np.asarray(self.resets, dtype=np.uint8)
        codes = np.asarray(self.codes, dtype=np.int64)
        if resets.shape != codes.shape or resets.ndim != 1:
            raise ConfigError("resets and codes must be 1-D arrays of equal length")
        if resets.size != self.header.sample_count:
            raise ConfigError(
                f"header declares {self.header.sample_count} samples, got {resets.size}"
            )
        bad = np.flatnonzero(~np.isin(resets, _VALID_RESETS))
        if bad.size:
            raise CorruptionError(f"invalid reset bits {resets[bad[0]]:02b}", index=int(bad[0]))
        bad = np.flatnonzero((codes < 0) | (codes >= 2**self.header.quant_bits))
        if bad.size:
            raise ConfigError(f"code {codes[bad[0]]} at record {bad[0]} does not fit")
        resets.setflags(write=False)
        codes.setflags(write=False)
        object.__setattr__(self, "resets", resets)
        object.__setattr__(self, "codes", codes)

    @classmethod
    def from_records(cls, config: AdcConfig, sample_rate, resets, codes):
        if not isinstance(resets, np.ndarray):
            resets = np.array([int(r) for r in resets], dtype=np.uint8)
        header = StreamHeader(
            config.total_bits, config.v_ref, float(sample_rate), int(np.size(codes)), config.unipolar
        )
        return cls(header, resets, codes)

    def __len__(self):
        return self.codes.size

    def reset_codes(self):
        return [ResetCode(int(r)) for r in self.resets]

    def __eq__(self, other):
        if not isinstance(other, ModuloStream):
            return NotImplemented
        return (
            self.header == other.header
            and np.array_equal(self.resets, other.resets)
            and np.array_equal(self.codes, other.codes)
        )


def pack(stream: ModuloStream) -> bytes:
    h = stream.header
    head = HEADER.pack(MAGIC, h.version, h.total_bits, h.v_ref, h.sample_rate, h.sample_count)
    words = stream.codes.astype(np.uint64) | (
        stream.resets.astype(np.uint64) << np.uint64(h.quant_bits)
    )
    width = record_bytes(h.total_bits)
    payload = words.astype("<u8").view(np.uint8).reshape(-1, 8)[:, :width]
    return head + payload.tobytes()


def unpack(data: bytes) -> ModuloStream:
    data = bytes(data)
    if len(data) < len(MAGIC) and MAGIC.startswith(data):
        raise LengthError(f"truncated header: {len(data)} bytes")
    if data[: len(MAGIC)] != MAGIC:
        raise FormatError(f"bad magic {data[:4]!r}")
    if len(data) < HEADER.size:
        raise LengthError(f"truncated header: {len(data)} of {HEADER.size} bytes")
    magic, version, total_bits, v_ref, rate, count = HEADER.unpack_from(data)
    if version not in (VERSION_BIPOLAR, VERSION_UNIPOLAR):
        raise FormatError(f"unsupported version {version}")
    if not 3 <= total_bits <= MAX_BITS:
        raise FormatError(f"unsupported bits per sample {total_bits}")
    try:
        header = StreamHeader(total_bits, v_ref, rate, count, version == VERSION_UNIPOLAR)
    except ConfigError as exc:
        raise FormatError(str(exc)) from None

    width = record_bytes(total_bits)
    expected = count * width
    got = len(data) - HEADER.size
    if got < expected:
        raise LengthError(f"truncated payload: {got} of {expected} bytes")
    if got > expected:
        raise LengthError(f"{got - expected} trailing bytes after {count} records")

    raw = np.frombuffer(data, dtype=np.uint8, offset=HEADER.size).reshape(count, width)
    padded = np.zeros((count, 8), dtype=np.uint8)
    padded[:, :width] = raw
    words = padded.view("<u8").reshape(count)
    qb = np.uint64(header.quant_bits)
    if total_bits < MAX_BITS:
        pad = np.flatnonzero(words >> np.uint64(total_bits))
        if pad.size:
            raise CorruptionError("non-zero padding bits", index=int(pad[0]))
    resets = ((words >> qb) & np.uint64(0b11)).astype(np.uint8)
    bad = np.flatnonzero(resets == 0b10)
    if bad.size:
        raise CorruptionError("reset pattern 10 is never emitted", index=int(bad[0]))
    codes = (words & ((np.uint64(1) << qb) - np.uint64(1))).astype(np.int64)
    return ModuloStream(header, resets, codes)
