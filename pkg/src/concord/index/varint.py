"""Variable-length integer coding for delta-compressed position lists.

Unsigned LEB128: seven payload bits per byte, high bit set on every byte
except the last. Ascending position lists are stored as gaps (first value
absolute, then successive differences), which keeps most encoded bytes in
the single-byte range for frequent values.
"""

from __future__ import annotations

from typing import Iterable, Sequence

__all__ = ["decode_deltas", "decode_uints", "encode_deltas", "encode_uint"]


def encode_uint(value: int, out: bytearray) -> None:
    if value < 0:
        raise ValueError("varint values must be non-negative")
    while value >= 0x80:
        out.append((value & 0x7F) | 0x80)
        value >>= 7
    out.append(value)


def encode_deltas(positions: Sequence[int] | Iterable[int]) -> bytes:
    """Delta-encode a strictly ascending position list."""
    out = bytearray()
    prev = None
    for pos in positions:
        if prev is None:
            encode_uint(pos, out)
        else:
            gap = pos - prev
            if gap <= 0:
                raise ValueError("positions must be strictly ascending")
            encode_uint(gap, out)
        prev = pos
    return bytes(out)


def decode_uints(buf: bytes | memoryview, count: int, offset: int = 0) -> tuple[list[int], int]:
    """Decode ``count`` varints starting at ``offset``; returns (values, end offset)."""
    values = []
    i = offset
    for _ in range(count):
        shift = 0
        value = 0
        while True:
            byte = buf[i]
            i += 1
            value |= (byte & 0x7F) << shift
            if byte < 0x80:
                break
            shift += 7
        values.append(value)
    return values, i


def decode_deltas(buf: bytes | memoryview, count: int, offset: int = 0) -> list[int]:
    """Inverse of :func:`encode_deltas` for a list of known length."""
    gaps, _ = decode_uints(buf, count, offset)
    positions = []
    total = 0
    for k, gap in enumerate(gaps):
        total = gap if k == 0 else total + gap
        positions.append(total)
    return positions
