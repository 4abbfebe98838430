"""On-disk container for index files: magic, body, 64-bit checksum trailer.

Every index file is ``magic (4 bytes) + body + blake2b-64(magic + body)``.
The checksum guards against truncated or corrupted writes; a mismatch at
read time raises :class:`CorruptIndex`. Writes go through a temp file and
rename so readers never observe partial files.
"""

from __future__ import annotations

import hashlib
import os
from pathlib import Path

import numpy as np

__all__ = [
    "CorruptIndex",
    "MAGIC",
    "file_digest",
    "pack_u32",
    "pack_u64",
    "read_body",
    "write_body",
]

MAGIC = {
    "lexicon": b"CLEX",
    "ids": b"CIDS",
    "postings": b"CPST",
    "regions": b"CRGN",
}

_DIGEST_SIZE = 8


class CorruptIndex(RuntimeError):
    """Index file failed its checksum or shape validation."""


def _checksum(payload: bytes) -> bytes:
    return hashlib.blake2b(payload, digest_size=_DIGEST_SIZE).digest()


def write_body(path: str | Path, kind: str, body: bytes) -> None:
    path = Path(path)
    magic = MAGIC[kind]
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "wb") as fh:
        fh.write(magic)
        fh.write(body)
        fh.write(_checksum(magic + body))
    os.replace(tmp, path)


def read_body(path: str | Path, kind: str) -> bytes:
    path = Path(path)
    try:
        blob = path.read_bytes()
    except FileNotFoundError:
        raise CorruptIndex(f"missing index file {path}") from None
    magic = MAGIC[kind]
    if len(blob) < len(magic) + _DIGEST_SIZE or not blob.startswith(magic):
        raise CorruptIndex(f"{path}: not a {kind} file")
    body, trailer = blob[: -_DIGEST_SIZE], blob[-_DIGEST_SIZE:]
    if _checksum(body) != trailer:
        raise CorruptIndex(f"{path}: checksum mismatch")
    return body[len(magic):]


def file_digest(path: str | Path) -> str:
    """Hex digest of a whole file, used for the registry-level checksum."""
    h = hashlib.blake2b(digest_size=_DIGEST_SIZE)
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def pack_u32(values) -> bytes:
    return np.asarray(values, dtype="<u4").tobytes()


def pack_u64(values) -> bytes:
    return np.asarray(values, dtype="<u8").tobytes()
