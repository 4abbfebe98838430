"""Registry of encoded corpora: one text descriptor per corpus.

A descriptor is a UTF-8 ``key: value`` file named after the corpus (an
uppercase identifier, mirroring the convention of naming encoded corpora
in capitals). It records where the binary data lives, which attributes
were encoded, the token count, a format version, and a checksum over the
data files.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from pathlib import Path

from .files import file_digest

__all__ = [
    "CorpusAlreadyRegistered",
    "CorpusDescriptor",
    "CorpusNotFound",
    "FORMAT_VERSION",
    "Registry",
    "normalize_corpus_name",
]

FORMAT_VERSION = 1

_NAME_RE = re.compile(r"[A-Z_][A-Z0-9_]*\Z")


class CorpusNotFound(LookupError):
    """No descriptor for that corpus name (or its data directory is gone)."""


class CorpusAlreadyRegistered(RuntimeError):
    """Descriptor exists and force was not requested."""


def normalize_corpus_name(name: str) -> str:
    """Uppercase and validate a corpus name, e.g. ``novels.v2`` -> ``NOVELS_V2``."""
    candidate = re.sub(r"[^A-Za-z0-9_]", "_", name).upper().strip("_") or "_"
    if not _NAME_RE.match(candidate):
        candidate = "_" + candidate
    if not _NAME_RE.match(candidate):
        raise ValueError(f"cannot derive a corpus name from {name!r}")
    return candidate


@dataclass(frozen=True)
class CorpusDescriptor:
    name: str
    path: Path
    positional_attrs: tuple[str, ...]
    structural_attrs: tuple[str, ...]
    tokens: int
    version: int = FORMAT_VERSION
    checksum: str = ""


def compute_corpus_checksum(data_dir: Path) -> str:
    """Combined digest over all index files, order-independent of creation."""
    h = hashlib.blake2b(digest_size=8)
    for path in sorted(data_dir.iterdir()):
        if path.is_file() and not path.name.endswith(".tmp"):
            h.update(path.name.encode("utf-8"))
            h.update(bytes.fromhex(file_digest(path)))
    return h.hexdigest()


class Registry:
    """Directory of corpus descriptors."""

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)

    def _descriptor_path(self, name: str) -> Path:
        return self.directory / name

    def names(self) -> list[str]:
        if not self.directory.is_dir():
            return []
        return sorted(p.name for p in self.directory.iterdir()
                      if p.is_file() and _NAME_RE.match(p.name))

    def exists(self, name: str) -> bool:
        return self._descriptor_path(name).is_file()

    def load(self, name: str) -> CorpusDescriptor:
        path = self._descriptor_path(name)
        if not path.is_file():
            raise CorpusNotFound(f"corpus {name!r} is not registered in {self.directory}")
        fields: dict[str, str] = {}
        for line in path.read_text(encoding="utf-8").splitlines():
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            key, _, value = line.partition(":")
            fields[key.strip()] = value.strip()
        try:
            descriptor = CorpusDescriptor(
                name=fields["name"],
                path=Path(fields["path"]),
                positional_attrs=tuple(fields["p_attrs"].split()),
                structural_attrs=tuple(fields.get("s_attrs", "").split()),
                tokens=int(fields["tokens"]),
                version=int(fields.get("version", "1")),
                checksum=fields.get("checksum", ""),
            )
        except (KeyError, ValueError) as exc:
            raise CorpusNotFound(f"descriptor for {name!r} is unreadable: {exc}") from exc
        if not descriptor.path.is_dir():
            raise CorpusNotFound(
                f"data directory {descriptor.path} for corpus {name!r} does not exist"
            )
        return descriptor

    def save(self, descriptor: CorpusDescriptor, *, force: bool = False) -> None:
        if not _NAME_RE.match(descriptor.name):
            raise ValueError(f"corpus name {descriptor.name!r} must be an uppercase identifier")
        path = self._descriptor_path(descriptor.name)
        if path.exists() and not force:
            raise CorpusAlreadyRegistered(
                f"corpus {descriptor.name!r} already registered; use force to overwrite"
            )
        self.directory.mkdir(parents=True, exist_ok=True)
        content = (
            "format: concord-corpus\n"
            f"version: {descriptor.version}\n"
            f"name: {descriptor.name}\n"
            f"path: {descriptor.path.resolve()}\n"
            f"tokens: {descriptor.tokens}\n"
            f"p_attrs: {' '.join(descriptor.positional_attrs)}\n"
            f"s_attrs: {' '.join(descriptor.structural_attrs)}\n"
            f"checksum: {descriptor.checksum}\n"
        )
        path.write_text(content, encoding="utf-8")

    def remove(self, name: str) -> None:
        path = self._descriptor_path(name)
        if not path.is_file():
            raise CorpusNotFound(f"corpus {name!r} is not registered in {self.directory}")
        path.unlink()
