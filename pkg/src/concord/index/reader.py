"""Read-only access to an encoded corpus.

A :class:`CorpusReader` verifies file checksums on first touch, keeps
lexicons and id streams in memory, and decodes postings lazily. Readers
are safe to share across threads once opened; nothing is ever written
through one.
"""

from __future__ import annotations

import re
import threading
from bisect import bisect_left
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

import numpy as np

from .. import vrt
from .errors import BadPattern, IdOutOfRange, MissingAttribute, PositionOutOfRange, UnknownAttribute
from .files import CorruptIndex, read_body
from .registry import CorpusDescriptor, Registry
from .varint import decode_deltas

__all__ = ["CorpusReader", "Lexicon", "Region", "compile_value_pattern", "pattern_literal"]

_META_CHARS = set(".^$*+?{}[]|()\\")
_BACKREF_RE = re.compile(r"\\[1-9]|\(\?P=")


def pattern_literal(pattern: str) -> str | None:
    """The literal string a pattern denotes, or None if it uses regex syntax."""
    if any(ch in _META_CHARS for ch in pattern):
        return None
    return pattern


def compile_value_pattern(pattern: str, case_insensitive: bool = False) -> re.Pattern:
    """Compile a full-match value pattern, rejecting backreferences."""
    if _BACKREF_RE.search(pattern):
        raise BadPattern(f"backreferences are not supported: {pattern!r}")
    try:
        return re.compile(pattern, re.IGNORECASE if case_insensitive else 0)
    except re.error as exc:
        raise BadPattern(f"bad pattern {pattern!r}: {exc}") from exc


@dataclass(frozen=True)
class Lexicon:
    """Sorted distinct values of one attribute with id and frequency maps."""

    attribute: str
    values: list[str]
    freqs: np.ndarray

    def __len__(self) -> int:
        return len(self.values)

    def id_of(self, value: str) -> int | None:
        i = bisect_left(self.values, value)
        if i < len(self.values) and self.values[i] == value:
            return i
        return None

    def value_of(self, value_id: int) -> str:
        if not 0 <= value_id < len(self.values):
            raise IdOutOfRange(f"{self.attribute} id {value_id} out of range")
        return self.values[value_id]


@dataclass(frozen=True)
class Region:
    start: int
    end: int
    index: int


class _Postings:
    def __init__(self, offsets: np.ndarray, blob: bytes):
        self.offsets = offsets
        self.blob = blob


class CorpusReader:
    def __init__(self, descriptor: CorpusDescriptor):
        self.descriptor = descriptor
        self.name = descriptor.name
        self._dir = Path(descriptor.path)
        self._lock = threading.Lock()
        self._lexicons: dict[str, Lexicon] = {}
        self._ids: dict[str, np.ndarray] = {}
        self._postings: dict[str, _Postings | None] = {}
        self._regions: dict[str, np.ndarray] = {}
        self._records: dict[str, list[str]] = {}
        self._parsed_records: dict[str, list[dict[str, str]]] = {}
        self.size = descriptor.tokens

    @classmethod
    def open(cls, name: str, registry_dir: str | Path) -> "CorpusReader":
        return cls(Registry(registry_dir).load(name))

    # -- attribute inventory -------------------------------------------------

    @property
    def positional_attrs(self) -> tuple[str, ...]:
        return self.descriptor.positional_attrs

    @property
    def structural_attrs(self) -> tuple[str, ...]:
        return self.descriptor.structural_attrs

    def _check_positional(self, attribute: str) -> None:
        if attribute not in self.descriptor.positional_attrs:
            raise UnknownAttribute(
                f"corpus {self.name} has no positional attribute {attribute!r} "
                f"(encoded: {', '.join(self.descriptor.positional_attrs)})"
            )

    def _check_structural(self, attribute: str) -> None:
        if attribute not in self.descriptor.structural_attrs:
            raise UnknownAttribute(
                f"corpus {self.name} has no structural attribute {attribute!r} "
                f"(encoded: {', '.join(self.descriptor.structural_attrs)})"
            )

    # -- lazy loading ---------------------------------------------------------

    def lexicon(self, attribute: str) -> Lexicon:
        self._check_positional(attribute)
        with self._lock:
            lex = self._lexicons.get(attribute)
            if lex is None:
                body = read_body(self._dir / f"{attribute}.lex", "lexicon")
                count = int(np.frombuffer(body[:4], dtype="<u4")[0])
                offsets = np.frombuffer(body[4:4 + 4 * (count + 1)], dtype="<u4")
                freq_start = 4 + 4 * (count + 1)
                freqs = np.frombuffer(body[freq_start:freq_start + 4 * count], dtype="<u4")
                blob = body[freq_start + 4 * count:]
                values = [
                    blob[offsets[i]:offsets[i + 1]].decode("utf-8") for i in range(count)
                ]
                lex = Lexicon(attribute, values, freqs)
                self._lexicons[attribute] = lex
        return lex

    def ids(self, attribute: str) -> np.ndarray:
        self._check_positional(attribute)
        with self._lock:
            stream = self._ids.get(attribute)
            if stream is None:
                body = read_body(self._dir / f"{attribute}.ids", "ids")
                count = int(np.frombuffer(body[:4], dtype="<u4")[0])
                stream = np.frombuffer(body[4:], dtype="<u4")
                if len(stream) != count or count != self.size:
                    raise CorruptIndex(
                        f"{attribute}.ids holds {len(stream)} ids, expected {self.size}"
                    )
                self._ids[attribute] = stream
        return stream

    def _postings_for(self, attribute: str) -> _Postings | None:
        with self._lock:
            if attribute not in self._postings:
                path = self._dir / f"{attribute}.post"
                if not path.exists():
                    self._postings[attribute] = None
                else:
                    body = read_body(path, "postings")
                    count = int(np.frombuffer(body[:4], dtype="<u4")[0])
                    offsets = np.frombuffer(body[4:4 + 8 * (count + 1)], dtype="<u8")
                    blob = body[4 + 8 * (count + 1):]
                    self._postings[attribute] = _Postings(offsets, blob)
            return self._postings[attribute]

    def regions(self, attribute: str) -> np.ndarray:
        """Region spans as an (R, 2) array of inclusive [start, end] pairs."""
        self._check_structural(attribute)
        with self._lock:
            spans = self._regions.get(attribute)
            if spans is None:
                body = read_body(self._dir / f"{attribute}.rng", "regions")
                count = int(np.frombuffer(body[:4], dtype="<u4")[0])
                spans = np.frombuffer(body[4:4 + 8 * count], dtype="<u4").reshape(count, 2)
                rec_off_start = 4 + 8 * count
                rec_offsets = np.frombuffer(
                    body[rec_off_start:rec_off_start + 4 * (count + 1)], dtype="<u4"
                )
                blob = body[rec_off_start + 4 * (count + 1):]
                self._regions[attribute] = spans
                self._records[attribute] = [
                    blob[rec_offsets[i]:rec_offsets[i + 1]].decode("utf-8")
                    for i in range(count)
                ]
            return spans

    # -- queries over the index ----------------------------------------------

    def lookup_ids(self, attribute: str, pattern: str, case_insensitive: bool = False) -> list[int]:
        """Ids whose whole lexicon value matches the pattern (not substring)."""
        lex = self.lexicon(attribute)
        literal = pattern_literal(pattern)
        if literal is not None and not case_insensitive:
            found = lex.id_of(literal)
            return [] if found is None else [found]
        compiled = compile_value_pattern(pattern, case_insensitive)
        fullmatch = compiled.fullmatch
        return [i for i, value in enumerate(lex.values) if fullmatch(value)]

    def positions(self, attribute: str, value_id: int) -> list[int]:
        """Ascending corpus positions where the id stream holds ``value_id``."""
        lex = self.lexicon(attribute)
        if not 0 <= value_id < len(lex):
            raise IdOutOfRange(
                f"{attribute} id {value_id} out of range 0..{len(lex) - 1}"
            )
        postings = self._postings_for(attribute)
        if postings is not None:
            freq = int(lex.freqs[value_id])
            offset = int(postings.offsets[value_id])
            return decode_deltas(postings.blob, freq, offset)
        return np.nonzero(self.ids(attribute) == value_id)[0].tolist()

    def region_of(self, attribute: str, position: int) -> Region | None:
        """The unique region containing ``position``, or None if uncovered."""
        if not 0 <= position < self.size:
            raise PositionOutOfRange(f"position {position} outside 0..{self.size - 1}")
        spans = self.regions(attribute)
        if len(spans) == 0:
            return None
        idx = int(np.searchsorted(spans[:, 0], position, side="right")) - 1
        if idx < 0 or int(spans[idx, 1]) < position:
            return None
        return Region(int(spans[idx, 0]), int(spans[idx, 1]), idx)

    def region_record(self, attribute: str, index: int) -> dict[str, str]:
        """Parsed attributes of one region (for text: id + metadata)."""
        self.regions(attribute)
        with self._lock:
            parsed = self._parsed_records.setdefault(attribute, [])
            while len(parsed) <= index:
                raw = self._records[attribute][len(parsed)]
                parsed.append(vrt.parse_attributes(" " + raw) if raw else {})
        return self._parsed_records[attribute][index]

    def text_id(self, position: int) -> str:
        region = self.region_of("text", position)
        if region is None:
            return ""
        return self.region_record("text", region.index).get("id", "")

    def words(self, start: int, stop: int, attribute: str = "word") -> list[str]:
        """Attribute values for positions start..stop-1."""
        values = self.lexicon(attribute).values
        return [values[i] for i in self.ids(attribute)[start:stop].tolist()]

    # -- decoding back to VRT ---------------------------------------------------

    def decode_vrt_lines(self) -> Iterator[str]:
        """Reconstruct canonical VRT; requires pos, lemma, and s attributes."""
        for attr in ("pos", "lemma"):
            if attr not in self.descriptor.positional_attrs:
                raise MissingAttribute(
                    f"corpus {self.name} was encoded without {attr!r}; cannot decode VRT"
                )
        if "s" not in self.descriptor.structural_attrs:
            raise MissingAttribute(
                f"corpus {self.name} was encoded without 's'; cannot decode VRT"
            )
        words = self.lexicon("word").values
        poses = self.lexicon("pos").values
        lemmas = self.lexicon("lemma").values
        word_ids = self.ids("word")
        pos_ids = self.ids("pos")
        lemma_ids = self.ids("lemma")
        text_spans = self.regions("text")
        s_spans = self.regions("s")
        s_idx = 0
        for t_idx in range(len(text_spans)):
            t_start, t_end = int(text_spans[t_idx, 0]), int(text_spans[t_idx, 1])
            raw = self._records["text"][t_idx]
            yield f"<text {raw}>" if raw else "<text>"
            while s_idx < len(s_spans) and int(s_spans[s_idx, 0]) <= t_end:
                s_start, s_end = int(s_spans[s_idx, 0]), int(s_spans[s_idx, 1])
                yield "<s>"
                for p in range(s_start, s_end + 1):
                    yield f"{words[word_ids[p]]}\t{poses[pos_ids[p]]}\t{lemmas[lemma_ids[p]]}"
                yield "</s>"
                s_idx += 1
            yield "</text>"

    def decode_vrt(self) -> str:
        lines = list(self.decode_vrt_lines())
        if not lines:
            return ""
        return "\n".join(lines) + "\n"
