"""Corpus encoding: VRT in, per-attribute index files out.

``encode`` streams the VRT once and writes, per positional attribute, a
lexicon (sorted unique values) and an id stream (one 4-byte id per token),
plus region files for the structural attributes and a registry descriptor.
``build_postings`` then inverts each id stream into delta-compressed
position lists so queries can jump straight to occurrences.

The ``word`` layer is always encoded; ``pos``/``lemma`` and ``s`` are
encoded when requested. Text boundaries (with their metadata) are always
kept: concordances and subcorpora need them.
"""

from __future__ import annotations

import shutil
import warnings
from array import array
from pathlib import Path
from typing import IO, Iterable, Union

import numpy as np

from .. import vrt
from ..vrt import SentenceEnd, SentenceStart, TextEnd, TextStart, TokenLine
from .errors import MissingAttribute
from .files import pack_u32, pack_u64, read_body, write_body
from .registry import (
    FORMAT_VERSION,
    CorpusAlreadyRegistered,
    CorpusDescriptor,
    Registry,
    compute_corpus_checksum,
    normalize_corpus_name,
)
from .varint import encode_uint

__all__ = ["POSITIONAL_ATTRS", "STRUCTURAL_ATTRS", "build_postings", "encode"]

POSITIONAL_ATTRS = ("word", "pos", "lemma")
STRUCTURAL_ATTRS = ("text", "s")

Source = Union[str, Path, IO[str], Iterable[str]]


def _offsets_u32(chunks: list[bytes]) -> np.ndarray:
    offsets = np.zeros(len(chunks) + 1, dtype="<u4")
    if chunks:
        offsets[1:] = np.cumsum([len(b) for b in chunks])
    return offsets


class _AttrBuilder:
    """Accumulates one positional attribute: vocabulary + id stream."""

    def __init__(self, name: str):
        self.name = name
        self.vocab: dict[str, int] = {}
        self.freqs: list[int] = []
        self.stream = array("I")

    def add(self, value: str) -> None:
        vocab = self.vocab
        temp_id = vocab.get(value)
        if temp_id is None:
            temp_id = len(vocab)
            vocab[value] = temp_id
            self.freqs.append(1)
        else:
            self.freqs[temp_id] += 1
        self.stream.append(temp_id)

    def finish(self, directory: Path) -> None:
        values = list(self.vocab)
        vocab_size = len(values)
        order = sorted(range(vocab_size), key=values.__getitem__)
        sorted_values = [values[i] for i in order]
        order_np = np.asarray(order, dtype=np.int64)

        old_stream = np.frombuffer(self.stream, dtype="<u4") if len(self.stream) \
            else np.zeros(0, dtype="<u4")
        if vocab_size:
            remap = np.empty(vocab_size, dtype="<u4")
            remap[order_np] = np.arange(vocab_size, dtype="<u4")
            new_stream = remap[old_stream]
            freqs = np.asarray(self.freqs, dtype="<u4")[order_np]
        else:
            new_stream = old_stream
            freqs = np.zeros(0, dtype="<u4")

        encoded = [v.encode("utf-8") for v in sorted_values]
        body = (
            pack_u32([vocab_size])
            + _offsets_u32(encoded).tobytes()
            + freqs.tobytes()
            + b"".join(encoded)
        )
        write_body(directory / f"{self.name}.lex", "lexicon", body)
        write_body(
            directory / f"{self.name}.ids",
            "ids",
            pack_u32([len(new_stream)]) + new_stream.tobytes(),
        )


def _write_regions(directory: Path, name: str, spans: list[tuple[int, int]],
                   records: list[str] | None) -> None:
    flat: list[int] = []
    for start, end in spans:
        flat.append(start)
        flat.append(end)
    if records is None:
        records = [""] * len(spans)
    encoded = [r.encode("utf-8") for r in records]
    body = (
        pack_u32([len(spans)])
        + pack_u32(flat)
        + _offsets_u32(encoded).tobytes()
        + b"".join(encoded)
    )
    write_body(directory / f"{name}.rng", "regions", body)


def encode(
    source: Source,
    *,
    data_dir: str | Path,
    registry_dir: str | Path,
    positional_attrs: Iterable[str] = ("pos", "lemma"),
    structural_attrs: Iterable[str] = ("s",),
    name: str | None = None,
    force: bool = False,
    lenient: bool = False,
) -> str:
    """Encode a VRT source into index files and register the corpus.

    ``source`` may be a path or an open text stream; with a stream,
    ``name`` is required (paths default to their uppercased stem).
    Returns the registered corpus name.
    """
    positional = list(dict.fromkeys(positional_attrs))
    for attr in positional:
        if attr not in POSITIONAL_ATTRS:
            raise MissingAttribute(
                f"unknown positional attribute {attr!r}; VRT provides {POSITIONAL_ATTRS[1:]}"
            )
    structural = list(dict.fromkeys(structural_attrs))
    for attr in structural:
        if attr not in STRUCTURAL_ATTRS:
            raise MissingAttribute(
                f"unknown structural attribute {attr!r}; VRT provides {STRUCTURAL_ATTRS}"
            )

    if isinstance(source, (str, Path)):
        path = Path(source)
        if name is None:
            name = normalize_corpus_name(path.stem)
        stream: IO[str] | None = open(path, "r", encoding="utf-8", newline="")
    else:
        if name is None:
            raise ValueError("name is required when encoding from a stream")
        stream = None
    corpus_name = normalize_corpus_name(name)

    registry = Registry(registry_dir)
    if registry.exists(corpus_name) and not force:
        if stream is not None:
            stream.close()
        raise CorpusAlreadyRegistered(
            f"corpus {corpus_name!r} already registered; use force to overwrite"
        )

    encoded_positional = ["word"] + [a for a in POSITIONAL_ATTRS if a in positional]
    keep_s = "s" in structural
    builders = {attr: _AttrBuilder(attr) for attr in encoded_positional}
    builder_list = [(builders[a], POSITIONAL_ATTRS.index(a)) for a in encoded_positional]

    s_spans: list[tuple[int, int]] = []
    text_spans: list[tuple[int, int]] = []
    text_records: list[str] = []
    position = 0
    sentence_start = 0
    text_start = 0
    pending_text: TextStart | None = None

    events = vrt.iter_events(stream if stream is not None else source, lenient=lenient)
    try:
        for event in events:
            if type(event) is TokenLine:
                row = (event.word, event.pos, event.lemma)
                for builder, column in builder_list:
                    builder.add(row[column])
                position += 1
            elif type(event) is SentenceStart:
                sentence_start = position
            elif type(event) is SentenceEnd:
                if position > sentence_start:
                    s_spans.append((sentence_start, position - 1))
            elif type(event) is TextStart:
                pending_text = event
                text_start = position
            else:  # TextEnd
                assert pending_text is not None
                if position > text_start:
                    attrs = {"id": pending_text.text_id, **pending_text.metadata}
                    text_spans.append((text_start, position - 1))
                    text_records.append(vrt.format_attributes(attrs))
                else:
                    warnings.warn(
                        f"line {event.line_no}: dropping empty text "
                        f"{pending_text.text_id!r}",
                        vrt.VrtWarning,
                        stacklevel=2,
                    )
                pending_text = None
    finally:
        if stream is not None:
            stream.close()

    corpus_dir = Path(data_dir) / corpus_name.lower()
    corpus_dir.mkdir(parents=True, exist_ok=True)
    for stale in corpus_dir.iterdir():
        if stale.is_file() and stale.suffix in (".lex", ".ids", ".post", ".rng", ".tmp"):
            stale.unlink()
    stale_subs = corpus_dir / "subcorpora"
    if stale_subs.is_dir():
        # Old subcorpus spans would point into the previous token stream.
        shutil.rmtree(stale_subs)

    for attr in encoded_positional:
        builders[attr].finish(corpus_dir)
    _write_regions(corpus_dir, "text", text_spans, text_records)
    if keep_s:
        _write_regions(corpus_dir, "s", s_spans, None)

    descriptor = CorpusDescriptor(
        name=corpus_name,
        path=corpus_dir.resolve(),
        positional_attrs=tuple(encoded_positional),
        structural_attrs=tuple(["text"] + (["s"] if keep_s else [])),
        tokens=position,
        version=FORMAT_VERSION,
        checksum=compute_corpus_checksum(corpus_dir),
    )
    registry.save(descriptor, force=True)
    return corpus_name


def build_postings(name: str, *, registry_dir: str | Path) -> None:
    """Invert every encoded id stream into delta-compressed postings.

    For each (attribute, id) pair the resulting list holds the ascending
    corpus positions of that id; per attribute the posting lengths sum to
    the corpus token count.
    """
    registry = Registry(registry_dir)
    descriptor = registry.load(name)
    for attr in descriptor.positional_attrs:
        lex_body = read_body(descriptor.path / f"{attr}.lex", "lexicon")
        vocab_size = int(np.frombuffer(lex_body[:4], dtype="<u4")[0])
        freq_start = 4 + 4 * (vocab_size + 1)
        freqs = np.frombuffer(lex_body[freq_start:freq_start + 4 * vocab_size], dtype="<u4")
        ids_body = read_body(descriptor.path / f"{attr}.ids", "ids")
        ids = np.frombuffer(ids_body[4:], dtype="<u4")

        by_id = np.argsort(ids, kind="stable")
        run_ends = np.cumsum(freqs.astype(np.int64)) if vocab_size else np.zeros(0)
        blob = bytearray()
        offsets = np.zeros(vocab_size + 1, dtype="<u8")
        cursor = 0
        for value_id in range(vocab_size):
            end = int(run_ends[value_id])
            prev = -1
            for pos in by_id[cursor:end].tolist():
                encode_uint(pos if prev < 0 else pos - prev, blob)
                prev = pos
            offsets[value_id + 1] = len(blob)
            cursor = end
        body = pack_u32([vocab_size]) + pack_u64(offsets) + bytes(blob)
        write_body(descriptor.path / f"{attr}.post", "postings", body)

    refreshed = CorpusDescriptor(
        name=descriptor.name,
        path=descriptor.path,
        positional_attrs=descriptor.positional_attrs,
        structural_attrs=descriptor.structural_attrs,
        tokens=descriptor.tokens,
        version=descriptor.version,
        checksum=compute_corpus_checksum(descriptor.path),
    )
    registry.save(refreshed, force=True)
