"""Verticalized text (VRT) parsing and serialization.

The format is line-oriented UTF-8: structural tags occupy whole lines
(``<text id="...">``, ``<s>``, ``</s>``, ``</text>``), everything else is a
token line with exactly three TAB-separated columns (word, POS, lemma).
Output always uses LF line endings; CR-LF is accepted on input. Attribute
values are XML-escaped (``&amp; &lt; &gt; &quot;``); token fields are
emitted raw and may not contain tabs or newlines.

:func:`iter_events` is the streaming core used both by :func:`parse_vrt`
(which materializes a :class:`~concord.model.Corpus`) and by the index
encoder (which never holds the whole corpus in memory).
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass
from typing import IO, Iterable, Iterator, Union

from .model import Corpus, Sentence, Tagset, TextUnit, Token

__all__ = [
    "DuplicateTextId",
    "InvalidAttributeSyntax",
    "MalformedLine",
    "UnbalancedStructure",
    "UnknownStructuralTag",
    "VrtError",
    "VrtWarning",
    "escape_attribute",
    "format_attributes",
    "iter_events",
    "parse_attributes",
    "parse_vrt",
    "write_vrt",
    "write_vrt_lines",
]


class VrtError(ValueError):
    """Base class for VRT format violations."""

    def __init__(self, message: str, line_no: int | None = None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


class MalformedLine(VrtError):
    """Token line without exactly three TAB-separated columns."""


class UnbalancedStructure(VrtError):
    """Structural tags do not nest as <text><s>...</s></text>."""


class DuplicateTextId(VrtError):
    """The same text id occurs more than once."""


class InvalidAttributeSyntax(VrtError):
    """Structural open tag with unparseable attributes."""


class UnknownStructuralTag(VrtError):
    """Structural tag other than <text> or <s> in strict mode."""


class VrtWarning(UserWarning):
    """Recoverable oddity found while parsing (dropped content)."""


_OPEN_RE = re.compile(r"<([A-Za-z_][A-Za-z0-9_-]*)((?:\s[^>]*)?)>\Z")
_CLOSE_RE = re.compile(r"</([A-Za-z_][A-Za-z0-9_-]*)\s*>\Z")
_ATTR_RE = re.compile(r'\s+([A-Za-z_][A-Za-z0-9_]*)="([^"<>]*)"')

_ENTITY_RE = re.compile(r"&(?:(amp|lt|gt|quot|apos)|#(\d+)|#[xX]([0-9a-fA-F]+));")
_NAMED_ENTITIES = {"amp": "&", "lt": "<", "gt": ">", "quot": '"', "apos": "'"}


def _decode_entities(value: str) -> str:
    def repl(m: re.Match) -> str:
        if m.group(1):
            return _NAMED_ENTITIES[m.group(1)]
        if m.group(2):
            return chr(int(m.group(2)))
        return chr(int(m.group(3), 16))

    return _ENTITY_RE.sub(repl, value)


def escape_attribute(value: str) -> str:
    """Escape a string for inclusion in a double-quoted attribute value.

    Besides the XML entities, line breaks and tabs become numeric
    references so attribute values survive the line-oriented format.
    """
    return (
        value.replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
        .replace('"', "&quot;")
        .replace("\n", "&#10;")
        .replace("\r", "&#13;")
        .replace("\t", "&#9;")
    )


def parse_attributes(raw: str, line_no: int | None = None) -> dict[str, str]:
    """Parse the attribute section of a structural open tag.

    ``raw`` is everything between the tag name and the closing ``>``.
    Raises :class:`InvalidAttributeSyntax` unless it is a (possibly empty)
    sequence of ``key="value"`` pairs.
    """
    attrs: dict[str, str] = {}
    pos = 0
    while pos < len(raw) and raw[pos:].strip():
        m = _ATTR_RE.match(raw, pos)
        if m is None:
            raise InvalidAttributeSyntax(
                f"bad attribute syntax near {raw[pos:pos + 30]!r}", line_no
            )
        key = m.group(1)
        if key in attrs:
            raise InvalidAttributeSyntax(f"duplicate attribute {key!r}", line_no)
        attrs[key] = _decode_entities(m.group(2))
        pos = m.end()
    return attrs


def format_attributes(attrs: dict[str, str]) -> str:
    """Render attributes in stored order as ``key="value"`` pairs."""
    return " ".join(f'{k}="{escape_attribute(v)}"' for k, v in attrs.items())


@dataclass(frozen=True)
class TextStart:
    text_id: str
    metadata: dict[str, str]
    line_no: int


@dataclass(frozen=True)
class TextEnd:
    line_no: int


@dataclass(frozen=True)
class SentenceStart:
    line_no: int


@dataclass(frozen=True)
class SentenceEnd:
    line_no: int


@dataclass(frozen=True)
class TokenLine:
    word: str
    pos: str
    lemma: str
    line_no: int


Event = Union[TextStart, TextEnd, SentenceStart, SentenceEnd, TokenLine]

Source = Union[str, IO[str], Iterable[str]]


def _iter_lines(source: Source) -> Iterator[str]:
    # Split on real newlines only: characters like \x0b or   that
    # str.splitlines would treat as breaks are legal inside token fields.
    if isinstance(source, str):
        return iter(source.split("\n"))
    return iter(source)


def iter_events(source: Source, *, lenient: bool = False) -> Iterator[Event]:
    """Stream structural and token events from VRT input.

    Enforces the full structural discipline: ``<s>`` only directly inside
    ``<text>``, token lines only inside ``<s>``, no nesting, unique text
    ids, balanced close tags. Unknown structural tags raise
    :class:`UnknownStructuralTag` in strict mode and are skipped with a
    :class:`VrtWarning` when ``lenient`` is set.
    """
    in_text = False
    in_sentence = False
    seen_ids: set[str] = set()
    line_no = 0
    for raw_line in _iter_lines(source):
        line_no += 1
        line = raw_line.rstrip("\r\n")
        if not line.strip():
            continue
        # Structural lines never contain a TAB (attribute escaping sees to
        # it); token lines always do, even when a word starts with '<'.
        if line.startswith("<") and "\t" not in line:
            close = _CLOSE_RE.match(line)
            if close:
                tag = close.group(1)
                if tag == "s":
                    if not in_sentence:
                        raise UnbalancedStructure("</s> without open <s>", line_no)
                    in_sentence = False
                    yield SentenceEnd(line_no)
                elif tag == "text":
                    if in_sentence:
                        raise UnbalancedStructure("</text> before </s>", line_no)
                    if not in_text:
                        raise UnbalancedStructure("</text> without open <text>", line_no)
                    in_text = False
                    yield TextEnd(line_no)
                elif lenient:
                    warnings.warn(
                        f"line {line_no}: skipping unknown structural tag </{tag}>",
                        VrtWarning,
                        stacklevel=2,
                    )
                else:
                    raise UnknownStructuralTag(f"unknown structural tag </{tag}>", line_no)
                continue
            open_ = _OPEN_RE.match(line)
            if open_ is None:
                raise InvalidAttributeSyntax(f"unparseable structural line {line!r}", line_no)
            tag = open_.group(1)
            if tag == "text":
                if in_text:
                    raise UnbalancedStructure("<text> may not nest", line_no)
                attrs = parse_attributes(open_.group(2), line_no)
                text_id = attrs.pop("id", "")
                if not text_id:
                    raise InvalidAttributeSyntax('<text> requires an id="..." attribute', line_no)
                if text_id in seen_ids:
                    raise DuplicateTextId(f"duplicate text id {text_id!r}", line_no)
                seen_ids.add(text_id)
                in_text = True
                yield TextStart(text_id, attrs, line_no)
            elif tag == "s":
                if not in_text:
                    raise UnbalancedStructure("<s> outside <text>", line_no)
                if in_sentence:
                    raise UnbalancedStructure("<s> may not nest", line_no)
                if open_.group(2).strip():
                    raise InvalidAttributeSyntax("<s> takes no attributes", line_no)
                in_sentence = True
                yield SentenceStart(line_no)
            elif lenient:
                warnings.warn(
                    f"line {line_no}: skipping unknown structural tag <{tag}>",
                    VrtWarning,
                    stacklevel=2,
                )
            else:
                raise UnknownStructuralTag(f"unknown structural tag <{tag}>", line_no)
            continue
        columns = line.split("\t")
        if len(columns) != 3:
            raise MalformedLine(
                f"expected 3 TAB-separated columns, found {len(columns)}", line_no
            )
        if not in_sentence:
            raise UnbalancedStructure("token line outside <s>", line_no)
        yield TokenLine(columns[0], columns[1], columns[2], line_no)
    if in_sentence:
        raise UnbalancedStructure("unclosed <s> at end of input", line_no)
    if in_text:
        raise UnbalancedStructure("unclosed <text> at end of input", line_no)


def parse_vrt(
    source: Source,
    *,
    name: str = "",
    tagset: Tagset | None = None,
    lenient: bool = False,
) -> Corpus:
    """Parse VRT input into a :class:`~concord.model.Corpus`.

    Token order, sentence boundaries, text boundaries, and text attributes
    are preserved; corpus positions are implicitly 0..N-1 in reading order.
    Empty ``<s></s>`` pairs, and texts left with no sentences, are dropped
    with a :class:`VrtWarning`.
    """
    texts: list[TextUnit] = []
    sentences: list[Sentence] = []
    tokens: list[Token] = []
    current: TextStart | None = None
    for event in iter_events(source, lenient=lenient):
        if isinstance(event, TokenLine):
            try:
                tokens.append(Token(event.word, event.pos, event.lemma))
            except ValueError as exc:
                raise MalformedLine(str(exc), event.line_no) from exc
        elif isinstance(event, SentenceEnd):
            if tokens:
                sentences.append(Sentence(tuple(tokens)))
            else:
                warnings.warn(
                    f"line {event.line_no}: dropping empty sentence",
                    VrtWarning,
                    stacklevel=2,
                )
            tokens = []
        elif isinstance(event, TextStart):
            current = event
        elif isinstance(event, TextEnd):
            assert current is not None
            if sentences:
                texts.append(
                    TextUnit(current.text_id, dict(current.metadata), tuple(sentences))
                )
            else:
                warnings.warn(
                    f"line {event.line_no}: dropping empty text {current.text_id!r}",
                    VrtWarning,
                    stacklevel=2,
                )
            sentences = []
            current = None
    kwargs = {} if tagset is None else {"tagset": tagset}
    return Corpus(name=name, texts=tuple(texts), **kwargs)


def write_vrt_lines(corpus: Corpus) -> Iterator[str]:
    """Yield canonical VRT lines (without line terminators)."""
    for text in corpus.texts:
        attrs = {"id": text.id, **text.metadata}
        yield f"<text {format_attributes(attrs)}>"
        for sentence in text.sentences:
            yield "<s>"
            for token in sentence.tokens:
                yield f"{token.word}\t{token.pos}\t{token.lemma}"
            yield "</s>"
        yield "</text>"


def write_vrt(corpus: Corpus) -> str:
    """Serialize a corpus to canonical VRT text.

    The output ends with a final newline when the corpus is non-empty and
    satisfies ``parse_vrt(write_vrt(c)) == c``.
    """
    lines = list(write_vrt_lines(corpus))
    if not lines:
        return ""
    return "\n".join(lines) + "\n"
