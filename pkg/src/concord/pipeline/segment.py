"""Rule-based sentence segmentation and tokenization for Portuguese text."""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field

__all__ = [
    "DEFAULT_ABBREVIATIONS",
    "DEFAULT_TERMINATORS",
    "SegmenterConfig",
    "segment_sentences",
    "tokenize",
]

DEFAULT_TERMINATORS = frozenset({".", "!", "?", "…"})

#: Portuguese abbreviations that end in a period without ending a sentence.
#: Matching is case-insensitive; override the list via SegmenterConfig or,
#: on the command line, with an abbreviation file (one entry per line).
DEFAULT_ABBREVIATIONS = frozenset(
    {
        "Sr.", "Sra.", "Srta.", "Srs.", "Sras.",
        "Dr.", "Dra.", "Drs.",
        "D.", "S.", "V.", "Ex.", "Exmo.", "Exma.",
        "Prof.", "Profa.",
        "St.", "Sta.", "Sto.",
        "etc.", "p.", "pp.", "pág.", "cap.", "vol.", "fig.", "séc.",
        "a.C.", "d.C.",
    }
)

# Characters that may trail a terminator and still belong to the sentence:
# closing quotes, brackets, and the like.
_CLOSERS = "»”\"'’)]}"

_CHUNK_RE = re.compile(r"\S+")
_PARAGRAPH_RE = re.compile(r"\n\s*\n")


@dataclass(frozen=True)
class SegmenterConfig:
    terminators: frozenset[str] = DEFAULT_TERMINATORS
    abbreviations: frozenset[str] = DEFAULT_ABBREVIATIONS
    max_sentence_tokens: int = 1000

    def __post_init__(self) -> None:
        if not self.terminators:
            raise ValueError("terminators must be non-empty")
        for abbr in self.abbreviations:
            if not abbr.endswith("."):
                raise ValueError(f"abbreviation {abbr!r} does not end with '.'")
        if self.max_sentence_tokens < 1:
            raise ValueError("max_sentence_tokens must be positive")


def _ends_sentence(chunk: str, config: SegmenterConfig,
                   lowered_abbrevs: frozenset[str]) -> bool:
    # Dots inside a chunk ("3.14", "palavra.com") never end a sentence:
    # only a chunk-final terminator, optionally trailed by closers, can.
    core = chunk.rstrip(_CLOSERS)
    if not core or core[-1] not in config.terminators:
        return False
    if core[-1] == ".":
        word = core.lstrip("«“\"'‘([{")
        if word.lower() in lowered_abbrevs:
            return False
    return True


def segment_sentences(text: str, config: SegmenterConfig | None = None) -> list[str]:
    """Split plain text into sentence strings.

    A terminator character ends a sentence unless it closes a configured
    abbreviation or sits between digits. Closing quotes/brackets right
    after a terminator stay with the sentence. Paragraph breaks (blank
    lines) always end a sentence, and a sentence is hard-split after
    ``max_sentence_tokens`` whitespace-separated chunks. Non-whitespace
    characters are preserved exactly; only inter-sentence whitespace is
    dropped.
    """
    config = config or SegmenterConfig()
    lowered = frozenset(a.lower() for a in config.abbreviations)
    sentences: list[str] = []
    for para_text in _PARAGRAPH_RE.split(text):
        start = None
        count = 0
        last_end = 0
        for m in _CHUNK_RE.finditer(para_text):
            if start is None:
                start = m.start()
            count += 1
            boundary = _ends_sentence(m.group(0), config, lowered)
            if boundary or count >= config.max_sentence_tokens:
                sentences.append(para_text[start:m.end()])
                start = None
                count = 0
            last_end = m.end()
        if start is not None:
            sentences.append(para_text[start:last_end])
    return sentences


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def _split_chunk(chunk: str) -> list[str]:
    tokens: list[str] = []
    word: list[str] = []
    i = 0
    n = len(chunk)
    while i < n:
        ch = chunk[i]
        if _is_punct(ch):
            prev = chunk[i - 1] if i > 0 else ""
            nxt = chunk[i + 1] if i + 1 < n else ""
            # Intra-word punctuation stays put: hyphens in clitics and
            # compounds ("disse-me"), decimal separators ("3,14"),
            # apostrophes ("d'água").
            if ch == "-" and prev.isalnum() and nxt.isalnum():
                word.append(ch)
                i += 1
                continue
            if ch in ".," and prev.isdigit() and nxt.isdigit():
                word.append(ch)
                i += 1
                continue
            if ch in "'’" and prev.isalpha() and nxt.isalpha():
                word.append(ch)
                i += 1
                continue
            if word:
                tokens.append("".join(word))
                word = []
            run_start = i
            while i < n and chunk[i] == ch:
                i += 1
            tokens.append(chunk[run_start:i])
            continue
        word.append(ch)
        i += 1
    if word:
        tokens.append("".join(word))
    return tokens


def tokenize(sentence: str) -> list[str]:
    """Split a sentence into word and punctuation tokens.

    Punctuation becomes its own token (same-character runs like ``...``
    stay together); hyphenated forms, decimal numbers, and intra-word
    apostrophes survive as single tokens. Tokens never contain whitespace,
    and concatenating them reproduces the sentence minus its whitespace.
    """
    tokens: list[str] = []
    for chunk in sentence.split():
        tokens.extend(_split_chunk(chunk))
    return tokens
