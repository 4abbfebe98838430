"""Domain types for annotated corpora.

A corpus is a hierarchy of texts, sentences, and tokens. Each token carries
three annotation layers (word form, part-of-speech tag, lemma), and each
text carries opaque string metadata (century, author, ...). Values are
immutable after construction and safe to share across threads.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Mapping, NamedTuple

__all__ = [
    "DEFAULT_SIMPLE_TAGS",
    "Corpus",
    "Sentence",
    "TagIssue",
    "Tagset",
    "TextUnit",
    "Token",
    "count_tokens",
    "validate_tags",
]

#: Coarse part-of-speech inventory: adjectives, adverbs, determiners,
#: cardinals/ordinals, nouns, pronouns, prepositions, verbs, interjections,
#: and the two punctuation tags (comma vs. everything else).
DEFAULT_SIMPLE_TAGS = frozenset(
    {"ADJ", "ADV", "DET", "CARD", "NOM", "P", "PREP", "V", "I", "VIRG", "SENT"}
)

_METADATA_KEY_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

_FORBIDDEN = ("\t", "\n", "\r")


@dataclass(frozen=True)
class Tagset:
    """Set of valid simple tags, optionally closed under two-part compounds.

    A compound tag such as ``PREP+DET`` or ``V+P`` is valid when compounds
    are allowed and both '+'-separated parts are simple tags. Compounds are
    limited to exactly two parts.
    """

    simple_tags: frozenset[str] = DEFAULT_SIMPLE_TAGS
    allow_compounds: bool = True

    def is_valid(self, tag: str) -> bool:
        if tag in self.simple_tags:
            return True
        if self.allow_compounds and "+" in tag:
            parts = tag.split("+")
            return len(parts) == 2 and all(p in self.simple_tags for p in parts)
        return False


#: The default tagset shared by corpora that do not declare their own.
DEFAULT_TAGSET = Tagset()


@dataclass(frozen=True)
class Token:
    """One annotated word occurrence: word form, POS tag, lemma."""

    word: str
    pos: str
    lemma: str

    def __post_init__(self) -> None:
        if not self.word:
            raise ValueError("token word must be non-empty")
        for name, value in (("word", self.word), ("pos", self.pos), ("lemma", self.lemma)):
            if any(ch in value for ch in _FORBIDDEN):
                raise ValueError(f"token {name} {value!r} contains a tab or newline")


@dataclass(frozen=True)
class Sentence:
    """Ordered, non-empty run of tokens."""

    tokens: tuple[Token, ...]

    def __post_init__(self) -> None:
        if not self.tokens:
            raise ValueError("sentence must contain at least one token")

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class TextUnit:
    """One document: an id, ordered metadata, and its sentences.

    Metadata keys are identifiers (``[A-Za-z_][A-Za-z0-9_]*``); values are
    opaque strings. Insertion order of ``metadata`` is preserved through
    serialization.
    """

    id: str
    metadata: Mapping[str, str] = field(default_factory=dict)
    sentences: tuple[Sentence, ...] = ()

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("text id must be non-empty")
        for key in self.metadata:
            if not _METADATA_KEY_RE.match(key):
                raise ValueError(f"invalid metadata key {key!r}")
            if key == "id":
                raise ValueError("metadata key 'id' is reserved for the text id")

    def token_count(self) -> int:
        return sum(len(s) for s in self.sentences)


@dataclass(frozen=True)
class Corpus:
    """A named, ordered collection of texts with a tagset reference.

    ``name`` and ``tagset`` are labels, not structure: equality compares
    texts only, so a parse/serialize round trip compares equal regardless
    of the name the parser was given.
    """

    name: str = field(compare=False, default="")
    texts: tuple[TextUnit, ...] = ()
    tagset: Tagset = field(compare=False, default=DEFAULT_TAGSET)

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for text in self.texts:
            if text.id in seen:
                raise ValueError(f"duplicate text id {text.id!r}")
            seen.add(text.id)

    def iter_tokens(self) -> Iterator[Token]:
        for text in self.texts:
            for sentence in text.sentences:
                yield from sentence.tokens


class TagIssue(NamedTuple):
    """One offending tag found by :func:`validate_tags`."""

    position: int
    tag: str


def validate_tags(corpus: Corpus, tagset: Tagset | None = None) -> list[TagIssue]:
    """Check every token's POS tag against a tagset.

    Returns one entry per offending token, carrying the corpus position
    (0-based, counting tokens in reading order) and the tag. An empty
    report means every tag validates.
    """
    tagset = tagset if tagset is not None else corpus.tagset
    issues = []
    for position, token in enumerate(corpus.iter_tokens()):
        if not tagset.is_valid(token.pos):
            issues.append(TagIssue(position, token.pos))
    return issues


def count_tokens(corpus: Corpus) -> int:
    """Total number of tokens across all texts and sentences."""
    return sum(text.token_count() for text in corpus.texts)
