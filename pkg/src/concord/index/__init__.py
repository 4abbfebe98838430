"""Positional/structural index: encoding, postings, registry, readers."""

from .encoder import POSITIONAL_ATTRS, STRUCTURAL_ATTRS, build_postings, encode
from .errors import (
    BadPattern,
    IdOutOfRange,
    MissingAttribute,
    PositionOutOfRange,
    UnknownAttribute,
)
from .files import CorruptIndex
from .reader import CorpusReader, Lexicon, Region, compile_value_pattern, pattern_literal
from .registry import (
    CorpusAlreadyRegistered,
    CorpusDescriptor,
    CorpusNotFound,
    Registry,
    normalize_corpus_name,
)

__all__ = [
    "BadPattern",
    "CorpusAlreadyRegistered",
    "CorpusDescriptor",
    "CorpusNotFound",
    "CorpusReader",
    "CorruptIndex",
    "IdOutOfRange",
    "Lexicon",
    "MissingAttribute",
    "POSITIONAL_ATTRS",
    "PositionOutOfRange",
    "Region",
    "Registry",
    "STRUCTURAL_ATTRS",
    "UnknownAttribute",
    "build_postings",
    "compile_value_pattern",
    "encode",
    "normalize_corpus_name",
    "pattern_literal",
]
