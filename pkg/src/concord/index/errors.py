"""Error types shared by index building and reading."""

from __future__ import annotations

__all__ = [
    "BadPattern",
    "IdOutOfRange",
    "MissingAttribute",
    "PositionOutOfRange",
    "UnknownAttribute",
]


class MissingAttribute(ValueError):
    """Requested attribute is not available for this corpus."""


class UnknownAttribute(LookupError):
    """Attribute name is not part of this corpus's inventory."""


class IdOutOfRange(IndexError):
    """Lexicon id outside 0..V-1."""


class PositionOutOfRange(IndexError):
    """Corpus position outside 0..N-1."""


class BadPattern(ValueError):
    """Regular expression rejected (syntax error or unsupported feature)."""
