"""Query AST: token patterns, quantified elements, and session settings."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

__all__ = [
    "And",
    "Atom",
    "Element",
    "MatchAll",
    "Not",
    "Or",
    "Pattern",
    "QuerySettings",
    "TokenQuery",
    "VALID_ATTRIBUTES",
]

VALID_ATTRIBUTES = ("word", "pos", "lemma")


@dataclass(frozen=True)
class Atom:
    """One attribute constraint: ``attr = "regex"`` or ``attr != "regex"``."""

    attribute: str
    op: str  # "=" or "!="
    pattern: str
    case_insensitive: bool = False


@dataclass(frozen=True)
class Not:
    operand: "Pattern"


@dataclass(frozen=True)
class And:
    operands: tuple["Pattern", ...]


@dataclass(frozen=True)
class Or:
    operands: tuple["Pattern", ...]


@dataclass(frozen=True)
class MatchAll:
    """The empty pattern ``[]``: true of every token."""


Pattern = Union[Atom, Not, And, Or, MatchAll]


@dataclass(frozen=True)
class Element:
    """A token pattern with repetition bounds (max_count None = unbounded)."""

    pattern: Pattern
    min_count: int = 1
    max_count: int | None = 1


@dataclass(frozen=True)
class TokenQuery:
    """A parsed query: element sequence, optionally region-restricted."""

    elements: tuple[Element, ...]
    within: str | None = None


@dataclass(frozen=True)
class QuerySettings:
    """Per-session query defaults.

    ``context_size`` tokens of context on each side of a concordance line;
    ``max_hits`` caps evaluation (None = unlimited); atoms are
    case-sensitive unless ``default_case_sensitive`` is off or a ``%c``
    flag opts out per atom.
    """

    context_size: int = 8
    max_hits: int | None = 10000
    default_case_sensitive: bool = True

    def __post_init__(self) -> None:
        if self.context_size < 0:
            raise ValueError("context_size must be >= 0")
        if self.max_hits is not None and self.max_hits < 1:
            raise ValueError("max_hits must be positive or None")
