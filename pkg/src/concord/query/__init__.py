"""Token-pattern query language: parsing and evaluation."""

from .ast import (
    And,
    Atom,
    Element,
    MatchAll,
    Not,
    Or,
    Pattern,
    QuerySettings,
    TokenQuery,
    VALID_ATTRIBUTES,
)
from .engine import (
    KwicLine,
    Match,
    QueryResult,
    QueryTimeout,
    UnknownStructuralAttribute,
    concordance,
    count_matches,
    evaluate,
    iter_matches,
    kwic,
)
from .parser import BadRegex, QueryError, QuerySyntaxError, UnknownAttribute, parse_query

__all__ = [
    "And",
    "Atom",
    "BadRegex",
    "Element",
    "KwicLine",
    "Match",
    "MatchAll",
    "Not",
    "Or",
    "Pattern",
    "QueryError",
    "QueryResult",
    "QuerySettings",
    "QuerySyntaxError",
    "QueryTimeout",
    "TokenQuery",
    "UnknownAttribute",
    "UnknownStructuralAttribute",
    "VALID_ATTRIBUTES",
    "concordance",
    "count_matches",
    "evaluate",
    "iter_matches",
    "kwic",
    "parse_query",
]
