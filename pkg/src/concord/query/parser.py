"""Parser for the token-pattern query language.

Grammar::

    query    := element+ ('within' IDENT)? ';'?
    element  := (STRING | '[' expr? ']') quant?
    expr     := or
    or       := and ('|' and)*
    and      := unary ('&' unary)*
    unary    := '!' unary | '(' expr ')' | atom
    atom     := ATTR ('=' | '!=') STRING ('%c')?
    quant    := '?' | '*' | '+' | '{' n (',' m)? '}'

A bare string ``"isso"`` is sugar for ``[word="isso"]``. String patterns
are anchored regular expressions over the whole attribute value. The
``%c`` flag makes one atom case-insensitive. Repetition bounds in braces
are limited to 0..64; the trailing semicolon of interactive sessions is
accepted and ignored.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..index.errors import BadPattern
from ..index.reader import compile_value_pattern
from .ast import (
    VALID_ATTRIBUTES,
    And,
    Atom,
    Element,
    MatchAll,
    Not,
    Or,
    Pattern,
    QuerySettings,
    TokenQuery,
)

__all__ = ["BadRegex", "QueryError", "QuerySyntaxError", "UnknownAttribute", "parse_query"]

MAX_REPEAT = 64


class QueryError(ValueError):
    """Base for query rejections; carries the character position."""

    def __init__(self, message: str, position: int):
        self.position = position
        super().__init__(f"at {position}: {message}")


class QuerySyntaxError(QueryError):
    pass


class UnknownAttribute(QueryError):
    pass


class BadRegex(QueryError):
    pass


@dataclass(frozen=True)
class _Tok:
    kind: str
    value: str
    pos: int


_SYMBOLS = ("!=", "%c", "[", "]", "(", ")", "{", "}", "!", "&", "|", "=", "?", "*", "+", ",", ";")


def _lex(text: str) -> list[_Tok]:
    tokens: list[_Tok] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "\"'":
            quote = ch
            j = i + 1
            buf: list[str] = []
            while j < n and text[j] != quote:
                if text[j] == "\\" and j + 1 < n:
                    nxt = text[j + 1]
                    if nxt in "\"'":
                        buf.append(nxt)
                    else:
                        buf.append(text[j])
                        buf.append(nxt)
                    j += 2
                else:
                    buf.append(text[j])
                    j += 1
            if j >= n:
                raise QuerySyntaxError("unterminated string", i)
            tokens.append(_Tok("STRING", "".join(buf), i))
            i = j + 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(_Tok("NUMBER", text[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_Tok("IDENT", text[i:j], i))
            i = j
            continue
        for sym in _SYMBOLS:
            if text.startswith(sym, i):
                tokens.append(_Tok(sym, sym, i))
                i += len(sym)
                break
        else:
            raise QuerySyntaxError(f"unexpected character {ch!r}", i)
    tokens.append(_Tok("EOF", "", n))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Tok], settings: QuerySettings):
        self.tokens = tokens
        self.i = 0
        self.default_ci = not settings.default_case_sensitive

    @property
    def cur(self) -> _Tok:
        return self.tokens[self.i]

    def advance(self) -> _Tok:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str) -> _Tok:
        if self.cur.kind != kind:
            raise QuerySyntaxError(f"expected {kind!r}, found {self.cur.kind!r}", self.cur.pos)
        return self.advance()

    def parse(self) -> TokenQuery:
        elements = [self.parse_element()]
        while self.cur.kind in ("STRING", "["):
            elements.append(self.parse_element())
        within = None
        if self.cur.kind == "IDENT" and self.cur.value == "within":
            self.advance()
            within = self.expect("IDENT").value
        if self.cur.kind == ";":
            self.advance()
        if self.cur.kind != "EOF":
            raise QuerySyntaxError(f"unexpected {self.cur.value!r}", self.cur.pos)
        return TokenQuery(tuple(elements), within)

    def parse_element(self) -> Element:
        if self.cur.kind == "STRING":
            tok = self.advance()
            ci = self.default_ci
            if self.cur.kind == "%c":
                self.advance()
                ci = True
            pattern: Pattern = self._atom("word", "=", tok.value, ci, tok.pos)
        else:
            self.expect("[")
            if self.cur.kind == "]":
                pattern = MatchAll()
            else:
                pattern = self.parse_expr()
            self.expect("]")
        lo, hi = self.parse_quantifier()
        return Element(pattern, lo, hi)

    def parse_quantifier(self) -> tuple[int, int | None]:
        kind = self.cur.kind
        if kind == "?":
            self.advance()
            return 0, 1
        if kind == "*":
            self.advance()
            return 0, None
        if kind == "+":
            self.advance()
            return 1, None
        if kind == "{":
            open_tok = self.advance()
            lo = int(self.expect("NUMBER").value)
            hi = lo
            if self.cur.kind == ",":
                self.advance()
                hi = int(self.expect("NUMBER").value)
            self.expect("}")
            if hi > MAX_REPEAT:
                raise QuerySyntaxError(
                    f"repetition bound {hi} exceeds the limit of {MAX_REPEAT}", open_tok.pos
                )
            if lo > hi:
                raise QuerySyntaxError(f"bad repetition range {{{lo},{hi}}}", open_tok.pos)
            return lo, hi
        return 1, 1

    def parse_expr(self) -> Pattern:
        return self.parse_or()

    def parse_or(self) -> Pattern:
        operands = [self.parse_and()]
        while self.cur.kind == "|":
            self.advance()
            operands.append(self.parse_and())
        if len(operands) == 1:
            return operands[0]
        return Or(tuple(operands))

    def parse_and(self) -> Pattern:
        operands = [self.parse_unary()]
        while self.cur.kind == "&":
            self.advance()
            operands.append(self.parse_unary())
        if len(operands) == 1:
            return operands[0]
        return And(tuple(operands))

    def parse_unary(self) -> Pattern:
        if self.cur.kind == "!":
            self.advance()
            return Not(self.parse_unary())
        if self.cur.kind == "(":
            self.advance()
            inner = self.parse_expr()
            self.expect(")")
            return inner
        if self.cur.kind == "IDENT":
            attr_tok = self.advance()
            if self.cur.kind in ("=", "!="):
                op = self.advance().value
            else:
                raise QuerySyntaxError(
                    f"expected '=' or '!=' after attribute {attr_tok.value!r}", self.cur.pos
                )
            value_tok = self.expect("STRING")
            ci = self.default_ci
            if self.cur.kind == "%c":
                self.advance()
                ci = True
            return self._atom(attr_tok.value, op, value_tok.value, ci, attr_tok.pos)
        raise QuerySyntaxError(
            f"expected a constraint, found {self.cur.kind!r}", self.cur.pos
        )

    def _atom(self, attribute: str, op: str, pattern: str, ci: bool, pos: int) -> Atom:
        if attribute not in VALID_ATTRIBUTES:
            raise UnknownAttribute(
                f"unknown attribute {attribute!r} (expected one of {', '.join(VALID_ATTRIBUTES)})",
                pos,
            )
        try:
            compile_value_pattern(pattern, ci)
        except BadPattern as exc:
            raise BadRegex(str(exc), pos) from exc
        return Atom(attribute, op, pattern, ci)


def parse_query(text: str, settings: QuerySettings | None = None) -> TokenQuery:
    """Parse a query string into a :class:`TokenQuery`.

    Raises :class:`QuerySyntaxError`, :class:`UnknownAttribute`, or
    :class:`BadRegex`, each carrying the offending character position.
    """
    settings = settings or QuerySettings()
    tokens = _lex(text)
    if tokens[0].kind == "EOF":
        raise QuerySyntaxError("empty query", 0)
    return _Parser(tokens, settings).parse()
