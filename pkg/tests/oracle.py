"""Independent reference implementations for checking the query engine.

The naive interpreter works straight off a decoded token list: it tests
the constraint expression token by token with regular expressions and
explores every quantifier split recursively. No lexicons, no postings, no
id streams; agreement with the engine is the correctness bar.
"""

from __future__ import annotations

import random
import re

from concord.query.ast import And, Atom, MatchAll, Not, Or, Pattern, TokenQuery

_ATTR_INDEX = {"word": 0, "pos": 1, "lemma": 2}


def token_satisfies(pattern: Pattern, token: tuple[str, str, str]) -> bool:
    if isinstance(pattern, MatchAll):
        return True
    if isinstance(pattern, Atom):
        value = token[_ATTR_INDEX[pattern.attribute]]
        flags = re.IGNORECASE if pattern.case_insensitive else 0
        hit = re.fullmatch(pattern.pattern, value, flags) is not None
        return hit if pattern.op == "=" else not hit
    if isinstance(pattern, Not):
        return not token_satisfies(pattern.operand, token)
    if isinstance(pattern, And):
        return all(token_satisfies(op, token) for op in pattern.operands)
    if isinstance(pattern, Or):
        return any(token_satisfies(op, token) for op in pattern.operands)
    raise TypeError(f"unknown pattern node {pattern!r}")


def naive_matches(
    query: TokenQuery,
    tokens: list[tuple[str, str, str]],
    s_spans: list[tuple[int, int]] | None = None,
    scope_positions: set[int] | None = None,
) -> list[tuple[int, int]]:
    """All (start, end) matches, longest-per-anchor, by exhaustive search."""
    n = len(tokens)
    limit_at: list[int] = [n] * n
    covered: list[bool] = [True] * n
    if query.within is not None:
        if query.within == "s":
            spans = s_spans or []
        else:
            spans = []
        covered = [False] * n
        for start, end in spans:
            for p in range(start, end + 1):
                covered[p] = True
                limit_at[p] = end + 1

    elements = [(e.min_count, e.max_count, e.pattern) for e in query.elements]

    def best_end(anchor: int, limit: int) -> int | None:
        best: int | None = None

        def explore(idx: int, pos: int) -> None:
            nonlocal best
            if idx == len(elements):
                if pos > anchor and (best is None or pos > best):
                    best = pos
                return
            lo, hi, pattern = elements[idx]
            if lo == 0:
                explore(idx + 1, pos)
            count = 0
            cursor = pos
            while (hi is None or count < hi) and cursor < limit and token_satisfies(
                pattern, tokens[cursor]
            ):
                count += 1
                cursor += 1
                if count >= max(lo, 1):
                    explore(idx + 1, pos + count)

        explore(0, anchor)
        return best

    out = []
    for anchor in range(n):
        if scope_positions is not None and anchor not in scope_positions:
            continue
        if not covered[anchor]:
            continue
        end = best_end(anchor, limit_at[anchor])
        if end is not None:
            out.append((anchor, end - 1))
    return out


# -- random corpora and queries ---------------------------------------------------

_WORD_POOL = [
    "isso", "casa", "dia", "homem", "terra", "rei", "cidade", "mar", "ver",
    "dizer", "grande", "novo", "velho", "bom", "santo", "água", "fogo",
    "coração", "ção", "a.b", "x*y", "dom", "senhor", "carta", "ano", "tempo",
    "obra", "livro", "deus", "mão", "pé",
]
_POS_POOL = [
    "ADJ", "ADV", "DET", "CARD", "NOM", "P", "PREP", "V", "I", "VIRG", "SENT",
    "PREP+DET", "V+P",
]
_CENTURIES = ["16", "17", "18", "19", "20"]


def random_corpus_vrt(rng: random.Random, n_tokens: int) -> str:
    """Synthetic VRT of roughly n_tokens tokens with tagset-valid tags."""
    lines = []
    produced = 0
    text_no = 0
    while produced < n_tokens:
        text_no += 1
        century = rng.choice(_CENTURIES)
        lines.append(f'<text id="t{text_no}" century="{century}">')
        for _ in range(rng.randint(1, 6)):
            if produced >= n_tokens:
                break
            lines.append("<s>")
            for _ in range(rng.randint(1, 12)):
                if produced >= n_tokens:
                    break
                word = rng.choice(_WORD_POOL)
                if rng.random() < 0.15:
                    word = word.capitalize()
                pos = rng.choice(_POS_POOL)
                lemma = rng.choice((word.lower(), rng.choice(_WORD_POOL)))
                lines.append(f"{word}\t{pos}\t{lemma}")
                produced += 1
            lines.append("</s>")
        lines.append("</text>")
    return "\n".join(lines) + "\n"


def _random_regex(rng: random.Random, values: list[str]) -> str:
    value = rng.choice(values)
    kind = rng.random()
    if kind < 0.45:
        return re.escape(value)
    if kind < 0.6:
        prefix = value[: max(1, len(value) // 2)]
        return re.escape(prefix) + ".*"
    if kind < 0.7:
        suffix = value[len(value) // 2:]
        return ".*" + re.escape(suffix)
    if kind < 0.85:
        other = rng.choice(values)
        return f"({re.escape(value)}|{re.escape(other)})"
    return "[a-z]+"


def _random_atom(rng: random.Random, words: list[str], lemmas: list[str]) -> str:
    attr = rng.choice(("word", "word", "pos", "lemma"))
    values = {"word": words, "pos": _POS_POOL, "lemma": lemmas}[attr]
    pattern = _random_regex(rng, values)
    op = "!=" if rng.random() < 0.15 else "="
    flag = "%c" if rng.random() < 0.12 else ""
    quoted = pattern.replace('"', '\\"')
    return f'{attr}{op}"{quoted}"{flag}'


def _random_expr(rng: random.Random, words: list[str], lemmas: list[str], depth: int = 0) -> str:
    roll = rng.random()
    if depth >= 2 or roll < 0.55:
        return _random_atom(rng, words, lemmas)
    if roll < 0.7:
        left = _random_expr(rng, words, lemmas, depth + 1)
        right = _random_expr(rng, words, lemmas, depth + 1)
        return f"{left} & {right}"
    if roll < 0.85:
        left = _random_expr(rng, words, lemmas, depth + 1)
        right = _random_expr(rng, words, lemmas, depth + 1)
        return f"{left} | {right}"
    inner = _random_expr(rng, words, lemmas, depth + 1)
    return f"!({inner})"


def _random_element(rng: random.Random, words: list[str], lemmas: list[str]) -> str:
    roll = rng.random()
    if roll < 0.3:
        word = rng.choice(words)
        raw = re.escape(word) if rng.random() < 0.5 else word
        body = '"' + raw.replace('"', '\\"') + '"'
    elif roll < 0.38:
        body = "[]"
    else:
        body = f"[{_random_expr(rng, words, lemmas)}]"
    quant_roll = rng.random()
    if quant_roll < 0.6:
        quant = ""
    elif quant_roll < 0.7:
        quant = "?"
    elif quant_roll < 0.78:
        quant = "*"
    elif quant_roll < 0.86:
        quant = "+"
    else:
        lo = rng.randint(0, 3)
        hi = lo + rng.randint(0, 3)
        quant = f"{{{lo},{hi}}}" if rng.random() < 0.7 else f"{{{max(lo, 1)}}}"
    return body + quant


def random_query_text(rng: random.Random, words: list[str], lemmas: list[str]) -> str:
    n_elements = rng.choices((1, 2, 3), weights=(5, 3, 1))[0]
    parts = [_random_element(rng, words, lemmas) for _ in range(n_elements)]
    query = " ".join(parts)
    if rng.random() < 0.25:
        query += " within s"
    if rng.random() < 0.2:
        query += ";"
    return query
