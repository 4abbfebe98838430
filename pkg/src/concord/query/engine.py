"""Query evaluation over an encoded corpus.

Semantics: every corpus position in scope is a candidate anchor; if the
element sequence can match starting there, the longest such match is
reported for that anchor (quantifiers are greedy; a match covers at least
one token). Matches from different anchors may overlap. With ``within s``
a match may not extend past the sentence region containing its anchor.

The planner picks between two strategies with identical semantics: rare
positive atoms in the first element seed candidate anchors straight from
the postings lists; everything else goes through a vectorized scan of the
id streams.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Iterable, Iterator, Protocol, Sequence

import numpy as np

from ..index.reader import CorpusReader, compile_value_pattern
from .ast import And, Atom, Element, MatchAll, Not, Or, Pattern, QuerySettings, TokenQuery

__all__ = [
    "KwicLine",
    "Match",
    "QueryResult",
    "QueryTimeout",
    "UnknownStructuralAttribute",
    "concordance",
    "count_matches",
    "evaluate",
    "iter_matches",
    "kwic",
]

# Seed from postings only when the rarest required atom is this rare;
# above the threshold a vectorized scan is faster than decoding postings.
_SEED_FRACTION_SHIFT = 12
_DEADLINE_CHECK_EVERY = 4096


class QueryTimeout(RuntimeError):
    """Cooperative per-query deadline exceeded."""


class UnknownStructuralAttribute(LookupError):
    """``within`` names a structural attribute the corpus does not have."""


class Scope(Protocol):
    """Anything exposing sorted disjoint [start, end] spans (a subcorpus)."""

    @property
    def spans(self) -> Sequence[tuple[int, int]]: ...


@dataclass(frozen=True)
class Match:
    start: int
    end: int  # inclusive


@dataclass
class QueryResult:
    matches: list[Match]
    truncated: bool = False


@dataclass(frozen=True)
class KwicLine:
    text_id: str
    left: tuple[str, ...]
    focus: tuple[str, ...]
    right: tuple[str, ...]


class _CompiledElement:
    __slots__ = ("lo", "hi", "test", "vector", "always_true")

    def __init__(self, lo: int, hi: int | None, test, vector, always_true: bool):
        self.lo = lo
        self.hi = hi
        self.test = test  # position -> bool
        self.vector = vector  # () -> np.ndarray[bool] over all positions
        self.always_true = always_true  # [] matches every token; run = limit - e


def _atom_mask(reader: CorpusReader, atom: Atom, cache: dict) -> np.ndarray:
    key = (atom.attribute, atom.pattern, atom.case_insensitive)
    mask = cache.get(key)
    if mask is None:
        lexicon = reader.lexicon(atom.attribute)
        mask = np.zeros(len(lexicon), dtype=bool)
        ids = reader.lookup_ids(atom.attribute, atom.pattern, atom.case_insensitive)
        if ids:
            mask[np.asarray(ids, dtype=np.int64)] = True
        cache[key] = mask
    return mask


def _compile_pattern(reader: CorpusReader, pattern: Pattern, mask_cache: dict):
    """Build (scalar test, whole-corpus vector builder) for a token pattern."""
    if isinstance(pattern, MatchAll):
        size = reader.size
        return (lambda p: True), (lambda: np.ones(size, dtype=bool))
    if isinstance(pattern, Atom):
        mask = _atom_mask(reader, pattern, mask_cache)
        stream = reader.ids(pattern.attribute)
        if pattern.op == "=":
            return (lambda p: bool(mask[stream[p]])), (lambda: mask[stream])
        return (lambda p: not mask[stream[p]]), (lambda: ~mask[stream])
    if isinstance(pattern, Not):
        test, vector = _compile_pattern(reader, pattern.operand, mask_cache)
        return (lambda p: not test(p)), (lambda: ~vector())
    parts = [_compile_pattern(reader, op, mask_cache) for op in pattern.operands]
    tests = [t for t, _ in parts]
    vectors = [v for _, v in parts]
    if isinstance(pattern, And):
        def test_and(p, _tests=tests):
            return all(t(p) for t in _tests)

        def vector_and(_vectors=vectors):
            out = _vectors[0]()
            for v in _vectors[1:]:
                out = out & v()
            return out

        return test_and, vector_and
    assert isinstance(pattern, Or)

    def test_or(p, _tests=tests):
        return any(t(p) for t in _tests)

    def vector_or(_vectors=vectors):
        out = _vectors[0]()
        for v in _vectors[1:]:
            out = out | v()
        return out

    return test_or, vector_or


def _required_atoms(pattern: Pattern) -> set[Atom]:
    """Atoms that must hold wherever the pattern holds (for seeding only)."""
    if isinstance(pattern, Atom):
        return {pattern} if pattern.op == "=" else set()
    if isinstance(pattern, And):
        out: set[Atom] = set()
        for op in pattern.operands:
            out |= _required_atoms(op)
        return out
    if isinstance(pattern, Or):
        sets = [_required_atoms(op) for op in pattern.operands]
        common = sets[0]
        for s in sets[1:]:
            common = common & s
        return common
    return set()  # Not, MatchAll


class _Evaluator:
    def __init__(
        self,
        query: TokenQuery,
        reader: CorpusReader,
        scope: Scope | None = None,
        deadline: float | None = None,
    ):
        self.reader = reader
        self.query = query
        self.deadline = deadline
        self.size = reader.size
        mask_cache: dict = {}
        self.elements = []
        for element in query.elements:
            test, vector = _compile_pattern(reader, element.pattern, mask_cache)
            self.elements.append(
                _CompiledElement(
                    element.min_count,
                    element.max_count,
                    test,
                    vector,
                    isinstance(element.pattern, MatchAll),
                )
            )
        self.mask_cache = mask_cache

        if query.within is not None:
            if query.within not in reader.structural_attrs:
                raise UnknownStructuralAttribute(
                    f"corpus {reader.name} has no structural attribute {query.within!r}"
                )
            spans = reader.regions(query.within)
            self.region_starts = spans[:, 0].astype(np.int64)
            self.region_ends = spans[:, 1].astype(np.int64)
        else:
            self.region_starts = None
            self.region_ends = None

        self.scope_spans = list(scope.spans) if scope is not None else None

    # -- anchor candidates ---------------------------------------------------

    def _scope_positions(self) -> np.ndarray:
        if self.scope_spans is None:
            return np.arange(self.size, dtype=np.int64)
        parts = [np.arange(s, e + 1, dtype=np.int64) for s, e in self.scope_spans]
        return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)

    def _seed_anchors(self) -> np.ndarray | None:
        """Anchor candidates from the postings of the rarest required atom."""
        first = self.query.elements[0]
        if first.min_count < 1:
            return None
        atoms = _required_atoms(first.pattern)
        if not atoms:
            return None
        best: tuple[int, Atom, list[int]] | None = None
        for atom in atoms:
            ids = self.reader.lookup_ids(atom.attribute, atom.pattern, atom.case_insensitive)
            freqs = self.reader.lexicon(atom.attribute).freqs
            total = int(freqs[np.asarray(ids, dtype=np.int64)].sum()) if ids else 0
            if best is None or total < best[0]:
                best = (total, atom, ids)
        total, atom, ids = best
        if total == 0:
            return np.zeros(0, dtype=np.int64)
        if total > max(64, self.size >> _SEED_FRACTION_SHIFT):
            return None
        chunks = [
            np.asarray(self.reader.positions(atom.attribute, value_id), dtype=np.int64)
            for value_id in ids
        ]
        anchors = chunks[0] if len(chunks) == 1 else np.sort(np.concatenate(chunks))
        if self.scope_spans is not None:
            mask = np.zeros(self.size, dtype=bool)
            for s, e in self.scope_spans:
                mask[s:e + 1] = True
            anchors = anchors[mask[anchors]]
        return anchors

    def _anchors(self) -> np.ndarray:
        if self.size == 0:
            return np.zeros(0, dtype=np.int64)
        seeded = self._seed_anchors()
        if seeded is not None:
            return seeded
        anchors = self._scope_positions()
        first = self.query.elements[0]
        if first.min_count >= 1 and len(anchors):
            vector = self.elements[0].vector()
            anchors = anchors[vector[anchors]]
        return anchors

    # -- per-anchor matching ---------------------------------------------------

    def _limit_for(self, anchor: int) -> int | None:
        """Exclusive upper bound for a match anchored here, or None to skip."""
        if self.region_starts is None:
            return self.size
        idx = int(np.searchsorted(self.region_starts, anchor, side="right")) - 1
        if idx < 0 or self.region_ends[idx] < anchor:
            return None
        return int(self.region_ends[idx]) + 1

    def _match_end(self, anchor: int, limit: int) -> int | None:
        """Largest inclusive end of a match at ``anchor``, or None.

        Ends reachable after each element form a union of integer
        intervals (exclusive cursors); consecutive feasible start cursors
        always produce overlapping extensions, so each run of satisfying
        tokens contributes a single interval.
        """
        intervals = [(anchor, anchor)]
        for element in self.elements:
            lo, hi, test = element.lo, element.hi, element.test
            needed = max(lo, 1)
            out: list[tuple[int, int]] = []
            if lo == 0:
                out.extend(intervals)
            if hi is None or hi >= needed:
                for a, b in intervals:
                    e = a
                    while e <= b:
                        if element.always_true:
                            run = limit - e
                        else:
                            run = 0
                            q = e
                            while q < limit and test(q):
                                run += 1
                                q += 1
                        if run < needed:
                            e = e + run + 1
                            continue
                        # Feasible cursors e..e+run-needed chain into one
                        # interval; its reach is capped by hi and by the
                        # end of the run itself.
                        block_end = min(e + run - needed, b)
                        cap = hi if hi is not None else run
                        out.append((e + needed, min(e + run, block_end + cap)))
                        e = e + run + 1
            if not out:
                return None
            intervals = _merge_intervals(out)
        best = intervals[-1][1]
        return best - 1 if best > anchor else None

    def iter_matches(self) -> Iterator[Match]:
        anchors = self._anchors()
        deadline = self.deadline
        limit_for = self._limit_for
        match_end = self._match_end
        for counter, anchor in enumerate(anchors.tolist()):
            if deadline is not None and counter % _DEADLINE_CHECK_EVERY == 0:
                if time.monotonic() > deadline:
                    raise QueryTimeout("query exceeded its time budget")
            limit = limit_for(anchor)
            if limit is None:
                continue
            end = match_end(anchor, limit)
            if end is not None:
                yield Match(anchor, end)


def _merge_intervals(intervals: list[tuple[int, int]]) -> list[tuple[int, int]]:
    intervals.sort()
    merged = [intervals[0]]
    for a, b in intervals[1:]:
        la, lb = merged[-1]
        if a <= lb + 1:
            if b > lb:
                merged[-1] = (la, b)
        else:
            merged.append((a, b))
    return merged


def iter_matches(
    query: TokenQuery,
    reader: CorpusReader,
    scope: Scope | None = None,
    deadline: float | None = None,
) -> Iterator[Match]:
    """All matches in (start, end) order, without any hit cap."""
    return _Evaluator(query, reader, scope, deadline).iter_matches()


def evaluate(
    query: TokenQuery,
    reader: CorpusReader,
    scope: Scope | None = None,
    settings: QuerySettings | None = None,
    deadline: float | None = None,
) -> QueryResult:
    """Evaluate a parsed query; truncates at ``settings.max_hits``."""
    settings = settings or QuerySettings()
    matches: list[Match] = []
    truncated = False
    for match in iter_matches(query, reader, scope, deadline):
        if settings.max_hits is not None and len(matches) >= settings.max_hits:
            truncated = True
            break
        matches.append(match)
    return QueryResult(matches, truncated)


def count_matches(
    query: TokenQuery,
    reader: CorpusReader,
    scope: Scope | None = None,
    deadline: float | None = None,
) -> int:
    """Number of matches with no truncation and no concordance overhead."""
    return sum(1 for _ in iter_matches(query, reader, scope, deadline))


def kwic(
    matches: Iterable[Match],
    reader: CorpusReader,
    settings: QuerySettings | None = None,
) -> list[KwicLine]:
    """Concordance lines: context clipped at the enclosing text region."""
    settings = settings or QuerySettings()
    ctx = settings.context_size
    lines = []
    for m in matches:
        region = reader.region_of("text", m.start)
        if region is not None:
            text_id = reader.region_record("text", region.index).get("id", "")
            left_edge, right_edge = region.start, region.end
        else:
            text_id = ""
            left_edge, right_edge = 0, reader.size - 1
        left = reader.words(max(left_edge, m.start - ctx), m.start)
        focus = reader.words(m.start, m.end + 1)
        right = reader.words(m.end + 1, min(right_edge, m.end + ctx) + 1)
        lines.append(KwicLine(text_id, tuple(left), tuple(focus), tuple(right)))
    return lines


def concordance(
    reader: CorpusReader,
    query: TokenQuery,
    scope: Scope | None = None,
    settings: QuerySettings | None = None,
    deadline: float | None = None,
) -> tuple[QueryResult, list[KwicLine]]:
    """Evaluate and render in one step (shared by the CLI and the service)."""
    result = evaluate(query, reader, scope, settings, deadline)
    return result, kwic(result.matches, reader, settings)
