"""Frequency lists, keyword extraction, distributions, and subcorpora.

Keywords are ranked by Dunning-style log-likelihood (G2): observed counts
``a`` (target) and ``b`` (reference) against scope sizes N1 and N2, with
expected counts E1 = N1*(a+b)/(N1+N2) and E2 = N2*(a+b)/(N1+N2), scored as
``2*(a*ln(a/E1) + b*ln(b/E2))`` where a zero count contributes zero. G2 is
exactly 0 when the relative frequencies coincide (a*N2 == b*N1).
"""

from __future__ import annotations

import math
import re
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .index.reader import CorpusReader
from .query.engine import Match

__all__ = [
    "DuplicateName",
    "EmptyScope",
    "EmptySubcorpusWarning",
    "FrequencyList",
    "KeywordRow",
    "Subcorpus",
    "UnknownMetadataKey",
    "define_subcorpus",
    "delete_subcorpus",
    "distribution",
    "format_frequency_tsv",
    "format_keywords_tsv",
    "frequency_list",
    "g2_score",
    "keywords",
    "list_subcorpora",
    "load_subcorpus",
]


class DuplicateName(RuntimeError):
    """A subcorpus with that name already exists for this corpus."""


class UnknownMetadataKey(LookupError):
    """Predicate key not declared in any text's metadata."""


class EmptyScope(ValueError):
    """Keyword comparison requires non-empty target and reference scopes."""


class EmptySubcorpusWarning(UserWarning):
    """The predicate matched no text; the subcorpus was still created."""


_SUBCORPUS_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_-]*\Z")


@dataclass(frozen=True)
class Subcorpus:
    """A named position set over one corpus, as sorted disjoint spans."""

    name: str
    corpus: str
    spans: tuple[tuple[int, int], ...]
    predicate: str = ""

    @property
    def size(self) -> int:
        return sum(end - start + 1 for start, end in self.spans)

    def position_mask(self, corpus_size: int) -> np.ndarray:
        mask = np.zeros(corpus_size, dtype=bool)
        for start, end in self.spans:
            mask[start:end + 1] = True
        return mask


@dataclass(frozen=True)
class FrequencyList:
    """Rows of (value, count), count descending then value ascending."""

    attribute: str
    rows: tuple[tuple[str, int], ...]
    scope_size: int


@dataclass(frozen=True)
class KeywordRow:
    value: str
    target_count: int
    reference_count: int
    target_size: int
    reference_size: int
    g2: float
    direction: str  # "over" | "under"


def _scope_counts(reader: CorpusReader, attribute: str, scope: Subcorpus | None) -> np.ndarray:
    """Per-id occurrence counts over the scope (whole corpus when None)."""
    lexicon = reader.lexicon(attribute)
    if scope is None:
        return lexicon.freqs.astype(np.int64)
    ids = reader.ids(attribute)
    counts = np.zeros(len(lexicon), dtype=np.int64)
    for start, end in scope.spans:
        chunk = ids[start:end + 1]
        if len(chunk):
            counts += np.bincount(chunk, minlength=len(lexicon))
    return counts


def frequency_list(
    reader: CorpusReader,
    attribute: str = "word",
    scope: Subcorpus | None = None,
    top_k: int | None = None,
) -> FrequencyList:
    """Ranked frequency list over a corpus or subcorpus.

    Counts over the whole corpus equal the lexicon frequencies; a scope
    restricts counting to its positions. Zero-count values are omitted.
    """
    lexicon = reader.lexicon(attribute)  # raises UnknownAttribute early
    counts = _scope_counts(reader, attribute, scope)
    present = np.nonzero(counts)[0]
    rows = sorted(
        ((lexicon.values[i], int(counts[i])) for i in present.tolist()),
        key=lambda row: (-row[1], row[0]),
    )
    if top_k is not None:
        rows = rows[:top_k]
    scope_size = reader.size if scope is None else scope.size
    return FrequencyList(attribute, tuple(rows), scope_size)


def g2_score(a: int, b: int, n1: int, n2: int) -> float:
    """Log-likelihood score of count a of N1 against count b of N2."""
    if a * n2 == b * n1:
        return 0.0
    total = a + b
    e1 = n1 * total / (n1 + n2)
    e2 = n2 * total / (n1 + n2)
    g = 0.0
    if a:
        g += a * math.log(a / e1)
    if b:
        g += b * math.log(b / e2)
    return max(2.0 * g, 0.0)


def keywords(
    reader: CorpusReader,
    attribute: str = "word",
    target: Subcorpus | None = None,
    reference: Subcorpus | None = None,
    min_count: int = 3,
) -> list[KeywordRow]:
    """Values over/under-represented in the target scope vs. the reference.

    Considers every value occurring at least ``min_count`` times in the
    target; rows come back sorted by G2 descending (ties by value).
    """
    target_counts = _scope_counts(reader, attribute, target)
    reference_counts = _scope_counts(reader, attribute, reference)
    n1 = reader.size if target is None else target.size
    n2 = reader.size if reference is None else reference.size
    if n1 == 0 or n2 == 0:
        raise EmptyScope("target and reference scopes must be non-empty")
    lexicon = reader.lexicon(attribute)
    rows = []
    for i in np.nonzero(target_counts >= min_count)[0].tolist():
        a = int(target_counts[i])
        b = int(reference_counts[i])
        rows.append(
            KeywordRow(
                value=lexicon.values[i],
                target_count=a,
                reference_count=b,
                target_size=n1,
                reference_size=n2,
                g2=g2_score(a, b, n1, n2),
                direction="over" if a * n2 > b * n1 else "under",
            )
        )
    rows.sort(key=lambda r: (-r.g2, r.value))
    return rows


def distribution(
    matches: Iterable[Match], reader: CorpusReader, key: str
) -> dict[str, int]:
    """Match counts per text-metadata category (missing key -> "unknown")."""
    counts: dict[str, int] = {}
    for match in matches:
        region = reader.region_of("text", match.start)
        if region is None:
            category = "unknown"
        else:
            category = reader.region_record("text", region.index).get(key, "unknown")
        counts[category] = counts.get(category, 0) + 1
    return counts


# -- subcorpus persistence ----------------------------------------------------


def _subcorpora_dir(reader: CorpusReader) -> Path:
    return Path(reader.descriptor.path) / "subcorpora"


def _merge_adjacent(spans: list[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    spans.sort()
    merged: list[tuple[int, int]] = []
    for start, end in spans:
        if merged and start <= merged[-1][1] + 1:
            merged[-1] = (merged[-1][0], max(end, merged[-1][1]))
        else:
            merged.append((start, end))
    return tuple(merged)


def define_subcorpus(
    reader: CorpusReader,
    name: str,
    where: Mapping[str, str] | None = None,
    text_ids: Sequence[str] | None = None,
) -> Subcorpus:
    """Create and persist a subcorpus from a metadata predicate.

    ``where`` is a conjunction of key=value equality tests over text
    metadata; alternatively ``text_ids`` picks texts explicitly. An empty
    result still creates the subcorpus but warns.
    """
    if not _SUBCORPUS_NAME_RE.match(name):
        raise ValueError(f"bad subcorpus name {name!r}")
    if (where is None) == (text_ids is None):
        raise ValueError("exactly one of 'where' and 'text_ids' must be given")
    directory = _subcorpora_dir(reader)
    path = directory / name
    if path.exists():
        raise DuplicateName(f"subcorpus {name!r} already exists for corpus {reader.name}")

    regions = reader.regions("text")
    records = [reader.region_record("text", i) for i in range(len(regions))]
    spans: list[tuple[int, int]] = []
    if where is not None:
        declared: set[str] = set()
        for record in records:
            declared.update(record.keys())
        for key in where:
            if key not in declared:
                raise UnknownMetadataKey(
                    f"metadata key {key!r} is not declared by any text in {reader.name}"
                )
        predicate = ",".join(f"{k}={v}" for k, v in where.items())
        for i, record in enumerate(records):
            if all(record.get(k) == v for k, v in where.items()):
                spans.append((int(regions[i, 0]), int(regions[i, 1])))
    else:
        wanted = set(text_ids)
        predicate = "texts:" + ",".join(text_ids)
        for i, record in enumerate(records):
            if record.get("id") in wanted:
                spans.append((int(regions[i, 0]), int(regions[i, 1])))

    subcorpus = Subcorpus(name, reader.name, _merge_adjacent(spans), predicate)
    if not subcorpus.spans:
        warnings.warn(
            f"subcorpus {name!r} matches no text", EmptySubcorpusWarning, stacklevel=2
        )
    directory.mkdir(parents=True, exist_ok=True)
    span_text = " ".join(f"{s}-{e}" for s, e in subcorpus.spans)
    path.write_text(
        f"corpus: {reader.name}\npredicate: {predicate}\nspans: {span_text}\n",
        encoding="utf-8",
    )
    return subcorpus


def load_subcorpus(reader: CorpusReader, name: str) -> Subcorpus:
    path = _subcorpora_dir(reader) / name
    if not path.is_file():
        raise KeyError(f"no subcorpus {name!r} for corpus {reader.name}")
    fields: dict[str, str] = {}
    for line in path.read_text(encoding="utf-8").splitlines():
        key, _, value = line.partition(":")
        fields[key.strip()] = value.strip()
    spans = []
    if fields.get("spans"):
        for part in fields["spans"].split():
            start, _, end = part.partition("-")
            spans.append((int(start), int(end)))
    return Subcorpus(name, reader.name, tuple(spans), fields.get("predicate", ""))


def list_subcorpora(reader: CorpusReader) -> list[Subcorpus]:
    directory = _subcorpora_dir(reader)
    if not directory.is_dir():
        return []
    return [load_subcorpus(reader, p.name) for p in sorted(directory.iterdir()) if p.is_file()]


def delete_subcorpus(reader: CorpusReader, name: str) -> None:
    path = _subcorpora_dir(reader) / name
    if not path.is_file():
        raise KeyError(f"no subcorpus {name!r} for corpus {reader.name}")
    path.unlink()


# -- delimited exports ---------------------------------------------------------


def format_frequency_tsv(freq: FrequencyList) -> str:
    """TSV with header: value, count."""
    lines = ["value\tcount"]
    lines.extend(f"{value}\t{count}" for value, count in freq.rows)
    return "\n".join(lines) + "\n"


def format_keywords_tsv(rows: Sequence[KeywordRow]) -> str:
    """TSV with header: value, target/reference counts and sizes, G2, direction."""
    lines = ["value\ttarget_count\treference_count\ttarget_size\treference_size\tg2\tdirection"]
    for r in rows:
        lines.append(
            f"{r.value}\t{r.target_count}\t{r.reference_count}"
            f"\t{r.target_size}\t{r.reference_size}\t{r.g2:.6f}\t{r.direction}"
        )
    return "\n".join(lines) + "\n"
