"""Token annotation: builtin lexicon lookup or an external tagger process.

The external protocol is deliberately plain so any line-based tagger fits:
the program receives one token per line (UTF-8, LF) in an input file, and
must write one ``word<TAB>pos<TAB>lemma`` line per input token, in order,
to an output file, exiting 0. The command template names both files via
``{input}`` and ``{output}`` placeholders, e.g.::

    mytagger --quiet portuguese.par {input} {output}

The whole batch goes through one process invocation.
"""

from __future__ import annotations

import shlex
import subprocess
import tempfile
import unicodedata
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence, Union

from ..model import Corpus, Sentence, TextUnit, Token

__all__ = [
    "AnnotatorLaunchFailure",
    "AnnotatorProtocolViolation",
    "ExternalAnnotator",
    "LexiconAnnotator",
    "annotate",
    "correct_lemmas",
    "load_lexicon_file",
]


class AnnotatorProtocolViolation(RuntimeError):
    """External annotator broke the line protocol (count or shape)."""


class AnnotatorLaunchFailure(RuntimeError):
    """External annotator could not be started or exited non-zero."""


@dataclass(frozen=True)
class LexiconAnnotator:
    """Annotate by lowercased-word lookup with a fallback tag.

    Punctuation tokens never hit the lexicon: a comma is tagged VIRG,
    every other punctuation token SENT, each with itself as lemma.
    Unknown words receive ``default_pos`` and their lowercased form as
    lemma.
    """

    entries: Mapping[str, tuple[str, str]] = field(default_factory=dict)
    default_pos: str = "NOM"

    def tag(self, word: str) -> tuple[str, str]:
        if word and all(unicodedata.category(c).startswith("P") for c in word):
            return ("VIRG" if word == "," else "SENT", word)
        hit = self.entries.get(word.lower())
        if hit is not None:
            return hit
        return self.default_pos, word.lower()


@dataclass(frozen=True)
class ExternalAnnotator:
    """Line-protocol adapter around an external tagging program."""

    command: str

    def __post_init__(self) -> None:
        if "{input}" not in self.command or "{output}" not in self.command:
            raise ValueError("command template must contain {input} and {output} placeholders")


Annotator = Union[LexiconAnnotator, ExternalAnnotator]


def load_lexicon_file(path: str | Path, default_pos: str = "NOM") -> LexiconAnnotator:
    """Read a ``word<TAB>pos<TAB>lemma`` lexicon file (one entry per line)."""
    entries: dict[str, tuple[str, str]] = {}
    for line_no, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        columns = line.split("\t")
        if len(columns) != 3:
            raise ValueError(f"{path}:{line_no}: expected 3 TAB-separated columns")
        entries[columns[0].lower()] = (columns[1], columns[2])
    return LexiconAnnotator(entries, default_pos)


def _run_external(annotator: ExternalAnnotator, words: list[str]) -> list[tuple[str, str, str]]:
    with tempfile.TemporaryDirectory(prefix="concord-annotate-") as tmp:
        in_path = Path(tmp) / "tokens.txt"
        out_path = Path(tmp) / "tagged.txt"
        in_path.write_text("".join(w + "\n" for w in words), encoding="utf-8")
        argv = [
            arg.format(input=str(in_path), output=str(out_path))
            for arg in shlex.split(annotator.command)
        ]
        try:
            proc = subprocess.run(argv, capture_output=True, text=True)
        except OSError as exc:
            raise AnnotatorLaunchFailure(f"cannot run {argv[0]!r}: {exc}") from exc
        if proc.returncode != 0:
            raise AnnotatorLaunchFailure(
                f"{argv[0]!r} exited with status {proc.returncode}: {proc.stderr.strip()}"
            )
        if not out_path.exists():
            raise AnnotatorProtocolViolation("annotator produced no output file")
        lines = out_path.read_text(encoding="utf-8").splitlines()
    if len(lines) != len(words):
        raise AnnotatorProtocolViolation(
            f"annotator returned {len(lines)} lines for {len(words)} tokens"
        )
    rows = []
    for line_no, line in enumerate(lines, 1):
        columns = line.split("\t")
        if len(columns) != 3:
            raise AnnotatorProtocolViolation(
                f"output line {line_no}: expected 3 TAB-separated columns, got {line!r}"
            )
        rows.append((columns[0], columns[1], columns[2]))
    return rows


def annotate(sentences: Sequence[Sequence[str]], annotator: Annotator) -> list[Sentence]:
    """Attach POS and lemma to tokenized sentences.

    Token count and order are preserved for every annotator; empty input
    sentences are dropped.
    """
    flat = [word for sentence in sentences for word in sentence]
    if isinstance(annotator, ExternalAnnotator):
        rows = _run_external(annotator, flat)
    else:
        rows = [(w, *annotator.tag(w)) for w in flat]
    out: list[Sentence] = []
    cursor = 0
    for sentence in sentences:
        n = len(sentence)
        if n == 0:
            continue
        out.append(Sentence(tuple(Token(*row) for row in rows[cursor:cursor + n])))
        cursor += n
    return out


def correct_lemmas(corpus: Corpus, corrections: Mapping[tuple[str, str], str]) -> Corpus:
    """Replace lemmas at matching (word, pos) keys; everything else unchanged.

    Returns a new corpus; the input is not modified.
    """
    if not corrections:
        return corpus
    texts = []
    for text in corpus.texts:
        sentences = []
        for sentence in text.sentences:
            tokens = tuple(
                Token(t.word, t.pos, corrections.get((t.word, t.pos), t.lemma))
                for t in sentence.tokens
            )
            sentences.append(Sentence(tokens))
        texts.append(TextUnit(text.id, dict(text.metadata), tuple(sentences)))
    return Corpus(name=corpus.name, texts=tuple(texts), tagset=corpus.tagset)
