from __future__ import annotations

import stat
import sys
from pathlib import Path

import pytest

from concord.model import Corpus, Sentence, TextUnit, Token, count_tokens
from concord.pipeline.annotate import (
    AnnotatorLaunchFailure,
    AnnotatorProtocolViolation,
    ExternalAnnotator,
    LexiconAnnotator,
    annotate,
    correct_lemmas,
    load_lexicon_file,
)

ECHO_TAGGER = """#!{python}
import sys
with open(sys.argv[1], encoding="utf-8") as fh:
    words = fh.read().splitlines()
with open(sys.argv[2], "w", encoding="utf-8") as out:
    for w in words:
        out.write(f"{{w}}\\tNOM\\t{{w.lower()}}\\n")
"""

SHORT_TAGGER = """#!{python}
import sys
with open(sys.argv[1], encoding="utf-8") as fh:
    words = fh.read().splitlines()
with open(sys.argv[2], "w", encoding="utf-8") as out:
    for w in words[:-1]:
        out.write(f"{{w}}\\tNOM\\t{{w}}\\n")
"""


def _script(tmp_path: Path, name: str, template: str) -> str:
    path = tmp_path / name
    path.write_text(template.format(python=sys.executable), encoding="utf-8")
    path.chmod(path.stat().st_mode | stat.S_IXUSR)
    return str(path)


class TestLexiconAnnotator:
    def test_known_word_lookup(self):
        annotator = LexiconAnnotator({"isso": ("P", "isso")})
        [sentence] = annotate([["isso"]], annotator)
        assert sentence.tokens == (Token("isso", "P", "isso"),)

    def test_lookup_is_lowercased(self):
        annotator = LexiconAnnotator({"isso": ("P", "isso")})
        [sentence] = annotate([["Isso"]], annotator)
        assert sentence.tokens[0] == Token("Isso", "P", "isso")

    def test_unknown_word_gets_default(self):
        [sentence] = annotate([["zzz"]], LexiconAnnotator(default_pos="NOM"))
        assert sentence.tokens[0] == Token("zzz", "NOM", "zzz")

    def test_punctuation_tags(self):
        [sentence] = annotate([[",", ".", "«", "..."]], LexiconAnnotator())
        assert [t.pos for t in sentence.tokens] == ["VIRG", "SENT", "SENT", "SENT"]
        assert [t.lemma for t in sentence.tokens] == [",", ".", "«", "..."]

    def test_token_count_and_order_preserved(self):
        sentences = [["um", "dois"], ["três"], [], ["quatro", ",", "cinco"]]
        out = annotate(sentences, LexiconAnnotator())
        assert [len(s) for s in out] == [2, 1, 3]
        assert [t.word for s in out for t in s.tokens] == [
            "um", "dois", "três", "quatro", ",", "cinco",
        ]

    def test_lexicon_file_loader(self, tmp_path):
        path = tmp_path / "lex.tsv"
        path.write_text("Isso\tP\tisso\ncasa\tNOM\tcasa\n", encoding="utf-8")
        annotator = load_lexicon_file(path)
        assert annotator.tag("isso") == ("P", "isso")
        bad = tmp_path / "bad.tsv"
        bad.write_text("only-one-column\n", encoding="utf-8")
        with pytest.raises(ValueError):
            load_lexicon_file(bad)


class TestExternalAnnotator:
    def test_template_requires_placeholders(self):
        with pytest.raises(ValueError):
            ExternalAnnotator("tagger model.par")

    def test_echo_tagger_round_trip(self, tmp_path):
        script = _script(tmp_path, "echo_tagger.py", ECHO_TAGGER)
        annotator = ExternalAnnotator(f"{sys.executable} {script} {{input}} {{output}}")
        out = annotate([["Olá", "mundo"], ["Sim"]], annotator)
        assert [t.word for s in out for t in s.tokens] == ["Olá", "mundo", "Sim"]
        assert out[0].tokens[0].lemma == "olá"

    def test_line_count_mismatch_is_protocol_violation(self, tmp_path):
        script = _script(tmp_path, "short_tagger.py", SHORT_TAGGER)
        annotator = ExternalAnnotator(f"{sys.executable} {script} {{input}} {{output}}")
        with pytest.raises(AnnotatorProtocolViolation):
            annotate([["um", "dois", "três"]], annotator)

    def test_missing_program_is_launch_failure(self):
        annotator = ExternalAnnotator("/nonexistent/tagger {input} {output}")
        with pytest.raises(AnnotatorLaunchFailure):
            annotate([["x"]], annotator)

    def test_nonzero_exit_is_launch_failure(self, tmp_path):
        script = tmp_path / "fail.py"
        script.write_text("import sys; sys.exit(3)", encoding="utf-8")
        annotator = ExternalAnnotator(f"{sys.executable} {script} {{input}} {{output}}")
        with pytest.raises(AnnotatorLaunchFailure):
            annotate([["x"]], annotator)


class TestCorrectLemmas:
    def _corpus(self) -> Corpus:
        tokens = (Token("foy", "V", "foy"), Token("foy", "NOM", "foy"))
        return Corpus(texts=(TextUnit("t1", {}, (Sentence(tokens),)),))

    def test_empty_map_is_identity(self):
        corpus = self._corpus()
        assert correct_lemmas(corpus, {}) is corpus

    def test_matching_key_replaces_lemma(self):
        fixed = correct_lemmas(self._corpus(), {("foy", "V"): "ser"})
        tokens = fixed.texts[0].sentences[0].tokens
        assert tokens[0] == Token("foy", "V", "ser")

    def test_key_includes_pos(self):
        fixed = correct_lemmas(self._corpus(), {("foy", "V"): "ser"})
        tokens = fixed.texts[0].sentences[0].tokens
        assert tokens[1] == Token("foy", "NOM", "foy")

    def test_input_not_mutated(self):
        corpus = self._corpus()
        correct_lemmas(corpus, {("foy", "V"): "ser"})
        assert corpus.texts[0].sentences[0].tokens[0].lemma == "foy"
        assert count_tokens(corpus) == 2
