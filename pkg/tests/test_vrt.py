from __future__ import annotations

import warnings

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from concord.model import Corpus, Sentence, TextUnit, Token, count_tokens
from concord.vrt import (
    DuplicateTextId,
    InvalidAttributeSyntax,
    MalformedLine,
    UnbalancedStructure,
    UnknownStructuralTag,
    VrtWarning,
    parse_vrt,
    write_vrt,
)

PAPER_STYLE_EXAMPLE = """<text id="textid">
<s>
Word1\tPOS1\tLemma1
Word2\tPOS2\tLemma2
Word3\tPOS3\tLemma3
</s>
</text>
"""


class TestParse:
    def test_three_token_example(self):
        corpus = parse_vrt(PAPER_STYLE_EXAMPLE)
        assert len(corpus.texts) == 1
        assert corpus.texts[0].id == "textid"
        assert len(corpus.texts[0].sentences) == 1
        assert count_tokens(corpus) == 3
        assert corpus.texts[0].sentences[0].tokens[0] == Token("Word1", "POS1", "Lemma1")

    def test_empty_input(self):
        corpus = parse_vrt("")
        assert corpus.texts == ()
        assert count_tokens(corpus) == 0

    def test_two_column_line_is_malformed(self):
        text = '<text id="t">\n<s>\ncasa\tNOM\n</s>\n</text>\n'
        with pytest.raises(MalformedLine) as err:
            parse_vrt(text)
        assert err.value.line_no == 3

    def test_four_column_line_is_malformed(self):
        text = '<text id="t">\n<s>\na\tb\tc\td\n</s>\n</text>\n'
        with pytest.raises(MalformedLine):
            parse_vrt(text)

    def test_close_without_open(self):
        with pytest.raises(UnbalancedStructure):
            parse_vrt('<text id="t">\n</s>\n</text>\n')

    def test_unclosed_text_at_eof(self):
        with pytest.raises(UnbalancedStructure):
            parse_vrt('<text id="t">\n<s>\na\tb\tc\n</s>\n')

    def test_token_outside_sentence(self):
        with pytest.raises(UnbalancedStructure):
            parse_vrt('<text id="t">\na\tb\tc\n</text>\n')

    def test_nested_text_rejected(self):
        with pytest.raises(UnbalancedStructure):
            parse_vrt('<text id="a">\n<text id="b">\n</text>\n</text>\n')

    def test_duplicate_text_id(self):
        with pytest.raises(DuplicateTextId):
            parse_vrt('<text id="t">\n<s>\na\tb\tc\n</s>\n</text>\n'
                      '<text id="t">\n<s>\na\tb\tc\n</s>\n</text>\n')

    def test_bad_attribute_syntax(self):
        with pytest.raises(InvalidAttributeSyntax):
            parse_vrt("<text id=unquoted>\n</text>\n")

    def test_text_requires_id(self):
        with pytest.raises(InvalidAttributeSyntax):
            parse_vrt('<text century="16">\n</text>\n')

    def test_unknown_tag_strict_vs_lenient(self):
        text = '<doc>\n<text id="t">\n<s>\na\tb\tc\n</s>\n</text>\n'
        with pytest.raises(UnknownStructuralTag):
            parse_vrt(text)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            corpus = parse_vrt(text, lenient=True)
        assert count_tokens(corpus) == 1
        assert any(issubclass(w.category, VrtWarning) for w in caught)

    def test_empty_sentence_dropped_with_warning(self):
        text = '<text id="t">\n<s>\n</s>\n<s>\na\tb\tc\n</s>\n</text>\n'
        with pytest.warns(VrtWarning):
            corpus = parse_vrt(text)
        assert len(corpus.texts[0].sentences) == 1

    def test_empty_text_dropped_with_warning(self):
        text = '<text id="t">\n</text>\n<text id="u">\n<s>\na\tb\tc\n</s>\n</text>\n'
        with pytest.warns(VrtWarning):
            corpus = parse_vrt(text)
        assert [t.id for t in corpus.texts] == ["u"]

    def test_crlf_accepted(self):
        text = PAPER_STYLE_EXAMPLE.replace("\n", "\r\n")
        assert parse_vrt(text) == parse_vrt(PAPER_STYLE_EXAMPLE)

    def test_positions_count_token_lines_only(self):
        corpus = parse_vrt(PAPER_STYLE_EXAMPLE)
        words = [t.word for t in corpus.iter_tokens()]
        assert words == ["Word1", "Word2", "Word3"]


class TestWrite:
    def test_round_trip_of_example(self):
        corpus = parse_vrt(PAPER_STYLE_EXAMPLE)
        assert parse_vrt(write_vrt(corpus)) == corpus

    def test_metadata_header_format(self):
        corpus = Corpus(texts=(TextUnit(
            "t1", {"century": "16"},
            (Sentence((Token("a", "NOM", "a"),)),),
        ),))
        assert write_vrt(corpus).splitlines()[0] == '<text id="t1" century="16">'

    def test_attribute_values_escaped(self):
        corpus = Corpus(texts=(TextUnit(
            "t1", {"title": 'diz "sim" & <sai>'},
            (Sentence((Token("a", "NOM", "a"),)),),
        ),))
        header = write_vrt(corpus).splitlines()[0]
        assert "&quot;sim&quot;" in header
        assert "&amp;" in header and "&lt;sai&gt;" in header
        assert parse_vrt(write_vrt(corpus)) == corpus

    def test_empty_corpus_writes_empty(self):
        assert write_vrt(Corpus()) == ""


_word = st.text(
    alphabet=st.characters(blacklist_characters="\t\n\r", blacklist_categories=("Cs",)),
    min_size=1, max_size=8,
)
_tagish = st.sampled_from(["NOM", "V", "ADJ", "P", "PREP+DET", "X"])


@st.composite
def corpora(draw) -> Corpus:
    n_texts = draw(st.integers(0, 4))
    texts = []
    for i in range(n_texts):
        meta_keys = draw(st.lists(
            st.from_regex(r"[a-z_][a-z0-9_]{0,5}", fullmatch=True).filter(lambda k: k != "id"),
            max_size=3, unique=True,
        ))
        metadata = {k: draw(st.text(max_size=6)) for k in meta_keys}
        sentences = []
        for _ in range(draw(st.integers(1, 4))):
            tokens = tuple(
                Token(draw(_word), draw(_tagish), draw(_word))
                for _ in range(draw(st.integers(1, 5)))
            )
            sentences.append(Sentence(tokens))
        texts.append(TextUnit(f"t{i}", metadata, tuple(sentences)))
    return Corpus(texts=tuple(texts))


@settings(max_examples=60, deadline=None)
@given(corpora())
def test_round_trip_property(corpus):
    assert parse_vrt(write_vrt(corpus)) == corpus


@settings(max_examples=60, deadline=None)
@given(corpora())
def test_count_matches_flattened_length(corpus):
    assert count_tokens(corpus) == len(list(corpus.iter_tokens()))
