from __future__ import annotations

import math
import random

import pytest

from concord.analytics import (
    DuplicateName,
    EmptyScope,
    EmptySubcorpusWarning,
    UnknownMetadataKey,
    define_subcorpus,
    delete_subcorpus,
    distribution,
    format_frequency_tsv,
    format_keywords_tsv,
    frequency_list,
    g2_score,
    keywords,
    list_subcorpora,
    load_subcorpus,
)
from concord.index import UnknownAttribute
from concord.query import Match, evaluate, parse_query
from conftest import encode_text
from oracle import random_corpus_vrt


class TestFrequencyList:
    def test_direct_counts(self, tmp_path):
        vrt = '<text id="t">\n<s>\na\tNOM\ta\na\tNOM\ta\nb\tNOM\tb\n</s>\n</text>\n'
        reader = encode_text(tmp_path, vrt, name="AAB")
        freq = frequency_list(reader, "word")
        assert freq.rows == (("a", 2), ("b", 1))
        assert freq.scope_size == 3

    def test_matches_lexicon_frequencies(self, tmp_path):
        reader = encode_text(tmp_path, random_corpus_vrt(random.Random(5), 2000), name="R")
        for attr in ("word", "pos", "lemma"):
            freq = frequency_list(reader, attr)
            lexicon = reader.lexicon(attr)
            assert dict(freq.rows) == {
                lexicon.values[i]: int(lexicon.freqs[i]) for i in range(len(lexicon))
                if int(lexicon.freqs[i])
            }

    def test_scope_restriction(self, mini_reader):
        sub = define_subcorpus(mini_reader, "just17", where={"century": "17"})
        freq = frequency_list(mini_reader, "word", scope=sub)
        assert dict(freq.rows) == {"isso": 1, "vai": 1}
        assert freq.scope_size == 2

    def test_top_k(self, tmp_path):
        vrt = '<text id="t">\n<s>\na\tNOM\ta\na\tNOM\ta\nb\tNOM\tb\n</s>\n</text>\n'
        reader = encode_text(tmp_path, vrt, name="AAB")
        assert frequency_list(reader, "word", top_k=1).rows == (("a", 2),)

    def test_ordering_count_desc_value_asc(self, tmp_path):
        vrt = ('<text id="t">\n<s>\nb\tNOM\tb\na\tNOM\ta\nc\tNOM\tc\n'
               'a\tNOM\ta\nb\tNOM\tb\n</s>\n</text>\n')
        reader = encode_text(tmp_path, vrt, name="ORD")
        assert frequency_list(reader, "word").rows == (("a", 2), ("b", 2), ("c", 1))

    def test_unknown_attribute(self, mini_reader):
        with pytest.raises(UnknownAttribute):
            frequency_list(mini_reader, "morph")

    def test_partition_additivity(self, mini_reader):
        a = define_subcorpus(mini_reader, "p16", where={"century": "16"})
        b = define_subcorpus(mini_reader, "p17", where={"century": "17"})
        full = dict(frequency_list(mini_reader, "word").rows)
        combined: dict[str, int] = {}
        for sub in (a, b):
            for value, count in frequency_list(mini_reader, "word", scope=sub).rows:
                combined[value] = combined.get(value, 0) + count
        assert combined == full

    def test_tsv_format(self, tmp_path):
        vrt = '<text id="t">\n<s>\na\tNOM\ta\nb\tNOM\tb\n</s>\n</text>\n'
        reader = encode_text(tmp_path, vrt, name="TSV")
        out = format_frequency_tsv(frequency_list(reader, "word"))
        assert out == "value\tcount\na\t1\nb\t1\n"


class TestG2:
    def test_direct_evaluation(self):
        a, b, n1, n2 = 10, 10, 100, 1000
        e1 = n1 * (a + b) / (n1 + n2)
        e2 = n2 * (a + b) / (n1 + n2)
        expected = 2 * (a * math.log(a / e1) + b * math.log(b / e2))
        assert g2_score(a, b, n1, n2) == pytest.approx(expected, rel=1e-12)

    def test_equal_rates_give_zero(self):
        assert g2_score(5, 50, 50, 500) == 0.0

    def test_absent_in_reference_reduction(self):
        a, n1, n2 = 7, 100, 900
        assert g2_score(a, 0, n1, n2) == pytest.approx(
            2 * a * math.log((n1 + n2) / n1), rel=1e-12
        )

    def test_non_negative_and_zero_iff_proportional(self):
        rng = random.Random(123)
        for _ in range(500):
            n1 = rng.randint(1, 10000)
            n2 = rng.randint(1, 10000)
            a = rng.randint(0, n1)
            b = rng.randint(0, n2)
            score = g2_score(a, b, n1, n2)
            assert score >= 0.0
            if a * n2 == b * n1:
                assert score == 0.0

    def test_symmetry_swaps_direction(self, mini_reader):
        sub16 = define_subcorpus(mini_reader, "s16", where={"century": "16"})
        sub17 = define_subcorpus(mini_reader, "s17", where={"century": "17"})
        forward = {r.value: r for r in keywords(mini_reader, "word", sub16, sub17, min_count=1)}
        backward = {r.value: r for r in keywords(mini_reader, "word", sub17, sub16, min_count=1)}
        for value, row in forward.items():
            if value in backward:
                assert backward[value].g2 == pytest.approx(row.g2, rel=1e-12)
                if row.g2 > 0:
                    assert {row.direction, backward[value].direction} == {"over", "under"}


class TestKeywords:
    def test_min_count_filters(self, mini_reader):
        rows = keywords(mini_reader, "word", min_count=4)
        assert [r.value for r in rows] == ["isso"]

    def test_identical_scopes_give_zero(self, mini_reader):
        rows = keywords(mini_reader, "word", target=None, reference=None, min_count=1)
        assert rows and all(r.g2 == 0.0 for r in rows)

    def test_empty_scope_rejected(self, mini_reader):
        with pytest.warns(EmptySubcorpusWarning):
            empty = define_subcorpus(mini_reader, "none", where={"century": "99"})
        with pytest.raises(EmptyScope):
            keywords(mini_reader, "word", target=empty, min_count=1)

    def test_sorted_by_g2_desc(self, tmp_path):
        reader = encode_text(tmp_path, random_corpus_vrt(random.Random(8), 3000), name="KW")
        sub = define_subcorpus(reader, "c16", where={"century": "16"})
        rows = keywords(reader, "word", target=sub, min_count=1)
        scores = [r.g2 for r in rows]
        assert scores == sorted(scores, reverse=True)

    def test_tsv_format_header(self, mini_reader):
        out = format_keywords_tsv(keywords(mini_reader, "word", min_count=1))
        header = out.splitlines()[0].split("\t")
        assert header == ["value", "target_count", "reference_count",
                          "target_size", "reference_size", "g2", "direction"]


class TestDistribution:
    def test_century_assignment(self, mini_reader):
        result = evaluate(parse_query('"isso"'), mini_reader)
        assert distribution(result.matches, mini_reader, "century") == {"16": 3, "17": 1}

    def test_no_matches(self, mini_reader):
        assert distribution([], mini_reader, "century") == {}

    def test_missing_key_counts_as_unknown(self, mini_reader):
        result = evaluate(parse_query('"isso"'), mini_reader)
        dist = distribution(result.matches, mini_reader, "author")
        assert dist == {"unknown": 4}

    def test_counts_sum_to_match_count(self, tmp_path):
        reader = encode_text(tmp_path, random_corpus_vrt(random.Random(21), 1500), name="D")
        result = evaluate(parse_query('[pos="NOM"]'), reader)
        dist = distribution(result.matches, reader, "century")
        assert sum(dist.values()) == len(result.matches)


class TestSubcorpora:
    def test_predicate_selects_matching_texts(self, mini_reader):
        sub = define_subcorpus(mini_reader, "c16", where={"century": "16"})
        assert sub.spans == ((0, 4),)
        assert sub.size == 5

    def test_text_id_list(self, mini_reader):
        sub = define_subcorpus(mini_reader, "only2", text_ids=["t2"])
        assert sub.spans == ((5, 6),)

    def test_empty_predicate_warns_but_creates(self, mini_reader):
        with pytest.warns(EmptySubcorpusWarning):
            sub = define_subcorpus(mini_reader, "empty", where={"century": "99"})
        assert sub.size == 0
        assert load_subcorpus(mini_reader, "empty").spans == ()

    def test_duplicate_name_rejected(self, mini_reader):
        define_subcorpus(mini_reader, "dup", where={"century": "16"})
        with pytest.raises(DuplicateName):
            define_subcorpus(mini_reader, "dup", where={"century": "17"})

    def test_unknown_metadata_key_rejected(self, mini_reader):
        with pytest.raises(UnknownMetadataKey):
            define_subcorpus(mini_reader, "bad", where={"decade": "1530"})

    def test_persistence_round_trip(self, mini_reader):
        define_subcorpus(mini_reader, "c16", where={"century": "16"})
        loaded = load_subcorpus(mini_reader, "c16")
        assert loaded.spans == ((0, 4),)
        assert loaded.predicate == "century=16"
        assert [s.name for s in list_subcorpora(mini_reader)] == ["c16"]
        delete_subcorpus(mini_reader, "c16")
        assert list_subcorpora(mini_reader) == []
        with pytest.raises(KeyError):
            load_subcorpus(mini_reader, "c16")

    def test_bad_name_rejected(self, mini_reader):
        with pytest.raises(ValueError):
            define_subcorpus(mini_reader, "has space", where={"century": "16"})
        with pytest.raises(ValueError):
            define_subcorpus(mini_reader, "../escape", where={"century": "16"})

    def test_exactly_one_selector_required(self, mini_reader):
        with pytest.raises(ValueError):
            define_subcorpus(mini_reader, "both", where={"a": "1"}, text_ids=["t1"])
        with pytest.raises(ValueError):
            define_subcorpus(mini_reader, "neither")


def test_distribution_with_matches_type(mini_reader):
    assert distribution([Match(0, 0)], mini_reader, "century") == {"16": 1}
