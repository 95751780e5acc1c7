"""Feature extraction tests: vocabulary, the 16 layout features, TF-IDF."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from docstruct.features import (
    LAYOUT_DIM,
    FeatureMode,
    HeaderVocabulary,
    TextLenGroup,
    VectorizerError,
    build_header_vocabulary,
    combine,
    extract_layout_features,
    fit_ngram_vectorizer,
    vectorize,
)
from docstruct.records import PageStats

from .test_ingest import make_record

EMPTY_VOCAB = HeaderVocabulary(words=frozenset(), min_frequency=100)


def stats(avg_font=10.0, avg_weight=400.0, avg_spacing=14.0, page=1):
    return PageStats(page_number=page, avg_font_size=avg_font,
                     avg_font_weight=avg_weight, avg_line_spacing=avg_spacing)


class TestHeaderVocabulary:
    def test_frequent_header_words_retained(self):
        # typical gold header lines, repeated well past the frequency floor
        headers = (["1 Introduction", "References", "Proof of Lemma",
                    "Appendix A", "Conclusions and the Future"] * 120)
        vocab = build_header_vocabulary(headers, min_frequency=100)
        assert {"introduction", "references", "proof", "appendix",
                "conclusions"} <= vocab.words
        # stopwords never enter the vocabulary, however frequent
        assert "the" not in vocab.words
        assert "of" not in vocab.words

    def test_count_above_floor_retained(self):
        vocab = build_header_vocabulary(["Results"] * 200, min_frequency=100)
        assert vocab.words == {"results"}

    def test_count_below_floor_dropped(self):
        vocab = build_header_vocabulary(["Results"] * 50, min_frequency=100)
        assert vocab.words == frozenset()

    def test_boundary_is_strict(self):
        vocab = build_header_vocabulary(["Results"] * 100, min_frequency=100)
        assert vocab.words == frozenset()

    def test_empty_corpus(self):
        assert build_header_vocabulary([], min_frequency=100).words == frozenset()

    def test_json_round_trip(self):
        vocab = build_header_vocabulary(["Results"] * 200, min_frequency=100)
        assert HeaderVocabulary.from_json(vocab.to_json()) == vocab


class TestLayoutFeatures:
    def test_numbered_bold_header(self):
        line = make_record(text="1.2 Methods", font_size=14.0,
                           font_weight=700.0, is_bold=True, line_index=5,
                           y_start=600.0)
        prev = make_record(text="body text before", line_index=4, y_start=614.0)
        nxt = make_record(text="body text after", line_index=6, y_start=586.0)
        f = extract_layout_features(line, prev, nxt, stats(), EMPTY_VOCAB)
        assert f.number_dot and f.seq_number and f.header_1
        assert f.font_weight and f.title_case
        assert not f.voc
        assert not f.header_0 and not f.header_2

    def test_plain_sentence_triggers_nothing(self):
        line = make_record(text="the quick brown fox ran.", line_index=1,
                           y_start=686.0)
        prev = make_record(text="an earlier plain line", line_index=0,
                           y_start=700.0)
        f = extract_layout_features(line, prev, None, stats(), EMPTY_VOCAB)
        booleans = (f.without_verb_higher_line_space, f.font_weight,
                    f.bold_italic, f.at_least_3_lines_upper,
                    f.higher_line_space, f.number_dot, f.seq_number, f.colon,
                    f.header_0, f.header_1, f.header_2, f.title_case,
                    f.all_upper, f.voc)
        assert not any(booleans)
        assert f.pos_nnp == 0
        assert f.text_len_group is TextLenGroup.MEDIUM

    def test_upper_header_in_vocabulary(self):
        vocab = HeaderVocabulary(words=frozenset({"references"}),
                                 min_frequency=100)
        line = make_record(text="REFERENCES", line_index=3, y_start=600.0)
        f = extract_layout_features(line, None, None, stats(), vocab)
        assert f.all_upper and f.voc

    def test_higher_line_space_uses_previous_gap(self):
        line = make_record(text="2 Results", line_index=2, y_start=600.0)
        prev = make_record(text="body", line_index=1, y_start=636.0)
        f = extract_layout_features(line, prev, None, stats(avg_spacing=14.0),
                                    EMPTY_VOCAB)
        assert f.higher_line_space            # 36 > 1.5 * 14
        assert f.without_verb_higher_line_space

    def test_higher_line_space_falls_back_to_next(self):
        line = make_record(text="2 Results", line_index=0, y_start=700.0)
        nxt = make_record(text="body", line_index=1, y_start=660.0)
        f = extract_layout_features(line, None, nxt, stats(avg_spacing=14.0),
                                    EMPTY_VOCAB)
        assert f.higher_line_space

    def test_neighbor_on_other_page_ignored(self):
        line = make_record(text="2 Results", line_index=7, y_start=700.0,
                           page_number=2)
        prev = make_record(text="body", line_index=6, y_start=80.0,
                           page_number=1)
        f = extract_layout_features(line, prev, None, stats(page=2),
                                    EMPTY_VOCAB)
        assert not f.higher_line_space

    def test_roman_and_letter_numbering(self):
        for text in ("IV. Discussion", "A. Setup"):
            line = make_record(text=text, line_index=1)
            f = extract_layout_features(line, None, None, stats(), EMPTY_VOCAB)
            assert f.header_0, text

    def test_three_upper_lines(self):
        mk = lambda i, t: make_record(text=t, line_index=i, y_start=700 - 14 * i)
        line = mk(1, "Second Line")
        f = extract_layout_features(line, mk(0, "First line"),
                                    mk(2, "Third line"), stats(), EMPTY_VOCAB)
        assert f.at_least_3_lines_upper

    def test_length_groups(self):
        cases = [("1.2 Methods", TextLenGroup.SHORT),
                 ("one two three four five six seven", TextLenGroup.MEDIUM),
                 (" ".join(["word"] * 25), TextLenGroup.LONG)]
        for text, expected in cases:
            line = make_record(text=text, line_index=0)
            f = extract_layout_features(line, None, None, stats(), EMPTY_VOCAB)
            assert f.text_len_group is expected, text

    def test_extraction_is_pure(self):
        line = make_record(text="3.1 Analysis: the Results", is_bold=True,
                           font_weight=700.0, line_index=2, y_start=650.0)
        prev = make_record(text="body", line_index=1, y_start=690.0)
        args = (line, prev, None, stats(), EMPTY_VOCAB)
        assert extract_layout_features(*args) == extract_layout_features(*args)

    def test_encoding_layout(self):
        line = make_record(text="1.2 Methods", font_size=14.0,
                           font_weight=700.0, is_bold=True, line_index=0)
        f = extract_layout_features(line, None, None, stats(), EMPTY_VOCAB)
        vec = f.encode()
        assert vec.shape == (LAYOUT_DIM,)
        assert vec[0] == f.pos_nnp          # counts stay raw
        assert vec[7] == 0.0                # short line
        assert vec[11] == 1.0               # header_1 slot
        assert set(np.unique(vec[1:7])) <= {0.0, 1.0}

    @given(st.text(alphabet="abcXYZ .:123", max_size=40))
    def test_voc_flag_matches_membership(self, text):
        vocab = HeaderVocabulary(words=frozenset({"abc", "x"}),
                                 min_frequency=1)
        line = make_record(text=text, line_index=0)
        f = extract_layout_features(line, None, None, stats(), vocab)
        import re
        tokens = [t.lower() for t in re.findall(r"[A-Za-z]+", text)]
        assert f.voc == any(t in vocab.words for t in tokens)


class TestNgramVectorizer:
    def corpus(self, n, term="common", rare_docs=0, rare="zebra"):
        docs = [f"{term} filler{i}" for i in range(n)]
        for i in range(rare_docs):
            docs[i] += f" {rare}"
        return docs

    def test_too_few_documents(self):
        with pytest.raises(VectorizerError, match="20"):
            fit_ngram_vectorizer(["a"] * 19)

    def test_term_in_every_document_excluded(self):
        v = fit_ngram_vectorizer(self.corpus(20))
        assert "common" not in v.vocabulary     # df 20 > floor(0.95*20) = 19

    def test_term_in_half_included(self):
        docs = ["shared x"] * 10 + ["other y"] * 10
        v = fit_ngram_vectorizer(docs)
        assert "shared" in v.vocabulary

    def test_min_df_boundary_n40(self):
        docs = self.corpus(40, rare_docs=2)
        v = fit_ngram_vectorizer(docs)
        # df=2 meets ceil(0.05*40)=2 exactly
        assert "zebra" in v.vocabulary
        docs = self.corpus(41, rare_docs=2)
        v = fit_ngram_vectorizer(docs)
        # ceil(0.05*41)=3 now excludes df=2
        assert "zebra" not in v.vocabulary

    def test_idf_formula(self):
        docs = ["apple pie"] * 8 + ["banana split"] * 12
        v = fit_ngram_vectorizer(docs)
        n = 20
        assert v.idf[v.vocabulary["apple"]] == pytest.approx(
            math.log((1 + n) / (1 + 8)) + 1.0)
        assert v.idf[v.vocabulary["banana split"]] == pytest.approx(
            math.log((1 + n) / (1 + 12)) + 1.0)

    def test_trigrams_present(self):
        docs = ["alpha beta gamma delta"] * 10 + ["other words here"] * 10
        v = fit_ngram_vectorizer(docs)
        assert "alpha beta gamma" in v.vocabulary

    def test_json_round_trip(self):
        docs = ["apple pie"] * 8 + ["banana split"] * 12
        v = fit_ngram_vectorizer(docs)
        revived = type(v).from_json(v.to_json())
        assert revived.vocabulary == v.vocabulary
        np.testing.assert_array_equal(revived.idf, v.idf)

    @given(st.lists(st.lists(st.sampled_from("abcdef"), min_size=1,
                             max_size=4).map(" ".join),
                    min_size=20, max_size=40))
    def test_df_bounds_hold_for_every_term(self, docs):
        from docstruct.features import _ngrams, _word_tokens
        v = fit_ngram_vectorizer(docs)
        n = len(docs)
        lo, hi = math.ceil(0.05 * n), math.floor(0.95 * n)
        for term in v.vocabulary:
            df = sum(1 for d in docs
                     if term in set(_ngrams(_word_tokens(d), (1, 3))))
            assert lo <= df <= hi, term


class TestVectorize:
    def fitted(self):
        docs = ["apple pie"] * 8 + ["banana split"] * 12
        return fit_ngram_vectorizer(docs)

    def test_empty_string_zero_vector(self):
        assert vectorize(self.fitted(), "") == {}

    def test_single_vocabulary_unigram(self):
        v = self.fitted()
        vec = vectorize(v, "apple")
        assert list(vec) == [v.vocabulary["apple"]]
        assert vec[v.vocabulary["apple"]] == pytest.approx(1.0)

    def test_two_term_weights_hand_computed(self):
        v = self.fitted()
        vec = vectorize(v, "apple banana")
        idf_a = math.log(21 / 9) + 1.0
        idf_b = math.log(21 / 13) + 1.0
        norm = math.sqrt(idf_a ** 2 + idf_b ** 2)
        assert vec[v.vocabulary["apple"]] == pytest.approx(idf_a / norm)
        assert vec[v.vocabulary["banana"]] == pytest.approx(idf_b / norm)

    def test_out_of_vocabulary_ignored(self):
        assert vectorize(self.fitted(), "zzz qqq") == {}

    @given(st.text(alphabet="ab ", max_size=30))
    def test_l2_norm_zero_or_one(self, text):
        docs = ["a b"] * 10 + ["b c"] * 10
        v = fit_ngram_vectorizer(docs)
        vec = vectorize(v, text)
        norm = math.sqrt(sum(w * w for w in vec.values()))
        assert norm == 0.0 or abs(norm - 1.0) <= 1e-9


class TestCombine:
    def layout(self):
        line = make_record(text="1.2 Methods", line_index=0)
        return extract_layout_features(line, None, None, stats(), EMPTY_VOCAB)

    def test_layout_only_length(self):
        fv = combine(self.layout())
        assert len(fv) == 16
        assert fv.mode is FeatureMode.LAYOUT_ONLY

    def test_combined_layout_first(self):
        fv = combine(self.layout(), {3: 0.6, 40: 0.8}, text_dim=100)
        assert len(fv) == 116
        assert fv.mode is FeatureMode.COMBINED
        dense = fv.to_array()
        np.testing.assert_array_equal(dense[:16], self.layout().encode())
        assert dense[16 + 3] == 0.6 and dense[16 + 40] == 0.8

    def test_zero_text_vector_gives_zero_tail(self):
        fv = combine(self.layout(), {}, text_dim=50)
        dense = fv.to_array()
        assert len(fv) == 66
        assert not dense[16:].any()
