"""Feature extraction for line classification.

Two feature families are produced for every text line:

* 16 hand-designed layout features (counts, booleans and one ordinal)
  computed from the line text, its neighbours and per-page statistics;
* optional TF-IDF weights over word 1- to 3-grams of the line text.

The layout features encode to a fixed 16-slot numeric vector (see
``LayoutFeatures.encode``); combined vectors put those 16 slots first and
the n-gram weights after them.

Part-of-speech counts use a deliberately tiny heuristic tagger (function
word list, verb list, capitalization and noun suffixes) so the package
stays dependency-free and deterministic.
"""

from __future__ import annotations

import json
import math
import re
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Iterable

import numpy as np

from .records import LineRecord, PageStats
from .stopwords import STOPWORDS

# Tokens that may stay lowercase inside a title-case line.
_TITLE_FUNCTION_WORDS = frozenset(
    "a an the of in on at to for with by from and or but nor as via per vs".split()
)

# Closed verb list: auxiliaries plus high-frequency verbs.  Used only to
# estimate "line contains no verb"; misses are acceptable.
_VERB_WORDS = frozenset("""
am is are was were be been being do does did done has have had having
will would shall should can could may might must went go goes gone get
gets got give gives gave take takes took make makes made use uses used
show shows showed shown see sees saw seen run runs ran say says said
describe describes described present presents presented propose proposes
proposed provide provides provided contain contains contained include
includes included require requires required
""".split())

_NOUN_SUFFIXES = ("tion", "sion", "ment", "ness", "ance", "ence", "ship",
                  "hood", "ism", "ity", "logy", "graphy", "ics")

# Numbering patterns at the start of a line.  header_0 is a flat number
# ("3 ", "IV.", "A."), header_1 a dotted pair ("3.1"), header_2 a dotted
# triple ("3.1.2").
_HEADER0_DIGIT = re.compile(r"^\d+[.)]?\s")
_HEADER0_ROMAN = re.compile(r"^[IVXLCDM]+[.)]\s")
_HEADER0_LETTER = re.compile(r"^[A-Za-z][.)]\s")
_HEADER1 = re.compile(r"^\d+\.\d+")
_HEADER2 = re.compile(r"^\d+\.\d+\.\d+")
_SEQ_NUMBER = re.compile(r"^\d+([.)]\d+)*[.)]?(\s|$)")
_NUMBER_DOT = re.compile(r"\d\.")
_ALPHA = re.compile(r"[A-Za-z]+")
_WORD = re.compile(r"[a-z0-9]+")

# Spacing must exceed this multiple of the page average to count as a
# section-style gap rather than an ordinary paragraph gap.
HIGHER_SPACE_FACTOR = 1.5

# text_len_group boundaries, in whitespace tokens.
SHORT_MAX_TOKENS = 4
MEDIUM_MAX_TOKENS = 20


class TextLenGroup(Enum):
    SHORT = 0
    MEDIUM = 1
    LONG = 2


class FeatureMode(Enum):
    LAYOUT_ONLY = "layout"
    COMBINED = "combined"


class VectorizerError(ValueError):
    pass


def _alpha_tokens(text: str) -> list[str]:
    return _ALPHA.findall(text)


def _count_nouns(tokens: list[str]) -> int:
    """Heuristic noun count: capitalized non-initial tokens or noun suffixes."""
    count = 0
    for i, token in enumerate(tokens):
        lower = token.lower()
        if lower in _TITLE_FUNCTION_WORDS or lower in _VERB_WORDS:
            continue
        if i > 0 and token[0].isupper():
            count += 1
        elif lower.endswith(_NOUN_SUFFIXES):
            count += 1
    return count


def _count_verbs(tokens: list[str]) -> int:
    return sum(1 for token in tokens if token.lower() in _VERB_WORDS)


def _is_title_case(tokens: list[str]) -> bool:
    """Every significant token strictly capitalized ("Related Work")."""
    significant = 0
    for token in tokens:
        if token.lower() in _TITLE_FUNCTION_WORDS:
            continue
        if not re.fullmatch(r"[A-Z][a-z]*", token):
            return False
        significant += 1
    return significant > 0


@dataclass(frozen=True, slots=True)
class HeaderVocabulary:
    """Frequent non-stopword words seen in gold section-header lines."""

    words: frozenset[str]
    min_frequency: int

    def __contains__(self, token: str) -> bool:
        return token.lower() in self.words

    def to_json(self) -> str:
        return json.dumps({"min_frequency": self.min_frequency,
                           "words": sorted(self.words)})

    @classmethod
    def from_json(cls, payload: str) -> "HeaderVocabulary":
        data = json.loads(payload)
        return cls(words=frozenset(data["words"]),
                   min_frequency=int(data["min_frequency"]))


def build_header_vocabulary(header_lines: Iterable[str],
                            stopwords: frozenset[str] = STOPWORDS,
                            min_frequency: int = 100) -> HeaderVocabulary:
    """Collect alphabetic header words with corpus frequency above a floor.

    Tokens are lowercased and counted across all header lines; a word is
    retained iff its count exceeds ``min_frequency`` and it is not a
    common English stopword.
    """
    if min_frequency < 1:
        raise ValueError(f"min_frequency must be >= 1, got {min_frequency}")
    counts: Counter[str] = Counter()
    for line in header_lines:
        counts.update(token.lower() for token in _alpha_tokens(line))
    words = frozenset(word for word, count in counts.items()
                      if count > min_frequency and word not in stopwords)
    return HeaderVocabulary(words=words, min_frequency=min_frequency)


@dataclass(frozen=True, slots=True)
class LayoutFeatures:
    """The 16 hand-designed layout features of one line."""

    pos_nnp: int
    without_verb_higher_line_space: bool
    font_weight: bool
    bold_italic: bool
    at_least_3_lines_upper: bool
    higher_line_space: bool
    number_dot: bool
    text_len_group: TextLenGroup
    seq_number: bool
    colon: bool
    header_0: bool
    header_1: bool
    header_2: bool
    title_case: bool
    all_upper: bool
    voc: bool

    def encode(self) -> np.ndarray:
        """Fixed numeric encoding: field order above, booleans as 0/1,
        ``text_len_group`` as 0 (short) / 1 (medium) / 2 (long)."""
        return np.array([
            float(self.pos_nnp),
            float(self.without_verb_higher_line_space),
            float(self.font_weight),
            float(self.bold_italic),
            float(self.at_least_3_lines_upper),
            float(self.higher_line_space),
            float(self.number_dot),
            float(self.text_len_group.value),
            float(self.seq_number),
            float(self.colon),
            float(self.header_0),
            float(self.header_1),
            float(self.header_2),
            float(self.title_case),
            float(self.all_upper),
            float(self.voc),
        ])


LAYOUT_DIM = 16


def _gap(a: LineRecord | None, b: LineRecord) -> float | None:
    if a is None or a.page_number != b.page_number:
        return None
    return abs(a.y_start - b.y_start)


def _starts_upper(line: LineRecord | None) -> bool:
    if line is None:
        return False
    text = line.text.strip()
    return bool(text) and text[0].isupper()


def extract_layout_features(line: LineRecord,
                            prev_line: LineRecord | None,
                            next_line: LineRecord | None,
                            stats: PageStats,
                            vocab: HeaderVocabulary) -> LayoutFeatures:
    """Compute the 16 layout features for one line.

    ``prev_line`` / ``next_line`` are the document-order neighbours (pass
    None at boundaries).  Spacing features prefer the gap to the previous
    line and fall back to the gap to the next one; neighbours on another
    page do not count.  ``stats`` must be the page statistics of
    ``line.page_number``.
    """
    text = line.text.strip()
    tokens = text.split()
    alpha = _alpha_tokens(text)

    gap = _gap(prev_line, line)
    if gap is None:
        gap = _gap(next_line, line)
    higher_line_space = (gap is not None
                         and gap > HIGHER_SPACE_FACTOR * stats.avg_line_spacing)

    n_tokens = len(tokens)
    if n_tokens <= SHORT_MAX_TOKENS:
        length_group = TextLenGroup.SHORT
    elif n_tokens <= MEDIUM_MAX_TOKENS:
        length_group = TextLenGroup.MEDIUM
    else:
        length_group = TextLenGroup.LONG

    header_0 = bool(_HEADER0_DIGIT.match(text) or _HEADER0_ROMAN.match(text)
                    or _HEADER0_LETTER.match(text))

    return LayoutFeatures(
        pos_nnp=_count_nouns(tokens),
        without_verb_higher_line_space=(higher_line_space
                                        and _count_verbs(tokens) == 0),
        font_weight=line.font_weight > stats.avg_font_weight,
        bold_italic=line.is_bold or line.is_italic,
        at_least_3_lines_upper=(_starts_upper(line) and _starts_upper(prev_line)
                                and _starts_upper(next_line)),
        higher_line_space=higher_line_space,
        number_dot=bool(_NUMBER_DOT.search(text)),
        text_len_group=length_group,
        seq_number=bool(_SEQ_NUMBER.match(text)),
        colon=":" in text,
        header_0=header_0,
        header_1=bool(_HEADER1.match(text)),
        header_2=bool(_HEADER2.match(text)),
        title_case=_is_title_case(alpha),
        all_upper=bool(alpha) and all(t.isupper() for t in alpha),
        voc=any(token.lower() in vocab.words for token in alpha),
    )


def _word_tokens(text: str) -> list[str]:
    return _WORD.findall(text.lower())


def _ngrams(tokens: list[str], ngram_range: tuple[int, int]) -> list[str]:
    lo, hi = ngram_range
    grams = []
    for n in range(lo, hi + 1):
        grams.extend(" ".join(tokens[i:i + n])
                     for i in range(len(tokens) - n + 1))
    return grams


@dataclass(frozen=True)
class NgramVectorizer:
    """TF-IDF weights over word n-grams with document-frequency filtering.

    Retained terms satisfy ``ceil(min_df*N) <= df <= floor(max_df*N)``;
    idf uses the smoothed form ``ln((1+N)/(1+df)) + 1`` so no retained
    term can divide by zero.  Vocabulary indices follow lexicographic
    term order, which also fixes the serialization layout.
    """

    vocabulary: dict[str, int]
    idf: np.ndarray
    ngram_range: tuple[int, int] = (1, 3)
    min_df: float = 0.05
    max_df: float = 0.95

    @property
    def size(self) -> int:
        return len(self.vocabulary)

    def to_json(self) -> str:
        terms = sorted(self.vocabulary, key=self.vocabulary.get)
        return json.dumps({
            "ngram_range": list(self.ngram_range),
            "min_df": self.min_df,
            "max_df": self.max_df,
            "terms": terms,
            "idf": [float(x) for x in self.idf],
        })

    @classmethod
    def from_json(cls, payload: str) -> "NgramVectorizer":
        data = json.loads(payload)
        return cls(
            vocabulary={term: i for i, term in enumerate(data["terms"])},
            idf=np.asarray(data["idf"], dtype=np.float64),
            ngram_range=tuple(data["ngram_range"]),
            min_df=float(data["min_df"]),
            max_df=float(data["max_df"]),
        )


MIN_VECTORIZER_DOCS = 20


def fit_ngram_vectorizer(texts: list[str],
                         ngram_range: tuple[int, int] = (1, 3),
                         min_df: float = 0.05,
                         max_df: float = 0.95) -> NgramVectorizer:
    """Fit the n-gram vocabulary and idf weights on a corpus of lines."""
    n_docs = len(texts)
    if n_docs < MIN_VECTORIZER_DOCS:
        raise VectorizerError(
            f"need at least {MIN_VECTORIZER_DOCS} documents to fit the "
            f"vectorizer, got {n_docs}")
    df: Counter[str] = Counter()
    for text in texts:
        df.update(set(_ngrams(_word_tokens(text), ngram_range)))
    lo = math.ceil(min_df * n_docs)
    hi = math.floor(max_df * n_docs)
    terms = sorted(term for term, count in df.items() if lo <= count <= hi)
    idf = np.array([math.log((1 + n_docs) / (1 + df[term])) + 1.0
                    for term in terms])
    return NgramVectorizer(
        vocabulary={term: i for i, term in enumerate(terms)},
        idf=idf, ngram_range=ngram_range, min_df=min_df, max_df=max_df,
    )


def vectorize(vectorizer: NgramVectorizer, text: str) -> dict[int, float]:
    """TF-IDF weights of one line as a sparse column->weight map.

    Entries are term frequency times idf, then L2-normalized.  Out-of-
    vocabulary n-grams are ignored; a line with none in vocabulary maps
    to the zero vector (empty dict).
    """
    counts: Counter[int] = Counter()
    for gram in _ngrams(_word_tokens(text), vectorizer.ngram_range):
        index = vectorizer.vocabulary.get(gram)
        if index is not None:
            counts[index] += 1
    if not counts:
        return {}
    weights = {index: tf * vectorizer.idf[index]
               for index, tf in counts.items()}
    norm = math.sqrt(sum(w * w for w in weights.values()))
    return {index: w / norm for index, w in sorted(weights.items())}


@dataclass(frozen=True)
class FeatureVector:
    """Encoded layout features, optionally followed by n-gram weights."""

    layout: np.ndarray
    text_weights: dict[int, float] | None = None
    text_dim: int = 0

    @property
    def mode(self) -> FeatureMode:
        return (FeatureMode.LAYOUT_ONLY if self.text_weights is None
                else FeatureMode.COMBINED)

    def __len__(self) -> int:
        return LAYOUT_DIM + (self.text_dim if self.text_weights is not None else 0)

    def to_array(self) -> np.ndarray:
        dense = np.zeros(len(self))
        dense[:LAYOUT_DIM] = self.layout
        if self.text_weights is not None:
            for index, weight in self.text_weights.items():
                dense[LAYOUT_DIM + index] = weight
        return dense


def combine(layout: LayoutFeatures,
            text_vec: dict[int, float] | None = None,
            text_dim: int = 0) -> FeatureVector:
    """Concatenate layout features with optional text weights.

    Layout-only vectors have length 16; combined vectors have length
    ``16 + text_dim`` with the layout slots first.
    """
    if text_vec is None:
        return FeatureVector(layout=layout.encode())
    return FeatureVector(layout=layout.encode(), text_weights=dict(text_vec),
                         text_dim=text_dim)
