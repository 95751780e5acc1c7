"""Extractive section summaries via TextRank.

Sentences become graph nodes; edge weights count shared content words,
normalized by the log sentence lengths.  Damped power iteration ranks
the nodes and the top fraction of sentences is emitted in original
order.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from .stopwords import STOPWORDS

# Words that end with a period without ending a sentence.
ABBREVIATIONS = frozenset("""
dr mr mrs ms prof figs fig eq eqs sec secs vs etc al et eg ie no vol pp
cf resp approx dept univ inc ltd co st jr sr ed eds rev
""".split())

_TERMINATOR = re.compile(r"[.!?]+(?=\s|$)")
_WORD = re.compile(r"[a-z0-9]+")

DAMPING = 0.85
CONVERGENCE_TOL = 1e-6
MAX_ITERATIONS = 100


def split_sentences(text: str) -> list[str]:
    """Rule-based sentence splitting with an abbreviation guard.

    Splits after runs of sentence terminators followed by whitespace or
    end of text, except when a period belongs to a known abbreviation or
    a single-letter initial.  Sentence order is preserved; empty text
    yields an empty list.
    """
    sentences: list[str] = []
    start = 0
    for match in _TERMINATOR.finditer(text):
        if match.group().startswith("."):
            before = re.search(r"([A-Za-z0-9]+)$", text[:match.start()])
            if before is not None:
                word = before.group(1)
                if word.lower() in ABBREVIATIONS:
                    continue
                if len(word) == 1 and word.isalpha():
                    continue
        sentence = text[start:match.end()].strip()
        if sentence:
            sentences.append(sentence)
        start = match.end()
    tail = text[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences


@dataclass
class SentenceGraph:
    """Sentences with their pairwise-similarity adjacency and rank scores."""

    sentences: list[str]
    adjacency: np.ndarray
    scores: np.ndarray


def _tokens(sentence: str) -> list[str]:
    return _WORD.findall(sentence.lower())


def sentence_similarity(a: str, b: str) -> float:
    """Shared content words over summed log lengths.

    Lengths are raw token counts; the overlap ignores stopwords.  Either
    sentence shorter than two tokens gives similarity 0 (the log-length
    normalization is undefined there).
    """
    tokens_a = _tokens(a)
    tokens_b = _tokens(b)
    if len(tokens_a) < 2 or len(tokens_b) < 2:
        return 0.0
    content_a = {t for t in tokens_a if t not in STOPWORDS}
    content_b = {t for t in tokens_b if t not in STOPWORDS}
    overlap = len(content_a & content_b)
    if overlap == 0:
        return 0.0
    return overlap / (math.log(len(tokens_a)) + math.log(len(tokens_b)))


def textrank_scores(adjacency: np.ndarray, damping: float = DAMPING,
                    tol: float = CONVERGENCE_TOL,
                    max_iterations: int = MAX_ITERATIONS) -> np.ndarray:
    """Damped power iteration over a weighted sentence graph.

    Scores start at 1; each update sets
    ``s_i = (1 - d) + d * sum_j w_ji / rowsum_j * s_j`` and iteration
    stops when the L1 change drops below ``tol`` (or at the cap).  With
    no isolated nodes the total score mass stays at n.
    """
    adjacency = np.asarray(adjacency, dtype=np.float64)
    n = adjacency.shape[0]
    if n == 0:
        return np.zeros(0)
    row_sums = adjacency.sum(axis=1)
    transition = np.divide(adjacency, row_sums[:, None],
                           out=np.zeros_like(adjacency),
                           where=row_sums[:, None] > 0)
    scores = np.ones(n)
    for _ in range(max_iterations):
        updated = (1.0 - damping) + damping * (scores @ transition)
        if np.abs(updated - scores).sum() < tol:
            scores = updated
            break
        scores = updated
    return scores


def build_sentence_graph(sentences: list[str]) -> SentenceGraph:
    n = len(sentences)
    adjacency = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            weight = sentence_similarity(sentences[i], sentences[j])
            adjacency[i, j] = weight
            adjacency[j, i] = weight
    return SentenceGraph(sentences=sentences, adjacency=adjacency,
                         scores=textrank_scores(adjacency))


def textrank_summarize(section_text: str, ratio: float = 0.2) -> str:
    """Keep the top ``ceil(ratio * n)`` sentences, in original order."""
    if not 0.0 < ratio <= 1.0:
        raise ValueError(f"ratio must be in (0, 1], got {ratio}")
    sentences = split_sentences(section_text)
    if not sentences:
        return ""
    graph = build_sentence_graph(sentences)
    quota = math.ceil(ratio * len(sentences))
    ranked = sorted(range(len(sentences)),
                    key=lambda i: (-graph.scores[i], i))[:quota]
    return " ".join(sentences[i] for i in sorted(ranked))
