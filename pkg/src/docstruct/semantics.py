"""LDA topic modeling of divided sections and semantic labeling.

Sections are bags of tokens (lowercased, punctuation stripped, short
tokens and stopwords dropped).  Training runs collapsed Gibbs sampling
for a fixed number of full passes; inference resamples a single document
against fixed topic-word distributions.  The per-token sweep is the
package's hot loop and lives in a compiled kernel with a pure-Python
fallback (see ``_kernels``).

Fit quality helpers follow the conventions used throughout: the
``perplexity`` function returns the average per-word log-likelihood of
held-out sections (a negative number whose magnitude shrinks as fit
improves), and ``split_half_coherence`` compares topic distributions of
the two halves of each section against halves of different sections.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

import numpy as np

from ._kernels import gibbs_infer_sweep, gibbs_train_sweep
from .stopwords import STOPWORDS

_TOKEN = re.compile(r"[a-z0-9]+")


class DictionaryError(ValueError):
    pass


def tokenize(text: str) -> list[str]:
    """Lowercase word tokens of length >= 2 with stopwords removed."""
    return [t for t in _TOKEN.findall(text.lower())
            if len(t) >= 2 and t not in STOPWORDS]


@dataclass(frozen=True)
class Dictionary:
    """Token <-> id map filtered by document frequency."""

    token_to_id: dict[str, int]
    doc_freqs: np.ndarray              # df per token id
    min_docs: int
    max_fraction: float
    keep_n: int

    def __len__(self) -> int:
        return len(self.token_to_id)

    @property
    def id_to_token(self) -> list[str]:
        out = [""] * len(self.token_to_id)
        for token, i in self.token_to_id.items():
            out[i] = token
        return out

    def encode(self, tokens: list[str]) -> list[int]:
        """Token ids with out-of-dictionary tokens dropped."""
        return [self.token_to_id[t] for t in tokens if t in self.token_to_id]


def build_dictionary(sections: list[list[str]], min_docs: int = 20,
                     max_fraction: float = 0.10,
                     keep_n: int = 100_000) -> Dictionary:
    """Filter tokens by document frequency and assign stable ids.

    A token survives iff it appears in at least ``min_docs`` sections and
    in at most ``max_fraction`` of them.  If more than ``keep_n`` tokens
    survive, the highest-df ones are kept (ties broken lexicographically).
    Ids follow lexicographic token order.
    """
    n_docs = len(sections)
    if n_docs < min_docs:
        raise DictionaryError(
            f"need at least min_docs={min_docs} sections, got {n_docs}")
    df: dict[str, int] = {}
    for tokens in sections:
        for token in set(tokens):
            df[token] = df.get(token, 0) + 1
    ceiling = max_fraction * n_docs
    kept = [t for t, count in df.items() if count >= min_docs and count <= ceiling]
    if not kept:
        raise DictionaryError("document-frequency filter removed every token")
    if len(kept) > keep_n:
        kept.sort(key=lambda t: (-df[t], t))
        kept = kept[:keep_n]
    kept.sort()
    return Dictionary(
        token_to_id={t: i for i, t in enumerate(kept)},
        doc_freqs=np.array([df[t] for t in kept], dtype=np.int64),
        min_docs=min_docs, max_fraction=max_fraction, keep_n=keep_n,
    )


@dataclass
class LdaModel:
    """Trained LDA state: topic-word and per-document topic distributions."""

    dictionary: Dictionary
    n_topics: int
    alpha: float
    beta: float
    passes: int
    seed: int
    phi: np.ndarray                    # (K, V), rows sum to 1
    theta: np.ndarray                  # (D, K), rows sum to 1
    log_likelihood_history: list[float] = field(default_factory=list)

    def top_terms(self, topic: int, n_terms: int) -> list[tuple[str, float]]:
        row = self.phi[topic]
        order = np.argsort(-row, kind="stable")[:n_terms]
        vocab = self.dictionary.id_to_token
        return [(vocab[i], float(row[i])) for i in order]

    def to_json(self) -> str:
        return json.dumps({
            "kind": "lda",
            "n_topics": self.n_topics,
            "alpha": self.alpha,
            "beta": self.beta,
            "passes": self.passes,
            "seed": self.seed,
            "dictionary": {
                "tokens": self.dictionary.id_to_token,
                "doc_freqs": self.dictionary.doc_freqs.tolist(),
                "min_docs": self.dictionary.min_docs,
                "max_fraction": self.dictionary.max_fraction,
                "keep_n": self.dictionary.keep_n,
            },
            "phi": self.phi.tolist(),
            "theta": self.theta.tolist(),
        })

    @classmethod
    def from_json(cls, payload: str) -> "LdaModel":
        data = json.loads(payload)
        if data.get("kind") != "lda":
            raise ValueError(f"expected an 'lda' model, got {data.get('kind')!r}")
        d = data["dictionary"]
        dictionary = Dictionary(
            token_to_id={t: i for i, t in enumerate(d["tokens"])},
            doc_freqs=np.asarray(d["doc_freqs"], dtype=np.int64),
            min_docs=int(d["min_docs"]),
            max_fraction=float(d["max_fraction"]),
            keep_n=int(d["keep_n"]),
        )
        return cls(
            dictionary=dictionary,
            n_topics=int(data["n_topics"]),
            alpha=float(data["alpha"]),
            beta=float(data["beta"]),
            passes=int(data["passes"]),
            seed=int(data["seed"]),
            phi=np.asarray(data["phi"], dtype=np.float64),
            theta=np.asarray(data["theta"], dtype=np.float64),
        )


@dataclass(frozen=True)
class SemanticLabel:
    """A section's dominant topic and its human-readable term label."""

    section_id: str
    topic: int
    label: str
    terms: list[tuple[str, float]]


def _counts_to_phi(n_kw: np.ndarray, beta: float) -> np.ndarray:
    smoothed = n_kw + beta
    return smoothed / smoothed.sum(axis=1, keepdims=True)


def _counts_to_theta(n_dk: np.ndarray, alpha: float) -> np.ndarray:
    smoothed = n_dk + alpha
    return smoothed / smoothed.sum(axis=1, keepdims=True)


def train_lda(sections: list[list[str]], n_topics: int, passes: int = 50,
              alpha: float | None = None, beta: float = 0.01, seed: int = 0,
              dictionary: Dictionary | None = None) -> LdaModel:
    """Fit LDA by seeded collapsed Gibbs sampling over full corpus sweeps.

    ``alpha`` defaults to 50/K.  When no dictionary is supplied, one is
    built without document-frequency filtering.  Empty sections are
    allowed; their topic distribution is the smoothed prior.  The mean
    per-token log-likelihood under the current counts is recorded after
    every pass.
    """
    if n_topics < 1:
        raise ValueError(f"n_topics must be >= 1, got {n_topics}")
    if not sections:
        raise ValueError("empty corpus")
    if alpha is None:
        alpha = 50.0 / n_topics
    if dictionary is None:
        dictionary = build_dictionary(sections, min_docs=1, max_fraction=1.0)

    doc_ids_list: list[int] = []
    word_list: list[int] = []
    for d, tokens in enumerate(sections):
        ids = dictionary.encode(tokens)
        doc_ids_list.extend([d] * len(ids))
        word_list.extend(ids)
    doc_ids = np.asarray(doc_ids_list, dtype=np.int32)
    words = np.asarray(word_list, dtype=np.int32)
    n_docs = len(sections)
    n_tokens = len(words)
    vocab_size = len(dictionary)

    rng = np.random.default_rng(seed)
    topics = rng.integers(0, n_topics, size=n_tokens).astype(np.int32)
    n_dk = np.zeros((n_docs, n_topics), dtype=np.int32)
    n_kw = np.zeros((n_topics, vocab_size), dtype=np.int32)
    n_k = np.zeros(n_topics, dtype=np.int32)
    np.add.at(n_dk, (doc_ids, topics), 1)
    np.add.at(n_kw, (topics, words), 1)
    np.add.at(n_k, topics, 1)

    history: list[float] = []
    for _ in range(passes):
        uniforms = rng.random(n_tokens)
        gibbs_train_sweep(doc_ids, words, topics, n_dk, n_kw, n_k,
                          alpha, beta, uniforms)
        if n_tokens:
            phi = _counts_to_phi(n_kw, beta)
            theta = _counts_to_theta(n_dk, alpha)
            token_probs = np.einsum("tk,tk->t", theta[doc_ids],
                                    phi[:, words].T)
            history.append(float(np.log(token_probs).mean()))

    return LdaModel(
        dictionary=dictionary, n_topics=n_topics, alpha=alpha, beta=beta,
        passes=passes, seed=seed,
        phi=_counts_to_phi(n_kw, beta),
        theta=_counts_to_theta(n_dk, alpha),
        log_likelihood_history=history,
    )


def infer_topics(model: LdaModel, tokens: list[str], iterations: int = 50,
                 seed: int = 0) -> np.ndarray:
    """Topic distribution of an unseen section, phi held fixed.

    Runs a fixed budget of seeded Gibbs sweeps over the section's tokens.
    A section with no in-dictionary tokens gets the normalized prior.
    """
    ids = np.asarray(model.dictionary.encode(tokens), dtype=np.int32)
    if len(ids) == 0:
        prior = np.full(model.n_topics, model.alpha)
        return prior / prior.sum()
    rng = np.random.default_rng(seed)
    topics = rng.integers(0, model.n_topics, size=len(ids)).astype(np.int32)
    doc_topic = np.bincount(topics, minlength=model.n_topics).astype(np.int32)
    for _ in range(iterations):
        uniforms = rng.random(len(ids))
        gibbs_infer_sweep(ids, topics, doc_topic, model.phi, model.alpha,
                          uniforms)
    smoothed = doc_topic + model.alpha
    return smoothed / smoothed.sum()


def label_section(model: LdaModel, theta: np.ndarray, n_terms: int = 2,
                  section_id: str = "") -> SemanticLabel:
    """Name a section by the top terms of its dominant topic.

    The topic is the argmax of ``theta`` (ties go to the lowest topic
    id); the label joins the ``n_terms`` highest-probability terms of
    that topic with dashes.
    """
    if n_terms < 1:
        raise ValueError(f"n_terms must be >= 1, got {n_terms}")
    topic = int(np.argmax(theta))
    terms = model.top_terms(topic, n_terms)
    return SemanticLabel(
        section_id=section_id,
        topic=topic,
        label="-".join(term for term, _ in terms),
        terms=terms,
    )


def perplexity(model: LdaModel, sections: list[list[str]],
               iterations: int = 50, seed: int = 0) -> float:
    """Average per-word log-likelihood of held-out sections.

    Topic mixtures are inferred per section with phi fixed; the returned
    value is sum(log p(w)) / token count, always <= 0, with smaller
    magnitude meaning better fit.
    """
    if not sections:
        raise ValueError("empty held-out set")
    total = 0.0
    count = 0
    for i, tokens in enumerate(sections):
        ids = model.dictionary.encode(tokens)
        if not ids:
            continue
        theta = infer_topics(model, tokens, iterations=iterations,
                             seed=_child_seed(seed, i))
        token_probs = theta @ model.phi[:, ids]
        total += float(np.log(token_probs).sum())
        count += len(ids)
    if count == 0:
        raise ValueError("held-out sections contain no in-dictionary tokens")
    return total / count


def _child_seed(seed: int, index: int) -> int:
    return int(np.random.SeedSequence([seed, index]).generate_state(1)[0])


def _cosine(a: np.ndarray, b: np.ndarray) -> float:
    return float(a @ b / (np.linalg.norm(a) * np.linalg.norm(b)))


def split_half_coherence(model: LdaModel, sections: list[list[str]],
                         iterations: int = 50, seed: int = 0,
                         ) -> tuple[float, float]:
    """Cosine similarity of topic mixtures across section halves.

    Each section is cut in the middle and a topic distribution inferred
    per half.  ``intra`` averages the similarity of the two halves of
    the same section; ``inter`` pairs first halves with second halves of
    different sections via a seeded derangement.  Coherent topics make
    intra exceed inter.
    """
    if len(sections) < 2:
        raise ValueError("need at least 2 sections")
    for i, tokens in enumerate(sections):
        if len(tokens) < 2:
            raise ValueError(f"section {i} has fewer than 2 tokens")
    firsts = []
    seconds = []
    for i, tokens in enumerate(sections):
        half = len(tokens) // 2
        firsts.append(infer_topics(model, tokens[:half], iterations=iterations,
                                   seed=_child_seed(seed, 2 * i)))
        seconds.append(infer_topics(model, tokens[half:], iterations=iterations,
                                    seed=_child_seed(seed, 2 * i + 1)))
    intra = float(np.mean([_cosine(a, b) for a, b in zip(firsts, seconds)]))

    rng = np.random.default_rng(seed)
    n = len(sections)
    pairing = rng.permutation(n)
    while np.any(pairing == np.arange(n)):
        pairing = rng.permutation(n)
    inter = float(np.mean([_cosine(firsts[i], seconds[pairing[i]])
                           for i in range(n)]))
    return intra, inter
