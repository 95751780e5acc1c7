"""Pure-Python collapsed Gibbs sweeps (fallback kernel).

Mirrors ``_gibbs.pyx`` operation for operation: identical update order,
identical floating-point expression shapes and an externally supplied
uniform stream, so both backends produce bit-identical topic
assignments.  Python-level loops make this several times slower than the
compiled kernel; see ``benchmarks/bench_gibbs.py``.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "pure-python"


def gibbs_train_sweep(doc_ids: np.ndarray, words: np.ndarray,
                      topics: np.ndarray, n_dk: np.ndarray, n_kw: np.ndarray,
                      n_k: np.ndarray, alpha: float, beta: float,
                      uniforms: np.ndarray) -> None:
    """One full training sweep, updating topics and counts in place.

    Token i of document ``doc_ids[i]`` is resampled from the collapsed
    conditional (n_dk + alpha) * (n_kw + beta) / (n_k + V*beta) with its
    own assignment excluded; ``uniforms[i]`` drives the draw.
    """
    n_topics, vocab_size = n_kw.shape
    vbeta = vocab_size * beta
    ds = doc_ids.tolist()
    ws = words.tolist()
    zs = topics.tolist()
    us = uniforms.tolist()
    ndk = [row[:] for row in n_dk.tolist()]
    nkw = [row[:] for row in n_kw.tolist()]
    nk = n_k.tolist()
    probs = [0.0] * n_topics

    for i in range(len(ws)):
        d = ds[i]
        w = ws[i]
        z = zs[i]
        row = ndk[d]
        row[z] -= 1
        nkw[z][w] -= 1
        nk[z] -= 1

        total = 0.0
        for k in range(n_topics):
            p = (row[k] + alpha) * (nkw[k][w] + beta) / (nk[k] + vbeta)
            probs[k] = p
            total += p
        target = us[i] * total
        k = 0
        acc = probs[0]
        while acc < target and k < n_topics - 1:
            k += 1
            acc += probs[k]

        zs[i] = k
        row[k] += 1
        nkw[k][w] += 1
        nk[k] += 1

    topics[:] = zs
    n_dk[:] = ndk
    n_kw[:] = nkw
    n_k[:] = nk


def gibbs_infer_sweep(words: np.ndarray, topics: np.ndarray,
                      doc_topic: np.ndarray, phi: np.ndarray, alpha: float,
                      uniforms: np.ndarray) -> None:
    """One inference sweep over a single document with topic-word
    distributions held fixed."""
    n_topics = phi.shape[0]
    ws = words.tolist()
    zs = topics.tolist()
    ndk = doc_topic.tolist()
    rows = phi.tolist()
    probs = [0.0] * n_topics

    for i in range(len(ws)):
        w = ws[i]
        z = zs[i]
        ndk[z] -= 1

        total = 0.0
        for k in range(n_topics):
            p = (ndk[k] + alpha) * rows[k][w]
            probs[k] = p
            total += p
        target = uniforms[i] * total
        k = 0
        acc = probs[0]
        while acc < target and k < n_topics - 1:
            k += 1
            acc += probs[k]

        zs[i] = k
        ndk[k] += 1

    topics[:] = zs
    doc_topic[:] = ndk
