# cython: boundscheck=False, wraparound=False, initializedcheck=False, language_level=3
"""Compiled collapsed Gibbs sweeps (hot kernel).

Twin of ``_gibbs_py.py``: the update order and floating-point expression
shapes are kept identical so both backends produce bit-identical topic
assignments from the same uniform stream.
"""

from libc.stdlib cimport free, malloc

BACKEND_NAME = "compiled"


def gibbs_train_sweep(int[::1] doc_ids, int[::1] words, int[::1] topics,
                      int[:, ::1] n_dk, int[:, ::1] n_kw, int[::1] n_k,
                      double alpha, double beta, double[::1] uniforms):
    """One full training sweep, updating topics and counts in place."""
    cdef Py_ssize_t n_tokens = words.shape[0]
    cdef int n_topics = <int> n_kw.shape[0]
    cdef int vocab_size = <int> n_kw.shape[1]
    cdef double vbeta = vocab_size * beta
    cdef double *probs = <double *> malloc(n_topics * sizeof(double))
    if probs is NULL:
        raise MemoryError()
    cdef Py_ssize_t i
    cdef int d, w, z, k
    cdef double p, total, target, acc
    try:
        for i in range(n_tokens):
            d = doc_ids[i]
            w = words[i]
            z = topics[i]
            n_dk[d, z] -= 1
            n_kw[z, w] -= 1
            n_k[z] -= 1

            total = 0.0
            for k in range(n_topics):
                p = (n_dk[d, k] + alpha) * (n_kw[k, w] + beta) / (n_k[k] + vbeta)
                probs[k] = p
                total += p
            target = uniforms[i] * total
            k = 0
            acc = probs[0]
            while acc < target and k < n_topics - 1:
                k += 1
                acc += probs[k]

            topics[i] = k
            n_dk[d, k] += 1
            n_kw[k, w] += 1
            n_k[k] += 1
    finally:
        free(probs)


def gibbs_infer_sweep(int[::1] words, int[::1] topics, int[::1] doc_topic,
                      double[:, ::1] phi, double alpha, double[::1] uniforms):
    """One inference sweep over a single document with phi held fixed."""
    cdef Py_ssize_t n_tokens = words.shape[0]
    cdef int n_topics = <int> phi.shape[0]
    cdef double *probs = <double *> malloc(n_topics * sizeof(double))
    if probs is NULL:
        raise MemoryError()
    cdef Py_ssize_t i
    cdef int w, z, k
    cdef double p, total, target, acc
    try:
        for i in range(n_tokens):
            w = words[i]
            z = topics[i]
            doc_topic[z] -= 1

            total = 0.0
            for k in range(n_topics):
                p = (doc_topic[k] + alpha) * phi[k, w]
                probs[k] = p
                total += p
            target = uniforms[i] * total
            k = 0
            acc = probs[0]
            while acc < target and k < n_topics - 1:
                k += 1
                acc += probs[k]

            topics[i] = k
            doc_topic[k] += 1
    finally:
        free(probs)
