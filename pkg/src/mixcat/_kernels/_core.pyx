# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled inner loops for mixture likelihood work.

Mirrors ``mixcat._kernels._fallback``; see that module for the
documented contract.
"""

from libc.math cimport log

import numpy as np


def weighted_log_mixture(double[::1] counts, double[:, ::1] probs,
                         double[::1] theta, double floor):
    cdef Py_ssize_t n = counts.shape[0]
    cdef Py_ssize_t m = theta.shape[0]
    cdef Py_ssize_t t, j
    cdef double mix, acc = 0.0
    for t in range(n):
        mix = 0.0
        for j in range(m):
            mix += theta[j] * probs[j, t]
        if mix < floor:
            mix = floor
        acc += counts[t] * log(mix)
    return acc


def loglik_grad(double[::1] counts, double[:, ::1] probs, double[::1] theta):
    cdef Py_ssize_t n = counts.shape[0]
    cdef Py_ssize_t m = theta.shape[0]
    grad_arr = np.zeros(m, dtype=np.float64)
    cdef double[::1] grad = grad_arr
    cdef Py_ssize_t t, j
    cdef double mix, w
    cdef double total = 0.0
    cdef double acc = 0.0
    for t in range(n):
        total += counts[t]
    for t in range(n):
        mix = 0.0
        for j in range(m):
            mix += theta[j] * probs[j, t]
        if mix <= 0.0:
            raise ValueError("mixture probability vanished for a token type")
        acc += counts[t] * log(mix)
        w = counts[t] / mix
        for j in range(m):
            grad[j] += probs[j, t] * w
    for j in range(m):
        grad[j] /= total
    return acc / total, grad_arr
