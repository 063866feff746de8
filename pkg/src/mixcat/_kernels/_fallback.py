"""Vectorized numpy implementations of the likelihood kernels.

Used when the compiled module is unavailable or explicitly disabled.
Signatures and results match ``mixcat._kernels._core`` up to floating
point summation order.
"""

from __future__ import annotations

import numpy as np


def weighted_log_mixture(counts, probs, theta, floor):
    """Sum of count-weighted log mixture probabilities.

    ``counts`` has one entry per token type, ``probs`` one row per
    mixture component, ``theta`` the component weights.  Mixture values
    below ``floor`` are clamped before the log so out-of-model tokens
    produce a large finite penalty instead of -inf.
    """
    mix = np.asarray(theta) @ np.asarray(probs)
    return float(np.asarray(counts) @ np.log(np.maximum(mix, floor)))


def loglik_grad(counts, probs, theta):
    """Per-token-average log likelihood of a mixture and its gradient
    with respect to the component weights.

    Returns ``(L, grad)`` where ``L = (1/N) sum_t c_t log(mix_t)`` and
    ``grad_j = (1/N) sum_t c_t p_jt / mix_t``.  Raises ValueError if
    any token type has zero probability under the whole mixture.
    """
    counts = np.asarray(counts, dtype=np.float64)
    probs = np.asarray(probs, dtype=np.float64)
    theta = np.asarray(theta, dtype=np.float64)
    mix = theta @ probs
    if np.any(mix <= 0.0):
        raise ValueError("mixture probability vanished for a token type")
    total = float(counts.sum())
    loglik = float(counts @ np.log(mix)) / total
    grad = (probs @ (counts / mix)) / total
    return loglik, grad
