"""Likelihood kernels with a compiled fast path.

The Cython module is optional.  When it is missing, or when the
``MIXCAT_PURE_PYTHON`` environment variable is set to a non-empty
value, the numpy implementation takes over.  ``BACKEND`` records which
one is active ("compiled" or "python").
"""

import os

if os.environ.get("MIXCAT_PURE_PYTHON"):
    from mixcat._kernels._fallback import loglik_grad, weighted_log_mixture

    BACKEND = "python"
else:
    try:
        from mixcat._kernels._core import loglik_grad, weighted_log_mixture

        BACKEND = "compiled"
    except ImportError:
        from mixcat._kernels._fallback import loglik_grad, weighted_log_mixture

        BACKEND = "python"

__all__ = ["BACKEND", "loglik_grad", "weighted_log_mixture"]
