"""Backend selection and agreement between the two kernel implementations."""

import math
import os
import subprocess
import sys

import numpy as np
import pytest

import mixcat
from mixcat._kernels import _fallback

try:
    from mixcat._kernels import _core
except ImportError:
    _core = None

needs_compiled = pytest.mark.skipif(
    _core is None, reason="compiled kernels not built"
)


def _pack(rng, m, n):
    counts = np.ascontiguousarray(rng.integers(1, 9, size=n), dtype=np.float64)
    probs = np.ascontiguousarray(rng.dirichlet(np.ones(n), size=m) + 1e-9)
    theta = np.ascontiguousarray(rng.dirichlet(np.ones(m)))
    return counts, probs, theta


def test_backend_tag_is_published():
    assert mixcat.BACKEND in {"compiled", "python"}


def test_weighted_log_mixture_hand_values():
    counts = np.array([2.0, 1.0])
    probs = np.array([[0.5, 0.25]])
    theta = np.array([1.0])
    value = _fallback.weighted_log_mixture(counts, probs, theta, 0.0)
    assert value == pytest.approx(math.log(0.0625), rel=1e-15)


def test_floor_clamps_vanishing_probabilities():
    counts = np.array([3.0])
    probs = np.array([[0.0]])
    theta = np.array([1.0])
    value = _fallback.weighted_log_mixture(counts, probs, theta, 1e-12)
    assert value == pytest.approx(3 * math.log(1e-12), rel=1e-15)


def test_gradient_kernel_rejects_vanished_mixture():
    counts = np.array([1.0])
    probs = np.array([[0.0]])
    theta = np.array([1.0])
    with pytest.raises(ValueError, match="vanished"):
        _fallback.loglik_grad(counts, probs, theta)


@needs_compiled
def test_compiled_gradient_kernel_rejects_vanished_mixture():
    counts = np.ascontiguousarray([1.0])
    probs = np.ascontiguousarray([[0.0]])
    theta = np.ascontiguousarray([1.0])
    with pytest.raises(ValueError, match="vanished"):
        _core.loglik_grad(counts, probs, theta)


@needs_compiled
def test_backends_agree_on_log_mixture():
    rng = np.random.default_rng(5)
    for _ in range(100):
        counts, probs, theta = _pack(
            rng, int(rng.integers(1, 5)), int(rng.integers(1, 12))
        )
        fast = _core.weighted_log_mixture(counts, probs, theta, 1e-12)
        slow = _fallback.weighted_log_mixture(counts, probs, theta, 1e-12)
        assert fast == pytest.approx(slow, rel=1e-12)


@needs_compiled
def test_backends_agree_on_gradient():
    rng = np.random.default_rng(6)
    for _ in range(100):
        counts, probs, theta = _pack(
            rng, int(rng.integers(1, 5)), int(rng.integers(1, 12))
        )
        fast_l, fast_g = _core.loglik_grad(counts, probs, theta)
        slow_l, slow_g = _fallback.loglik_grad(counts, probs, theta)
        assert fast_l == pytest.approx(slow_l, rel=1e-12)
        assert np.asarray(fast_g) == pytest.approx(np.asarray(slow_g), rel=1e-12)


def test_environment_variable_forces_python_backend():
    env = dict(os.environ, MIXCAT_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "import mixcat; print(mixcat.BACKEND)"],
        capture_output=True,
        text=True,
        env=env,
        check=True,
    )
    assert out.stdout.strip() == "python"


def test_fallback_and_package_results_match_end_to_end():
    """The public API answers the same under either backend."""
    env = dict(os.environ, MIXCAT_PURE_PYTHON="1")
    script = (
        "from mixcat import log_likelihood;"
        "print(repr(log_likelihood((0.6, 0.4),"
        " [{'a': 0.5, 'b': 0.5}, {'a': 0.1, 'b': 0.9}],"
        " ('a', 'b', 'b'))))"
    )
    out = subprocess.run(
        [sys.executable, "-c", script],
        capture_output=True,
        text=True,
        env=env,
        check=True,
    )
    from mixcat import log_likelihood

    here = log_likelihood(
        (0.6, 0.4), [{"a": 0.5, "b": 0.5}, {"a": 0.1, "b": 0.9}], ("a", "b", "b")
    )
    assert float(out.stdout.strip()) == pytest.approx(here, rel=1e-12)
