"""Compare the compiled likelihood kernels against the numpy fallback.

Runs both implementations on synthetic workloads of increasing size and
prints per-call timings plus the speedup of the compiled module.  The
fallback is always available; if the compiled module failed to build
the script says so and times the fallback alone.

Usage: python3 benchmarks/bench_kernels.py [--repeats N] [--seed S]
"""

import argparse
import time

import numpy as np

from mixcat._kernels import _fallback

try:
    from mixcat._kernels import _core
except ImportError:
    _core = None

# (components, token types, calls per timing pass)
WORKLOADS = [
    (2, 20, 2000),
    (4, 200, 1000),
    (8, 2000, 200),
    (16, 20000, 40),
    (64, 50000, 10),
]

FLOOR = 1e-12


def make_instance(rng, m, n):
    counts = rng.integers(1, 10, size=n).astype(np.float64)
    probs = rng.dirichlet(np.ones(n), size=m)
    theta = rng.dirichlet(np.full(m, 2.0))
    return (
        np.ascontiguousarray(counts),
        np.ascontiguousarray(probs),
        np.ascontiguousarray(theta),
    )


def best_time(fn, repeats, calls):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        for _ in range(calls):
            fn()
        elapsed = time.perf_counter() - start
        best = min(best, elapsed / calls)
    return best


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5,
                        help="timing passes per measurement (best is kept)")
    parser.add_argument("--seed", type=int, default=20, help="workload seed")
    args = parser.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    if _core is None:
        print("compiled module not built; timing the numpy fallback only")
    else:
        print("backends: compiled (cython) vs fallback (numpy)")
    print(f"{'workload':>16} {'kernel':>12} {'compiled':>12} "
          f"{'fallback':>12} {'speedup':>8}")

    for m, n, calls in WORKLOADS:
        counts, probs, theta = make_instance(rng, m, n)
        kernels = [
            ("log_mixture", lambda mod: mod.weighted_log_mixture(
                counts, probs, theta, FLOOR)),
            ("loglik_grad", lambda mod: mod.loglik_grad(
                counts, probs, theta)),
        ]
        for name, call in kernels:
            label = f"m={m} n={n}"
            t_slow = best_time(lambda: call(_fallback), args.repeats, calls)
            if _core is None:
                print(f"{label:>16} {name:>12} {'-':>12} "
                      f"{t_slow * 1e6:>10.1f}us {'-':>8}")
                continue
            got = call(_core)
            ref = call(_fallback)
            got = got[0] if isinstance(got, tuple) else got
            ref = ref[0] if isinstance(ref, tuple) else ref
            if abs(got - ref) > 1e-9 * max(1.0, abs(ref)):
                raise SystemExit(
                    f"backends disagree on {name} at m={m} n={n}: "
                    f"{got!r} vs {ref!r}")
            t_fast = best_time(lambda: call(_core), args.repeats, calls)
            print(f"{label:>16} {name:>12} {t_fast * 1e6:>10.1f}us "
                  f"{t_slow * 1e6:>10.1f}us {t_slow / t_fast:>7.2f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
