"""Throughput comparison of the pure-Python and compiled simulation kernels.

Runs the same workloads through both backends (when the extension is built)
and reports trials per second plus the speedup.  The win counts must match
exactly between backends; a mismatch aborts the run.

Usage: python3 benchmarks/bench_kernels.py [--trials N] [--seed S] [--workers W]
"""

import argparse
import time

from guesswho._kernel import pure
from guesswho.strategies import STRATEGIES

try:
    from guesswho import _speedups
except ImportError:
    _speedups = None


def timed(fn, *args):
    start = time.perf_counter()
    result = fn(*args)
    return result, time.perf_counter() - start


def bench(name, trials, pure_call, compiled_call):
    pure_result, pure_s = timed(*pure_call)
    line = f"{name:<28} pure {trials / pure_s:>12,.0f}/s"
    if compiled_call is not None:
        compiled_result, compiled_s = timed(*compiled_call)
        if compiled_result != pure_result:
            raise SystemExit(
                f"backend mismatch in {name}: {compiled_result} != {pure_result}")
        line += f"   compiled {trials / compiled_s:>12,.0f}/s   x{pure_s / compiled_s:,.1f}"
    print(line)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--trials", type=int, default=200_000)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    trials, seed = args.trials, args.seed

    if _speedups is None:
        print("compiled extension not built; timing the pure backend only")

    opt = STRATEGIES["optimal"]
    uni = STRATEGIES["uniform-random"]

    bench(
        "discrete (16,16) optimal", trials,
        (pure.discrete_batch, seed, 0, trials, 16, 16, opt, opt),
        None if _speedups is None else
        (_speedups.discrete_batch, seed, 0, trials, 16, 16, opt.kernel_id, opt.kernel_id),
    )
    bench(
        "discrete (9,9) uniform", trials,
        (pure.discrete_batch, seed, 0, trials, 9, 9, uni, uni),
        None if _speedups is None else
        (_speedups.discrete_batch, seed, 0, trials, 9, 9, uni.kernel_id, uni.kernel_id),
    )
    bench(
        "continuous (4,2)", trials,
        (pure.continuous_batch, seed, 0, trials, True, 4.0, 2.0, 1e-9, 10_000),
        None if _speedups is None else
        (_speedups.continuous_batch, seed, 0, trials, True, 4.0, 2.0, 1e-9, 10_000),
    )
    bench(
        "escape (alpha=4)", trials,
        (pure.escape_batch, seed, 0, trials, 4.0, 1e-9, 10_000),
        None if _speedups is None else
        (_speedups.escape_batch, seed, 0, trials, 4.0, 1e-9, 10_000),
    )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
