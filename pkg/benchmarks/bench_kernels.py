"""Timing comparison of the pure-Python kernels against the compiled ones.

Run as `python benchmarks/bench_kernels.py` from the repository root after
installing. Reports best-of-five wall times for representative loads and the
speedup factor; says so and exits cleanly when the compiled module is not
built.
"""

import random
import time

from bsmg._kernels import reference

try:
    from bsmg._kernels import _speedups
except ImportError:
    _speedups = None


def best_of(fn, args, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def component_case(rng, n=120_000, m=240_000):
    sources = [rng.randrange(n) for _ in range(m)]
    ranges = [rng.randrange(n) for _ in range(m)]
    return (n, sources, ranges)


def closure_case(rng, n=9):
    # two random generators of a large permutation group; the bound keeps
    # the closure around a couple hundred thousand elements
    cycle = tuple(range(1, n)) + (0,)
    swap = tuple([1, 0] + list(range(2, n)))
    base = list(range(n))
    rng.shuffle(base)
    return ([cycle, swap, tuple(base)], 200_000)


def run(name, args):
    pure = best_of(getattr(reference, name), args)
    row = f"{name:20s} pure {pure * 1000:9.2f} ms"
    if _speedups is not None:
        fast = best_of(getattr(_speedups, name), args)
        row += f"   compiled {fast * 1000:9.2f} ms   x{pure / fast:.1f}"
        got_pure = getattr(reference, name)(*args)
        got_fast = getattr(_speedups, name)(*args)
        if got_pure != got_fast:
            raise SystemExit(f"{name}: implementations disagree")
    print(row)


def main():
    rng = random.Random(20260818)
    if _speedups is None:
        print("compiled kernels not built; timing the pure path only")
    run("component_labels", component_case(rng))
    run("perm_closure", closure_case(rng))


if __name__ == "__main__":
    main()
