"""Compare the numba loop kernels with the vectorized numpy kernels.

Usage::

    python benchmarks/bench_backends.py [--max-m 4] [--census-n 5] [--repeat 3]

Each workload is run once per backend to warm up (JIT compilation or cache
load), then timed ``--repeat`` times; the best time is reported together
with the numpy/numba ratio.  Results are checked for equality across
backends before timing.
"""
import argparse
import time

from synchrokit import (
    CensusSpec,
    backward_level_profile,
    build_am,
    census_run,
    reset_threshold_backward,
    reset_threshold_exact,
    shortest_extending_word,
)

BACKENDS = ("numba", "numpy")


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def workloads(max_m, census_n):
    for m in range(1, max_m + 1):
        dfa = build_am(m)
        yield (f"forward rt A_{m} (n={dfa.n})",
               lambda b, d=dfa: reset_threshold_exact(d, backend=b).threshold)
        yield (f"backward rt A_{m}",
               lambda b, d=dfa: reset_threshold_backward(d, backend=b).threshold)
        yield (f"level profile A_{m}",
               lambda b, d=dfa: backward_level_profile(d, 0, 10_000, backend=b).widths)
        yield (f"extension {{0,1}} A_{m}",
               lambda b, d=dfa: shortest_extending_word(d, [0, 1], backend=b))
    for n in range(4, census_n + 1):
        spec = CensusSpec(n, 2)
        yield (f"census n={n} k=2 iso",
               lambda b, s=spec: census_run(s, backend=b).to_dict())
    spec = CensusSpec(census_n, 2, up_to_iso=False)
    yield (f"census n={census_n} k=2 raw",
           lambda b, s=spec: census_run(s, backend=b, ext_stride=0).to_dict())


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--max-m", type=int, default=4, help="largest series index")
    parser.add_argument("--census-n", type=int, default=5, help="largest binary census size")
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)

    print(f"{'workload':34s} {'numba [s]':>10s} {'numpy [s]':>10s} {'ratio':>7s}")
    for name, fn in workloads(args.max_m, args.census_n):
        results = {b: fn(b) for b in BACKENDS}  # warm-up and cross-check
        if results["numba"] != results["numpy"]:
            raise SystemExit(f"{name}: backends disagree")
        times = {b: best_of(lambda b=b: fn(b), args.repeat) for b in BACKENDS}
        ratio = times["numpy"] / times["numba"] if times["numba"] > 0 else float("nan")
        print(f"{name:34s} {times['numba']:10.4f} {times['numpy']:10.4f} {ratio:7.1f}x")


if __name__ == "__main__":
    main()
