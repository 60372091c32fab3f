"""Compare the numba and numpy stopping-step kernels on odd starts below N."""

import argparse
import time

import numpy as np

from collatz_prefix import _kernels


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=10**6)
    ap.add_argument("--cap", type=int, default=300)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    xs = np.arange(1, args.n, 2, dtype=np.int64)
    backends = ["numpy"] + (["numba"] if _kernels.HAVE_NUMBA else [])
    results = {}
    for b in backends:
        t0 = time.perf_counter()
        results[b] = _kernels.stopping_steps(xs[:10], args.cap, b)  # compile / warm up
        warm = time.perf_counter() - t0
        secs = best_of(lambda: _kernels.stopping_steps(xs, args.cap, b), args.repeat)
        results[b] = _kernels.stopping_steps(xs, args.cap, b)
        print(f"{b:6s} {secs * 1e3:9.1f} ms  ({xs.size / secs / 1e6:6.1f} M starts/s, "
              f"first call {warm * 1e3:.0f} ms)")
    if len(results) == 2:
        same = np.array_equal(results["numpy"], results["numba"])
        print(f"outputs identical: {same}")


if __name__ == "__main__":
    main()
