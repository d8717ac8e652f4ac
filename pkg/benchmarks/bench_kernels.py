"""Time the backprojection kernel on both backends.

    python3 benchmarks/bench_kernels.py [--points 1681] [--channels 16] [--samples 1024]
"""

import argparse
import timeit

import numpy as np

from virtual_aperture import kernels


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--points", type=int, default=41 * 41)
    ap.add_argument("--channels", type=int, default=16)
    ap.add_argument("--samples", type=int, default=1024)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    zt = rng.standard_normal((args.channels, args.samples)) + 1j * rng.standard_normal((args.channels, args.samples))
    k = 2 * np.pi * (120e9 + 10e9 * np.arange(args.samples) / max(args.samples - 1, 1)) / 3e8
    paths = rng.uniform(4.0, 6.0, (args.points, args.channels))

    backends = ["python"] + (["compiled"] if kernels._compiled is not None else [])
    results = {}
    for name in backends:
        kernels.correlate(zt, k, paths, name)  # warm-up
        best = min(timeit.repeat(lambda: kernels.correlate(zt, k, paths, name), number=1, repeat=args.repeat))
        results[name] = best
        print(f"{name:9s} {best * 1e3:9.1f} ms  ({args.points * args.channels * args.samples / best / 1e6:.0f} Mterm/s)")
    if "compiled" in results:
        a = kernels.correlate(zt, k, paths, "compiled")
        b = kernels.correlate(zt, k, paths, "python")
        print(f"speedup   {results['python'] / results['compiled']:.1f}x, max rel diff {np.max(np.abs(a - b)) / np.max(np.abs(b)):.1e}")
    else:
        print("compiled backend not built")


if __name__ == "__main__":
    main()
