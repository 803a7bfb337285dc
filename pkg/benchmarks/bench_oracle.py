"""Time the brute-force oracle on the numba and numpy backends.

    python benchmarks/bench_oracle.py [--resolution 0.02] [--repeat 3]

The numba timing excludes the first (compiling) call.
"""
import argparse
import time

import numpy as np

from thermomaj import PhotoswitchParams, ThermalContext, oracle_qy


def best_of(func, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        out = func()
        times.append(time.perf_counter() - start)
    return min(times), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--resolution", type=float, default=0.02)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    params = PhotoswitchParams(2.48, 1.39, 0.7, 0.2)
    ctx = ThermalContext(1.0)
    print(f"{'definition':<10} {'backend':<7} {'seconds':>9} {'value':>8}")
    for definition in ("both", "any"):
        results = {}
        for backend in ("numba", "numpy"):
            run = lambda: oracle_qy(params, ctx, definition, args.resolution, backend=backend)
            if backend == "numba":
                run()  # compile
            secs, rep = best_of(run, args.repeat)
            results[backend] = rep
            print(f"{definition:<10} {backend:<7} {secs:9.3f} {rep.value:8.4f}")
        same = np.array_equal(results["numba"].achiever.probs, results["numpy"].achiever.probs)
        print(f"{'':<10} backends agree: {same}")


if __name__ == "__main__":
    main()
