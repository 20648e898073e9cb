"""Time the compiled and pure-Python kernel backends on the same inputs.

    python3 benchmarks/bench_kernels.py [--repeat N]

Also checks that both backends return bit-identical results.
"""
import argparse
import time

import numpy as np

from blossom import _kernels
from blossom.clustering import KmeansConfig, kmeans, select_k, silhouette_samples


def timed(fn, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - start)
    return best, result


def workloads(rng):
    small = rng.random((40, 2))
    large = rng.random((400, 2))
    labels = rng.integers(0, 6, 400)
    labels[:6] = np.arange(6)
    return {
        "kmeans n=40 k=4": lambda b: kmeans(small, 4, KmeansConfig(), b).sse,
        "kmeans n=400 k=8": lambda b: kmeans(large, 8, KmeansConfig(), b).sse,
        "silhouette n=400 k=6": lambda b: silhouette_samples(large, labels, b).tobytes(),
        "select_k n=40 k_max=20": lambda b: select_k(small, 20, KmeansConfig(), 0.0, b).mean_silhouette_by_k,
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    backends = _kernels.backends()
    if "compiled" not in backends:
        print("compiled extension not built; only the python backend is available")
    rng = np.random.default_rng(0)
    names = sorted(backends)
    print(f"{'workload':<26}" + "".join(f"{n:>12}" for n in names) + f"{'speedup':>10}")
    for title, work in workloads(rng).items():
        times, outputs = {}, {}
        for name in names:
            times[name], outputs[name] = timed(lambda: work(backends[name]), args.repeat)
        if len(set(map(repr, outputs.values()))) != 1:
            raise SystemExit(f"{title}: backends disagree")
        speedup = times["python"] / times["compiled"] if "compiled" in times else 1.0
        print(f"{title:<26}" + "".join(f"{times[n] * 1e3:>10.2f}ms" for n in names) + f"{speedup:>9.1f}x")


if __name__ == "__main__":
    main()
