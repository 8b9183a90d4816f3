"""Compare the compiled kernels with the numpy fallback.

Usage::

    python benchmarks/bench_kernels.py [--repeat 3]

Prints best-of-``repeat`` wall times for each kernel on each backend and
the largest deviation between the two outputs. The workloads mirror the
bundled experiments: a single-qubit trajectory at N=100, a two-qubit
global trajectory at M=N=10 with generators, and a discord grid.
"""

import argparse
import time

import numpy as np

from spinstar import kernels
from spinstar.dynamics import _expand, _global_sectors, _single_sectors
from spinstar.models import ModelConfig, TwoQubitConfig


def best_time(fn, repeat):
    best, out = np.inf, None
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - start)
    return best, out


def workloads():
    ket1 = np.diag([0.0, 1.0]).astype(complex)
    bell = np.outer([1, 0, 0, 1], [1, 0, 0, 1]).astype(complex) / 2
    single = ModelConfig(2.0, 2.0, 1.0, 100, 1.0, True)
    pair = TwoQubitConfig(3.0, 3.1, 2.0, 2.1, 2.4, 2.5, 4.0, 10, 10, 1.0, True)
    f1, c1, _ = _expand(_single_sectors(single), [ket1])
    f2, c2, _ = _expand(_global_sectors(pair), [bell])
    t1 = np.linspace(0, 25, 500)
    t2 = np.linspace(0, 4, 4001)
    rng = np.random.default_rng(0)
    t3 = np.sort(rng.uniform(0, 25, 300))
    m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    rho = m @ m.conj().T / np.trace(m @ m.conj().T)
    thetas = np.linspace(0, np.pi / 2, 61)
    phis = np.linspace(0, 2 * np.pi, 121, endpoint=False)
    return [
        (f"expsum single N=100 ({f1.size} terms x {t1.size} times)",
         lambda b: kernels.expsum(f1, c1, t1, backend=b)),
        (f"expsum global M=N=10 ({f2.size} terms x {t2.size} times)",
         lambda b: kernels.expsum(f2, c2, t2, backend=b)),
        ("expsum irregular grid (N=100, 300 times)",
         lambda b: kernels.expsum(f1, c1, t3, backend=b)),
        ("discord grid 61 x 121",
         lambda b: kernels.conditional_entropy_grid(rho, thetas, phis, backend=b)),
    ]


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)
    backends = ["python"] + (["compiled"] if kernels.BACKEND == "compiled" else [])
    if len(backends) == 1:
        print("compiled extension not available; timing the fallback only")
    print(f"kernel threads: {kernels.kernel_threads()}")
    for label, fn in workloads():
        times, outs = {}, {}
        for b in backends:
            times[b], outs[b] = best_time(lambda: fn(b), args.repeat)
        line = f"{label:<55}" + "".join(f"  {b} {times[b] * 1e3:9.1f} ms" for b in backends)
        if len(backends) == 2:
            dev = np.abs(outs["python"] - outs["compiled"]).max()
            line += f"  speedup {times['python'] / times['compiled']:5.2f}x  max dev {dev:.1e}"
        print(line)


if __name__ == "__main__":
    main()
