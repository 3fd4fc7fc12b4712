"""Benchmark the numba kernels against the pure-numpy fallback.

Times the individual amplitude kernels on a 15-qubit state and one end-to-end
Monte Carlo workload per backend. The end-to-end comparison temporarily
rebinds the kernel table inside magicsim._accel, which is safe because every
call site resolves kernels through the module at call time.

Usage: python benchmarks/bench_backends.py [--trials 2000]
"""

import argparse
import contextlib
import math
import time

import numpy as np

from magicsim import _accel, distill


@contextlib.contextmanager
def _bound_kernels(kernels: dict):
    saved = {name: getattr(_accel, name) for name in kernels}
    try:
        for name, fn in kernels.items():
            setattr(_accel, name, fn)
        yield
    finally:
        for name, fn in saved.items():
            setattr(_accel, name, fn)


def _time(fn, repeats: int) -> float:
    fn()  # warm up (JIT compilation, caches)
    t0 = time.perf_counter()
    for _ in range(repeats):
        fn()
    return (time.perf_counter() - t0) / repeats


def bench_kernels(kernels: dict, n: int = 15, repeats: int = 200) -> dict:
    rng = np.random.default_rng(0)
    amps = rng.normal(size=2 ** n) + 1j * rng.normal(size=2 ** n)
    amps /= np.linalg.norm(amps)
    out = np.empty_like(amps)
    lut = np.exp(1j * math.pi / 4 * np.arange(16, dtype=float))
    xm = 0b101010101010101
    pm = 0b110011001100110
    u = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))[0]
    vecs = np.ascontiguousarray(rng.normal(size=(n, 2))
                                + 1j * rng.normal(size=(n, 2)))
    classes = rng.integers(0, 1024, size=2 ** n).astype(np.int64)
    work = amps.copy()
    return {
        "apply_1q": _time(lambda: kernels["apply_1q"](work, u, 1 << 7), repeats),
        "phased_xor_apply": _time(
            lambda: kernels["phased_xor_apply"](amps, out, xm, pm, lut), repeats),
        "phased_xor_expect": _time(
            lambda: kernels["phased_xor_expect"](amps, xm, pm, lut), repeats),
        "phased_xor_collapse": _time(
            lambda: kernels["phased_xor_collapse"](work, xm, pm, lut, 1.0, 0.5),
            repeats),
        "product_state": _time(lambda: kernels["product_state"](vecs), repeats),
        "class_probs": _time(
            lambda: kernels["class_probs"](amps, classes, 1024), repeats),
    }


def bench_end_to_end(kernels: dict, trials: int) -> dict:
    with _bound_kernels(kernels):
        t0 = time.perf_counter()
        distill.t_round_montecarlo(0.1, trials * 5, seed=1)
        t_time = (time.perf_counter() - t0) / (trials * 5)
        t0 = time.perf_counter()
        distill.h_round_montecarlo(0.1, trials, seed=1)
        h_time = (time.perf_counter() - t0) / trials
    return {"five_copy_trial": t_time, "fifteen_copy_trial": h_time}


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=2000,
                        help="fifteen-copy Monte Carlo trials per backend")
    args = parser.parse_args()

    suites = {"numpy": _accel.numpy_kernels()}
    nb = _accel.numba_kernels()
    if nb is not None:
        suites["numba"] = nb
    else:
        print("numba backend unavailable (set MAGICSIM_BACKEND=numba or install "
              "numba); benchmarking numpy only")

    results = {}
    for name, kernels in suites.items():
        rows = bench_kernels(kernels)
        rows.update(bench_end_to_end(kernels, args.trials))
        results[name] = rows

    names = sorted(next(iter(results.values())))
    width = max(len(n) for n in names)
    header = f"{'kernel':<{width}}" + "".join(f"{b:>14}" for b in results)
    if len(results) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for kernel in names:
        line = f"{kernel:<{width}}"
        for backend in results:
            line += f"{results[backend][kernel] * 1e6:>12.1f}us"
        if len(results) == 2:
            ratio = results["numpy"][kernel] / results["numba"][kernel]
            line += f"{ratio:>9.1f}x"
        print(line)


if __name__ == "__main__":
    main()
