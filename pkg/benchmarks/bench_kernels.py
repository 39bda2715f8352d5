"""Timing comparison of the compiled and pure-numpy kernel paths.

Runs the same workloads through both implementations of each hot kernel
(stepping a walk, filling the recursion table, summing the spectral form)
after checking that they agree, then reports per-kernel timings and the
speedup.  If numba is unavailable (or disabled via QWLINE_DISABLE_NUMBA)
only the numpy column is produced.

Usage: python benchmarks/bench_kernels.py [--t-final 2000] [--repeats 5]
"""

import argparse
import timeit

import numpy as np

from qwline.kernels import (
    BACKEND,
    lambda_fill_numba,
    lambda_fill_numpy,
    lambda_spectral_numba,
    lambda_spectral_numpy,
    walk_step_numba,
    walk_step_numpy,
)


def _walk_workload(step, t_final, theta=0.9):
    def run():
        plus = np.array([np.cos(0.3)], dtype=np.complex128)
        minus = np.array([np.sin(0.3) + 0j], dtype=np.complex128)
        for t in range(t_final):
            width = plus.size
            th = np.full(width, theta)
            al = np.full(width, 0.2)
            be = np.full(width, -0.4)
            ch = np.full(width, 0.1)
            plus, minus = step(plus, minus, th, al, be, ch)
        return plus, minus

    return run


def _fill_workload(fill, t_max):
    return lambda: fill(np.cos(0.9), t_max)


def _spectral_workload(spectral, t):
    c = np.cos(0.9)

    def run():
        acc = 0.0
        for n in range(-t, t + 1, 2):
            acc += spectral(n, t, c)
        return acc

    return run


def _time(run, repeats):
    # One warmup call covers jit compilation and cache effects.
    run()
    return min(timeit.repeat(run, number=1, repeat=repeats))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--t-final", type=int, default=2000,
                    help="steps for the walk workload (default 2000)")
    ap.add_argument("--t-max", type=int, default=2000,
                    help="rows for the table workload (default 2000)")
    ap.add_argument("--t-spectral", type=int, default=400,
                    help="time for the spectral row workload (default 400)")
    ap.add_argument("--repeats", type=int, default=5,
                    help="timing repeats, best is reported (default 5)")
    args = ap.parse_args()

    have_numba = walk_step_numba is not None
    print(f"active backend: {BACKEND}")
    if have_numba:
        # Correctness first: both paths must produce the same numbers.
        p_np, m_np = _walk_workload(walk_step_numpy, 200)()
        p_nb, m_nb = _walk_workload(walk_step_numba, 200)()
        assert np.allclose(p_np, p_nb, atol=1e-14)
        assert np.allclose(m_np, m_nb, atol=1e-14)
        assert np.allclose(lambda_fill_numpy(np.cos(0.9), 300),
                           lambda_fill_numba(np.cos(0.9), 300), atol=1e-13)
        assert abs(_spectral_workload(lambda_spectral_numpy, 150)()
                   - _spectral_workload(lambda_spectral_numba, 150)()) < 1e-12
        print("cross-check: numba and numpy paths agree")

    workloads = [
        (f"walk_step, {args.t_final} steps",
         _walk_workload(walk_step_numpy, args.t_final),
         _walk_workload(walk_step_numba, args.t_final) if have_numba else None),
        (f"lambda_fill, t_max={args.t_max}",
         _fill_workload(lambda_fill_numpy, args.t_max),
         _fill_workload(lambda_fill_numba, args.t_max) if have_numba else None),
        (f"lambda_spectral row, t={args.t_spectral}",
         _spectral_workload(lambda_spectral_numpy, args.t_spectral),
         _spectral_workload(lambda_spectral_numba, args.t_spectral)
         if have_numba else None),
    ]

    header = f"{'workload':<34}{'numpy':>12}"
    if have_numba:
        header += f"{'numba':>12}{'speedup':>10}"
    print(header)
    for name, np_run, nb_run in workloads:
        t_np = _time(np_run, args.repeats)
        line = f"{name:<34}{t_np * 1e3:>10.2f}ms"
        if nb_run is not None:
            t_nb = _time(nb_run, args.repeats)
            line += f"{t_nb * 1e3:>10.2f}ms{t_np / t_nb:>9.1f}x"
        print(line)


if __name__ == "__main__":
    main()
