"""Timing comparison of the jitted kernels against their numpy fallbacks.

Run with:  python3 benchmarks/benchmark_kernels.py
"""
from __future__ import annotations

import time

import numpy as np

from ofdmjrc import _kernels

C_LIGHT = 299_792_458.0


def _synth_args(k_active=52, m_symbols=10, n_fft=64):
    rng = np.random.default_rng(0)
    x = rng.standard_normal((k_active, m_symbols)) \
        + 1j * rng.standard_normal((k_active, m_symbols))
    k_idx = np.concatenate([np.arange(-k_active // 2, 0),
                            np.arange(1, k_active // 2 + 1)]).astype(float)
    delta_f = 312.5e3
    return (x, k_idx, n_fft, m_symbols, delta_f, n_fft * delta_f,
            1.0 / delta_f, 0.8 - 0.4j, 667e-9, 10.0, 10e3, 5e9, C_LIGHT)


def _refine_args(n_rows=52, n_cols=10):
    rng = np.random.default_rng(1)
    rows = rng.standard_normal((n_rows, n_cols)) \
        + 1j * rng.standard_normal((n_rows, n_cols))
    coef = rng.uniform(0.1, 3.0, n_cols)
    x0 = rng.uniform(-1.0, 1.0, n_rows)
    half = np.full(n_rows, 0.05)
    return rows, coef, 1.0, x0, half, _kernels.golden_iterations(1e-6)


def _time(fn, args, repeats=200):
    fn(*args)  # warm any compilation before timing
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    cases = [
        ("grid synthesis", _synth_args(),
         _kernels.synth_grid_numpy,
         _kernels.synth_grid_numba if _kernels.NUMBA_ENABLED else None),
        ("peak refinement", _refine_args(),
         _kernels.refine_tones_numpy,
         _kernels.refine_tones_numba if _kernels.NUMBA_ENABLED else None),
    ]
    print(f"jit backend available: {_kernels.NUMBA_ENABLED}")
    print(f"{'kernel':<18} {'numpy':>12} {'jit':>12} {'speedup':>9}")
    for name, args, numpy_fn, jit_fn in cases:
        t_np = _time(numpy_fn, args)
        if jit_fn is None:
            print(f"{name:<18} {t_np * 1e6:>9.1f} us {'-':>12} {'-':>9}")
            continue
        t_jit = _time(jit_fn, args)
        print(f"{name:<18} {t_np * 1e6:>9.1f} us {t_jit * 1e6:>9.1f} us "
              f"{t_np / t_jit:>8.1f}x")


if __name__ == "__main__":
    main()
