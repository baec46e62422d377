"""Benchmark the numba kernels against the pure-numpy fallbacks.

Run with the default backend so both implementations are importable:

    python benchmarks/bench_kernels.py [--dim 8] [--angles 1440] [--repeat 5]

Reports best-of-``repeat`` wall times per kernel and the speedup ratio.
JIT compilation happens in an untimed warmup call.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from opdist import kernels


def _random_matrix(d: int, rng) -> np.ndarray:
    return rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))


def _random_state(d: int, rng) -> np.ndarray:
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def _hemisphere(n: int) -> np.ndarray:
    polar = (np.arange(n) + 0.5) * (0.5 * np.pi / n)
    azimuth = np.arange(n) * (2.0 * np.pi / n)
    pp, aa = np.meshgrid(polar, azimuth, indexing="ij")
    return np.column_stack([
        (np.sin(pp) * np.cos(aa)).ravel(),
        (np.sin(pp) * np.sin(aa)).ravel(),
        np.cos(pp).ravel(),
    ])


def bench(label: str, fn, args, repeat: int, number: int) -> float:
    fn(*args)  # warmup; compiles the numba path on first use
    best = min(timeit.repeat(lambda: fn(*args), repeat=repeat, number=number))
    per_call = best / number
    print(f"  {label:28s} {per_call * 1e3:10.3f} ms/call")
    return per_call


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dim", type=int, default=8)
    ap.add_argument("--angles", type=int, default=1440)
    ap.add_argument("--dirs", type=int, default=64)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--number", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    if kernels.support_sweep_nb is None:
        print("numba backend unavailable (OPDIST_BACKEND=numpy or numba not "
              "installed); nothing to compare.")
        return 1

    rng = np.random.default_rng(args.seed)
    a = _random_matrix(args.dim, rng)
    angles = np.arange(args.angles) * (2.0 * np.pi / args.angles)
    dirs = np.vstack([_hemisphere(args.dirs), [0.0, 0.0, 1.0]])
    k0 = np.ascontiguousarray(np.stack([_random_matrix(args.dim, rng) / args.dim
                                        for _ in range(2)]))
    k1 = np.ascontiguousarray(np.stack([_random_matrix(args.dim, rng) / args.dim
                                        for _ in range(2)]))
    psi0 = _random_state(args.dim, rng)
    psi1 = _random_state(args.dim, rng)

    cases = [
        ("support_sweep", kernels.support_sweep_nb, kernels.support_sweep_np,
         (a, angles)),
        ("shell_sweep", kernels.shell_sweep_nb, kernels.shell_sweep_np,
         (a, dirs)),
        ("output_fidelity", kernels.output_fidelity_nb,
         kernels.output_fidelity_np, (k0, k1, psi0, psi1)),
    ]
    print(f"dim={args.dim} angles={args.angles} dirs={dirs.shape[0]} "
          f"repeat={args.repeat} number={args.number}")
    for name, nb, np_, case_args in cases:
        print(f"{name}:")
        t_nb = bench("numba", nb, case_args, args.repeat, args.number)
        t_np = bench("numpy", np_, case_args, args.repeat, args.number)
        print(f"  {'speedup (numpy/numba)':28s} {t_np / t_nb:10.2f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
