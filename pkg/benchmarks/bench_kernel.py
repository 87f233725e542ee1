"""Benchmark the simplex pivot kernels (compiled vs pure numpy).

Runs three workloads through ``solve_lp``/``solve_matrix_game`` with each
available kernel backend and prints a timing table:

  double-oracle   full randomized solves over a batch of generated
                  instances (many small restricted games)
  exhaustive      brute-force game solves (one big payoff LP per instance)
  random-lps      assorted dense LPs with mixed row types

Usage: python benchmarks/bench_kernel.py [--repeat N]
"""

import argparse
import time

import numpy as np

import minregret.lp as lpmod
from minregret.gen import generate_instance
from minregret.lp import LinearProgram, available_kernels, solve_lp
from minregret.solvers import bruteforce_game_value, solve_randomized


def _double_oracle_batch():
    for family in ("k-selection", "spanning-tree", "dag-path"):
        for seed in range(12):
            inst = generate_instance(
                family,
                n=6 + seed % 5,
                uncertainty="interval" if seed % 2 == 0 else "scenarios",
                n_scenarios=2 + seed % 3,
                seed=seed,
            )
            solve_randomized(inst)


def _exhaustive_batch():
    for seed in (380213, 17, 29):
        inst = generate_instance("spanning-tree", n=10, uncertainty="interval", seed=seed)
        bruteforce_game_value(inst)
    for seed in (3, 5):
        inst = generate_instance("k-selection", n=10, uncertainty="interval", seed=seed)
        bruteforce_game_value(inst)


def _random_lp_batch():
    rng = np.random.default_rng(0)
    for _ in range(150):
        m, n = int(rng.integers(5, 40)), int(rng.integers(5, 40))
        lp = LinearProgram(
            rng.normal(size=n),
            rng.normal(size=(m, n)),
            tuple(rng.choice(["<=", "=", ">="], size=m)),
            rng.normal(size=m),
            lower=np.where(rng.random(n) < 0.2, -np.inf, 0.0),
        )
        solve_lp(lp)


WORKLOADS = [
    ("double-oracle", _double_oracle_batch),
    ("exhaustive", _exhaustive_batch),
    ("random-lps", _random_lp_batch),
]


def time_workload(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3, help="take the best of N runs")
    args = parser.parse_args()

    kernels = available_kernels()
    names = [k.BACKEND for k in kernels]
    print(f"kernels available: {', '.join(names)}")
    if len(kernels) == 1:
        print("compiled kernel not built; timing the python kernel only\n")

    results = {}
    saved = lpmod._kernel
    try:
        for kernel in kernels:
            lpmod._kernel = kernel
            for name, fn in WORKLOADS:
                results[(kernel.BACKEND, name)] = time_workload(fn, args.repeat)
    finally:
        lpmod._kernel = saved

    width = max(len(n) for n, _ in WORKLOADS)
    header = f"{'workload':<{width}}  " + "".join(f"{n:>12}" for n in names)
    if len(names) == 2:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for name, _ in WORKLOADS:
        row = f"{name:<{width}}  "
        for backend in names:
            row += f"{results[(backend, name)]:>11.3f}s"
        if len(names) == 2:
            ratio = results[("python", name)] / results[("compiled", name)]
            row += f"{ratio:>9.2f}x"
        print(row)


if __name__ == "__main__":
    main()
