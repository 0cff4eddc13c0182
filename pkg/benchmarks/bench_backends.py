"""Compare the compiled and numpy kernels.

    python3 benchmarks/bench_backends.py [--repeat N]

Times the RK4 integration loop (the oracle's hot path) and the batched
asymptotic-concurrence grid (the figure sweeps' hot path) for every
available backend, and checks that both give the same numbers.
"""

import argparse
import timeit

import numpy as np

from dmxy import BathParams, SystemParams
from dmxy._backend import implementations
from dmxy.oracle import default_dt, liouvillian, vec
from dmxy.states import NAMED_STATES


def rk4_case(nsteps):
    p = SystemParams(J=1.0, chi=0.9, B=2.0, b=1.0)
    b = BathParams.from_mean(1.5, 0.5, 0.02)
    L = np.ascontiguousarray(liouvillian(p, b))
    Y = np.ascontiguousarray(np.stack([vec(NAMED_STATES[n]()) for n in ("bell-psi", "mixed-fig3")], axis=1))
    return L, Y, default_dt(p, b), nsteps


def grid_case(n):
    D, TM, dT = np.meshgrid(np.linspace(0, 5, n), np.linspace(0.5, 4, n), np.linspace(-1, 1, 4), indexing="ij")
    T1, T2 = TM + dT / 2, TM - dT / 2
    return (1.0, 0.3, 4.0, -3.5, D.ravel(), 0.02, 0.02, T1.ravel(), T2.ravel())


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--steps", type=int, default=20000)
    ap.add_argument("--grid", type=int, default=200, help="points per axis of the D x TM grid")
    args = ap.parse_args()

    impls = implementations()
    L, Y0, h, n = rk4_case(args.steps)
    grid = grid_case(args.grid)
    results = {}
    print(f"{'kernel':<22}{'backend':<10}{'best [s]':>12}")
    for name, mod in impls.items():
        def rk4():
            Y = Y0.copy()
            mod.rk4_linear(L, Y, h, n)
            return Y

        def sweep():
            return mod.asym_concurrence_grid(*grid)

        for label, fn in ((f"rk4 x{n}", rk4), (f"grid {grid[4].size} pts", sweep)):
            best = min(timeit.repeat(fn, number=1, repeat=args.repeat))
            results.setdefault(label, {})[name] = (best, fn())
            print(f"{label:<22}{name:<10}{best:>12.4f}")

    if len(impls) > 1:
        for label, by in results.items():
            (tp, rp), (tc, rc) = by["python"], by["compiled"]
            a = rp if isinstance(rp, np.ndarray) else rp[0]
            c = rc if isinstance(rc, np.ndarray) else rc[0]
            diff = np.nanmax(np.abs(a - c))
            print(f"{label}: speedup x{tp / tc:.1f}, max |diff| {diff:.1e}")


if __name__ == "__main__":
    main()
