"""Compare the compiled and pure-Python kernel backends.

    python3 benchmarks/bench_kernels.py [--n 20000] [--repeat 5]

Prints best-of-``repeat`` wall times per backend and the speedup, and checks
that both backends agree on the outputs.
"""

import argparse
import math
import timeit

import numpy as np

from decoteich.kernels import backends
from decoteich.realization import realize_triangle


def make_inputs(n, seed=7):
    rng = np.random.default_rng(seed)
    U0, U1, W = (np.empty((n, 3)) for _ in range(3))
    for i in range(n):
        t = np.sort(rng.uniform(0, 2 * math.pi, 3))
        rays = [np.array([math.cos(a), math.sin(a), 1.0]) for a in t]
        U0[i], U1[i], W[i] = realize_triangle(*rays, *rng.uniform(0.2, 5, 3))
    return U0, U1, W, rng.uniform(0.2, 5, n), rng.uniform(0.2, 5, n)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    U0, U1, W, L0, L1 = make_inputs(args.n)
    impls = backends()
    if "cython" not in impls:
        print("compiled backend not built; only the fallback is available")

    results = {}
    for name, mod in impls.items():
        t_ext = min(timeit.repeat(lambda: mod.extend_batch(U0, U1, W, L0, L1),
                                  number=1, repeat=args.repeat))
        t_lam = min(timeit.repeat(lambda: mod.lambda_batch(U0, U1),
                                  number=1, repeat=args.repeat))
        results[name] = (t_ext, t_lam, mod.extend_batch(U0, U1, W, L0, L1)[0],
                         mod.lambda_batch(U0, U1))

    print(f"{'backend':<8} {'extend_batch':>14} {'lambda_batch':>14}   (n={args.n})")
    for name, (t_ext, t_lam, _, _) in results.items():
        print(f"{name:<8} {t_ext * 1e3:>11.2f} ms {t_lam * 1e3:>11.2f} ms")
    if len(results) == 2:
        py, cy = results["python"], results["cython"]
        print(f"speedup  {py[0] / cy[0]:>13.1f}x {py[1] / cy[1]:>13.1f}x")
        dv = np.abs(py[2] - cy[2]).max() / np.abs(py[2]).max()
        dl = np.abs(py[3] - cy[3]).max() / np.abs(py[3]).max()
        print(f"max relative disagreement: extend {dv:.1e}, lambda {dl:.1e}")


if __name__ == "__main__":
    main()
