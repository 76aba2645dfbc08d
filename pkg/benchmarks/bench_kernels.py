"""Compiled vs pure-Python Bethe-equation kernel.

Times ``bae_system`` (residual plus analytic Jacobian) on representative
systems, then one full multi-start solve with each backend patched in.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import time
import timeit

import numpy as np

from tjodba import _kernels_py, kernels
from tjodba.model import BoundaryFields
from tjodba.odba import case_for, kernel_params, solve_bae

try:
    from tjodba import _kernels as compiled
except ImportError:
    compiled = None

UNPARALLEL = BoundaryFields.integrable((0.3, 0, 0.4), (0, 0.2, 0.1))
PARALLEL_B = BoundaryFields.integrable((0, 0, 0.5), (0, 0, 0.3), sign1=1, signN=-1)

# (label, kernel case, N, M, fields, number of auxiliary roots)
SYSTEMS = [
    ("even  N=4 M=2", kernels.EVEN, 4, 2, UNPARALLEL, 2),
    ("even  N=6 M=4", kernels.EVEN, 6, 4, UNPARALLEL, 4),
    ("odd   N=5 M=3", kernels.ODD, 5, 3, UNPARALLEL, 4),
    ("par.  N=6 M=4", kernels.PARALLEL, 6, 4, PARALLEL_B, 2),
]


def random_point(rng, M, K):
    return rng.normal(size=M + K) * 0.7 + 1j * rng.normal(size=M + K) * 0.4


def bench_kernel(repeat: int):
    rng = np.random.default_rng(0)
    print(f"{'system':<16}{'python us':>12}{'compiled us':>14}{'speedup':>10}")
    for label, case, N, M, b, K in SYSTEMS:
        z = random_point(rng, M, K)
        params = kernel_params(b)
        number = 2000
        t_py = min(timeit.repeat(lambda: _kernels_py.bae_system(case, z, M, params, N),
                                 number=number, repeat=repeat)) / number
        if compiled is None:
            print(f"{label:<16}{t_py * 1e6:>12.1f}{'n/a':>14}{'':>10}")
            continue
        g1, _, j1 = _kernels_py.bae_system(case, z, M, params, N)
        g2, _, j2 = compiled.bae_system(case, z, M, params, N)
        assert np.allclose(g1, g2, rtol=1e-12, atol=1e-12) and np.allclose(j1, j2, rtol=1e-12, atol=1e-12)
        t_c = min(timeit.repeat(lambda: compiled.bae_system(case, z, M, params, N),
                                number=number, repeat=repeat)) / number
        print(f"{label:<16}{t_py * 1e6:>12.1f}{t_c * 1e6:>14.1f}{t_py / t_c:>9.1f}x")


def bench_solve():
    if compiled is None:
        print("compiled extension not built; skipping end-to-end comparison")
        return
    print(f"\n{'full solve':<16}{'python s':>12}{'compiled s':>14}{'speedup':>10}{'levels':>8}")
    for label, N, M, b in [("N=3 M=2 unpar.", 3, 2, UNPARALLEL), ("N=3 M=2 par.", 3, 2, PARALLEL_B)]:
        times, counts = [], []
        for fn in (_kernels_py.bae_system, compiled.bae_system):
            kernels.bae_system = fn
            t0 = time.perf_counter()
            res = solve_bae(case_for(M, b), N, M, b, rng=1)
            times.append(time.perf_counter() - t0)
            counts.append(len(res))
        kernels.bae_system = compiled.bae_system
        print(f"{label:<16}{times[0]:>12.2f}{times[1]:>14.2f}{times[0] / times[1]:>9.1f}x{counts[1]:>8}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--skip-solve", action="store_true")
    args = ap.parse_args()
    print(f"active backend: {kernels.BACKEND}")
    bench_kernel(args.repeat)
    if not args.skip_solve:
        bench_solve()


if __name__ == "__main__":
    main()
