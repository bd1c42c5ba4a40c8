"""Compare the compiled and pure-Python kernels on representative workloads.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""

from __future__ import annotations

import argparse
import time

from quasiaffine import kernels
from quasiaffine.algebra import SparsePoly
from quasiaffine.integrands import PolyIntegrand, bco_l, det
from quasiaffine.operators import grad, hessian
from quasiaffine.quasiaffinity import lambda_affine_check, quasiaffine_check
from quasiaffine.torus import random_field, torus_average



def hessian_det3() -> PolyIntegrand:
    """``det`` of a symmetric 3x3 matrix stored as (xx, xy, xz, yy, yz, zz)."""
    v = [SparsePoly.variable(6, i) for i in range(6)]
    a, b, c, d, e, f = v
    return PolyIntegrand(6, a * (d * f - e * e) - b * (b * f - e * c) + c * (b * e - d * c), name="hessdet3")


WORKLOADS = {
    "potential criterion, det D^2u vs hessian(3,1)": lambda: quasiaffine_check(hessian_det3(), hessian(3, 1)),
    "potential criterion, det(3) vs grad(3,3)": lambda: quasiaffine_check(det(3), grad(3, 3)),
    "potential criterion, bcoL vs hessian(2,3)": lambda: quasiaffine_check(bco_l(), hessian(2, 3)),
    "cone identity, bcoL vs hessian(2,3)": lambda: lambda_affine_check(bco_l(), hessian(2, 3)),
    "torus mean, det(3) on a 6-mode field": lambda: torus_average(
        det(3), [0] * 9, grad(3, 3), random_field(3, 3, 6, seed=1, max_freq=3)
    ),
    "torus mean, bcoL on a 12-mode field": lambda: torus_average(
        bco_l(), [0] * 9, hessian(2, 3), random_field(2, 3, 12, seed=2, max_freq=4)
    ),
}


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    backends = kernels.available_backends()
    print(f"{'workload':<50}" + "".join(f"{b:>12}" for b in backends) + ("     speedup" if len(backends) > 1 else ""))
    for name, fn in WORKLOADS.items():
        row = {}
        for b in backends:
            kernels.BACKEND = b
            row[b] = best_of(fn, args.repeat)
        line = f"{name:<50}" + "".join(f"{row[b]:>11.4f}s" for b in backends)
        if len(backends) > 1:
            line += f"{row['python'] / row['cython']:>11.1f}x"
        print(line)


if __name__ == "__main__":
    main()
