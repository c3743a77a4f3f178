"""Timing comparison of the residual kernels.

The package ships a compiled evaluation kernel and a NumPy fallback that
perform identical floating-point work.  This script times residual_grid
in both backends over a realistic parameter pack and reports the ratio.

    python benchmarks/bench_kernels.py --points 200000 --repeats 7
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from kgbound import (CouplingMode, ParticleSpec, PhysicalConstants,
                     PotentialSpec, QuantumNumbers)
from kgbound._kernels import py_fallback
from kgbound.quantization import build_residual_spec

try:
    from kgbound._kernels import _residual as compiled
except ImportError:
    compiled = None


def kernel_args(points: int):
    constants = PhysicalConstants()
    particle = ParticleSpec.neutral_pion(constants)
    pot = PotentialSpec.from_lambda_b(A=200.0, delta=0.003, lambda_b=0.003,
                                      particle=particle,
                                      mode=CouplingMode.EMES)
    spec = build_residual_spec(constants, particle, pot,
                               QuantumNumbers(n=2, l=1))
    energies = np.linspace(spec.window[0], spec.window[1], points)
    return (energies, spec.m0c2, spec.delta, spec.alpha, spec.c0, spec.c1,
            spec.k2, spec.ll1, spec.branch_sign, spec.n_plus_half,
            spec.pole_eps)


def best_time(func, args, repeats: int, loops: int) -> float:
    timer = timeit.Timer(lambda: func(*args))
    return min(timer.repeat(repeat=repeats, number=loops)) / loops


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--points", type=int, default=200_000,
                        help="energy grid size (default 200000)")
    parser.add_argument("--repeats", type=int, default=7,
                        help="timing repeats, best is reported (default 7)")
    parser.add_argument("--loops", type=int, default=20,
                        help="grid evaluations per repeat (default 20)")
    args = parser.parse_args()

    pack = kernel_args(args.points)
    fallback_t = best_time(py_fallback.residual_grid, pack,
                           args.repeats, args.loops)
    print(f"points            {args.points}")
    print(f"numpy fallback    {fallback_t * 1e3:9.3f} ms/eval")
    if compiled is None:
        print("compiled kernel   not built (pip install -e . rebuilds it)")
        return 0

    compiled_t = best_time(compiled.residual_grid, pack,
                           args.repeats, args.loops)
    print(f"compiled kernel   {compiled_t * 1e3:9.3f} ms/eval")
    print(f"speedup           {fallback_t / compiled_t:9.2f}x")

    ours = compiled.residual_grid(*pack)
    theirs = py_fallback.residual_grid(*pack)
    agree = all(np.array_equal(a, b, equal_nan=True)
                for a, b in zip(ours, theirs))
    print(f"bitwise agreement {'yes' if agree else 'NO'}")
    return 0 if agree else 1


if __name__ == "__main__":
    raise SystemExit(main())
