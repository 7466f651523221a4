"""Time the compiled kernels against the pure-Python fallback.

Each case calls the public API once per backend with ``koopspec._kernels.impl``
swapped, so the numbers include the shared NumPy glue.

    python benchmarks/bench_kernels.py [--repeat 3] [--quick]
"""

import argparse
import importlib
import time

import numpy as np

import koopspec
from koopspec import _kernels, _pykernels


def cases(quick):
    s = 4 if quick else 1
    rng = np.random.default_rng(0)
    m = koopspec.atomic_moments(
        koopspec.AtomList.of([(0.1, 1.0), (0.45, 0.5), (0.8, 0.25)]), 2000 // s)
    vals = m.values.copy()
    vals[0] += 1.0
    T = koopspec.HermitianToeplitz(vals)
    rhs = rng.standard_normal(vals.size) + 1j * rng.standard_normal(vals.size)
    poly = koopspec.MonicPolynomial(rng.standard_normal(200 // s) + 0j)
    cat_f1 = koopspec.MomentSequence([1.25, 0.5] + [0.0] * (200 // s - 1))
    return [
        (f"levinson_solve N={vals.size - 1}", lambda: koopspec.levinson_solve(T, rhs)),
        (f"trench_inverse N={vals.size - 1}", lambda: koopspec.trench_inverse(T)),
        (f"cat_map_orbit M={10**6 // s}",
         lambda: koopspec.cat_map_orbit(koopspec.CatMapState(0.3, 0.1), 10**6 // s)),
        (f"lorenz_states M={10**4 // s}",
         lambda: koopspec.lorenz_states(koopspec.LorenzState(1.0, 1.0, 20.0), 10**4 // s)),
        (f"poly_roots degree {poly.degree}", lambda: koopspec.poly_roots(poly)),
        (f"quadrature N={cat_f1.order}", lambda: koopspec.quadrature(cat_f1)),
    ]


def best_time(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--quick", action="store_true", help="smaller problem sizes")
    args = p.parse_args(argv)
    try:
        compiled = importlib.import_module("koopspec._ckernels")
    except ImportError:
        raise SystemExit("compiled kernels are not built; run pip install -e . first")
    print(f"{'case':32s} {'cython [s]':>11s} {'python [s]':>11s} {'speedup':>8s}")
    for name, fn in cases(args.quick):
        times = []
        for impl in (compiled, _pykernels):
            _kernels.impl = impl
            fn()  # warm-up
            times.append(best_time(fn, args.repeat))
        _kernels.impl = compiled
        print(f"{name:32s} {times[0]:11.4f} {times[1]:11.4f} {times[1] / times[0]:7.1f}x")


if __name__ == "__main__":
    main()
