"""Compare the compiled and numpy kernel backends.

    python benchmarks/bench_kernels.py --runs 10000000 --repeat 3

Reports the best wall time per kernel and backend and checks that both
backends return identical results.
"""
import argparse
import time

import numpy as np

from hom_fingerprint import _pykernels
from hom_fingerprint.codes import generate_random_linear_code
from hom_fingerprint.imperfections import SourceParams, coincidence_fraction
from hom_fingerprint.montecarlo import _KernelArgs

try:
    from hom_fingerprint import _kernels
except ImportError:
    _kernels = None


def best_of(fn, repeat):
    times, result = [], None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - t0)
    return min(times), result


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--runs", type=int, default=10_000_000, help="Monte Carlo runs")
    ap.add_argument("--code-n", type=int, default=20, help="code dimension for min_weight")
    ap.add_argument("--code-m", type=int, default=24, help="code length for min_weight")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    p = SourceParams(0.05, 0.0, 0.01, 0.98)
    ka = _KernelArgs.build(p, 0.8, seed=1)
    code = generate_random_linear_code(args.code_n, args.code_m, seed=1)
    cols = np.array(code.columns(), dtype=np.uint64)

    backends = [("numpy", _pykernels)]
    if _kernels is not None:
        backends.append(("cython", _kernels))
    else:
        print("compiled extension not built; timing the numpy backend only")

    rows = []
    for name, mod in backends:
        t_mc, tally = best_of(lambda: mod.mc_tally(ka.key, 0, args.runs, *ka.args()),
                              args.repeat)
        t_mw, dmin = best_of(lambda: mod.min_weight(cols), args.repeat)
        rows.append((name, t_mc, t_mw, tally, dmin))

    print(f"mc_tally: {args.runs} runs (Q model {coincidence_fraction(p, 0.8):.6f}); "
          f"min_weight: n={args.code_n}, m={args.code_m}")
    print(f"{'backend':<8} {'mc_tally [s]':>13} {'runs/s':>12} {'min_weight [s]':>15}")
    for name, t_mc, t_mw, _, _ in rows:
        print(f"{name:<8} {t_mc:13.3f} {args.runs / t_mc:12.3e} {t_mw:15.4f}")
    if len(rows) == 2:
        (_, a_mc, a_mw, a_t, a_d), (_, b_mc, b_mw, b_t, b_d) = rows
        print(f"speedup  {a_mc / b_mc:13.1f} {'':>12} {a_mw / b_mw:15.1f}")
        print(f"identical results: {a_t == b_t and a_d == b_d}")


if __name__ == "__main__":
    main()
