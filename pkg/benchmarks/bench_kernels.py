"""Leaf-solve throughput: numba kernel vs the numpy fallback.

Both backends solve the same seeded batch of leaves (random admissible
configurations, moduli in [1/2, 2]) at several p.  JIT compilation is
excluded by a warm-up call.  Results are checked to agree before timing
is reported.

    python benchmarks/bench_kernels.py --configs 40 --points 25
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from siegel import _kernels
from siegel.corpus import configuration_corpus, random_point


def build_batch(n_configs: int, n_points: int, seed: int):
    gen = np.random.default_rng(seed)
    batch = []
    for A in configuration_corpus(n_configs, seed=seed):
        Af = np.ascontiguousarray(A.float_columns)
        for _ in range(n_points):
            ell = np.log(np.abs(random_point(gen, A.m)))
            batch.append((Af, ell, np.zeros(A.d)))
    return batch


def run(solver, batch, p):
    out = []
    t = time.perf_counter()
    for Af, ell, T0 in batch:
        out.append(solver(Af, ell, p, T0)[0])
    return time.perf_counter() - t, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--configs", type=int, default=40)
    ap.add_argument("--points", type=int, default=25)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--p", type=float, nargs="+", default=[1.0, 2.0, 10.0, 1024.0])
    ns = ap.parse_args(argv)

    if not _kernels.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")
    batch = build_batch(ns.configs, ns.points, ns.seed)
    Af, ell, T0 = batch[0]
    _kernels.newton_leaf_numba(Af, ell, 2.0, T0)  # compile

    print(f"{len(batch)} leaf solves per row")
    print(f"{'p':>8} {'numpy [s]':>10} {'numba [s]':>10} {'speedup':>8} {'max |dT|':>10}")
    for p in ns.p:
        t_np, T_np = run(_kernels.newton_leaf_numpy, batch, p)
        t_nb, T_nb = run(_kernels.newton_leaf_numba, batch, p)
        diff = max(float(np.abs(a - b).max()) for a, b in zip(T_np, T_nb))
        print(f"{p:>8g} {t_np:>10.4f} {t_nb:>10.4f} {t_np / t_nb:>8.1f} {diff:>10.2e}")


if __name__ == "__main__":
    main()
