"""Time the numba and numpy kernel backends on game-sized inputs.

    python benchmarks/bench_kernels.py [--n 512] [--repeat 20]

Also runs one ``run_trials`` batch end to end under each backend, in a
subprocess so ``LOCGAME_BACKEND`` takes effect at import.
"""
import argparse
import os
import subprocess
import sys
import time

import numpy as np

from locgame import _kernels_numba as nb
from locgame import _kernels_numpy as npk
from locgame.game import group_rows, partition_by_signature
from locgame.graph import GnpParams, sample_gnp

END_TO_END = """
import time
from locgame.harness import ExperimentConfig, run_trials
cfg = ExperimentConfig(n={n}, p=0.5, seed=1, trials={trials}, rounds=20, k_max={n})
run_trials(cfg, 4)
t = time.perf_counter()
run_trials(cfg, {k})
print(time.perf_counter() - t)
"""


def timeit(fn, repeat):
    fn()  # compile / warm caches
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=512)
    ap.add_argument("--k", type=int, default=14)
    ap.add_argument("--repeat", type=int, default=20)
    ap.add_argument("--trials", type=int, default=50)
    args = ap.parse_args()

    g = sample_gnp(GnpParams(args.n, 0.5, 7))
    rng = np.random.default_rng(0)
    cands = np.arange(args.n)
    probe = np.sort(rng.choice(args.n, args.k, replace=False))
    part = partition_by_signature(g, cands, probe)
    sub = cands[: args.n // 2]
    dist = nb.probe_distances_d2(g.adj, sub, np.arange(args.n))
    vals, codes = np.unique(dist, return_inverse=True)
    codes = codes.reshape(dist.shape).astype(np.int64)
    labels, first = group_rows(dist[:, probe])

    cases = {
        "probe_distances_d2": lambda m: m.probe_distances_d2(g.adj, cands, probe),
        "class_union_counts": lambda m: m.class_union_counts(g.closed_bits, part.members, part.starts),
        "union_classes": lambda m: m.union_classes(g.closed_bits, part.members, part.starts),
        "bfs": lambda m: m.bfs(g.bits, g.n, 0, np.iinfo(np.int32).max),
        "codegree_matrix": lambda m: m.codegree_matrix(g.adj),
        "separation_gains": lambda m: m.separation_gains(codes, labels, len(first), len(vals)),
    }
    print(f"{'kernel':<22}{'numpy (ms)':>12}{'numba (ms)':>12}{'speedup':>10}")
    for name, call in cases.items():
        t_np = timeit(lambda: call(npk), args.repeat)
        t_nb = timeit(lambda: call(nb), args.repeat)
        print(f"{name:<22}{t_np * 1e3:>12.3f}{t_nb * 1e3:>12.3f}{t_np / t_nb:>10.2f}")

    print(f"\nrun_trials n={args.n} k={args.k} trials={args.trials}")
    for backend in ("numpy", "numba"):
        env = dict(os.environ, LOCGAME_BACKEND=backend)
        code = END_TO_END.format(n=args.n, k=args.k, trials=args.trials)
        out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                             text=True, check=True)
        print(f"  {backend:<6} {float(out.stdout.strip()):.3f} s")


if __name__ == "__main__":
    main()
