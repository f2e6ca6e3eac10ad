"""Time the compiled blossom kernel against the pure-Python one.

Runs both backends on the same random defect sets (closed-form metric on a
C4-toric lattice), checks that the matching weights agree and prints the
per-instance time and the speed-up.

    python benchmarks/bench_kernels.py --sizes 10 20 40 80 --reps 20
"""

import argparse
import time

import numpy as np

from c4toric import _pykernels
from c4toric.codes import build_code
from c4toric.matching import MatchingProblem, defect_node, spatial_distance

try:
    from c4toric import _kernels
except ImportError:  # extension not built
    _kernels = None


def instances(l: int, k: int, reps: int, seed: int) -> list[np.ndarray]:
    spec = build_code("C4Toric", l)
    ids = spec.check_ids("Z")
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(reps):
        nodes = [defect_node(spec, c) for c in rng.choice(ids, size=k, replace=False)]
        out.append(MatchingProblem(nodes, lambda a, b: spatial_distance(spec, a, b)).weight_matrix())
    return out


def run(impl, mats) -> tuple[float, list[int]]:
    t0 = time.perf_counter()
    totals = []
    for w in mats:
        mate = impl.min_weight_perfect_matching_dense(w)
        totals.append(int(sum(w[i, mate[i]] for i in range(len(mate)) if i < mate[i])))
    return (time.perf_counter() - t0) / len(mats), totals


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[10, 20, 40, 80])
    ap.add_argument("--reps", type=int, default=20)
    ap.add_argument("--l", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if _kernels is None:
        print("compiled kernel not available; build with `pip install -e . --no-build-isolation`")
        return
    print(f"{'defects':>8} {'python ms':>10} {'cython ms':>10} {'speed-up':>9}")
    for k in args.sizes:
        mats = instances(args.l, k, args.reps, args.seed)
        tp, wp = run(_pykernels, mats)
        tc, wc = run(_kernels, mats)
        if wp != wc:
            raise SystemExit(f"weights differ at {k} defects")
        print(f"{k:>8} {tp * 1e3:>10.2f} {tc * 1e3:>10.2f} {tp / tc:>8.1f}x")


if __name__ == "__main__":
    main()
