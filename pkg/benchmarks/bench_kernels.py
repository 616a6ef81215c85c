"""Time the numba kernels against their numpy twins.

    python3 benchmarks/bench_kernels.py [--m 10] [--n 200] [--k 4] [--repeat 5]

Each backend runs the same inputs; outputs are compared before timing so a
speedup is never reported for a kernel that disagrees.
"""

import argparse
import time

import numpy as np

from randcommittee import _kernels
from randcommittee.election import _committee_masks, _scaled_harmonics


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--m", type=int, default=10)
    ap.add_argument("--n", type=int, default=200)
    ap.add_argument("--k", type=int, default=4)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if not _kernels.NUMBA_AVAILABLE:
        raise SystemExit("numba is not available (or disabled); nothing to compare")

    rng = np.random.default_rng(args.seed)
    A = (rng.random((args.n, args.m)) < 0.3).astype(np.uint8)
    masks = _committee_masks(args.m, range(args.k + 1), 10**7)
    h = _scaled_harmonics(args.k)
    mask = masks[len(masks) // 2]

    cases = {
        "underrepresented_counts": (
            lambda: _kernels.underrepresented_counts_np(A, mask, 2),
            lambda: _kernels.underrepresented_counts_nb(A, mask, 2),
        ),
        "pav_scores": (
            lambda: _kernels.pav_scores_np(A, masks, h),
            lambda: _kernels.pav_scores_nb(A, masks, h),
        ),
        "first_violations": (
            lambda: _kernels.first_violations_np(A, masks, 1, 1, args.k, args.k),
            lambda: _kernels.first_violations_nb(A, masks, 1, 1, args.k, args.k),
        ),
    }
    print(f"n={args.n} m={args.m} k={args.k} committees={len(masks)}")
    print(f"{'kernel':<26}{'numpy s':>12}{'numba s':>12}{'speedup':>10}")
    for name, (np_fn, nb_fn) in cases.items():
        if not np.array_equal(np_fn(), nb_fn()):  # also triggers compilation
            raise SystemExit(f"{name}: backends disagree")
        t_np, t_nb = best_of(np_fn, args.repeat), best_of(nb_fn, args.repeat)
        print(f"{name:<26}{t_np:>12.5f}{t_nb:>12.5f}{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
