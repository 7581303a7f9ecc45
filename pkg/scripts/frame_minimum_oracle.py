"""Compare the frame optimizer with brute-force frame sampling.

For the Fubini-Study tensor the sectional curvature is 1 + 3 <JX, Y>^2
(c = 4), so every four-frame sum is at least 4 and a complex frame attains it.
"""

import argparse
import time

import numpy as np

from cosk.model_spaces import fubini_study
from cosk.operators import _quad_sums, min_frame_quad_sum, random_frames
from cosk.tensor_core import random_act


def dense_min(R, count, seed, batch=20_000):
    rng = np.random.default_rng(seed)
    best = np.inf
    for start in range(0, count, batch):
        best = min(best, float(np.min(_quad_sums(R.comp, random_frames(rng, min(batch, count - start), R.n)))))
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--frames", type=int, default=200_000)
    ap.add_argument("--random", type=int, default=5, help="number of random tensors to compare as well")
    args = ap.parse_args()

    cases = [("CP2 (c = 4)", fubini_study(2, 4.0)[0])]
    cases += [(f"random n=4 seed {s}", random_act(4, s)) for s in range(args.random)]
    print(f"{'tensor':<20} {'optimizer':>12} {'dense':>12} {'gap':>10} {'time':>7}")
    for name, R in cases:
        t0 = time.perf_counter()
        opt = min_frame_quad_sum(R)
        dt = time.perf_counter() - t0
        dense = dense_min(R, args.frames, seed=1)
        print(f"{name:<20} {opt:12.8f} {dense:12.8f} {dense - opt:10.2e} {dt:6.2f}s")


if __name__ == "__main__":
    main()
