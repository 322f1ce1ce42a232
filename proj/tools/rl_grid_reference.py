#!/usr/bin/env python3
"""Reference values for the relative-likelihood grid search.

Evaluates the two-class epistemic/aleatoric decomposition on a fine grid
(default 10^7 intervals) with NumPy, independently of the C++ code, and
prints a C++ table row per (pos, neg) pair.  Used to freeze the expected
values in the acceptance suite.
"""

import argparse
import random

import numpy as np


def plausibility_positive(pos: float, neg: float, resolution: int) -> float:
    total = pos + neg
    theta_hat = 0.5 if total == 0.0 else pos / total

    def loglik(theta: np.ndarray) -> np.ndarray:
        with np.errstate(divide="ignore", invalid="ignore"):
            a = np.where(pos > 0.0, pos * np.log(theta), 0.0)
            b = np.where(neg > 0.0, neg * np.log(1.0 - theta), 0.0)
        out = a + b
        out[np.isnan(out)] = -np.inf
        return out

    log_hat = float(loglik(np.array([theta_hat]))[0])
    best = 0.0
    chunk = 1_000_000
    for start in range(0, resolution + 1, chunk):
        stop = min(start + chunk, resolution + 1)
        i = np.arange(start, stop, dtype=np.float64)
        theta = i / resolution
        ratio = np.exp(loglik(theta) - log_hat)
        bound = 2.0 * theta - 1.0
        best = max(best, float(np.max(np.minimum(ratio, bound))))
    return best


def decompose(pos: float, neg: float, resolution: int) -> tuple[float, float]:
    pi1 = plausibility_positive(pos, neg, resolution)
    pi0 = plausibility_positive(neg, pos, resolution)
    return min(pi1, pi0), 1.0 - max(pi1, pi0)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--resolution", type=int, default=10_000_000)
    parser.add_argument("--pairs", type=int, default=100)
    parser.add_argument("--seed", type=int, default=3)
    parser.add_argument("--check-at", type=int, default=100_000,
                        help="also evaluate at this coarse resolution and "
                             "report the largest deviation")
    args = parser.parse_args()

    rng = random.Random(args.seed)
    pairs = [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (3.0, 0.0), (1.0, 1.0),
             (25.0, 25.0), (50.0, 0.0), (0.5, 0.5)]
    while len(pairs) < args.pairs:
        pos = round(rng.uniform(0.0, 25.0), 3)
        neg = round(rng.uniform(0.0, 25.0), 3)
        pairs.append((pos, neg))

    worst = 0.0
    for pos, neg in pairs:
        ue, ua = decompose(pos, neg, args.resolution)
        if args.check_at:
            cue, cua = decompose(pos, neg, args.check_at)
            worst = max(worst, abs(cue - ue), abs(cua - ua))
        print(f"    {{{pos!r}, {neg!r}, {ue!r}, {ua!r}}},")
    if args.check_at:
        print(f"// max |coarse({args.check_at}) - fine({args.resolution})| = {worst:.3e}")


if __name__ == "__main__":
    main()
