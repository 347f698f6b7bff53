"""Fit the growth exponent of n(eps) for product weights gamma_j = j^-a.

Prints the count table and the least-squares slope of log n against log 1/eps.
"""
import argparse

import numpy as np

from hermite_ibc import Constant, FourierWeightSpec, PolyDecay, SpaceSpec, count_large_eigenvalues


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--alpha", type=int, default=4)
    ap.add_argument("--decay", type=float, default=2.0, help="a in gamma_j = j^-a (0 means gamma_j = 1)")
    ap.add_argument("--s", type=int, default=20)
    ap.add_argument("--eps-min", type=float, default=1e-3)
    ap.add_argument("--eps-max", type=float, default=1e-1)
    ap.add_argument("--points", type=int, default=20)
    args = ap.parse_args()

    weights = PolyDecay(args.decay) if args.decay > 0 else Constant(1.0)
    space = SpaceSpec(FourierWeightSpec("anova", args.alpha, weights), args.s)
    eps = np.geomspace(args.eps_min, args.eps_max, args.points)
    counts = [count_large_eigenvalues(space, float(e)) for e in eps]
    print("epsilon,count")
    for e, c in zip(eps, counts):
        print(f"{e:.6g},{c}")
    slope = np.polyfit(np.log(1 / eps), np.log(np.array(counts, dtype=float)), 1)[0]
    print(f"# slope {slope:.4f}")


if __name__ == "__main__":
    main()
