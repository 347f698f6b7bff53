"""Unweighted spaces: watch n(eps) double with every added coordinate."""
import argparse

from hermite_ibc import Constant, FourierWeightSpec, SpaceSpec, count_large_eigenvalues, tractability_report


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alpha", type=int, default=2)
    ap.add_argument("--eps", type=float, default=0.5)
    ap.add_argument("--s-min", type=int, default=1)
    ap.add_argument("--s-max", type=int, default=14)
    args = ap.parse_args()

    print("s,count,2^s")
    for s in range(args.s_min, args.s_max + 1):
        space = SpaceSpec(FourierWeightSpec("anova", args.alpha, Constant(1.0)), s)
        print(f"{s},{count_large_eigenvalues(space, args.eps)},{2 ** s}")
    wt = tractability_report(Constant(1.0), args.alpha, "anova").entry("WT")
    print(f"# WT: {wt.verdict} ({wt.basis})")


if __name__ == "__main__":
    main()
