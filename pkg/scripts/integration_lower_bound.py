"""Compare tensor Gauss-Hermite rules with the lower bound for non-negative rules.

Works in the exponential space with omega = 3^(-alpha/3) and gamma_j = j^-a.
"""
import argparse
import itertools

import numpy as np

from hermite_ibc import CubatureRule, FourierWeightSpec, PolyDecay, SpaceSpec, wce_integration
from hermite_ibc.analysis import space_lower_bound
from hermite_ibc.hermite_core import gauss_hermite


def tensor_rule(m, s):
    g = gauss_hermite(m)
    nodes = np.array(list(itertools.product(g.nodes, repeat=s)))
    weights = np.prod(list(itertools.product(g.weights, repeat=s)), axis=1)
    return CubatureRule(nodes, weights, s)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--alpha", type=int, default=2)
    ap.add_argument("--decay", type=float, default=2.0)
    ap.add_argument("--s", type=int, default=2)
    ap.add_argument("--m-max", type=int, default=8, help="largest points per axis")
    args = ap.parse_args()

    omega = 3.0 ** (-args.alpha / 3.0)
    space = SpaceSpec(FourierWeightSpec("exponential", 1, PolyDecay(args.decay), omega), args.s)
    print("points,wce,lower_bound")
    for m in range(1, args.m_max + 1):
        rule = tensor_rule(m, args.s)
        print(f"{len(rule)},{wce_integration(space, rule):.6e},{space_lower_bound(space, len(rule)):.6e}")


if __name__ == "__main__":
    main()
