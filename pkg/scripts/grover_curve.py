"""Success probability p(K) of K Grover iterations: the closed form next to
an explicit amplitude simulation, for one (N, M)."""

import argparse

import numpy as np

from smlg.grover import full_grover_oracle, period, success_probability


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--N", type=int, default=64)
    ap.add_argument("--M", type=int, default=3)
    ap.add_argument("--kmax", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    marked = np.random.default_rng(args.seed).choice(args.N, args.M, replace=False)
    print(f"N={args.N} M={args.M} marked={sorted(marked.tolist())} period={period(args.N, args.M):.3f}")
    print(f"{'K':>3} {'closed form':>12} {'simulated':>12} {'|diff|':>9}")
    for K in range(args.kmax + 1):
        a = success_probability(args.N, args.M, K)
        b = full_grover_oracle(args.N, marked, K)
        print(f"{K:>3} {a:12.9f} {b:12.9f} {abs(a - b):9.1e}")


if __name__ == "__main__":
    main()
