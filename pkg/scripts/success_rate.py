"""Observed yes-rate against the repetition budget c.

Runs the simulated quantum matcher on the planted and non-planted halves of
a seeded corpus and prints, per c, the planted yes-rate, the 1 - (7/8)^c
floor and the number of false positives (always expected to be zero).
"""

import argparse
import math

import numpy as np

from smlg.grover import failure_bound
from smlg.oracle import gen_corpus
from smlg.qgraph import run_quantum_smlg


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--corpus", type=int, default=300, help="corpus size")
    ap.add_argument("--runs", type=int, default=2000, help="runs per c value")
    ap.add_argument("--cs", type=int, nargs="+", default=[1, 2, 4, 6, 8, 10])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--k-mode", choices=("period", "pattern"), default="period")
    args = ap.parse_args()

    corpus = gen_corpus(args.corpus, seed=args.seed)
    planted = [i for i in corpus if i.planted]
    absent = [i for i in corpus if not i.planted]
    print(f"corpus: {len(planted)} planted, {len(absent)} non-planted, k-mode {args.k_mode}")
    print(f"{'c':>3} {'yes-rate':>9} {'3-sigma':>8} {'floor':>7} {'false yes':>10}")
    for c in args.cs:
        yes = np.array([
            run_quantum_smlg(planted[k % len(planted)].graph, planted[k % len(planted)].pattern,
                             c=c, seed=args.seed + k, k_mode=args.k_mode).answer
            for k in range(args.runs)
        ])
        false_yes = sum(
            run_quantum_smlg(absent[k % len(absent)].graph, absent[k % len(absent)].pattern,
                             c=c, seed=args.seed + k, k_mode=args.k_mode).answer
            for k in range(args.runs // 4)
        )
        rate = yes.mean()
        sigma = 3 * math.sqrt(rate * (1 - rate) / args.runs)
        print(f"{c:>3} {rate:9.4f} {sigma:8.4f} {1 - failure_bound(c):7.4f} {false_yes:>10}")


if __name__ == "__main__":
    main()
