"""Squeezer count, residuals and total squeezing over many random schemes."""

import argparse
import itertools

import numpy as np

from cvqss import decoder
from cvqss.scheme import ThresholdParams, random_encoding


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ks", type=int, nargs="+", default=[2, 3, 4, 5, 6])
    ap.add_argument("--seeds", type=int, default=50)
    args = ap.parse_args()

    print("k  plans  max_squeezers  max_recon  max_ortho  median_R  max_R")
    for k in args.ks:
        counts, recon, ortho, totals = [], [], [], []
        for seed in range(args.seeds):
            enc = random_encoding(ThresholdParams.canonical(k), seed)
            for s in itertools.combinations(range(enc.n), k):
                p = decoder.plan(enc, s)
                counts.append(p.squeezer_count())
                recon.append(p.reconstruction_error())
                ortho.append(p.orthogonality_error())
                totals.append(p.total_squeezing)
        print(f"{k}  {len(counts):5d}  {max(counts):13d}  {max(recon):9.1e}  {max(ortho):9.1e}"
              f"  {np.median(totals):8.3f}  {max(totals):5.2f}")


if __name__ == "__main__":
    main()
