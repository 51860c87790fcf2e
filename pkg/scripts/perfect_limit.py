"""Per-subset (u, v) of a scheme and the squeezing needed for 1 - F <= target.

u and v are fixed by the encoding and the subset (no decoder freedom
changes them), so the r needed for a given fidelity varies across subsets.
"""

import argparse
import itertools
import math

from cvqss import decoder, fidelity
from cvqss.scheme import ThresholdParams, random_encoding


def required_r(u, v, target):
    lo, hi = -5.0, 30.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        f = fidelity.analytic_fidelity(fidelity.DegradationParams(u, v, math.exp(mid)))
        lo, hi = (lo, mid) if 1 - f <= target else (mid, hi)
    return hi


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k", type=int, default=3)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--target", type=float, default=1e-4)
    args = ap.parse_args()

    enc = random_encoding(ThresholdParams.canonical(args.k), args.seed)
    print(f"(k={args.k}, n={enc.n}) seed {args.seed}; target 1-F <= {args.target:g}")
    print("subset   v_x       u         v         1-F(r=6)   r needed")
    for s in itertools.combinations(range(enc.n), enc.k):
        b = decoder.build_T(decoder.split(enc, s))
        p = fidelity.realized_params(enc, s, math.exp(6))
        label = "-".join(str(i + 1) for i in s)
        print(f"{label:8s} {b.v[0]:+.5f}  {p.u:8.3f}  {p.v:8.3f}  {1 - fidelity.analytic_fidelity(p):.2e}"
              f"   {required_r(p.u, p.v, args.target):.2f}")


if __name__ == "__main__":
    main()
