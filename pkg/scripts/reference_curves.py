"""F(r) for the two reference (u, v) pairs plus the pairs realized by a scheme.

    python3 scripts/reference_curves.py --k 2 --seed 42 > curves.csv
"""

import argparse
import itertools
import sys

import numpy as np

from cvqss import fidelity
from cvqss.io import to_csv
from cvqss.scheme import ThresholdParams, random_encoding

REFERENCE = {"solid": (0.5, 1.0), "dashed": (3.0, 5.0)}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k", type=int, default=2)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--step", type=float, default=0.05)
    args = ap.parse_args()

    grid = np.round(np.arange(-2.0, 3.0 + args.step / 2, args.step), 12)
    curves = {name: uv for name, uv in REFERENCE.items()}
    enc = random_encoding(ThresholdParams.canonical(args.k), args.seed)
    for s in itertools.combinations(range(enc.n), enc.k):
        p = fidelity.realized_params(enc, s, 1.0)
        curves["subset " + "-".join(str(i + 1) for i in s)] = (p.u, p.v)

    rows = []
    for name, (u, v) in curves.items():
        rows += [[name, u, v, r, f] for r, f in fidelity.fidelity_curve(u, v, grid)]
    sys.stdout.write(to_csv(["curve", "u", "v", "r", "F"], rows))


if __name__ == "__main__":
    main()
