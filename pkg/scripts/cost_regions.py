"""Which closed form wins where: analytic candidates against the brute-force oracle.

Samples (alpha, beta) uniformly on [-3, 3]^2 and reports, per candidate
region, how often each closed form reproduces the oracle minimum.
"""

import argparse
from collections import Counter

import numpy as np

from cvqss import cost

TOL = 1e-6


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=400)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    tally = Counter()
    worst = 0.0
    done = 0
    while done < args.samples:
        alpha, beta = rng.uniform(-3, 3, 2)
        if abs(alpha) < 0.05 or abs(abs(alpha) - 1) < 0.05:
            continue
        done += 1
        oracle = cost.minimize_gamma_oracle(alpha, beta).r_min
        analytic = cost.minimize_gamma_analytic(alpha, beta)
        worst = max(worst, abs(analytic.r_min - oracle))
        region = "case_i" if cost.in_case_i_region(alpha, beta) else "case_ii"
        tally[region, "total"] += 1
        tally[region, "winner " + analytic.case_tag.value] += 1
        if region == "case_i":
            printed = cost.case_i_printed(alpha, beta)
            tally[region, "printed ok"] += printed is not None and abs(printed - oracle) <= TOL
            tally[region, "evaluated ok"] += abs(cost.case_i_evaluated(alpha, beta) - oracle) <= TOL
        else:
            tally[region, "closed form ok"] += abs(cost.case_ii_closed_form(alpha, beta) - oracle) <= TOL

    print(f"samples {done}, max |analytic - oracle| = {worst:.2e}")
    for (region, what), count in sorted(tally.items()):
        print(f"{region:8s} {what:28s} {count}")


if __name__ == "__main__":
    main()
