"""Best-approximation distances from the Gram system and the product D * sqrt(log n).

The lower bound on how slowly the best distance can decay has no explicit
constant, so this only records D * sqrt(log n) along n for inspection.

    python scripts/gram_slowness.py --n-max 200 --out slowness.csv
"""

import argparse
import csv
import math
import sys

from beurling_lab import optimize


def main():
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--n-max", type=int, default=100)
    parser.add_argument("--out", default="-")
    args = parser.parse_args()

    fh = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["n", "residual_squared", "distance", "distance_sqrt_log_n", "condition_estimate", "ridge"])
    floor = math.inf
    for n in range(1, args.n_max + 1):
        g = optimize.best_coefficients_with_fallback(n)
        d = math.sqrt(g.residual_squared)
        scaled = d * math.sqrt(math.log(n)) if n > 1 else float("nan")
        if n > 1:
            floor = min(floor, scaled)
        w.writerow([n, repr(g.residual_squared), repr(d), repr(scaled), f"{g.condition_estimate:.4g}", g.ridge])
    if fh is not sys.stdout:
        fh.close()
    print(f"min over 2 <= n <= {args.n_max} of D*sqrt(log n): {floor:.6f}", file=sys.stderr)


if __name__ == "__main__":
    main()
