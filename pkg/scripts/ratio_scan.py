"""Empirical constants for the zeta ratio bound and the critical-line envelope.

For each epsilon, fits C in |zeta(1/2-e+it)/zeta(1/2+e+it)| <= C (1+|t|)^e over
a grid, at two resolutions so the refinement trend is visible. Also reports
max |zeta(1/2+it)| / ((1+t)^(1/4) log(2+t)), the constant behind the spectral
tail bound (taken as 5 there).

    python scripts/ratio_scan.py --tau-max 2000
"""

import argparse

from beurling_lab import special


def main():
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--tau-max", type=float, default=1000.0)
    parser.add_argument("--epsilons", default="0.01,0.05,0.1,0.25,0.4")
    args = parser.parse_args()

    print(f"{'epsilon':>8} {'C (step 1)':>12} {'C (step 0.1)':>13}")
    for eps in (float(e) for e in args.epsilons.split(",")):
        coarse = special.ratio_scan(eps, args.tau_max, 1.0).fitted_C
        fine = special.ratio_scan(eps, args.tau_max, 0.1).fitted_C
        print(f"{eps:>8g} {coarse:>12.6f} {fine:>13.6f}")
    env = special.critical_line_envelope(args.tau_max, 0.05)
    print(f"critical-line envelope up to {args.tau_max:g}: {env:.4f}")


if __name__ == "__main__":
    main()
