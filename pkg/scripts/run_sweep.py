"""Run a sweep config and print a compact distance table.

    python scripts/run_sweep.py scripts/configs/balazard.cfg --out balazard.csv
"""

import argparse
import sys

from beurling_lab import experiments


def main():
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("config")
    parser.add_argument("--out", help="CSV path (overrides the config)")
    parser.add_argument("--workers", type=int)
    args = parser.parse_args()

    cfg = experiments.load_config(args.config, {"output_path": args.out, "worker_hint": args.workers})
    if cfg.output_path == "-":
        rows = experiments.run_sweep(cfg, sys.stdout)
    else:
        with open(cfg.output_path, "w", newline="") as fh:
            rows = experiments.run_sweep(cfg, fh)
    print(f"{'scheme':<12} {'n':>6} {'eps':>8} {'c':>5} {'method':<9} {'distance':>12}", file=sys.stderr)
    for r in rows:
        eps = "" if r.epsilon is None else f"{r.epsilon:.4f}"
        c = "" if r.c is None else f"{r.c:g}"
        dist = r.error[:30] if r.error else f"{r.distance:.8f}"
        print(f"{r.scheme:<12} {r.n:>6} {eps:>8} {c:>5} {r.method:<9} {dist:>12}", file=sys.stderr)


if __name__ == "__main__":
    main()
