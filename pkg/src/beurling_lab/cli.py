"""Command line entry point: ``beurling-lab <subcommand>``."""

from __future__ import annotations

import argparse
import contextlib
import csv
import json
import sys
import time

from . import arith, beurling, distance, experiments, optimize, special


@contextlib.contextmanager
def _open_out(path: str):
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _num(v) -> str:
    return format(float(v), ".17g")


def _scheme_params(args) -> dict:
    params = {}
    if args.epsilon is not None:
        params["epsilon"] = args.epsilon
    if args.c is not None:
        params["c"] = args.c
    return params


def cmd_sieve(args):
    table = arith.sieve_mobius(args.limit)
    with _open_out(args.out) as fh:
        fh.write("n,mu\n")
        fh.writelines(f"{k},{int(m)}\n" for k, m in enumerate(table.values[1:], 1))


def cmd_zeta(args):
    value = special.zeta(special.StripPoint(args.sigma, args.tau), args.precision)
    print(f"{_num(value.real)} {_num(value.imag)}")


def cmd_ratio_scan(args):
    scan = special.ratio_scan(args.epsilon, args.tau_max, args.step)
    with _open_out(args.out) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["tau", "ratio", "envelope"])
        for t, r, e in zip(scan.tau_grid, scan.ratios, scan.envelope):
            w.writerow([_num(t), _num(r), _num(e)])
    print(f"fitted_C={_num(scan.fitted_C)}", file=sys.stderr)


def cmd_coeffs(args):
    coeffs = beurling.make_coefficients(args.scheme, args.n, _scheme_params(args))
    with _open_out(args.out) as fh:
        fh.write("a,c\n")
        fh.writelines(f"{a},{_num(c)}\n" for a, c in enumerate(coeffs.values, 1))


def cmd_distance(args):
    coeffs = beurling.make_coefficients(args.scheme, args.n, _scheme_params(args))
    methods = ["exact", "spectral"] if args.method == "both" else [args.method]
    out = []
    for m in methods:
        t0 = time.perf_counter()
        if m == "exact":
            rep = distance.exact_norm(coeffs, args.x_min, workers=args.workers)
        else:
            rep = distance.spectral_norm(coeffs, args.tau_max)
        d = rep.to_dict()
        d["wall_time_ms"] = int(round(1000 * (time.perf_counter() - t0)))
        out.append(d)
    with _open_out(args.out) as fh:
        json.dump(out[0] if len(out) == 1 else out, fh, indent=2)
        fh.write("\n")


def cmd_optimize(args):
    system = optimize.best_coefficients(args.n, args.ridge)
    with _open_out(args.out) as fh:
        json.dump(system.to_dict(), fh, indent=2)
        fh.write("\n")
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write("a,c_star\n")
            fh.writelines(f"{a},{_num(c)}\n" for a, c in enumerate(system.solution, 1))


def _csv_list(conv):
    return lambda text: [conv(v) for v in text.split(",") if v.strip()]


def cmd_sweep(args):
    overrides = {
        "schemes": args.schemes,
        "n_values": args.n_values,
        "epsilon_values": args.epsilon_values,
        "c_values": args.c_values,
        "method": args.method,
        "output_path": args.out,
        "worker_hint": args.workers,
        "x_min": args.x_min,
        "tau_max": args.tau_max,
    }
    config = experiments.load_config(args.config, overrides)
    with _open_out(config.output_path) as fh:
        experiments.run_sweep(config, fh)


def cmd_verify(args):
    report = experiments.verify_all(args.level)
    for line in report.lines():
        print(line)
    if args.out:
        with _open_out(args.out) as fh:
            json.dump(report.to_dict(), fh, indent=2)
            fh.write("\n")
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="beurling-lab", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sieve", help="Mobius table as CSV n,mu")
    s.add_argument("--limit", type=int, required=True)
    s.add_argument("--out", default="-")
    s.set_defaults(func=cmd_sieve)

    s = sub.add_parser("zeta", help="print Re and Im of zeta(sigma + i tau)")
    s.add_argument("--sigma", type=float, required=True)
    s.add_argument("--tau", type=float, required=True)
    s.add_argument("--precision", type=float, default=1e-12)
    s.set_defaults(func=cmd_zeta)

    s = sub.add_parser("ratio-scan", help="CSV tau,ratio,envelope of the zeta ratio")
    s.add_argument("--epsilon", type=float, required=True)
    s.add_argument("--tau-max", type=float, required=True)
    s.add_argument("--step", type=float, required=True)
    s.add_argument("--out", default="-")
    s.set_defaults(func=cmd_ratio_scan)

    def scheme_args(s):
        s.add_argument("--scheme", required=True, choices=[x for x in beurling.SCHEMES if x != "custom"])
        s.add_argument("--n", type=int, required=True)
        s.add_argument("--epsilon", type=float)
        s.add_argument("--c", type=float)

    s = sub.add_parser("coeffs", help="CSV a,c for a scheme")
    scheme_args(s)
    s.add_argument("--out", default="-")
    s.set_defaults(func=cmd_coeffs)

    s = sub.add_parser("distance", help="JSON distance report")
    scheme_args(s)
    s.add_argument("--method", choices=experiments.METHODS, default="exact")
    s.add_argument("--x-min", type=float, default=distance.DEFAULT_X_MIN)
    s.add_argument("--tau-max", type=float, default=distance.DEFAULT_TAU_MAX)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--out", default="-")
    s.set_defaults(func=cmd_distance)

    s = sub.add_parser("optimize", help="Gram least squares on rho_1..rho_n")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--ridge", type=float, default=0.0)
    s.add_argument("--out", default="-")
    s.add_argument("--csv", help="also write a,c_star to this path")
    s.set_defaults(func=cmd_optimize)

    s = sub.add_parser("sweep", help="parameter sweep from a key=value config")
    s.add_argument("--config")
    s.add_argument("--schemes", type=_csv_list(str))
    s.add_argument("--n-values", type=_csv_list(int))
    s.add_argument("--epsilon-values", type=_csv_list(float))
    s.add_argument("--c-values", type=_csv_list(float))
    s.add_argument("--method", choices=experiments.METHODS)
    s.add_argument("--x-min", type=float)
    s.add_argument("--tau-max", type=float)
    s.add_argument("--workers", type=int)
    s.add_argument("--out")
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("verify", help="run the identity checks")
    s.add_argument("--level", choices=("quick", "full"), default="quick")
    s.add_argument("--out", help="also write the report as JSON")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code = args.func(args)
    except (ValueError, IndexError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return int(code or 0)


if __name__ == "__main__":
    sys.exit(main())
