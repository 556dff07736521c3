"""End-to-end acceptance checks, each at its stated tolerance and runtime budget.

Every test appends one PASS/FAIL line, printed in the terminal summary.
"""

import io
import math
import time

import numpy as np
import pytest

from beurling_lab import arith, beurling, distance, experiments

from conftest import ACCEPTANCE_LINES


def record(number, title, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'}  [{number}] {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def test_1_mobius_floor_identity():
    t0 = time.perf_counter()
    table = arith.sieve_mobius(10**6)
    sums = arith.mobius_floor_sums_upto(table, 10**6)
    bad = int(np.count_nonzero(sums[1:] != 1))
    bad_direct, note = experiments.check_mobius_floor(10**6)
    secs = time.perf_counter() - t0
    ok = bad == 0 and bad_direct == 0 and secs <= 60
    assert record(1, "Mobius-floor sum = 1 for all N <= 1e6", ok, f"violations={bad}, {note}, {secs:.1f}s <= 60s")


def test_2_functional_equation_ratio():
    t0 = time.perf_counter()
    worst, note = experiments.check_functional_equation((0.05, 0.1, 0.25, 0.4), 500.0, 0.5)
    secs = time.perf_counter() - t0
    ok = worst <= 1e-8 and secs <= 120
    assert record(2, "zeta ratio vs gamma-factor form", ok, f"max rel err={worst:.2e} <= 1e-8, {note}, {secs:.1f}s <= 120s")


def test_3_titchmarsh_identity():
    t0 = time.perf_counter()
    points = experiments.titchmarsh_points(17)
    worst, note = experiments.check_titchmarsh(points)
    secs = time.perf_counter() - t0
    ok = len(points) >= 50 and worst <= 1e-6 and secs <= 60
    assert record(3, "-zeta(s)/s vs Mellin transform of rho_1", ok, f"max abs err={worst:.2e} <= 1e-6, {note}, {secs:.1f}s <= 60s")


def test_4_cross_route_agreement():
    t0 = time.perf_counter()
    worst, cases, lines = 0.0, 0, []
    for scheme, n, coeffs in experiments.cross_route_cases(experiments.CROSS_SCHEMES, (1, 10, 50, 100)):
        e = distance.exact_norm(coeffs, 1e-7)
        s = distance.spectral_norm(coeffs, 1e4)
        err = experiments.cross_route_error(e, s)
        worst = max(worst, err)
        cases += 1
        lines.append(f"  {scheme:<12} n={n:<4} exact={e.value_squared:.10f} spectral={s.value_squared:.10f} rel={err:.1e}")
    secs = time.perf_counter() - t0
    print("\n".join(lines))
    ok = worst <= 1e-3 and secs <= 600
    detail = f"{cases} cases (balazard n=1 undefined), max rel gap={worst:.2e} <= 1e-3, {secs:.0f}s <= 600s"
    assert record(4, "exact vs spectral distance", ok, detail)


def test_5_projection_consistency():
    t0 = time.perf_counter()
    worst, note = experiments.check_gram_consistency(list(range(1, 101)))
    secs = time.perf_counter() - t0
    ok = worst <= 1e-6
    assert record(5, "Gram residual vs exact distance, n <= 100", ok, f"max rel gap={worst:.2e} <= 1e-6, {note}, {secs:.0f}s")


def test_6_chi_norm():
    zero = beurling.custom(np.zeros(5))
    e = distance.exact_norm(zero, 1e-7)
    s = distance.spectral_norm(zero, 1e4)
    arctan = 2.0 / math.pi * math.atan(2.0 * 1e4)
    ok = (
        abs(e.value_squared - 1.0) <= e.tail_high
        and abs(s.value_squared - 1.0) <= s.tail_high
        and s.detail["body"] == pytest.approx(arctan, abs=1e-12)
    )
    detail = (
        f"exact={e.value_squared!r} (bracket {e.tail_high:.1e}), "
        f"spectral={s.value_squared!r} (bracket {s.tail_high:.1e})"
    )
    assert record(6, "all-zero coefficients give ||chi||^2 = 1", ok, detail)


def test_7_balazard_sweep_table():
    cfg = experiments.SweepConfig(
        schemes=["balazard"],
        n_values=[100, 1000, 10000],
        c_values=[0.5, 1.0, 2.0],
        worker_hint=experiments.default_workers(),
    )
    rows = experiments.run_sweep(cfg)
    print("\n  n      c    distance")
    for r in rows:
        print(f"  {r.n:<6} {r.c:<4} {r.distance!r}")
    finite = all(r.error == "" and r.distance is not None and math.isfinite(r.distance) and r.distance > 0 for r in rows)
    monotone_for = []
    for c in cfg.c_values:
        d = [r.distance for r in rows if r.c == c]
        if all(b <= a for a, b in zip(d, d[1:])):
            monotone_for.append(c)
    ok = finite and len(monotone_for) >= 1
    table = "; ".join(f"(n={r.n}, c={r.c:g}, D={r.distance:.6f})" for r in rows)
    detail = f"finite+positive={finite}, non-increasing in n for c in {monotone_for}; table: {table}"
    assert record(7, "balazard sweep (rate itself not checkable)", ok, detail)


def test_8_sweep_determinism():
    kwargs = dict(
        schemes=["natural", "regularized", "balazard"],
        n_values=[10, 50, 200],
        epsilon_values=[0.05, 0.2],
        c_values=[1.0],
        method="both",
        x_min=1e-6,
        tau_max=1000.0,
    )

    def data_csv(workers):
        buf = io.StringIO()
        experiments.run_sweep(experiments.SweepConfig(worker_hint=workers, **kwargs), buf)
        keep = [i for i, f in enumerate(experiments.ROW_FIELDS) if f != "wall_time_ms"]
        lines = buf.getvalue().splitlines()
        return "\n".join(",".join(line.split(",")[i] for i in keep) for line in lines).encode()

    first = data_csv(1)
    second = data_csv(4)
    ok = first == second
    n_rows = first.count(b"\n")
    assert record(8, "sweep data columns identical for 1 vs 4 workers", ok, f"{n_rows} rows, byte-identical={ok}")
