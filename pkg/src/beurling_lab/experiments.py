"""Parameter sweeps over schemes and support sizes, and the one-shot verification runner."""

from __future__ import annotations

import csv
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import arith, beurling, distance, optimize, special

METHODS = ("exact", "spectral", "both")
ROW_FIELDS = ("scheme", "n", "epsilon", "c", "distance", "tail_high", "method", "wall_time_ms", "error")
DATA_FIELDS = tuple(f for f in ROW_FIELDS if f != "wall_time_ms")


def default_workers() -> int:
    env = os.environ.get("BEURLING_WORKERS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


@dataclass
class SweepConfig:
    schemes: list = field(default_factory=lambda: ["natural"])
    n_values: list = field(default_factory=lambda: [10])
    epsilon_values: list = field(default_factory=list)
    c_values: list = field(default_factory=list)
    method: str = "exact"
    output_path: str = "-"
    worker_hint: int = 1
    x_min: float = distance.DEFAULT_X_MIN
    tau_max: float = distance.DEFAULT_TAU_MAX

    def __post_init__(self):
        if not self.n_values:
            raise ValueError("n_values must be nonempty")
        if any(b <= a for a, b in zip(self.n_values, self.n_values[1:])):
            raise ValueError("n_values must be strictly increasing")
        if any(n < 1 for n in self.n_values):
            raise ValueError("n_values must be positive")
        for s in self.schemes:
            if s not in beurling.SCHEMES or s == "custom":
                raise ValueError(f"unknown sweep scheme {s!r}")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}")
        if any(e < 0 for e in self.epsilon_values):
            raise ValueError("epsilon values must be nonnegative")
        if any(c <= 0 for c in self.c_values):
            raise ValueError("c values must be positive")
        needs_eps = {"regularized", "cesaro"} & set(self.schemes)
        if needs_eps and not self.epsilon_values:
            raise ValueError(f"{sorted(needs_eps)} need epsilon_values")
        if "balazard" in self.schemes and not self.c_values:
            raise ValueError("balazard needs c_values")
        if self.worker_hint < 1:
            raise ValueError("worker_hint must be >= 1")

    def cells(self) -> list[tuple]:
        """(scheme, n, params, method) in output order."""
        methods = ["exact", "spectral"] if self.method == "both" else [self.method]
        out = []
        for scheme in self.schemes:
            for n in self.n_values:
                if scheme in ("regularized", "cesaro"):
                    grid = [{"epsilon": e} for e in self.epsilon_values]
                elif scheme == "balazard":
                    grid = [{"c": c} for c in self.c_values]
                else:
                    grid = [{}]
                for params in grid:
                    for m in methods:
                        out.append((scheme, n, params, m))
        return out


_LIST_KEYS = {"schemes": str, "n_values": int, "epsilon_values": float, "c_values": float}
_SCALAR_KEYS = {"method": str, "output_path": str, "worker_hint": int, "x_min": float, "tau_max": float}
_ALIASES = {"workers": "worker_hint", "out": "output_path"}


def parse_config_text(text: str) -> dict:
    """Flat ``key = value`` lines; lists are comma separated; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key=value")
        key, value = (p.strip() for p in line.split("=", 1))
        key = _ALIASES.get(key, key)
        if key in _LIST_KEYS:
            conv = _LIST_KEYS[key]
            out[key] = [conv(v.strip()) for v in value.split(",") if v.strip()]
        elif key in _SCALAR_KEYS:
            out[key] = _SCALAR_KEYS[key](value)
        else:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
    return out


def load_config(path: str | None, overrides: dict | None = None) -> SweepConfig:
    values = {}
    if path:
        with open(path) as fh:
            values.update(parse_config_text(fh.read()))
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})
    values.setdefault("worker_hint", default_workers())
    return SweepConfig(**values)


@dataclass
class SweepRow:
    scheme: str
    n: int
    epsilon: float | None
    c: float | None
    distance: float | None
    tail_high: float | None
    method: str
    wall_time_ms: int
    error: str = ""

    def csv_fields(self) -> list[str]:
        return [_fmt(getattr(self, f)) for f in ROW_FIELDS]


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


_TABLES: dict[int, arith.MobiusTable] = {}


def _table(limit: int) -> arith.MobiusTable:
    for lim, tab in _TABLES.items():
        if lim >= limit:
            return tab
    tab = arith.sieve_mobius(limit)
    _TABLES[limit] = tab
    return tab


def run_cell(scheme: str, n: int, params: dict, method: str, x_min: float, tau_max: float) -> SweepRow:
    start = time.perf_counter()
    eps = params.get("epsilon")
    try:
        coeffs = beurling.make_coefficients(scheme, n, params, _table(n))
        eps = coeffs.params.get("epsilon", eps)
        if method == "exact":
            report = distance.exact_norm(coeffs, x_min)
        else:
            report = distance.spectral_norm(coeffs, tau_max)
        dist, tail, err = report.distance, report.tail_high, ""
    except Exception as exc:  # recorded as an error row; the sweep continues
        dist = tail = None
        err = f"{type(exc).__name__}: {exc}".replace(",", ";").replace("\n", " ")
    ms = int(round(1000 * (time.perf_counter() - start)))
    return SweepRow(scheme, n, eps, params.get("c"), dist, tail, method, ms, err)


def _run_cell_args(args):
    return run_cell(*args)


def run_sweep(config: SweepConfig, stream=None) -> list[SweepRow]:
    """Evaluate every cell of the grid; rows are written to ``stream`` as they finish, in grid order."""
    jobs = [(s, n, p, m, config.x_min, config.tau_max) for s, n, p, m in config.cells()]
    writer = None
    if stream is not None:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(ROW_FIELDS)
    rows = []

    def emit(row):
        rows.append(row)
        if writer is not None:
            writer.writerow(row.csv_fields())
            stream.flush()

    if config.worker_hint > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(config.worker_hint) as pool:
            for row in pool.map(_run_cell_args, jobs):
                emit(row)
    else:
        for job in jobs:
            emit(run_cell(*job))
    return rows


def data_columns(rows: list[SweepRow]) -> list[tuple]:
    """Rows without wall time, as the strings written to CSV."""
    return [tuple(_fmt(getattr(r, f)) for f in DATA_FIELDS) for r in rows]


# ------------------------------------------------------------------ verify


@dataclass
class CheckResult:
    name: str
    passed: bool
    measured: float
    threshold: float
    seconds: float
    note: str = ""


@dataclass
class VerificationReport:
    level: str
    checks: list

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def lines(self) -> list[str]:
        out = []
        for c in self.checks:
            flag = "PASS" if c.passed else "FAIL"
            out.append(f"{flag}  {c.name:<22} measured={c.measured:.3e} threshold={c.threshold:.1e} ({c.seconds:.1f}s) {c.note}")
        return out

    def to_dict(self) -> dict:
        return {"level": self.level, "passed": self.passed, "checks": [asdict(c) for c in self.checks]}


def _timed(name, threshold, fn):
    t0 = time.perf_counter()
    measured, note = fn()
    return CheckResult(name, bool(measured <= threshold), float(measured), threshold, time.perf_counter() - t0, note)


def check_mobius_floor(limit: int):
    """Number of N <= limit with sum mu(a) floor(N/a) != 1 (all N via the divisor-sum recursion, plus direct spot checks)."""
    table = arith.sieve_mobius(limit)
    sums = arith.mobius_floor_sums_upto(table, limit)
    bad = int(np.count_nonzero(sums[1:] != 1))
    rng = np.random.default_rng(7)
    spots = sorted({1, limit, *rng.integers(1, limit + 1, 50).tolist()})
    bad += sum(arith.mobius_floor_sum(table, int(N)) != 1 for N in spots)
    return bad, f"N<={limit}, {len(spots)} direct spot checks"


def check_functional_equation(epsilons, tau_max, step=0.5):
    worst = 0.0
    skipped = 0
    tau = step * np.arange(int(round(tau_max / step)) + 1)
    for eps in epsilons:
        num = special.zeta_array(0.5 - eps + 1j * tau, 1e-14)
        den = special.zeta_array(0.5 + eps + 1j * tau, 1e-14)
        keep = np.abs(den) >= 1e-6
        skipped += int((~keep).sum())
        direct = np.abs(num[keep]) / np.abs(den[keep])
        fe = special.functional_ratio(eps, tau[keep])
        worst = max(worst, float(np.max(np.abs(direct - fe) / fe)))
    return worst, f"{len(epsilons)} eps x {tau.size} tau, {skipped} skipped near zeros"


def titchmarsh_points(count_per_sigma=17, tau_max=20.0):
    return [
        special.StripPoint(sig, float(t))
        for sig in (0.3, 0.5, 0.7)
        for t in np.linspace(-tau_max, tau_max, count_per_sigma)
    ]


def check_titchmarsh(points):
    worst = 0.0
    for p in points:
        left, right = distance.mellin_transform_check(p)
        worst = max(worst, abs(left - right))
    return worst, f"{len(points)} points"


CROSS_SCHEMES = (
    ("natural", {}),
    ("selberg", {}),
    ("regularized", {"epsilon": 0.1}),
    ("cesaro", {"epsilon": 0.1}),
    ("balazard", {"c": 1.0}),
)


def cross_route_cases(schemes, n_values):
    table = arith.sieve_mobius(max(n_values))
    for scheme, params in schemes:
        for n in n_values:
            if scheme == "balazard" and n < 3:
                continue  # scheme undefined for n < 3
            yield scheme, n, beurling.make_coefficients(scheme, n, params, table)


def cross_route_error(exact: distance.DistanceReport, spectral: distance.DistanceReport) -> float:
    """Relative gap between the two routes, each value including its tail estimate."""
    return abs(spectral.value_squared - exact.value_squared) / exact.value_squared


def check_cross_route(schemes, n_values, tau_max, x_min=distance.DEFAULT_X_MIN):
    worst, count = 0.0, 0
    for _, _, coeffs in cross_route_cases(schemes, n_values):
        e = distance.exact_norm(coeffs, x_min)
        s = distance.spectral_norm(coeffs, tau_max)
        worst = max(worst, cross_route_error(e, s))
        count += 1
    return worst, f"{count} cases, tau_max={tau_max:g}"


def check_gram_consistency(n_values, x_min=distance.DEFAULT_X_MIN):
    worst = 0.0
    prev = math.inf
    monotone = True
    for n in n_values:
        g = optimize.best_coefficients_with_fallback(n)
        d = distance.exact_norm(beurling.custom(-g.solution), x_min).value_squared
        worst = max(worst, abs(d - g.residual_squared) / g.residual_squared)
        if not 0 < g.residual_squared <= prev:
            monotone = False
        prev = g.residual_squared
    if not monotone:
        worst = math.inf
    return worst, f"n in {n_values[0]}..{n_values[-1]}, residual positive and non-increasing: {monotone}"


def verify_all(level: str = "quick") -> VerificationReport:
    if level not in ("quick", "full"):
        raise ValueError("level must be quick or full")
    full = level == "full"
    checks = [
        _timed("mobius_floor", 0, lambda: check_mobius_floor(10**6 if full else 10**5)),
        _timed(
            "functional_equation",
            1e-8,
            lambda: check_functional_equation((0.05, 0.1, 0.25, 0.4) if full else (0.1,), 500.0 if full else 100.0),
        ),
        _timed("titchmarsh", 1e-6, lambda: check_titchmarsh(titchmarsh_points(17 if full else 3))),
        _timed(
            "cross_route",
            1e-3,
            lambda: check_cross_route(
                CROSS_SCHEMES if full else CROSS_SCHEMES[:1],
                (1, 10, 50, 100) if full else (1, 10),
                1e4 if full else 2e3,
            ),
        ),
        _timed(
            "gram_consistency",
            1e-6,
            lambda: check_gram_consistency(list(range(1, 101)) if full else [1, 2, 5, 10]),
        ),
    ]
    return VerificationReport(level, checks)

