"""Beurling functions rho_a(x) = {1/(ax)} and the coefficient schemes built on them.

A ``CoefficientVector`` holds c_1..c_n for the combination sum c_a rho_a that
approximates -chi, so the quantity of interest is always ||chi + sum c_a rho_a||.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .arith import MobiusTable, sieve_mobius

SCHEMES = ("natural", "selberg", "regularized", "cesaro", "balazard", "custom")


@dataclass(frozen=True)
class CoefficientVector:
    scheme: str
    n: int
    params: dict = field(default_factory=dict)
    values: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.shape != (self.n,):
            raise ValueError(f"expected {self.n} coefficients, got shape {values.shape}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def support(self) -> np.ndarray:
        return np.arange(1, self.n + 1, dtype=np.float64)

    def dirichlet_weight(self) -> float:
        """A = sum c_a / a, the coefficient of 1/x in the combination."""
        return math.fsum(self.values / self.support)

    def abs_sum(self) -> float:
        return math.fsum(np.abs(self.values))


@dataclass(frozen=True)
class EvalPoint:
    x: float

    def __post_init__(self):
        if not self.x > 0:
            raise ValueError("x must be positive")


def rho(a: float, x: float) -> float:
    """Fractional part of 1/(ax)."""
    if a < 1:
        raise ValueError("dilation a must be >= 1")
    if not x > 0:
        raise ValueError("x must be positive")
    y = 1.0 / (a * x)
    return y - math.floor(y)


def custom(values) -> CoefficientVector:
    values = np.asarray(values, dtype=np.float64)
    return CoefficientVector("custom", len(values), {}, values)


def _require(params, key, scheme, lower_open=False):
    if params.get(key) is None:
        raise ValueError(f"scheme {scheme!r} needs parameter {key!r}")
    value = float(params[key])
    if value < 0 or (lower_open and value == 0):
        raise ValueError(f"parameter {key}={value} out of range for {scheme!r}")
    return value


def make_coefficients(
    scheme: str,
    n: int,
    params: dict | None = None,
    table: MobiusTable | None = None,
) -> CoefficientVector:
    """Build c_1..c_n for one of the named schemes.

    natural      mu(a)
    selberg      mu(a) (1 - log a / log n)        (c_1 = 1 also for n = 1)
    regularized  mu(a) a^-epsilon
    cesaro       mu(a) a^-epsilon (1 - a/n)
    balazard     mu(a) exp(-c log a / log log n)  (n >= 3; records epsilon = c / log log n)
    custom       params["values"]
    """
    params = dict(params or {})
    if n < 1:
        raise ValueError("n must be a positive integer")
    if scheme == "custom":
        values = np.asarray(params.pop("values"), dtype=np.float64)
        if len(values) != n:
            raise ValueError("custom values must have length n")
        return CoefficientVector("custom", n, params, values)
    if scheme not in SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}")
    if table is None:
        table = sieve_mobius(n)
    if n > table.limit:
        raise IndexError(f"n={n} exceeds sieve limit {table.limit}")

    mu = table.values[1 : n + 1].astype(np.float64)
    a = np.arange(1, n + 1, dtype=np.float64)
    loga = np.log(a)
    if scheme == "natural":
        values = mu
        params = {}
    elif scheme == "selberg":
        weight = 1.0 - loga / math.log(n) if n > 1 else np.ones(1)
        values = mu * weight
        params = {}
    elif scheme == "regularized":
        eps = _require(params, "epsilon", scheme)
        values = mu * np.exp(-eps * loga)
        params = {"epsilon": eps}
    elif scheme == "cesaro":
        eps = _require(params, "epsilon", scheme)
        values = mu * np.exp(-eps * loga) * (1.0 - a / n)
        params = {"epsilon": eps}
    else:
        c = _require(params, "c", scheme, lower_open=True)
        if n < 3:
            raise ValueError("balazard scheme needs n >= 3 so that log log n > 0")
        eps = c / math.log(math.log(n))
        values = mu * np.exp(-eps * loga)
        params = {"c": c, "epsilon": eps}
    return CoefficientVector(scheme, n, params, values)


def floor_sum(coeffs: CoefficientVector, x) -> np.ndarray:
    """sum_{a <= 1/x} c_a floor(1/(ax)) for scalar or array x."""
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    out = np.zeros(x.shape)
    a_max = min(coeffs.n, int(1.0 / x.min()) + 1)
    for a in range(1, a_max + 1):
        c = coeffs.values[a - 1]
        if c == 0.0:
            continue
        out += c * np.floor(1.0 / (a * x))
    return out


def evaluate_combination(coeffs: CoefficientVector, x):
    """sum_a c_a rho_a(x) via (1/x) sum c_a/a - sum_{a <= 1/x} c_a floor(1/(ax)).

    Terms with a > 1/x have zero floor and drop out. Absolute rounding error
    grows like 1/x, so keep x >~ 1e-4 when comparing at 1e-12.
    """
    arr = np.asarray(x, dtype=np.float64)
    if np.any(arr <= 0):
        raise ValueError("x must be positive")
    out = coeffs.dirichlet_weight() / np.atleast_1d(arr) - floor_sum(coeffs, arr)
    return float(out[0]) if arr.ndim == 0 else out
