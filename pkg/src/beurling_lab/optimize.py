"""Best L2 approximation of -chi from span{rho_1, ..., rho_n} via the Gram system."""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.special import polygamma

from .distance import EULER_GAMMA, _alpha, _beta
from .errors import BudgetExceededError, FactorizationError

MAX_BREAKPOINTS = 10_000_000
_GL8 = np.polynomial.legendre.leggauss(8)
_GL4 = np.polynomial.legendre.leggauss(4)


@dataclass
class GramSystem:
    n: int
    G: np.ndarray
    b: np.ndarray
    solution: np.ndarray | None
    residual_squared: float | None
    condition_estimate: float
    ridge: float = 0.0

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "ridge": self.ridge,
            "residual_squared": self.residual_squared,
            "condition_estimate": self.condition_estimate,
            "coefficients": None if self.solution is None else [float(v) for v in self.solution],
        }


def inner_chi_rho(a: int) -> float:
    """<chi, rho_a> = int_0^1 {1/(ax)} dx = (log a + 1 - gamma) / a."""
    if a < 1:
        raise ValueError("a must be >= 1")
    return (math.log(a) + 1.0 - EULER_GAMMA) / a


def _breakpoint_grid(a: int, b: int, upper: int) -> np.ndarray:
    return np.union1d(np.arange(0, upper + 1, a), np.arange(0, upper + 1, b))


def _gl(nodes, lo, hi, f):
    x, w = nodes
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    u = mid[:, None] + half[:, None] * x[None, :]
    return (f(u) @ w) * half


def _rho_product_core(a: int, b: int, tolerance: float) -> float:
    """int_0^inf {u/a}{u/b} du / u^2 with a <= b, no gcd reduction.

    Exact piecewise integration on (0, J L), L = lcm(a, b); beyond that the
    integrand is L-periodic, so the remainder equals
    (1/L^2) int_0^L P(v) psi'(J + v/L) dv, which is done by Gauss-Legendre on
    each piece of the period. The 4- vs 8-point discrepancy is the error
    estimate; J grows until it meets ``tolerance``.
    """
    L = a * b // math.gcd(a, b)
    J = 1
    while True:
        if J * (L // a + L // b) > MAX_BREAKPOINTS:
            raise BudgetExceededError(f"<rho_{a}, rho_{b}> needs more than {MAX_BREAKPOINTS} breakpoints")
        grid = _breakpoint_grid(a, b, J * L).astype(np.float64)
        p, q = grid[1:-1], grid[2:]
        h = q - p
        ra = np.mod(p, a) / a
        rb = np.mod(p, b) / b
        r = h / p
        body = (
            ra * rb * h / (p * q)
            + (ra / b + rb / a) * _beta(r)
            + h * _alpha(r) / (a * b)
        )
        head = grid[1] / (a * b)  # first piece: integrand is 1/(ab)
        body_total = head + math.fsum(body)

        per = _breakpoint_grid(a, b, L).astype(np.float64)
        lo, hi = per[:-1], per[1:]
        ia = np.floor(lo / a)[:, None]
        ib = np.floor(lo / b)[:, None]

        def weighted(u):
            prod = (u / a - ia) * (u / b - ib)
            return prod * polygamma(1, J + u / L)

        t8 = math.fsum(_gl(_GL8, lo, hi, weighted)) / (L * L)
        t4 = math.fsum(_gl(_GL4, lo, hi, weighted)) / (L * L)
        if abs(t8 - t4) <= tolerance or J >= 1 << 20:
            if abs(t8 - t4) > tolerance:
                raise BudgetExceededError("tail quadrature did not reach tolerance")
            return body_total + t8
        J *= 4


@functools.lru_cache(maxsize=None)
def _reduced(a: int, b: int, tolerance: float) -> float:
    return _rho_product_core(a, b, tolerance)


def inner_rho_rho(a: int, b: int, tolerance: float = 1e-12, use_scaling: bool = True) -> float:
    """<rho_a, rho_b> = int_0^inf {u/a}{u/b} u^-2 du.

    With ``use_scaling`` the pair is first divided by its gcd g, using
    <rho_ga, rho_gb> = <rho_a, rho_b> / g, and the reduced value is memoised.
    Arguments are sorted first so the result is symmetric bit for bit.
    """
    if a < 1 or b < 1:
        raise ValueError("dilations must be >= 1")
    if tolerance < 1e-14:
        raise ValueError("tolerance below 1e-14 is not supported")
    a, b = sorted((int(a), int(b)))
    if not use_scaling:
        return _rho_product_core(a, b, tolerance)
    g = math.gcd(a, b)
    return _reduced(a // g, b // g, tolerance) / g


def gram_matrix(n: int, tolerance: float = 1e-12) -> np.ndarray:
    G = np.empty((n, n))
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            G[i - 1, j - 1] = G[j - 1, i - 1] = inner_rho_rho(i, j, tolerance)
    return G


def moment_vector(n: int) -> np.ndarray:
    return np.array([inner_chi_rho(a) for a in range(1, n + 1)])


def condition_estimate(G: np.ndarray, ridge: float = 0.0, iterations: int = 20) -> float:
    """lambda_max by power iteration over lambda_min by inverse iteration at the ridge point."""
    n = G.shape[0]
    rng = np.random.default_rng(0)
    v = rng.standard_normal(n)
    lam_max = 0.0
    for _ in range(iterations):
        w = G @ v
        lam_max = float(np.linalg.norm(w) / np.linalg.norm(v))
        v = w / np.linalg.norm(w)
    shifted = G + ridge * np.eye(n)
    try:
        factor = scipy.linalg.cho_factor(shifted, lower=True)
    except np.linalg.LinAlgError:
        return math.inf
    v = rng.standard_normal(n)
    lam_min = math.inf
    for _ in range(iterations):
        w = scipy.linalg.cho_solve(factor, v)
        lam_min = float(np.linalg.norm(v) / np.linalg.norm(w))
        v = w / np.linalg.norm(w)
    return lam_max / lam_min if lam_min > 0 else math.inf


def solve_gram(G: np.ndarray, b: np.ndarray, regularization: float = 0.0) -> np.ndarray:
    """Solve (G + r I) c = b by Cholesky; raises FactorizationError on failure."""
    n = G.shape[0]
    try:
        factor = scipy.linalg.cho_factor(G + regularization * np.eye(n), lower=True)
    except np.linalg.LinAlgError as exc:
        ridge = 1e-12 * float(np.trace(G)) / n
        raise FactorizationError(
            f"Cholesky failed at ridge {regularization:g}; retry with ridge {ridge:.3g}",
            condition_estimate=condition_estimate(G, ridge),
            suggested_ridge=ridge,
        ) from exc
    return scipy.linalg.cho_solve(factor, b)


def distance_squared(G: np.ndarray, b: np.ndarray, c: np.ndarray, chi_norm2: float = 1.0) -> float:
    """||chi - sum c_a rho_a||^2 = ||chi||^2 - 2 b.c + c.G.c."""
    return chi_norm2 - 2.0 * float(b @ c) + float(c @ G @ c)


def best_coefficients(n: int, regularization: float = 0.0, tolerance: float = 1e-12) -> GramSystem:
    """Projection of chi onto span{rho_1..rho_n}.

    ``solution`` holds the projection coefficients c*; the combination that
    approximates -chi in the package's sign convention is -c*.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if regularization < 0:
        raise ValueError("regularization must be nonnegative")
    G = gram_matrix(n, tolerance)
    b = moment_vector(n)
    c = solve_gram(G, b, regularization)
    return GramSystem(
        n=n,
        G=G,
        b=b,
        solution=c,
        residual_squared=distance_squared(G, b, c),
        condition_estimate=condition_estimate(G, regularization),
        ridge=regularization,
    )


def best_coefficients_with_fallback(n: int, tolerance: float = 1e-12) -> GramSystem:
    """best_coefficients at ridge 0, retrying once at the suggested ridge."""
    try:
        return best_coefficients(n, 0.0, tolerance)
    except FactorizationError as err:
        return best_coefficients(n, err.suggested_ridge, tolerance)
