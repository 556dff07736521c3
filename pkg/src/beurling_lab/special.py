"""Zeta and log-gamma on the critical strip, and the zeta ratio |zeta(1/2-e+it)/zeta(1/2+e+it)|.

Zeta uses Euler-Maclaurin summation with a fixed number of Bernoulli
corrections; the head length N is chosen per point from the size of the next
(omitted) correction term, so cost grows linearly in |tau|.
"""

from __future__ import annotations

import contextlib
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import bernoulli

from .errors import DomainError, UnsupportedRangeError

SIGMA_MIN, SIGMA_MAX = -1.0, 2.0
TAU_CEILING = 1.0e5
EM_ORDER = 12  # Bernoulli corrections B_2 .. B_24
NEAR_ZERO = 1.0e-8

_B = bernoulli(2 * EM_ORDER + 2)
# B_{2j} / (2j)!  for j = 1 .. EM_ORDER + 1
_EM_COEF = np.array([_B[2 * j] / math.factorial(2 * j) for j in range(1, EM_ORDER + 2)])
_CHUNK_ELEMENTS = 1 << 21

# test hook: added to every zeta value
_perturbation = 0.0


@contextlib.contextmanager
def perturbed_zeta(delta: float):
    """Temporarily add ``delta`` to every zeta value; used for fault injection."""
    global _perturbation
    old = _perturbation
    _perturbation = delta
    try:
        yield
    finally:
        _perturbation = old


@dataclass(frozen=True)
class StripPoint:
    sigma: float
    tau: float

    def __post_init__(self):
        if not SIGMA_MIN <= self.sigma <= SIGMA_MAX:
            raise ValueError(f"sigma={self.sigma} outside [{SIGMA_MIN}, {SIGMA_MAX}]")

    @property
    def s(self) -> complex:
        return complex(self.sigma, self.tau)


@dataclass(frozen=True)
class RatioScan:
    epsilon: float
    tau_grid: np.ndarray
    ratios: np.ndarray
    fitted_C: float

    @property
    def envelope(self) -> np.ndarray:
        return self.fitted_C * (1.0 + np.abs(self.tau_grid)) ** self.epsilon


def em_terms(s: np.ndarray, precision: float) -> np.ndarray:
    """Head length N for each s so the first omitted EM term is below ``precision``."""
    s = np.asarray(s, dtype=complex)
    sigma = s.real
    p = 2 * EM_ORDER + 1
    log_prod = np.zeros(s.shape)
    for i in range(p + 1):
        log_prod += np.log(np.maximum(np.abs(s + i), 1e-300))
    log_c = (
        math.log(abs(_EM_COEF[EM_ORDER]))
        + log_prod
        - np.log(sigma + p)
        - math.log(precision)
    )
    n = np.exp(log_c / (sigma + p))
    return np.maximum(np.ceil(n), 10).astype(np.int64)


def _zeta_block(s: np.ndarray, N: int) -> np.ndarray:
    k = np.arange(1, N, dtype=np.float64)
    logk = np.log(k)
    head = np.exp(-np.multiply.outer(s, logk)).sum(axis=1)
    n_s = np.exp(-s * math.log(N))
    out = head + N * n_s / (s - 1.0) + 0.5 * n_s
    rising = s.copy()
    npow = n_s / N
    for j in range(EM_ORDER):
        out += _EM_COEF[j] * rising * npow
        rising = rising * (s + 2 * j + 1) * (s + 2 * j + 2)
        npow = npow / (N * N)
    return out


def zeta_array(s, precision: float = 1e-12) -> np.ndarray:
    """Vectorised zeta(s) for points inside the supported strip.

    ``precision`` is an absolute error target (|zeta| is O(1) to O(|tau|^(1/4))
    on the strip, so it doubles as a relative one away from zeros).
    """
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    if precision < 1e-14:
        raise ValueError("precision below 1e-14 is not supported")
    if np.any((s.real < SIGMA_MIN) | (s.real > SIGMA_MAX)):
        raise ValueError("sigma outside supported strip [-1, 2]")
    if np.any(np.abs(s.imag) > TAU_CEILING):
        raise UnsupportedRangeError(f"|tau| above {TAU_CEILING:g}")
    if np.any(s == 1.0):
        raise DomainError("pole of zeta at s = 1")
    N = em_terms(s, precision)
    order = np.argsort(N, kind="stable")
    out = np.empty(s.shape, dtype=complex)
    start = 0
    while start < len(order):
        width = max(1, _CHUNK_ELEMENTS // int(N[order[start]]))
        while width > 1 and width * int(N[order[min(len(order), start + width) - 1]]) > _CHUNK_ELEMENTS:
            width //= 2
        idx = order[start : start + width]
        out[idx] = _zeta_block(s[idx], int(N[idx].max()))
        start += width
    if _perturbation:
        out += _perturbation
    return out


def zeta(point: StripPoint, precision: float = 1e-12) -> complex:
    return complex(zeta_array([point.s], precision)[0])


_STIRLING = [bernoulli(20)[2 * k] / (2 * k * (2 * k - 1)) for k in range(1, 11)]


def log_gamma(z):
    """Log-gamma with the standard branch cut along the negative real axis.

    Stirling's series with ten Bernoulli terms after shifting z upward by the
    recurrence until |z| >= 15 and Re z >= 0. Accepts scalars or arrays.
    """
    arr = np.asarray(z, dtype=complex)
    scalar = arr.ndim == 0
    z = np.atleast_1d(arr).copy()
    poles = (z.imag == 0) & (z.real <= 0) & (z.real == np.round(z.real))
    if np.any(poles):
        raise DomainError("log_gamma pole at a nonpositive integer")
    shift = np.where(
        np.abs(z.imag) >= 15.0,
        np.maximum(0, np.ceil(-z.real)),
        np.maximum(0, np.ceil(15.0 - z.real)),
    ).astype(int)
    correction = np.zeros(z.shape, dtype=complex)
    for k in range(int(shift.max(initial=0))):
        active = shift > k
        correction[active] += np.log(z[active] + k)
    w = z + shift
    inv = 1.0 / w
    inv2 = inv * inv
    series = np.zeros(z.shape, dtype=complex)
    for c in reversed(_STIRLING):
        series = series * inv2 + c
    out = (w - 0.5) * np.log(w) - w + 0.5 * math.log(2 * math.pi) + series * inv
    out -= correction
    return complex(out[0]) if scalar else out


def functional_ratio(epsilon, tau):
    """pi^-e |Gamma(1/4 + e/2 + i tau/2) / Gamma(1/4 - e/2 + i tau/2)|."""
    epsilon = np.asarray(epsilon, dtype=float)
    tau = np.asarray(tau, dtype=float)
    up = log_gamma(0.25 + 0.5 * epsilon + 0.5j * tau)
    down = log_gamma(0.25 - 0.5 * epsilon + 0.5j * tau)
    return np.exp(np.real(up - down) - epsilon * math.log(math.pi))


def _check_epsilon(epsilon):
    if not 0.0 <= epsilon < 0.5:
        raise ValueError("epsilon must lie in [0, 1/2)")


def zeta_ratio_array(epsilon: float, tau, precision: float = 1e-13) -> np.ndarray:
    _check_epsilon(epsilon)
    tau = np.atleast_1d(np.asarray(tau, dtype=float))
    if epsilon == 0.0:
        return np.ones(tau.shape)
    num = zeta_array(0.5 - epsilon + 1j * tau, precision)
    den = zeta_array(0.5 + epsilon + 1j * tau, precision)
    small = np.abs(den) < NEAR_ZERO
    out = np.empty(tau.shape)
    out[~small] = np.abs(num[~small]) / np.abs(den[~small])
    if np.any(small):
        out[small] = functional_ratio(epsilon, tau[small])
    return out


def zeta_ratio(epsilon: float, tau: float) -> float:
    """|zeta(1/2 - e + i tau)| / |zeta(1/2 + e + i tau)|.

    Falls back to the gamma-factor form from the functional equation when the
    denominator is within 1e-8 of a zero.
    """
    return float(zeta_ratio_array(epsilon, [tau])[0])


def ratio_scan(epsilon: float, tau_max: float, step: float) -> RatioScan:
    if not 0.0 < epsilon < 0.5:
        raise ValueError("epsilon must lie in (0, 1/2)")
    if step <= 0:
        raise ValueError("step must be positive")
    tau = step * np.arange(int(math.floor(tau_max / step + 1e-9)) + 1)
    ratios = zeta_ratio_array(epsilon, tau)
    fitted = float(np.max(ratios / (1.0 + np.abs(tau)) ** epsilon))
    return RatioScan(epsilon, tau, ratios, fitted)


def critical_line_envelope(tau_max: float, step: float, precision: float = 1e-8) -> float:
    """max |zeta(1/2 + it)| / ((1 + t)^(1/4) log(2 + t)) over a grid on [0, tau_max].

    Empirical constant behind the spectral tail bound.
    """
    t = step * np.arange(int(tau_max / step) + 1)
    z = np.abs(zeta_array(0.5 + 1j * t, precision))
    return float(np.max(z / ((1.0 + t) ** 0.25 * np.log(2.0 + t))))
