"""Distance ||chi + sum c_a rho_a||^2 in L2(0, inf) by two independent routes.

Exact route: after u = 1/x every floor jumps at an integer, so on each
x-piece (1/(k+1), 1/k) the integrand is A/x + B and integrates in closed form.
The region (0, x_min) is bracketed by [0, M^2 x_min] and estimated from the
mean of the periodic integrand.

Spectral route: the Mellin transform of chi + sum c_a rho_a on Re s = 1/2 is
(1 - zeta(s) A(s)) / s with A(s) = sum c_a a^-s, so the squared distance is
(1/pi) int_0^inf |zeta A - 1|^2 dt / (1/4 + t^2).
"""

from __future__ import annotations

import functools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.special import bernoulli

from . import special
from .arith import jordan_totient2
from .beurling import CoefficientVector, custom
from .errors import UnsupportedRangeError

EULER_GAMMA = 0.57721566490153286061
DEFAULT_X_MIN = 1e-7
DEFAULT_TAU_MAX = 1e4
DEFAULT_STEP = 0.05
TAIL_K = 5.0
CHUNK = 1 << 20


@dataclass(frozen=True)
class Piece:
    """On (lo, hi) the integrand chi + sum c_a rho_a equals A/x + B."""

    lo: float
    hi: float
    A: float
    B: float

    def integral(self) -> float:
        return piece_integral(self.lo, self.hi, self.A, self.B)


@dataclass
class DistanceReport:
    value_squared: float
    method: str
    tail_low: float
    tail_high: float
    detail: dict = field(default_factory=dict)

    @property
    def distance(self) -> float:
        return math.sqrt(max(self.value_squared, 0.0))

    def to_dict(self) -> dict:
        return {
            "value_squared": self.value_squared,
            "method": self.method,
            "tail_low": self.tail_low,
            "tail_high": self.tail_high,
            **{k: v for k, v in self.detail.items() if np.isscalar(v)},
        }


# ---------------------------------------------------------------- exact route


def _check_x_min(x_min):
    if not 0.0 < x_min < 1.0:
        raise ValueError("x_min must lie in (0, 1)")


def _alpha(r):
    """1 - 2 log(1+r)/r + 1/(1+r) ~ r^2/3, evaluated without cancellation."""
    r = np.asarray(r, dtype=np.float64)
    out = np.empty(r.shape)
    big = r >= 0.1
    rb = r[big]
    out[big] = 1.0 - 2.0 * np.log1p(rb) / rb + 1.0 / (1.0 + rb)
    rs = r[~big]
    acc = np.zeros(rs.shape)
    for j in range(18, 1, -1):
        acc = acc * rs + (-1) ** j * (j - 1) / (j + 1)
    out[~big] = acc * rs * rs
    return out


def _beta(r):
    """log(1+r) - r/(1+r) ~ r^2/2, evaluated without cancellation."""
    r = np.asarray(r, dtype=np.float64)
    out = np.empty(r.shape)
    big = r >= 0.1
    rb = r[big]
    out[big] = np.log1p(rb) - rb / (1.0 + rb)
    rs = r[~big]
    acc = np.zeros(rs.shape)
    for j in range(18, 1, -1):
        acc = acc * rs + (-1) ** j * (j - 1) / j
    out[~big] = acc * rs * rs
    return out


def _u_piece_integral(k, h, p, A):
    """int_k^{k+h} (p + A (u - k))^2 / u^2 du, stable for large k."""
    r = h / k
    return p * p * h / (k * (k + h)) + 2.0 * p * A * _beta(r) + A * A * h * _alpha(r)


def piece_integral(lo, hi, A, B):
    """int_lo^hi (A/x + B)^2 dx.

    Evaluated in the u = 1/x frame where the integrand is (A u + B)^2 / u^2 and
    the left-end value p = A u + B stays bounded.
    """
    if math.isinf(hi):
        if B != 0.0:
            return math.inf
        return A * A / lo
    k, h = 1.0 / hi, 1.0 / lo - 1.0 / hi
    p = A * k + B
    return float(_u_piece_integral(np.array([k]), np.array([h]), np.array([p]), A)[0])


def _divisor_weights(coeffs: CoefficientVector, lo: int, hi: int) -> np.ndarray:
    """d[j - lo] = sum_{a | j, a <= n} c_a for lo <= j < hi."""
    d = np.zeros(hi - lo)
    for a in range(1, coeffs.n + 1):
        c = coeffs.values[a - 1]
        if c == 0.0 or a >= hi:
            continue
        d[(-lo) % a :: a] += c
    return d


def _left_values(coeffs, lo, hi, A, chi):
    """p_k = chi + sum_a c_a rho(k / a) for k in [lo, hi), the value just right of u = k."""
    a = np.arange(1, coeffs.n + 1, dtype=np.int64)
    start = (1.0 if chi else 0.0) + A * (lo - 1) - float(np.dot(coeffs.values, (lo - 1) // a))
    return start + np.cumsum(A - _divisor_weights(coeffs, lo, hi))


@functools.lru_cache(maxsize=32)
def _unit_piece_weights(lo: int, hi: int):
    """Coefficient-free parts of the unit u-pieces k = lo..hi-1: (1/(k(k+1)), beta(1/k), sum alpha(1/k))."""
    k = np.arange(lo, hi, dtype=np.float64)
    r = 1.0 / k
    g = r / (k + 1.0)
    b = _beta(r)
    g.setflags(write=False)
    b.setflags(write=False)
    return g, b, math.fsum(_alpha(r))


def _chunk_integral(coeffs, lo, hi, A, chi):
    p = _left_values(coeffs, lo, hi, A, chi)
    g, b, alpha_sum = _unit_piece_weights(lo, hi)
    return float(np.dot(g, p * p)) + 2.0 * A * float(np.dot(b, p)) + A * A * alpha_sum


def piece_table(coeffs: CoefficientVector, x_min: float, include_chi: bool = True):
    """Arrays (lo, hi, A, B) tiling (x_min, inf), ascending in x."""
    _check_x_min(x_min)
    A = coeffs.dirichlet_weight()
    U = 1.0 / x_min
    K = int(math.floor(U))
    k = np.arange(1, K, dtype=np.int64)
    p = _left_values(coeffs, 1, K, A, include_chi) if K > 1 else np.zeros(0)
    lo = 1.0 / (k + 1.0)
    hi = 1.0 / k
    B = p - A * k
    if U > K:
        pK = _left_values(coeffs, K, K + 1, A, include_chi)[0]
        lo = np.concatenate([lo, [x_min]])
        hi = np.concatenate([hi, [1.0 / K]])
        B = np.concatenate([B, [pK - A * K]])
    lo = np.concatenate([lo[::-1], [1.0]])
    hi = np.concatenate([hi[::-1], [math.inf]])
    B = np.concatenate([B[::-1], [0.0]])
    return lo, hi, np.full(lo.shape, A), B


def breakpoints(coeffs: CoefficientVector, x_min: float, include_chi: bool = True) -> list[Piece]:
    """Pieces tiling (x_min, inf) on which the integrand is exactly A/x + B.

    Breakpoints are all x = 1/(am) >= x_min and x = 1; after deduplication
    these are the reciprocals 1/k, k <= 1/x_min.
    """
    lo, hi, A, B = piece_table(coeffs, x_min, include_chi)
    return [Piece(float(l), float(h), float(a), float(b)) for l, h, a, b in zip(lo, hi, A, B)]


def mean_square(coeffs: CoefficientVector, include_chi: bool = True) -> float:
    """Long-run mean of (chi + sum c_a rho(u/a))^2 over u.

    Uses E[rho(u/a) rho(u/b)] = 1/4 + gcd(a,b)^2 / (12ab) and
    gcd^2 = sum_{d | gcd} J_2(d) to avoid the n x n double sum.
    """
    c = coeffs.values
    n = coeffs.n
    S = math.fsum(c)
    J2 = jordan_totient2(n)
    weighted = c / np.arange(1, n + 1)
    quad = math.fsum(J2[d] * weighted[d - 1 :: d].sum() ** 2 for d in range(1, n + 1))
    base = 1.0 if include_chi else 0.0
    return (base + S / 2.0) ** 2 + quad / 12.0


def exact_norm(
    coeffs: CoefficientVector,
    x_min: float = DEFAULT_X_MIN,
    include_chi: bool = True,
    workers: int = 1,
) -> DistanceReport:
    """Closed-form piecewise integral of (chi + sum c_a rho_a)^2 over (x_min, inf).

    value_squared = body + tail estimate; the tail over (0, x_min) is bracketed
    by [0, M^2 x_min] with M = sum |c_a| + 1. Chunks have a fixed size and are
    reduced in order, so ``workers`` never changes the result.
    """
    _check_x_min(x_min)
    A = coeffs.dirichlet_weight()
    U = 1.0 / x_min
    K = int(math.floor(U))
    bounds = [(lo, min(lo + CHUNK, K)) for lo in range(1, K, CHUNK)]
    job = functools.partial(_chunk_integral, coeffs, A=A, chi=include_chi)
    if workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda b: job(*b), bounds))
    else:
        parts = [job(lo, hi) for lo, hi in bounds]
    parts.append(A * A)  # x > 1: integrand A/x
    if U > K:
        pK = _left_values(coeffs, K, K + 1, A, include_chi)
        parts.append(float(_u_piece_integral(np.array([float(K)]), np.array([U - K]), pK, A)[0]))
    body = math.fsum(parts)
    M = coeffs.abs_sum() + (1.0 if include_chi else 0.0)
    tail_est = mean_square(coeffs, include_chi) * x_min
    return DistanceReport(
        value_squared=body + tail_est,
        method="exact",
        tail_low=0.0,
        tail_high=M * M * x_min,
        detail={"body": body, "tail_estimate": tail_est, "pieces": K + (U > K), "x_min": x_min},
    )


# ------------------------------------------------------------- spectral route


def _simpson_weights(m: int, h: float) -> np.ndarray:
    w = np.ones(m + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w * h / 3.0


@functools.lru_cache(maxsize=4)
def critical_line_nodes(
    tau_max: float = DEFAULT_TAU_MAX,
    step: float = DEFAULT_STEP,
    dip: float = 0.1,
    max_halvings: int = 8,
    rtol: float = 1e-4,
    precision: float = 1e-10,
):
    """Quadrature nodes, weights and zeta(1/2 + it) on [0, tau_max].

    Composite Simpson on panels of width 2*step. Panels where |zeta| drops
    below ``dip`` are re-integrated with the step halved repeatedly (up to
    ``max_halvings`` times) until Simpson applied to |zeta|^2 settles to
    ``rtol``. Cached: every spectral distance on the same grid reuses it.
    """
    if tau_max > special.TAU_CEILING:
        raise UnsupportedRangeError(f"tau_max above {special.TAU_CEILING:g}")
    panels = int(math.ceil(tau_max / (2 * step)))
    h = tau_max / (2 * panels)
    t = h * np.arange(2 * panels + 1)
    z = special.zeta_array(0.5 + 1j * t, precision)
    w = _simpson_weights(2 * panels, h)

    left = t[0:-1:2]
    mins = np.minimum(np.minimum(np.abs(z[0:-1:2]), np.abs(z[1::2])), np.abs(z[2::2]))
    flagged = np.flatnonzero(mins < dip)
    if flagged.size == 0:
        return t, w, z, 0

    def panel_simpson(level, idx):
        m = 2**level
        hh = 2 * h / m
        tt = left[idx, None] + hh * np.arange(m + 1)[None, :]
        zz = special.zeta_array(0.5 + 1j * tt.ravel(), precision).reshape(tt.shape)
        sw = _simpson_weights(m, hh)
        return tt, zz, sw, (np.abs(zz) ** 2) @ sw

    prev = (np.abs(np.stack([z[2 * flagged], z[2 * flagged + 1], z[2 * flagged + 2]], 1)) ** 2) @ _simpson_weights(2, h)
    extra_t, extra_w, extra_z = [], [], []
    pending = flagged
    for level in range(2, max_halvings + 2):
        tt, zz, sw, val = panel_simpson(level, pending)
        done = (np.abs(val - prev) <= rtol * np.abs(val) + 1e-14) | (level == max_halvings + 1)
        extra_t.append(tt[done].ravel())
        extra_z.append(zz[done].ravel())
        extra_w.append(np.tile(sw, int(done.sum())))
        pending, prev = pending[~done], val[~done]
        if pending.size == 0:
            break
    # drop the coarse contribution of refined panels
    w = w.copy()
    coarse = _simpson_weights(2, h)
    for j in range(3):
        np.subtract.at(w, 2 * flagged + j, coarse[j])
    keep = w != 0.0
    t_all = np.concatenate([t[keep], *extra_t])
    w_all = np.concatenate([w[keep], *extra_w])
    z_all = np.concatenate([z[keep], *extra_z])
    return t_all, w_all, z_all, int(flagged.size)


def dirichlet_polynomial(coeffs: CoefficientVector, s: np.ndarray, block: int = 1 << 14) -> np.ndarray:
    """A(s) = sum_a c_a a^-s."""
    s = np.asarray(s, dtype=complex)
    nz = np.flatnonzero(coeffs.values)
    loga = np.log(nz + 1.0)
    cvals = coeffs.values[nz]
    out = np.empty(s.shape, dtype=complex)
    flat = s.ravel()
    res = out.ravel()
    for i in range(0, flat.size, block):
        res[i : i + block] = np.exp(-np.multiply.outer(flat[i : i + block], loga)) @ cvals
    return res.reshape(s.shape)


def _power_log_tail(T, p, m):
    """int_T^inf t^-p log(t)^m dt for p > 1, m in {0, 1, 2}."""
    q = p - 1.0
    L = math.log(T)
    base = T ** (-q)
    if m == 0:
        return base / q
    if m == 1:
        return base * (L / q + 1.0 / q**2)
    return base * (L * L / q + 2.0 * L / q**2 + 2.0 / q**3)


def spectral_tail_bound(coeffs: CoefficientVector, tau_max: float, include_chi: bool = True, K: float = TAIL_K) -> float:
    """(1/pi) int_T^inf (K t^(1/4) log t * sum|c_a| a^-1/2 + 1)^2 / t^2 dt in closed form."""
    S = math.fsum(np.abs(coeffs.values) / np.sqrt(coeffs.support))
    one = 1.0 if include_chi else 0.0
    total = (
        (K * S) ** 2 * _power_log_tail(tau_max, 1.5, 2)
        + 2.0 * K * S * one * _power_log_tail(tau_max, 1.75, 1)
        + one * _power_log_tail(tau_max, 2.0, 0)
    )
    return total / math.pi


def mean_value_weights(coeffs: CoefficientVector, block: int = 512):
    """(W0, W1) = sum c_h c_k g/(hk) * (1, log(g^2/(hk))), g = gcd(h, k).

    Diagonal weights of the mean square of zeta(1/2+it) A(1/2+it).
    """
    nz = np.flatnonzero(coeffs.values) + 1
    c = coeffs.values[nz - 1]
    w0 = w1 = 0.0
    for i in range(0, nz.size, block):
        h = nz[i : i + block, None]
        g = np.gcd(h, nz[None, :]).astype(np.float64)
        hk = h.astype(np.float64) * nz[None, :]
        wt = c[i : i + block, None] * c[None, :] * g / hk
        w0 += wt.sum()
        w1 += (wt * np.log(g * g / hk)).sum()
    return float(w0), float(w1)


def spectral_tail_estimate(coeffs: CoefficientVector, tau_max: float, include_chi: bool = True) -> float:
    """Mean-value estimate of (1/pi) int_T^inf |zeta A - 1|^2 / (1/4 + t^2) dt.

    |zeta A|^2 has local mean sum c_h c_k g/(hk) (log(t g^2 / (2 pi h k)) + 2 gamma);
    zeta A has local mean c_1; the constant part is integrated exactly.
    """
    T = tau_max
    w0, w1 = mean_value_weights(coeffs)
    square = w0 * (math.log(T / (2 * math.pi)) + 2 * EULER_GAMMA + 1.0) + w1
    if not include_chi:
        return square / (math.pi * T)
    cross = -2.0 * coeffs.values[0]
    const = 1.0 - 2.0 / math.pi * math.atan(2.0 * T)
    return (square + cross) / (math.pi * T) + const


def spectral_norm(
    coeffs: CoefficientVector,
    tau_max: float = DEFAULT_TAU_MAX,
    nodes: int | None = None,
    include_chi: bool = True,
) -> DistanceReport:
    """(1/pi) int_0^tau_max |zeta A - 1|^2 / (1/4 + t^2) dt plus a tail estimate.

    ``nodes`` sets the base Simpson node count (default: step 0.05). The tail
    is bracketed by [0, closed-form bound with |zeta(1/2+it)| <= 5 (1+t)^(1/4) log(2+t)].
    """
    if tau_max > special.TAU_CEILING:
        raise UnsupportedRangeError(f"tau_max above {special.TAU_CEILING:g}")
    if nodes is None:
        step = DEFAULT_STEP
    else:
        if nodes < 100:
            raise ValueError("nodes must be >= 100")
        step = tau_max / (nodes - 1)
    t, w, z, refined = critical_line_nodes(float(tau_max), float(step))
    s = 0.5 + 1j * t
    Avals = dirichlet_polynomial(coeffs, s)
    f = z * Avals - (1.0 if include_chi else 0.0)
    integrand = (f.real**2 + f.imag**2) / (0.25 + t * t)
    body = math.fsum(w * integrand) / math.pi
    tail_est = spectral_tail_estimate(coeffs, tau_max, include_chi)
    return DistanceReport(
        value_squared=float(body + tail_est),
        method="spectral",
        tail_low=0.0,
        tail_high=float(spectral_tail_bound(coeffs, tau_max, include_chi)),
        detail={
            "body": body,
            "tail_estimate": float(tail_est),
            "nodes": int(t.size),
            "refined_panels": refined,
            "tau_max": float(tau_max),
        },
    )


# ----------------------------------------------------------- Mellin transform

_GL_X, _GL_W = np.polynomial.legendre.leggauss(10)
_B_EVEN = bernoulli(12)


def _integer_tail(s: complex, M: int, terms: int = 6) -> complex:
    """int_M^inf v^(-s-1) {v} dv for integer M, by Euler-Maclaurin on the sawtooth."""
    out = M ** (-s) / (2.0 * s)
    rising = 1.0 + 0j
    for k in range(1, terms + 1):
        j = 2 * k - 2
        deriv = rising * M ** (-s - 1.0 - j)  # (-1)^j = 1 for even j
        out -= _B_EVEN[2 * k] / math.factorial(2 * k) * deriv
        rising *= (s + j + 1) * (s + j + 2)
    return out


def _unit_pieces(k: np.ndarray, p: np.ndarray, A: float, s: complex) -> complex:
    """sum_k int_k^{k+1} (p_k + A (u - k)) u^(-s-1) du by Gauss-Legendre.

    Pieces where u^(-i tau) turns by more than about 2 radians are split into
    equal sub-panels so each one sees a slowly varying phase.
    """
    if k.size == 0:
        return 0j
    m = np.maximum(1, np.ceil(abs(s.imag) * np.log1p(1.0 / k) / 2.0)).astype(np.int64)
    total = 0j
    for mm in np.unique(m):
        sel = m == mm
        kk = k[sel][:, None]
        offs = (np.arange(mm)[:, None] + 0.5 * (1.0 + _GL_X[None, :])).ravel() / mm
        u = kk + offs[None, :]
        vals = (p[sel][:, None] + A * (u - kk)) * u ** (-s - 1.0)
        total += (vals @ np.tile(_GL_W, mm)).sum() * 0.5 / mm
    return complex(total)


def _sawtooth_tail(s: complex, V: float) -> complex:
    """int_V^inf v^(-s-1) {v} dv for real V >= 1.

    Unit pieces are integrated directly up to M >= |s| + 12, where the
    Euler-Maclaurin expansion of the remainder converges quickly.
    """
    M = math.ceil(V)
    head = 0j
    if M > V:
        fl = math.floor(V)
        # {v} = v - fl on (V, M)
        head = (M ** (1 - s) - V ** (1 - s)) / (1 - s) - fl * (V ** (-s) - M ** (-s)) / s
    M_em = max(M, math.ceil(abs(s)) + 12)
    k = np.arange(M, M_em, dtype=np.float64)
    head += _unit_pieces(k, np.zeros(k.size), 1.0, s)
    return head + _integer_tail(s, M_em)


def mellin_transform(coeffs: CoefficientVector, s: complex, U: int = 2000, include_chi: bool = False) -> complex:
    """int_0^inf x^(s-1) (chi + sum c_a rho_a)(x) dx for 0 < Re s < 1.

    Gauss-Legendre on every breakpoint segment over (1/U, inf); the segment
    (0, 1/U) maps to int_U^inf u^(-s-1) (...) du and is done per dilation with
    an Euler-Maclaurin expansion of the sawtooth.
    """
    if not 0.0 < s.real < 1.0:
        raise ValueError("Mellin transform needs 0 < Re s < 1")
    A = coeffs.dirichlet_weight()
    total = A / (1.0 - s)  # x > 1, i.e. u in (0, 1): integrand A u^-s
    k = np.arange(1, U, dtype=np.float64)
    p = _left_values(coeffs, 1, U, A, include_chi)
    total += _unit_pieces(k, p, A, s)
    if include_chi:
        total += U ** (-s) / s
    for a in np.flatnonzero(coeffs.values) + 1:
        total += coeffs.values[a - 1] * a ** (-s) * _sawtooth_tail(s, U / a)
    return complex(total)


def mellin_transform_check(point: special.StripPoint, U: int = 2000):
    """(-zeta(s)/s, int_0^inf x^(s-1) rho_1(x) dx) for 0 < sigma < 1."""
    if not 0.0 < point.sigma < 1.0:
        raise ValueError("sigma must lie in (0, 1)")
    s = point.s
    left = -special.zeta(point) / s
    right = mellin_transform(custom([1.0]), s, U)
    return left, right
