import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from beurling_lab import special
from beurling_lab.errors import DomainError, UnsupportedRangeError
from beurling_lab.special import StripPoint

mpmath.mp.dps = 30


def mp_zeta(s):
    return complex(mpmath.zeta(mpmath.mpc(s.real, s.imag)))


def test_zeta_at_two():
    assert special.zeta(StripPoint(2.0, 0.0)) == pytest.approx(math.pi**2 / 6, rel=1e-13)


def test_zeta_at_half():
    # frozen from mpmath at 30 digits
    value = special.zeta(StripPoint(0.5, 0.0))
    assert value.real == pytest.approx(-1.4603545088095868129, rel=1e-13)
    assert abs(value.imag) < 1e-15


def test_first_zero():
    assert abs(special.zeta(StripPoint(0.5, 14.134725141734693790))) < 1e-6


@pytest.mark.parametrize(
    "s",
    [0.5 + 1j, 0.25 - 7.5j, 0.9 + 30j, -0.5 + 3j, 1.5 + 200j, 0.5 + 1234.5j, 0.7 + 9876.25j, 0.5 + 50_000j],
)
def test_zeta_against_mpmath(s):
    got = special.zeta(StripPoint(s.real, s.imag))
    want = mp_zeta(s)
    assert abs(got - want) <= 1e-10 * max(1.0, abs(want))


def test_zeta_array_matches_scalar_calls():
    pts = np.array([0.5 + 3j, 0.3 - 40j, 0.8 + 700j])
    arr = special.zeta_array(pts)
    for s, v in zip(pts, arr):
        # chunks share one head length, so both sit within the 1e-12 target, not bitwise equal
        assert abs(v - special.zeta(StripPoint(s.real, s.imag))) <= 1e-12 * abs(v)


def test_zeta_errors():
    with pytest.raises(DomainError):
        special.zeta(StripPoint(1.0, 0.0))
    with pytest.raises(UnsupportedRangeError):
        special.zeta(StripPoint(0.5, 2e5))
    with pytest.raises(ValueError):
        StripPoint(2.5, 0.0)
    with pytest.raises(ValueError):
        special.zeta(StripPoint(0.5, 1.0), precision=1e-16)


@settings(max_examples=200, deadline=None)
@given(st.floats(-1.0, 2.0), st.floats(0.1, 3000.0))
def test_conjugate_symmetry(sigma, tau):
    up = special.zeta(StripPoint(sigma, tau))
    down = special.zeta(StripPoint(sigma, -tau))
    assert abs(up - down.conjugate()) <= 1e-14 * max(1.0, abs(up))


@settings(max_examples=200, deadline=None)
@given(st.floats(0.001, 0.999))
def test_negative_on_unit_interval(sigma):
    value = special.zeta(StripPoint(sigma, 0.0))
    assert value.real < 0
    assert value.imag == 0.0 or abs(value.imag) < 1e-15


def test_log_gamma_examples():
    assert abs(special.log_gamma(1.0)) < 1e-14
    assert special.log_gamma(0.5).real == pytest.approx(0.5 * math.log(math.pi), rel=1e-14)
    with pytest.raises(DomainError):
        special.log_gamma(-2.0)


def test_log_gamma_reflection_and_duplication_at_quarter_plus_5i():
    z = 0.25 + 5j
    lg = special.log_gamma
    # reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
    refl = lg(z) + lg(1 - z) - (math.log(math.pi) - np.log(np.sin(math.pi * z)))
    assert abs(np.exp(refl) - 1) < 1e-12
    # duplication: Gamma(z) Gamma(z+1/2) = 2^(1-2z) sqrt(pi) Gamma(2z)
    dup = lg(z) + lg(z + 0.5) - ((1 - 2 * z) * math.log(2) + 0.5 * math.log(math.pi) + lg(2 * z))
    assert abs(np.exp(dup) - 1) < 1e-12


@settings(max_examples=300, deadline=None)
@given(st.floats(-20.0, 40.0), st.floats(-500.0, 500.0))
def test_log_gamma_against_mpmath(x, y):
    z = complex(x, y)
    if y == 0 and x <= 0 and x == round(x):
        return
    want = complex(mpmath.loggamma(mpmath.mpc(x, y)))
    assert abs(special.log_gamma(z) - want) <= 1e-12 * max(1.0, abs(want))


def test_ratio_trivial_at_zero_epsilon():
    assert special.zeta_ratio(0.0, 123.4) == 1.0


def test_ratio_direct_vs_functional_at_origin():
    direct = abs(special.zeta(StripPoint(0.4, 0.0))) / abs(special.zeta(StripPoint(0.6, 0.0)))
    assert direct == pytest.approx(float(special.functional_ratio(0.1, 0.0)), rel=1e-10)
    assert special.zeta_ratio(0.1, 0.0) == pytest.approx(direct, rel=1e-14)


def test_ratio_below_fitted_envelope():
    scan = special.ratio_scan(0.25, 200.0, 0.5)
    assert special.zeta_ratio(0.25, 100.0) <= scan.fitted_C * 101**0.25 * (1 + 1e-12)


def test_ratio_rejects_bad_epsilon():
    with pytest.raises(ValueError):
        special.zeta_ratio(0.5, 1.0)
    with pytest.raises(ValueError):
        special.ratio_scan(0.0, 10.0, 1.0)


def test_ratio_scan_shape_and_fit():
    scan = special.ratio_scan(0.1, 1000.0, 1.0)
    assert scan.ratios.shape == scan.tau_grid.shape == (1001,)
    assert np.all(scan.ratios >= 0)
    assert math.isfinite(scan.fitted_C)
    assert scan.fitted_C == np.max(scan.ratios / (1 + np.abs(scan.tau_grid)) ** 0.1)
    assert np.all(scan.ratios <= scan.envelope * (1 + 1e-15))


def test_ratio_scan_small_epsilon_limit():
    scans = [special.ratio_scan(eps, 100.0, 0.5).fitted_C for eps in (1e-2, 1e-3, 1e-4)]
    gaps = [abs(c - 1) for c in scans]
    assert gaps[0] > gaps[1] > gaps[2]
    assert gaps[2] < 1e-3


def test_refined_grid_fit_dominates_coarse():
    coarse = special.ratio_scan(0.2, 300.0, 1.0)
    fine = special.ratio_scan(0.2, 300.0, 0.25)
    assert set(coarse.tau_grid) <= set(fine.tau_grid)
    assert coarse.fitted_C <= fine.fitted_C


def test_ratio_near_zero_uses_functional_form():
    t0 = 14.134725141734693790
    # epsilon tiny enough that the denominator sits within the fallback threshold
    value = special.zeta_ratio(1e-9, t0)
    assert value == pytest.approx(float(special.functional_ratio(1e-9, t0)), rel=1e-14)


def test_functional_equation_over_grid():
    tau = 0.5 * np.arange(1001)
    for eps in (0.05, 0.1, 0.25, 0.4):
        num = special.zeta_array(0.5 - eps + 1j * tau, 1e-14)
        den = special.zeta_array(0.5 + eps + 1j * tau, 1e-14)
        keep = np.abs(den) >= 1e-6
        direct = np.abs(num[keep]) / np.abs(den[keep])
        fe = special.functional_ratio(eps, tau[keep])
        assert np.max(np.abs(direct - fe) / fe) <= 1e-8


def test_perturbation_hook_is_scoped():
    base = special.zeta(StripPoint(0.5, 3.0))
    with special.perturbed_zeta(1e-3):
        assert special.zeta(StripPoint(0.5, 3.0)) == pytest.approx(base + 1e-3, abs=1e-15)
    assert special.zeta(StripPoint(0.5, 3.0)) == base


def test_critical_line_envelope_below_tail_constant():
    # the spectral tail bound uses K = 5; the empirical envelope must sit under it
    assert special.critical_line_envelope(2000.0, 0.5) < 5.0
