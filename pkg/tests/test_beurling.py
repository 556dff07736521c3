import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from beurling_lab import arith, beurling

TABLE = arith.sieve_mobius(1000)


def exact_combination(values, x):
    """sum c_a {1/(a x)} with the fractional parts taken in exact rational arithmetic."""
    xf = Fraction(x)
    total = 0.0
    for a, c in enumerate(values, 1):
        y = 1 / (a * xf)
        total += c * float(y - math.floor(y))
    return total


@pytest.mark.parametrize("a, x, expected", [(1, 2.0, 0.5), (2, 1 / 3, 0.5), (1, 1 / 3, 0.0)])
def test_rho_examples(a, x, expected):
    assert beurling.rho(a, x) == pytest.approx(expected, abs=1e-15)


def test_rho_errors():
    with pytest.raises(ValueError):
        beurling.rho(0.5, 1.0)
    with pytest.raises(ValueError):
        beurling.rho(1, 0.0)
    with pytest.raises(ValueError):
        beurling.EvalPoint(-1.0)


def test_scheme_examples():
    assert beurling.make_coefficients("natural", 3).values.tolist() == [1, -1, -1]
    sel = beurling.make_coefficients("selberg", 4)
    assert sel.values[1] == -0.5
    assert sel.values[3] == 0.0
    for n in (3, 10, 500):
        for c in (0.1, 1.0, 7.0):
            assert beurling.make_coefficients("balazard", n, {"c": c}, TABLE).values[0] == 1.0


def test_scheme_errors():
    with pytest.raises(ValueError):
        beurling.make_coefficients("balazard", 2, {"c": 1.0})
    with pytest.raises(ValueError):
        beurling.make_coefficients("balazard", 10, {})
    with pytest.raises(ValueError):
        beurling.make_coefficients("regularized", 10)
    with pytest.raises(ValueError):
        beurling.make_coefficients("nope", 10)
    with pytest.raises(ValueError):
        beurling.make_coefficients("custom", 2, {"values": [1.0]})


def test_coefficients_are_immutable():
    cv = beurling.make_coefficients("natural", 5)
    with pytest.raises(ValueError):
        cv.values[0] = 3.0


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 1000), st.floats(0.01, 0.49), st.floats(0.05, 5.0))
def test_scheme_invariants(n, eps, c):
    mu = TABLE.values[1 : n + 1]
    nat = beurling.make_coefficients("natural", n, table=TABLE)
    assert np.array_equal(nat.values, mu)
    reg0 = beurling.make_coefficients("regularized", n, {"epsilon": 0.0}, TABLE)
    assert np.array_equal(reg0.values, nat.values)
    ces = beurling.make_coefficients("cesaro", n, {"epsilon": eps}, TABLE)
    assert ces.values[-1] == 0.0
    if n >= 2:
        assert beurling.make_coefficients("selberg", n, table=TABLE).values[-1] == 0.0
    if n >= 3:
        bal = beurling.make_coefficients("balazard", n, {"c": c}, TABLE)
        assert np.all(np.abs(bal.values) <= 1.0)
        assert bal.values[0] == 1.0
        assert bal.params["epsilon"] == c / math.log(math.log(n))


def test_combination_examples():
    nat1 = beurling.make_coefficients("natural", 1)
    assert beurling.evaluate_combination(nat1, 2.0) == 0.5
    nat10 = beurling.make_coefficients("natural", 10)
    assert beurling.evaluate_combination(nat10, 0.137) == pytest.approx(
        exact_combination(nat10.values, 0.137), abs=1e-12
    )


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 1000), st.floats(1.0 + 1e-9, 1e6))
def test_combination_beyond_one_is_pure_reciprocal(n, x):
    cv = beurling.make_coefficients("natural", n, table=TABLE)
    assert beurling.evaluate_combination(cv, x) == cv.dirichlet_weight() / x


def test_combination_against_naive_sum_on_random_cases(rng):
    worst = 0.0
    for _ in range(1000):
        scheme = rng.choice(["natural", "selberg", "regularized", "cesaro", "balazard"])
        n = int(rng.integers(3, 201))
        params = {"epsilon": float(rng.uniform(0, 0.45)), "c": float(rng.uniform(0.1, 3))}
        cv = beurling.make_coefficients(scheme, n, params, TABLE)
        x = float(10 ** rng.uniform(-3, 1))
        got = beurling.evaluate_combination(cv, x)
        worst = max(worst, abs(got - exact_combination(cv.values, x)))
        naive = sum(c * beurling.rho(a, x) for a, c in enumerate(cv.values, 1))
        worst = max(worst, abs(got - naive))
    assert worst <= 1e-12


def test_combination_vectorised_matches_scalar():
    cv = beurling.make_coefficients("selberg", 50)
    xs = np.geomspace(1e-3, 3, 200)
    vec = beurling.evaluate_combination(cv, xs)
    assert np.array_equal(vec, [beurling.evaluate_combination(cv, float(x)) for x in xs])


@pytest.mark.parametrize("N", [1, 2, 7, 30, 997, 1000])
def test_pointwise_limit_at_reciprocal_integers(N):
    # natural combination with n >= N at x = 1/N: sum mu(a) floor(N/a) = 1, so F_n(1/N) = N*A - 1
    cv = beurling.make_coefficients("natural", N, table=TABLE)
    assert arith.mobius_floor_sum(TABLE, N) == 1
    assert beurling.floor_sum(cv, 1.0 / N)[0] == 1.0


def test_custom_vector():
    cv = beurling.custom([0.5, -0.25])
    assert cv.scheme == "custom" and cv.n == 2
    assert cv.dirichlet_weight() == 0.5 - 0.125
    assert cv.abs_sum() == 0.75
