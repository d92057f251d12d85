import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bessel_visco.entire import EntireSeries
from bessel_visco.errors import DomainError, InsufficientDataError
from bessel_visco.fraccalc import FracSeries, PowerJet, caputo_laplace, caputo_power, caputo_series


def l1_caputo(f, alpha: float, t: float, n: int = 4000) -> float:
    """L1 finite-difference Caputo derivative, 0 < alpha < 1."""
    h = t / n
    grid = f(np.linspace(0.0, t, n + 1))
    df = np.diff(grid)[::-1]  # f(t_{n-k}) - f(t_{n-k-1}) for k = 0..n-1
    k = np.arange(n)
    b = (k + 1) ** (1 - alpha) - k ** (1 - alpha)
    return float(np.sum(b * df)) / (math.gamma(2 - alpha) * h**alpha)


# ---------------------------------------------------------------- caputo_power


def test_constant_is_annihilated():
    assert caputo_power(0, 0.5).is_zero()


def test_low_degree_monomial_is_annihilated():
    assert caputo_power(1, 1.5).is_zero()


def test_half_derivative_of_t():
    out = caputo_power(1, 0.5)
    ((e, c),) = out.terms
    assert e == 0.5
    assert c == pytest.approx(2.0 / math.sqrt(math.pi), rel=1e-15)


@pytest.mark.parametrize("m", [1, 2, 3])
@pytest.mark.parametrize("alpha", [0.3, 0.5, 0.8])
def test_caputo_power_matches_l1_scheme(m, alpha):
    exact = caputo_power(m, alpha)(1.0)
    approx = l1_caputo(lambda t: t**m, alpha, 1.0)
    assert approx == pytest.approx(exact, abs=1e-3)


def test_integer_order_is_ordinary_derivative():
    assert caputo_power(3, 2).terms == ((1.0, 6.0),)


def test_caputo_power_rejects_bad_arguments():
    with pytest.raises(DomainError):
        caputo_power(-1, 0.5)
    with pytest.raises(DomainError):
        caputo_power(2, 0.0)


# ---------------------------------------------------------------- caputo_series


def test_series_one_plus_t():
    out = caputo_series([1.0, 1.0], 0.5)
    assert len(out) == 1
    assert out(4.0) == pytest.approx(2.0 / math.sqrt(math.pi) * 2.0, rel=1e-15)


def test_series_t_squared_first_order():
    assert caputo_series([0.0, 0.0, 1.0], 1.0).terms == ((1.0, 2.0),)


def test_series_of_zero():
    assert caputo_series([0.0] * 5, 0.7).is_zero()


def test_series_accepts_entire_series_and_truncates():
    f = EntireSeries.from_coefficients([1.0, 2.0, 3.0, 4.0])
    full = caputo_series(f, 0.5)
    cut = caputo_series(f, 0.5, truncation=2)
    assert len(full) == 3 and len(cut) == 2


coeff_lists = st.lists(st.integers(-20, 20), min_size=1, max_size=8)


@settings(max_examples=60, deadline=None)
@given(
    f=coeff_lists,
    g=coeff_lists,
    a=st.integers(-5, 5),
    b=st.integers(-5, 5),
    alpha=st.sampled_from([0.25, 0.5, 1.0, 1.5, 2.5]),
)
def test_caputo_series_is_linear(f, g, a, b, alpha):
    n = max(len(f), len(g))
    f = f + [0] * (n - len(f))
    g = g + [0] * (n - len(g))
    combo = [a * x + b * y for x, y in zip(f, g)]
    lhs = caputo_series(combo, alpha)
    rhs = caputo_series(f, alpha).scale(a) + caputo_series(g, alpha).scale(b)
    assert dict(lhs.terms).keys() == dict(rhs.terms).keys()
    for (e1, c1), (e2, c2) in zip(lhs.terms, rhs.terms):
        assert e1 == e2
        assert c1 == pytest.approx(c2, rel=1e-13)


def test_frac_series_merges_equal_exponents():
    s = FracSeries([(0.5, 1.0), (0.5, -1.0), (1.5, 2.0)])
    assert s.terms == ((1.5, 2.0),)


# ---------------------------------------------------------------- Laplace rule


def test_laplace_of_half_derivative_of_constant_vanishes():
    assert caputo_laplace(lambda s: 1 / s, [1.0], 0.5, 4.0) == pytest.approx(0.0, abs=1e-15)


def test_laplace_first_derivative_of_t():
    assert caputo_laplace(lambda s: 1 / s**2, [0.0, 1.0], 1.0, 2.0) == pytest.approx(0.5, rel=1e-15)


def test_laplace_half_derivative_of_t():
    v = caputo_laplace(lambda s: 1 / s**2, [0.0, 1.0], 0.5, 1.0)
    oracle = 2 / math.sqrt(math.pi) * math.gamma(1.5)
    assert v == pytest.approx(oracle, rel=1e-15)
    assert v == pytest.approx(1.0, rel=1e-15)


@pytest.mark.parametrize("m", range(7))
@pytest.mark.parametrize("alpha", [0.3, 0.5, 1.0, 1.5, 2.5])
@pytest.mark.parametrize("s", [0.5, 1.0, 2.0, 10.0])
def test_monomial_composition(m, alpha, s):
    jet = [math.factorial(m) if k == m else 0.0 for k in range(max(m + 1, math.ceil(alpha)))]
    rule = caputo_laplace(lambda z: math.factorial(m) / z ** (m + 1), jet, alpha, s)
    # transform of the termwise derivative: c t^e -> c Gamma(e+1) / s^(e+1)
    direct = sum(c * math.gamma(e + 1) / s ** (e + 1) for e, c in caputo_power(m, alpha).terms)
    assert rule == pytest.approx(direct, rel=1e-12, abs=1e-13 * abs(math.factorial(m) / s ** (m + 1) * s**alpha))


def test_laplace_rule_at_complex_s():
    s = 1.5 + 2.0j
    v = caputo_laplace(lambda z: 1 / z**3 * 2, [0.0, 0.0, 2.0], 1.5, s)
    expected = 2 / math.gamma(1.5) * math.gamma(1.5) / s**1.5  # D^{3/2} t^2 = 2/Gamma(3/2) t^{1/2}
    assert abs(v - expected) < 1e-14 * abs(expected)


def test_laplace_rule_requires_jet_length():
    with pytest.raises(InsufficientDataError) as info:
        caputo_laplace(lambda s: 1 / s, [1.0], 2.5, 1.0)
    assert info.value.required == 3


def test_laplace_rule_requires_right_half_plane():
    with pytest.raises(DomainError):
        caputo_laplace(lambda s: 1 / s, [1.0], 0.5, -1.0)


def test_power_jet_accepts_fractions():
    jet = PowerJet([Fraction(1, 2), 3])
    assert jet.K == 1 and jet[0] == Fraction(1, 2)
