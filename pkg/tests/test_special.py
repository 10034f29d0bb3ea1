import cmath
import math

import mpmath as mp
import numpy as np
import pytest

from drwave.errors import PoleError
from drwave.special import (
    bessel_j,
    c_function,
    ln_gamma_complex,
    plancherel_density,
    plancherel_envelope_ratio,
    script_j,
)

mp.mp.dps = 50


# ---------------------------------------------------------------------------
# oracles
# ---------------------------------------------------------------------------

def oracle_loggamma(z: complex) -> complex:
    """Independent high-precision log-Gamma (50-digit arithmetic)."""
    return complex(mp.loggamma(mp.mpc(z)))


def oracle_bessel_series(mu: float, x: float, terms: int = 200) -> float:
    """Power-series oracle for J_mu(x): sum_k (-1)^k (x/2)^(mu+2k) / (k! Gamma(mu+k+1))."""
    half = mp.mpf(x) / 2
    acc = mp.mpf(0)
    for k in range(terms):
        acc += (-1) ** k * half ** (mu + 2 * k) / (mp.factorial(k) * mp.gamma(mu + k + 1))
    return float(acc)


def oracle_c_function(m_v: int, m_z: int, lam: float) -> complex:
    """Direct high-precision product of the four Gamma factors."""
    n = m_v + m_z + 1
    q = mp.mpf(m_v) / 2 + m_z
    il = 2j * mp.mpf(lam)
    val = (
        mp.mpf(2) ** (q - il)
        * mp.gamma(il)
        / mp.gamma((q + il) / 2)
        * mp.gamma(mp.mpf(n) / 2)
        / mp.gamma((m_v + 2 * il + 2) / 4)
    )
    return complex(val)


# ---------------------------------------------------------------------------
# log-Gamma
# ---------------------------------------------------------------------------

def test_ln_gamma_at_one():
    assert abs(ln_gamma_complex(1.0)) < 1e-14


def test_ln_gamma_at_half():
    assert ln_gamma_complex(0.5).real == pytest.approx(math.log(math.sqrt(math.pi)), abs=1e-14)
    # frozen reference value
    assert ln_gamma_complex(0.5).real == pytest.approx(0.5723649429247001, abs=1e-12)


def test_ln_gamma_complex_point_vs_oracle():
    z = 2 + 3j
    ref = oracle_loggamma(z)
    assert abs(ln_gamma_complex(z) - ref) < 1e-12


def test_ln_gamma_sweep_vs_oracle():
    pts = [0.1, 0.9, 3.7, 12.0, 2j, 0.5 + 40j, 5 - 7j, -2.3, -5.5 + 1j, 1e-3 + 1e-3j,
           200j, 3 + 200j, -0.25 - 3j]
    for z in pts:
        ref = oracle_loggamma(z)
        assert abs(ln_gamma_complex(z) - ref) <= 1e-12 * max(1.0, abs(ref))


def test_exp_ln_gamma_matches_gamma():
    for z in [0.3, 1.7, 4 + 2j, 0.5 - 6j, 2.25]:
        got = cmath.exp(ln_gamma_complex(z))
        ref = complex(mp.gamma(mp.mpc(z)))
        assert abs(got - ref) <= 1e-12 * abs(ref)


@pytest.mark.parametrize("z", [0.0, -1.0, -7.0])
def test_ln_gamma_pole(z):
    with pytest.raises(PoleError):
        ln_gamma_complex(z)


# ---------------------------------------------------------------------------
# Bessel kernels
# ---------------------------------------------------------------------------

def test_bessel_half_integer_closed_form():
    x = math.pi / 2
    assert bessel_j(0.5, x) == pytest.approx(2.0 / math.pi, rel=1e-12)


def test_bessel_at_zero():
    assert bessel_j(1.0, 0.0) == 0.0


def test_bessel_vs_series_oracle():
    assert bessel_j(1.5, 5.0) == pytest.approx(oracle_bessel_series(1.5, 5.0), rel=1e-10)
    assert bessel_j(4.0, 2.5) == pytest.approx(oracle_bessel_series(4.0, 2.5), rel=1e-10)


def test_script_j_limits():
    # series limit of the defining ratio at x = 0
    assert script_j(0.5, 0.0) == pytest.approx(2.0, rel=1e-13)
    assert script_j(1.0, 0.0) == pytest.approx(math.pi / 2.0, rel=1e-13)


def test_script_j_matches_direct_ratio():
    # consistency with 2^mu sqrt(pi) Gamma(mu+1/2) J_mu(x) / x^mu beyond 1e-3
    for mu in (0.5, 1.0, 3.0, 11.5):
        pref = 2.0**mu * math.sqrt(math.pi) * float(mp.gamma(mu + 0.5))
        for x in (2e-3, 0.05, 0.7, 4.0, 55.0):
            direct = pref * bessel_j(mu, x) / x**mu
            assert script_j(mu, x) == pytest.approx(direct, rel=1e-10)


def test_script_j_large_argument_envelope(space21):
    # cosine asymptotic: |script_j_mu(x)| x^((2 mu + 1)/2) stays bounded
    mu = (space21.n - 2) / 2.0
    x = np.geomspace(10.0, 1e4, 300)
    vals = np.abs(script_j(mu, x)) * x ** ((2 * mu + 1) / 2.0)
    assert np.max(vals) < 20.0


# ---------------------------------------------------------------------------
# c-function and Plancherel density
# ---------------------------------------------------------------------------

def test_c_function_conjugate_symmetry(space21, rng):
    for lam in rng.uniform(0.1, 100.0, 25):
        c_plus = complex(c_function(space21, float(lam)))
        c_minus = complex(c_function(space21, -float(lam)))
        assert abs(c_minus - c_plus.conjugate()) <= 1e-12 * abs(c_plus)


def test_c_function_vs_high_precision_oracle(space21):
    got = complex(c_function(space21, 1.0))
    ref = oracle_c_function(2, 1, 1.0)
    assert abs(got - ref) <= 1e-10 * abs(ref)


def test_c_function_pole_at_zero(space21):
    with pytest.raises(PoleError):
        c_function(space21, 0.0)


def test_c_value_accessors(space21):
    c = c_function(space21, 2.0)
    assert c.re == c.real and c.im == c.imag


def test_plancherel_zero(space21):
    assert plancherel_density(space21, 0.0) == 0.0


def test_plancherel_consistency_with_c(space21):
    c = complex(c_function(space21, 10.0))
    assert plancherel_density(space21, 10.0) == pytest.approx(1.0 / abs(c) ** 2, rel=1e-10)


def test_plancherel_positive_and_envelope(all_spaces):
    lam = np.geomspace(0.01, 100.0, 400)
    for p in all_spaces:
        ratio = plancherel_envelope_ratio(p, lam)
        assert np.all(ratio > 0)
        assert np.max(ratio) / np.min(ratio) < 50.0


def test_plancherel_derivative_envelopes(all_spaces):
    # |d^j/dlambda^j |c|^-2| <= C_j (1+lambda)^(n-1-j), j = 1, 2
    lam = np.geomspace(1.0, 100.0, 120)
    h = 1e-3
    for p in all_spaces:
        pd = lambda x: plancherel_density(p, x)
        d1 = (pd(lam + h) - pd(lam - h)) / (2 * h)
        d2 = (pd(lam + h) - 2 * pd(lam) + pd(lam - h)) / h**2
        r1 = np.abs(d1) / (1 + lam) ** (p.n - 2)
        r2 = np.abs(d2) / (1 + lam) ** (p.n - 3)
        assert np.max(r1) < 50.0
        assert np.max(r2) < 50.0


def test_plancherel_small_lambda_quadratic(space43):
    # the lambda^2 zero is filled smoothly across the 1e-4 switch point
    below = plancherel_density(space43, 9.9e-5) / 9.9e-5**2
    above = plancherel_density(space43, 1.01e-4) / 1.01e-4**2
    assert below == pytest.approx(above, rel=1e-6)


def test_plancherel_rejects_negative(space21):
    with pytest.raises(ValueError):
        plancherel_density(space21, -1.0)
