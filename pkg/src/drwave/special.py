"""Complex log-Gamma, Bessel kernels, the Harish-Chandra c-function and the
Plancherel density |c(lambda)|^-2.

The c-function is the four-Gamma ratio

    c(lambda) = 2^(Q-2i*lambda) Gamma(2i*lambda) / Gamma((Q+2i*lambda)/2)
                * Gamma(n/2) / Gamma((m_v + 4i*lambda + 2)/4),

evaluated through the principal-branch complex log-Gamma so that products
and quotients never overflow.  |c(lambda)|^-2 is comparable to
lambda^2 (1+lambda)^(n-3), with a lambda^2 zero at the origin that the
density evaluator fills by a cached limit constant.
"""

from __future__ import annotations

import cmath
import math

import numpy as np
from scipy.special import jv

from .errors import PoleError
from .space import SpaceParams

__all__ = [
    "ln_gamma_complex",
    "bessel_j",
    "script_j",
    "c_function",
    "plancherel_density",
    "CValue",
]


# Lanczos coefficients, g = 607/128, 15 terms (Godfrey's set).  Relative
# accuracy ~1e-14 on Re z >= 1/2, which the strips used by the c-function
# stay inside after the recurrence shift below.
_LANCZOS_G = 607.0 / 128.0
_LANCZOS_C = (
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


class CValue(complex):
    """Complex value of the Harish-Chandra c-function.

    A plain complex with named accessors matching the wire format
    (re, im) used by the CLI.
    """

    @property
    def re(self) -> float:
        return self.real

    @property
    def im(self) -> float:
        return self.imag


def _ln_gamma_core(z: complex) -> complex:
    # Lanczos sum for Re z >= 0.5
    acc = _LANCZOS_C[0]
    for k in range(1, len(_LANCZOS_C)):
        acc += _LANCZOS_C[k] / (z + (k - 1))
    t = z + (_LANCZOS_G - 0.5)
    return _HALF_LOG_2PI + (z - 0.5) * cmath.log(t) - t + cmath.log(acc)


def ln_gamma_complex(z: complex) -> complex:
    """Principal-branch log-Gamma on the plane cut along (-inf, 0].

    Uses the 15-term Lanczos approximation directly for Re z >= 0.5 and the
    recurrence log Gamma(z) = log Gamma(z+m) - sum_j Log(z+j) to shift
    smaller real parts into that half plane.  The recurrence preserves the
    principal branch on the whole cut plane (both sides are analytic there
    and agree on the positive axis), and unlike the reflection formula it
    never forms sin(pi z), which overflows for the large imaginary
    arguments the c-function feeds in.
    """
    z = complex(z)
    if z.imag == 0.0 and z.real <= 0.0 and z.real == int(z.real):
        raise PoleError(f"log-Gamma pole at z = {z}")
    if z.real >= 0.5:
        return _ln_gamma_core(z)
    shift = int(math.ceil(0.5 - z.real))
    acc = 0.0 + 0.0j
    for j in range(shift):
        acc += cmath.log(z + j)
    return _ln_gamma_core(z + shift) - acc


def gamma_ratio_abs(num: complex, den: complex) -> float:
    """|Gamma(num)/Gamma(den)| via the log representation."""
    return math.exp((ln_gamma_complex(num) - ln_gamma_complex(den)).real)


def bessel_j(mu: float, x):
    """Bessel function of the first kind J_mu(x) for x >= 0.

    Delegates to the AMOS implementation in scipy; the independent
    power-series oracle lives in the test suite.
    """
    return jv(mu, x)


def _script_j_series(mu: float, x, terms: int = 12):
    # 2^mu sqrt(pi) Gamma(mu+1/2) * sum_k (-1)^k (x/2)^(2k) / (k! Gamma(mu+k+1))
    # == script_j via the J series with the x^-mu factor cancelled analytically.
    x = np.asarray(x, dtype=float)
    pref = math.sqrt(math.pi) * math.exp(
        (ln_gamma_complex(mu + 0.5) - ln_gamma_complex(mu + 1.0)).real
    )
    acc = np.ones_like(x)
    term = np.ones_like(x)
    q = 0.25 * x * x
    for k in range(1, terms + 1):
        term = term * (-q) / (k * (mu + k))
        acc = acc + term
    return pref * acc


def script_j(mu: float, x):
    """Modified Bessel kernel  J_mu(x) * 2^mu sqrt(pi) Gamma(mu+1/2) / x^mu.

    The removable singularity at x = 0 is filled by the power series,
    which is also used below x = 0.1 where forming the x^-mu quotient
    would lose accuracy (or underflow for large mu).
    """
    if mu < 0:
        raise ValueError(f"script_j requires mu >= 0, got {mu}")
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    out = np.empty_like(x)
    small = x < 0.1
    if np.any(small):
        out[small] = _script_j_series(mu, x[small])
    if np.any(~small):
        xs = x[~small]
        # log-scaled prefactor: 2^mu sqrt(pi) Gamma(mu+1/2) / x^mu
        lg = (ln_gamma_complex(mu + 0.5)).real
        logpref = mu * math.log(2.0) + 0.5 * math.log(math.pi) + lg - mu * np.log(xs)
        out[~small] = np.exp(logpref) * jv(mu, xs)
    return float(out[0]) if scalar else out


def _ln_c(params: SpaceParams, lam: float) -> complex:
    Q = float(params.Q)
    z = 2j * lam
    return (
        (Q - 2j * lam) * math.log(2.0)
        + ln_gamma_complex(z)
        - ln_gamma_complex((Q + 2j * lam) / 2.0)
        + ln_gamma_complex(params.n / 2.0)
        - ln_gamma_complex((params.m_v + 4j * lam + 2.0) / 4.0)
    )


def c_function(params: SpaceParams, lam: float) -> CValue:
    """Harish-Chandra c-function at real lambda != 0.

    Conjugate symmetry c(-lambda) = conj(c(lambda)) holds exactly because
    every Gamma factor satisfies Gamma(conj z) = conj Gamma(z).
    """
    if lam == 0:
        raise PoleError("c-function has a pole at lambda = 0")
    return CValue(cmath.exp(_ln_c(params, lam)))


_PLANCHEREL_LIMIT_CACHE: dict[tuple[int, int], float] = {}


def _plancherel_limit(params: SpaceParams) -> float:
    """Cached limit L = lim_{lambda->0} |c(lambda)|^-2 / lambda^2."""
    key = (params.m_v, params.m_z)
    if key not in _PLANCHEREL_LIMIT_CACHE:
        lam0 = 1e-4
        # Richardson in lambda^2: the ratio is even and analytic at 0
        r1 = _plancherel_raw(params, lam0) / lam0**2
        r2 = _plancherel_raw(params, lam0 / 2) / (lam0 / 2) ** 2
        _PLANCHEREL_LIMIT_CACHE[key] = (4.0 * r2 - r1) / 3.0
    return _PLANCHEREL_LIMIT_CACHE[key]


def _plancherel_raw(params: SpaceParams, lam: float) -> float:
    return math.exp(-2.0 * _ln_c(params, lam).real)


def plancherel_density(params: SpaceParams, lam):
    """Plancherel density |c(lambda)|^-2 for lambda >= 0.

    Below lambda = 1e-4 the quadratic zero is evaluated as
    lambda^2 * L with the cached limit constant L, sidestepping the
    cancellation at the Gamma(2 i lambda) pole.
    """
    lam_arr = np.asarray(lam, dtype=float)
    scalar = lam_arr.ndim == 0
    lam_arr = np.atleast_1d(lam_arr)
    if np.any(lam_arr < 0):
        raise ValueError("plancherel_density requires lambda >= 0")
    out = np.empty_like(lam_arr)
    small = lam_arr < 1e-4
    if np.any(small):
        out[small] = _plancherel_limit(params) * lam_arr[small] ** 2
    idx = np.nonzero(~small)[0]
    for i in idx:
        out[i] = _plancherel_raw(params, lam_arr[i])
    return float(out[0]) if scalar else out


def plancherel_envelope_ratio(params: SpaceParams, lam):
    """|c|^-2 divided by its comparison weight lambda^2 (1+lambda)^(n-3)."""
    lam = np.asarray(lam, dtype=float)
    return plancherel_density(params, lam) / (lam**2 * (1.0 + lam) ** (params.n - 3))
