"""Spherical functions phi_lambda(s) by three mutually validating routes.

phi_lambda is the radial eigenfunction of the Laplace-Beltrami operator,

    phi'' + (A'/A) phi' + (lambda^2 + Q^2/4) phi = 0,    phi(0) = 1,

evaluated by

* a Bessel-kernel series near the identity (s <= 0.75 by default), whose
  higher coefficients a_l(s) are fitted once per space against the ODE
  route and reused for every lambda;
* a two-sided exponential series away from the identity (s >= 2 and
  |lambda| >= 1 by default), driven by the c-function and the Gamma_mu
  recursion whose omega_k coefficients come from expanding the Liouville
  potential of the radial equation in powers of e^(-s);
* a fixed-step RK4 integration of the radial equation from a Taylor
  start, which serves as the independent oracle for both series.

The dispatcher phi() routes between the three and enforces the global
bound |phi| <= 1.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import DomainError, PhiBoundError, StepSizeError, ValidationError
from .profiles import RadialProfile
from .space import SpaceParams, density, log_density_derivative
from .special import c_function, ln_gamma_complex, script_j

__all__ = [
    "BesselSeriesEval",
    "HcSeriesEval",
    "phi",
    "phi_bessel",
    "phi_hc",
    "phi_ode_oracle",
    "gamma_coeffs",
    "omega_coeffs",
    "phi_matrix",
]

# Regime boundaries; both sit inside the guaranteed validity regions
# (the Bessel series converges absolutely for s < 2, the exponential
# series away from the identity).
S_BESSEL_MAX = 0.75
S_HC_MIN = 2.0
LAMBDA_HC_MIN = 1.0

_TAYLOR_S0 = 1e-3
_BESSEL_M_DEFAULT = 12
_HC_MU_DEFAULT = 40
_HC_MU_CAP = 320
_PHI_BOUND_TOL = 1e-9


# ---------------------------------------------------------------------------
# ODE oracle
# ---------------------------------------------------------------------------

def _taylor_coeffs(params: SpaceParams, nu: np.ndarray):
    """c2, c4 of the even Taylor expansion phi = 1 + c2 s^2 + c4 s^4 + ..."""
    n = params.n
    b = (params.m_v + params.m_z) / 12.0 + params.m_z / 4.0
    c2 = -nu / (2.0 * n)
    c4 = nu * (2.0 * b + nu) / (8.0 * n * (n + 2.0))
    return c2, c4


def _taylor_eval(params: SpaceParams, nu: np.ndarray, s: float):
    c2, c4 = _taylor_coeffs(params, nu)
    val = 1.0 + c2 * s * s + c4 * s**4
    slope = 2.0 * c2 * s + 4.0 * c4 * s**3
    return val, slope


def _rk4_advance(params: SpaceParams, nu, y0, yp0, s_from, s_to, h):
    """RK4 for the radial equation on [s_from, s_to], vectorized over nu."""
    n_steps = max(1, int(math.ceil((s_to - s_from) / h - 1e-12)))
    hh = (s_to - s_from) / n_steps
    y, yp = y0, yp0
    s = s_from
    for _ in range(n_steps):
        p1 = log_density_derivative(params, s)
        p2 = log_density_derivative(params, s + 0.5 * hh)
        p3 = p2
        p4 = log_density_derivative(params, s + hh)

        k1y = yp
        k1p = -p1 * yp - nu * y

        y2 = y + 0.5 * hh * k1y
        yp2 = yp + 0.5 * hh * k1p
        k2y = yp2
        k2p = -p2 * yp2 - nu * y2

        y3 = y + 0.5 * hh * k2y
        yp3 = yp + 0.5 * hh * k2p
        k3y = yp3
        k3p = -p3 * yp3 - nu * y3

        y4 = y + hh * k3y
        yp4 = yp + hh * k3p
        k4y = yp4
        k4p = -p4 * yp4 - nu * y4

        y = y + (hh / 6.0) * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
        yp = yp + (hh / 6.0) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
        s += hh
    return y, yp


def _ode_values(params: SpaceParams, nu: np.ndarray, s_targets: np.ndarray, h: float):
    """phi at each target s (sorted ascending) for every nu; shape (n_nu, n_s)."""
    nu = np.atleast_1d(np.asarray(nu, dtype=float))
    s_targets = np.asarray(s_targets, dtype=float)
    out = np.empty((nu.size, s_targets.size))
    y, yp = _taylor_eval(params, nu, _TAYLOR_S0)
    y = np.broadcast_to(y, nu.shape).astype(float).copy()
    yp = np.broadcast_to(yp, nu.shape).astype(float).copy()
    s_cur = _TAYLOR_S0
    for j, s_t in enumerate(s_targets):
        if s_t < _TAYLOR_S0:
            c2, c4 = _taylor_coeffs(params, nu)
            out[:, j] = 1.0 + c2 * s_t * s_t + c4 * s_t**4
            continue
        if s_t > s_cur:
            y, yp = _rk4_advance(params, nu, y, yp, s_cur, s_t, h)
            s_cur = s_t
        out[:, j] = y
    return out


def _auto_step(omega_max: float, s_span: float, tol: float = 1e-9) -> float:
    """Step targeting a given relative phase error for the RK4 scheme.

    The accumulated phase error scales like s_span * omega^5 * h^4, so the
    step shrinks like omega^(-5/4) at large frequency.
    """
    omega = max(omega_max, 1.0)
    h = (tol * 120.0 / (max(s_span, 0.1) * omega**5)) ** 0.25
    return float(min(1e-3, h, 0.04 / omega))


def _ode_refined(params: SpaceParams, lam: float, s_targets, tol: float = 1e-10):
    """Richardson-extrapolated oracle values (error ~ h^6) at the targets."""
    s_targets = np.atleast_1d(np.asarray(s_targets, dtype=float))
    nu = np.array([lam * lam + params.q2_over_4])
    h = _auto_step(math.sqrt(nu[0]), float(s_targets[-1]), tol=1e-8)
    v1 = _ode_values(params, nu, s_targets, h)[0]
    v2 = _ode_values(params, nu, s_targets, h / 2.0)[0]
    return (16.0 * v2 - v1) / 15.0


def phi_ode_oracle(params: SpaceParams, lam: float, s_max: float, step: float) -> RadialProfile:
    """Integrate the radial eigen-equation and sample phi on [0, s_max].

    The integration starts from the fourth-order Taylor expansion at
    s = 1e-3 (the drift coefficient A'/A is singular at 0) and proceeds
    with classical RK4 at fixed step.  The step must resolve the local
    frequency: step * sqrt(lambda^2 + Q^2/4) <= 0.05.
    """
    nu = lam * lam + params.q2_over_4
    if step <= 0:
        raise StepSizeError("step must be positive")
    if step * math.sqrt(nu) > 0.05:
        raise StepSizeError(
            f"step {step} too large: step*sqrt(lambda^2+Q^2/4) = "
            f"{step * math.sqrt(nu):.3g} > 0.05"
        )
    if s_max <= 0:
        raise DomainError("s_max must be positive")
    n_pts = int(round(s_max / step)) + 1
    grid = np.linspace(0.0, n_pts * step - step, n_pts)
    vals = np.empty(n_pts)
    vals[0] = 1.0
    inner = _ode_values(params, np.array([nu]), grid[1:], step)
    vals[1:] = inner[0]
    return RadialProfile(grid, vals)


# ---------------------------------------------------------------------------
# exponential series away from the identity
# ---------------------------------------------------------------------------

def omega_coeffs(params: SpaceParams, k_max: int) -> np.ndarray:
    """Coefficients omega_k of the recursion, k = 1..k_max.

    Substituting phi = A^(-1/2) u turns the radial equation into
    u'' + (lambda^2 - V(s)) u = 0 with the Liouville potential
    V = (A'/A)^2/4 + (A'/A)'/2 - Q^2/4.  Writing A'/A through
    coth(s/2), tanh(s/2) and expanding in q = e^(-s) gives

        V(s) = sum_k [ (Q - k) c_k + sum_{j<k} c_j c_{k-j} ] q^k,

    with c_k = (m_v+m_z)/2 + (-1)^k m_z/2, and omega_k is that
    coefficient.  (For real hyperbolic space, m_z = 0, every omega_k
    vanishes and the series terminates at Gamma_0.)
    """
    alpha = 0.5 * (params.m_v + params.m_z)
    beta = 0.5 * params.m_z
    Q = float(params.Q)
    c = np.array([alpha + (1 if k % 2 == 0 else -1) * beta for k in range(1, k_max + 1)])
    omega = np.empty(k_max)
    for k in range(1, k_max + 1):
        conv = sum(c[j - 1] * c[k - j - 1] for j in range(1, k))
        omega[k - 1] = (Q - k) * c[k - 1] + conv
    return omega


def liouville_potential(params: SpaceParams, s):
    """V(s) = (A'/A)^2/4 + (A'/A)'/2 - Q^2/4, the independent check on omega_k."""
    from .space import log_density_derivative_prime

    p = log_density_derivative(params, s)
    pp = log_density_derivative_prime(params, s)
    return 0.25 * p * p + 0.5 * pp - params.q2_over_4


def gamma_coeffs(params: SpaceParams, lam: float, mu_max: int) -> np.ndarray:
    """Gamma_0..Gamma_mu_max of the exponential series at spectral value lam.

    Gamma_0 = 1 and (mu^2 - 2 i mu lam) Gamma_mu = sum_{j<mu}
    omega_{mu-j} Gamma_j.  The divisor has modulus mu*sqrt(mu^2+4 lam^2)
    >= 1 for real lam != 0, so the forward recursion is stable.
    """
    if lam == 0:
        raise DomainError("gamma_coeffs requires lambda != 0")
    if mu_max < 1:
        raise ValidationError("mu_max must be >= 1")
    omega = omega_coeffs(params, mu_max)
    gam = np.empty(mu_max + 1, dtype=complex)
    gam[0] = 1.0
    for mu in range(1, mu_max + 1):
        div = mu * mu - 2j * mu * lam
        assert abs(div) >= 1.0  # cannot underflow for real lam != 0
        rhs = np.dot(omega[mu - 1 :: -1][:mu], gam[:mu])
        gam[mu] = rhs / div
    return gam


@dataclass
class HcSeriesEval:
    """Result of the exponential-series evaluation."""

    value: complex
    mu_max: int
    gamma_coeffs: np.ndarray


def _gamma_matrix(params: SpaceParams, lams: np.ndarray, mu_max: int) -> np.ndarray:
    """Gamma_mu(lam) for every lam, shape (n_lam, mu_max+1); recursion
    vectorized over the spectral grid."""
    omega = omega_coeffs(params, mu_max)
    gam = np.zeros((lams.size, mu_max + 1), dtype=complex)
    gam[:, 0] = 1.0
    for mu in range(1, mu_max + 1):
        div = mu * mu - 2j * mu * lams
        rhs = gam[:, :mu] @ omega[mu - 1 :: -1][:mu]
        gam[:, mu] = rhs / div
    return gam


def _hc_matrix(params: SpaceParams, lams: np.ndarray, s: np.ndarray,
               mu_max: int) -> np.ndarray:
    """Two-sided exponential series on the grid product, complex,
    shape (n_lam, n_s).  Requires lam != 0 throughout."""
    mu = np.arange(mu_max + 1)
    gam_p = _gamma_matrix(params, lams, mu_max)
    gam_m = _gamma_matrix(params, -lams, mu_max)
    c_p = np.array([complex(c_function(params, l)) for l in lams])
    c_m = np.array([complex(c_function(params, -l)) for l in lams])
    decay = np.exp(-np.outer(mu, s))                     # (n_mu, n_s)
    osc = np.exp(1j * np.outer(lams, s))                 # (n_lam, n_s)
    sum_p = gam_p @ decay
    sum_m = gam_m @ decay
    pref = 2.0 ** (-0.5 * params.m_z) / np.sqrt(density(params, s))
    return pref * (c_p[:, None] * osc * sum_p + c_m[:, None] * np.conj(osc) * sum_m)


def _hc_values(params: SpaceParams, lam: float, s: np.ndarray, mu_max: int) -> np.ndarray:
    """Vectorized two-sided series over an s array (complex values)."""
    return _hc_matrix(params, np.array([float(lam)]), s, mu_max)[0]


def phi_hc(params: SpaceParams, lam: float, s: float, mu_max: int = _HC_MU_DEFAULT,
           s_min: float = S_BESSEL_MAX) -> HcSeriesEval:
    """phi_lambda(s) by the exponential series, valid away from the identity.

    Emits a convergence warning when the last retained term still exceeds
    1e-12 of the partial sum.
    """
    if lam == 0:
        raise DomainError("phi_hc requires lambda != 0")
    if s < s_min:
        raise DomainError(f"phi_hc requires s >= {s_min}, got {s}")
    val = _hc_values(params, lam, np.array([s]), mu_max)[0]
    gam = gamma_coeffs(params, lam, mu_max)
    tail = abs(gam[mu_max]) * math.exp(-mu_max * s)
    if tail > 1e-12 * max(abs(val) * math.sqrt(density(params, s)), 1e-300):
        warnings.warn(
            f"exponential series tail {tail:.2e} above 1e-12 of the sum at "
            f"(lambda={lam}, s={s}, mu_max={mu_max})",
            RuntimeWarning,
        )
    if abs(val.imag) > 1e-8 * max(abs(val), 1e-300):
        warnings.warn("imaginary residue above 1e-8 of magnitude", RuntimeWarning)
    return HcSeriesEval(value=val, mu_max=mu_max, gamma_coeffs=gam)


def _hc_mu_for(params: SpaceParams, lams: np.ndarray, s_min: float,
               mu_start: int = _HC_MU_DEFAULT) -> int:
    """Truncation order with every lam's tail below 1e-12."""
    mu_max = mu_start
    lam_probe = float(np.min(np.abs(lams)))
    while True:
        gam_tail = abs(gamma_coeffs(params, lam_probe, mu_max)[mu_max])
        if gam_tail * math.exp(-mu_max * s_min) < 1e-12 or mu_max >= _HC_MU_CAP:
            break
        mu_max *= 2
    return mu_max


def _hc_auto(params: SpaceParams, lam: float, s: np.ndarray,
             mu_start: int = _HC_MU_DEFAULT) -> np.ndarray:
    """Series values with mu_max raised until the tail is below 1e-12."""
    mu_max = _hc_mu_for(params, np.array([lam]), float(np.min(s)), mu_start)
    return np.real(_hc_values(params, lam, s, mu_max))


# ---------------------------------------------------------------------------
# Bessel series near the identity
# ---------------------------------------------------------------------------

def c0_constant(params: SpaceParams) -> float:
    """Normalizing constant of the Bessel expansion.

    pi^(-1/2) Gamma(n/2) / Gamma((n-1)/2): fixed so that the leading
    term alone satisfies phi_lambda(0) = 1 exactly (the l = 0 kernel has
    script_j_{(n-2)/2}(0) = sqrt(pi) Gamma((n-1)/2)/Gamma(n/2)).
    """
    n = params.n
    return math.exp(
        -0.5 * math.log(math.pi)
        + (ln_gamma_complex(n / 2.0) - ln_gamma_complex((n - 1) / 2.0)).real
    )


@dataclass
class BesselSeriesEval:
    """Result of the truncated Bessel-series evaluation."""

    value: float
    truncation_order: int
    error_bound: float


class _BesselTable:
    """Fitted coefficients a_l(s) on a fine s table, splined per order.

    a_0 is identically 1; a_1..a_M are obtained by least squares against
    the ODE route at a fixed set of fitting frequencies, solved row by
    row in s.  Columns that the data cannot resolve (s^(2l) below 1e-10)
    are set to zero; their true contribution is below 1e-16 there.
    """

    S_TAB_MAX = 2.0
    N_TAB = 500
    LAM_FIT = np.sqrt(np.linspace(0.3**2, 16.0**2, 30))

    def __init__(self, params: SpaceParams, m_tab: int):
        self.params = params
        self.m_tab = m_tab
        mu0 = (params.n - 2) / 2.0
        s_tab = np.arange(1, self.N_TAB + 1) * (self.S_TAB_MAX / self.N_TAB)
        nu = self.LAM_FIT**2 + params.q2_over_4
        h = _auto_step(math.sqrt(nu.max()), self.S_TAB_MAX, tol=1e-10)
        phi_fit = _ode_values(params, nu, s_tab, h)            # (n_lam, n_s)
        pref = c0_constant(params) * np.sqrt(s_tab ** (params.n - 1) / density(params, s_tab))
        g = phi_fit / pref                                      # series values
        # basis B[j, l] = s^(2l) script_j(mu0+l, lam_j s)
        coeffs = np.zeros((self.N_TAB, m_tab + 1))
        coeffs[:, 0] = 1.0
        kernels = np.empty((m_tab + 1, self.LAM_FIT.size, self.N_TAB))
        for l in range(m_tab + 1):
            kernels[l] = script_j(mu0 + l, np.outer(self.LAM_FIT, s_tab).ravel()).reshape(
                self.LAM_FIT.size, self.N_TAB
            )
        # ridge prior |a_l| <~ 4^-l (the series coefficients decay at least
        # geometrically with base 4 R_1 > 4); without it the least squares
        # overfits near s = 2, where the truncated basis cannot represent
        # phi exactly, by huge cancelling coefficients.
        prior = 4.0 ** (-np.arange(m_tab + 1))
        sigma = 3e-10
        for i, s in enumerate(s_tab):
            powers = s ** (2 * np.arange(m_tab + 1))
            resolved = powers > 1e-10
            resolved[0] = True
            b = kernels[:, :, i].T * powers                     # (n_lam, M+1)
            rhs = g[:, i] - b[:, 0]
            cols = np.nonzero(resolved[1:])[0] + 1
            if cols.size:
                aug = np.vstack([b[:, cols], np.diag(sigma / prior[cols])])
                rhs_aug = np.concatenate([rhs, np.zeros(cols.size)])
                x, *_ = np.linalg.lstsq(aug, rhs_aug, rcond=None)
                coeffs[i, cols] = x
        self.s_tab = s_tab
        self.splines = [CubicSpline(s_tab, coeffs[:, l]) for l in range(m_tab + 1)]
        self.mu0 = mu0

    def a_values(self, s: np.ndarray) -> np.ndarray:
        """a_l(s) for l = 0..m_tab, shape (m_tab+1, n_s)."""
        out = np.empty((self.m_tab + 1, s.size))
        out[0] = 1.0
        for l in range(1, self.m_tab + 1):
            out[l] = self.splines[l](s)
            out[l][s ** (2 * l) <= 1e-10] = 0.0
        return out


_BESSEL_TABLES: dict[tuple[int, int, int], _BesselTable] = {}
_ERRBOUND_CONST: dict[tuple[int, int, int], tuple[float, float]] = {}


def _bessel_table(params: SpaceParams, m_tab: int) -> _BesselTable:
    key = (params.m_v, params.m_z, m_tab)
    if key not in _BESSEL_TABLES:
        _BESSEL_TABLES[key] = _BesselTable(params, m_tab)
    return _BESSEL_TABLES[key]


def _bessel_matrix(params: SpaceParams, lams: np.ndarray, s: np.ndarray,
                   m: int = _BESSEL_M_DEFAULT + 4) -> np.ndarray:
    """Bessel-series values on the grid product, shape (n_lam, n_s).

    Evaluated term by term with the kernel order vectorized over the
    full (lambda, s) outer product; s = 0 columns return exactly 1.
    """
    tab = _bessel_table(params, max(m, _BESSEL_M_DEFAULT + 4))
    if m > tab.m_tab:
        raise DomainError(f"truncation order {m} above the fitted table ({tab.m_tab})")
    lams = np.abs(np.atleast_1d(np.asarray(lams, dtype=float)))
    s = np.atleast_1d(np.asarray(s, dtype=float))
    pos = s > 0
    sp = s[pos]
    a = tab.a_values(sp)                                    # (m_tab+1, n_sp)
    x = np.outer(lams, sp)                                  # (n_lam, n_sp)
    total = np.zeros((lams.size, sp.size))
    for l in range(m + 1):
        total += (a[l] * sp ** (2 * l)) * script_j(tab.mu0 + l, x.ravel()).reshape(x.shape)
    pref = c0_constant(params) * np.sqrt(sp ** (params.n - 1) / density(params, sp))
    out = np.ones((lams.size, s.size))
    out[:, pos] = pref * total
    return out


def _bessel_values(params: SpaceParams, lam: float, s: np.ndarray,
                   m: int = _BESSEL_M_DEFAULT + 4) -> np.ndarray:
    """Series values for a single lambda over an s array.

    The default order is the full fitted table (M = 16): the working
    default M = 12 auto-raised to where the last term sits below 1e-12
    of the sum for s inside the dispatcher's Bessel zone.
    """
    return _bessel_matrix(params, np.array([abs(float(lam))]), s, m)[0]


def _error_bound_consts(params: SpaceParams, m: int) -> tuple[float, float]:
    """Empirical constant (and additive floor) of the two-regime bound."""
    key = (params.m_v, params.m_z, m)
    if key in _ERRBOUND_CONST:
        return _ERRBOUND_CONST[key]
    lam_grid = np.array([0.5, 1.0, 2.0, 5.0, 11.0, 19.0, 37.0])
    s_grid = np.linspace(0.08, 1.9, 12)
    c_max, floor = 0.0, 1e-12
    for lam in lam_grid:
        ref = _ode_refined(params, lam, s_grid)
        got = _bessel_values(params, lam, s_grid, m)
        err = np.abs(got - ref)
        shape = _error_shape(params, lam, s_grid, m)
        big = shape > 1e-11
        if np.any(big):
            c_max = max(c_max, float(np.max(err[big] / shape[big])))
        floor = max(floor, float(np.max(err[~big])) if np.any(~big) else 0.0)
    consts = (3.0 * c_max, 3.0 * floor)
    _ERRBOUND_CONST[key] = consts
    return consts


def _error_shape(params: SpaceParams, lam: float, s, m: int):
    s = np.asarray(s, dtype=float)
    x = np.abs(lam) * s
    shape = s ** (2 * (m + 1))
    decay = np.where(x > 1.0, x ** (-((params.n - 1) / 2.0 + m + 1)), 1.0)
    return shape * decay


def phi_bessel(params: SpaceParams, lam: float, s: float, m: int = _BESSEL_M_DEFAULT,
               s_max: float = 2.0) -> BesselSeriesEval:
    """phi_lambda(s) by the Bessel-kernel series, for s in [0, s_max].

    The working radius defaults to 2 (the series converges absolutely
    below it); the dispatcher nevertheless hands off to other methods
    beyond s = 0.75, where they are cheaper at equal accuracy.  The
    error bound combines the two-regime truncation estimate
    (s^(2(M+1)), with an extra |lambda s|^(-((n-1)/2+M+1)) beyond
    |lambda s| = 1) with an additive floor for the coefficient fit, both
    calibrated once per space against the ODE route.
    """
    if m < 0:
        raise ValidationError("M must be >= 0")
    if not 0.0 <= s <= s_max:
        raise DomainError(f"phi_bessel requires 0 <= s <= {s_max}, got {s}")
    if s == 0.0:
        return BesselSeriesEval(value=1.0, truncation_order=m, error_bound=0.0)
    val = float(_bessel_values(params, lam, np.array([s]), m)[0])
    c_m, floor = _error_bound_consts(params, m)
    bound = float(c_m * _error_shape(params, lam, np.array([s]), m)[0] + floor)
    return BesselSeriesEval(value=val, truncation_order=m, error_bound=bound)


# ---------------------------------------------------------------------------
# dispatcher
# ---------------------------------------------------------------------------

def _phi_dispatch(params: SpaceParams, lam: float, s: float) -> tuple[float, str]:
    lam = abs(float(lam))
    if s < 0:
        raise DomainError("phi requires s >= 0")
    if s <= S_BESSEL_MAX:
        val = float(_bessel_values(params, lam, np.array([s]))[0])
        method = "bessel"
    elif s >= S_HC_MIN and lam >= LAMBDA_HC_MIN:
        val = float(_hc_auto(params, lam, np.array([s]))[0])
        method = "hc"
    else:
        val = float(_ode_refined(params, lam, np.array([s]))[0])
        method = "ode"
    if abs(val) > 1.0 + _PHI_BOUND_TOL:
        raise PhiBoundError(
            f"|phi_{lam}({s})| = {abs(val)} violates the bound 1 + 1e-9 "
            f"(method {method})"
        )
    return val, method


def phi(params: SpaceParams, lam: float, s: float) -> float:
    """phi_lambda(s), routed to the regime-appropriate method."""
    return _phi_dispatch(params, lam, s)[0]


def phi_with_method(params: SpaceParams, lam: float, s: float) -> tuple[float, str]:
    """phi value plus the name of the method that produced it."""
    return _phi_dispatch(params, lam, s)


def phi_matrix(params: SpaceParams, lams, s, ode_tol: float = 1e-8) -> np.ndarray:
    """phi_{lambda_i}(s_j) over the grid product, shape (n_lam, n_s).

    Bessel series for s <= 0.75, exponential series for s >= 2 at
    lambda >= 1, and blocked vector RK4 for the strip in between (and for
    the sub-unit frequencies everywhere beyond the Bessel zone).
    """
    lams = np.atleast_1d(np.asarray(lams, dtype=float))
    s = np.atleast_1d(np.asarray(s, dtype=float))
    if np.any(s < 0):
        raise DomainError("phi_matrix requires s >= 0")
    out = np.empty((lams.size, s.size))
    near = s <= S_BESSEL_MAX
    far = ~near
    s_far = s[far]
    if np.any(near):
        out[:, near] = _bessel_matrix(params, np.abs(lams), s[near])
    if not np.any(far):
        return out

    hc_rows = np.abs(lams) >= LAMBDA_HC_MIN
    hc_cols = s_far >= S_HC_MIN
    far_idx = np.nonzero(far)[0]
    # exponential series block
    if np.any(hc_rows) and np.any(hc_cols):
        s_hc = s_far[hc_cols]
        mu_max = _hc_mu_for(params, np.abs(lams[hc_rows]), float(np.min(s_hc)))
        vals = np.real(_hc_matrix(params, np.abs(lams[hc_rows]), s_hc, mu_max))
        out[np.ix_(hc_rows, far_idx[hc_cols])] = vals
    # ODE strips, blocked by frequency so each block shares a step
    for i_block, s_need_mask in (
        (np.nonzero(~hc_rows)[0], np.ones_like(s_far, dtype=bool)),
        (np.nonzero(hc_rows)[0], ~hc_cols),
    ):
        if i_block.size == 0 or not np.any(s_need_mask):
            continue
        s_need = s_far[s_need_mask]
        cols = far_idx[s_need_mask]
        nu_all = lams[i_block] ** 2 + params.q2_over_4
        order = np.argsort(nu_all)
        blocks = np.array_split(order, max(1, order.size // 64))
        for blk in blocks:
            if blk.size == 0:
                continue
            nu = nu_all[blk]
            h = _auto_step(math.sqrt(nu.max()), float(s_need[-1]), tol=ode_tol)
            vals = _ode_values(params, nu, s_need, h)
            for r, row in enumerate(i_block[blk]):
                out[row, cols] = vals[r]
    return out
