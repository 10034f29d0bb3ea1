"""Structure constants and the radial volume density of a Damek-Ricci space.

A space is determined by the pair (m_v, m_z): the dimensions of the
generating part and of the center of the underlying H-type algebra.
Everything downstream (spherical functions, Plancherel density, Sobolev
weights) is a function of these two integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError, ValidationError

__all__ = ["SpaceParams", "new_space", "density", "log_density_derivative"]


@dataclass(frozen=True)
class SpaceParams:
    """Damek-Ricci structure constants.

    m_v : dimension of the generating part (even, >= 2)
    m_z : dimension of the center (>= 0)
    n   : manifold dimension, m_v + m_z + 1
    Q   : homogeneous dimension, m_v/2 + m_z (kept exact as a Fraction;
          it enters every spectral weight through Q^2/4)
    """

    m_v: int
    m_z: int
    n: int
    Q: Fraction

    @property
    def q2_over_4(self) -> float:
        """Q^2/4, the spectral gap of the Laplace-Beltrami operator."""
        return float(self.Q * self.Q / 4)

    @property
    def half_sum(self) -> float:
        """(m_v + m_z)/2, the coefficient of coth(s/2) in A'/A."""
        return 0.5 * (self.m_v + self.m_z)


def new_space(m_v: int, m_z: int) -> SpaceParams:
    """Build SpaceParams from (m_v, m_z), deriving n and Q.

    Rejects odd or too-small m_v and negative m_z: the generating part of
    an H-type algebra carries a complex structure, hence is even
    dimensional.
    """
    if m_v != int(m_v) or m_z != int(m_z):
        raise ValidationError(f"m_v and m_z must be integers, got ({m_v}, {m_z})")
    m_v, m_z = int(m_v), int(m_z)
    if m_v < 2:
        raise ValidationError(f"m_v must be >= 2, got {m_v}")
    if m_v % 2 != 0:
        raise ValidationError(f"m_v must be even (H-type), got {m_v}")
    if m_z < 0:
        raise ValidationError(f"m_z must be >= 0, got {m_z}")
    return SpaceParams(m_v=m_v, m_z=m_z, n=m_v + m_z + 1, Q=Fraction(m_v, 2) + m_z)


def density(params: SpaceParams, s):
    """Volume density A(s) = 2^(m_v+m_z) sinh(s/2)^(m_v+m_z) cosh(s/2)^(m_z).

    Accepts scalars or arrays; A(0) = 0 and A ~ s^(n-1) near the origin.
    """
    s = np.asarray(s, dtype=float)
    if np.any(s < 0):
        raise DomainError("density requires s >= 0")
    k = params.m_v + params.m_z
    out = (2.0 ** k) * np.sinh(s / 2.0) ** k * np.cosh(s / 2.0) ** params.m_z
    return out if out.ndim else float(out)


def log_density_derivative(params: SpaceParams, s):
    """Logarithmic derivative A'(s)/A(s).

    Equals (m_v+m_z)/2 * coth(s/2) + m_z/2 * tanh(s/2); behaves like
    (n-1)/s as s -> 0+ and tends to Q as s -> infinity.  Below s = 1e-6
    the Laurent form (n-1)/s + b*s is used to avoid cancellation, with
    b = (m_v+m_z)/12 + m_z/4 from the expansion of coth/tanh.
    """
    s = np.asarray(s, dtype=float)
    if np.any(s <= 0):
        raise DomainError("log_density_derivative requires s > 0")
    alpha = params.half_sum
    beta = 0.5 * params.m_z
    small = s < 1e-6
    half = np.where(small, 1.0, s / 2.0)  # dummy arg where the Laurent form is used
    direct = alpha / np.tanh(half) + beta * np.tanh(half)
    b = (params.m_v + params.m_z) / 12.0 + params.m_z / 4.0
    laurent = (params.n - 1) / s + b * s
    out = np.where(small, laurent, direct)
    return out if out.ndim else float(out)


def log_density_derivative_prime(params: SpaceParams, s):
    """d/ds of A'/A, needed by the Liouville potential of the radial ODE."""
    s = np.asarray(s, dtype=float)
    if np.any(s <= 0):
        raise DomainError("log_density_derivative_prime requires s > 0")
    alpha = params.half_sum
    beta = 0.5 * params.m_z
    out = -alpha / (2.0 * np.sinh(s / 2.0) ** 2) + beta / (2.0 * np.cosh(s / 2.0) ** 2)
    return out if out.ndim else float(out)


def schwartz_envelope(params: SpaceParams, s):
    """Decay envelope e^(-Q s/2) of radial L^2-Schwartz functions."""
    s = np.asarray(s, dtype=float)
    out = np.exp(-0.5 * float(params.Q) * s)
    return out if out.ndim else float(out)


def space_config_pair(params: SpaceParams) -> dict:
    """The serializable form: only (m_v, m_z); derived fields never travel."""
    return {"m_v": params.m_v, "m_z": params.m_z}


def _taylor_b(params: SpaceParams) -> float:
    # A'/A = (n-1)/s + b s + O(s^3)
    return (params.m_v + params.m_z) / 12.0 + params.m_z / 4.0


def density_ratio_limit_check(params: SpaceParams, s_max: float = 3.0, n_pts: int = 200):
    """Empirical [c, C] envelope of A(s)/s^(n-1) on (0, s_max]."""
    s = np.linspace(s_max / n_pts, s_max, n_pts)
    ratio = density(params, s) / s ** (params.n - 1)
    return float(ratio.min()), float(ratio.max())
