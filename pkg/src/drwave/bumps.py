"""Smooth compactly supported bumps shared by the frequency split, the
window integrals and the counterexample families."""

from __future__ import annotations

import numpy as np

__all__ = ["smooth_step_sigma", "chi_lowpass", "eta_dyadic", "bump_unit", "bump_12"]


def smooth_step_sigma(x):
    """sigma(x) = e^(-1/x) for x > 0, else 0; the C-infinity mollifier atom."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = np.exp(-1.0 / x[pos])
    return out


def chi_lowpass(xi):
    """chi = sigma(2-|xi|) / (sigma(2-|xi|) + sigma(|xi|-1)).

    Smooth, even, 1 on [-1, 1], 0 outside (-2, 2); the telescoping
    partition sum_k eta(2^-k xi) with eta(xi) = chi(xi) - chi(2 xi)
    collapses to chi itself for the low-frequency half.
    """
    a = np.abs(np.asarray(xi, dtype=float))
    num = smooth_step_sigma(2.0 - a)
    den = num + smooth_step_sigma(a - 1.0)
    out = np.zeros_like(a)
    nz = den > 0
    out[nz] = num[nz] / den[nz]
    out[~nz] = 0.0
    return out


def eta_dyadic(xi):
    """The dyadic bump eta(xi) = chi(xi) - chi(2 xi), supported in
    {1/2 < |xi| < 2}, with sum_k eta(2^-k xi) = 1 for xi != 0."""
    xi = np.asarray(xi, dtype=float)
    return chi_lowpass(xi) - chi_lowpass(2.0 * xi)


def bump_unit(xi):
    """exp(1 - 1/(1-xi^2)) on (-1, 1), normalized to unit maximum."""
    xi = np.asarray(xi, dtype=float)
    out = np.zeros_like(xi)
    inside = np.abs(xi) < 1.0
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - xi[inside] ** 2))
    return out


def bump_12(u):
    """The translate of the unit bump supported in (1, 2), unit maximum."""
    u = np.asarray(u, dtype=float)
    return bump_unit(2.0 * u - 3.0)
