"""Sampled radial and spectral profiles, with the CSV wire format.

A RadialProfile is a function of the geodesic distance s on a uniform
grid of [0, S_max]; a SpectralProfile is a function of the spectral
parameter lambda, complex valued, optionally carrying the interval on
which it is supported so that compactly supported families integrate
only over their support.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError

__all__ = ["RadialProfile", "SpectralProfile", "write_profile_csv", "read_profile_csv"]

_FLOAT_FMT = "%.17g"


def _check_uniform_grid(grid: np.ndarray, what: str) -> None:
    if grid.ndim != 1 or grid.size < 2:
        raise ValidationError(f"{what} grid must be a 1-d array with >= 2 points")
    d = np.diff(grid)
    if np.any(d <= 0):
        raise ValidationError(f"{what} grid must be strictly increasing")
    if not np.allclose(d, d[0], rtol=1e-9, atol=1e-12 * abs(d[0])):
        raise ValidationError(f"{what} grid must be uniformly spaced")


@dataclass(eq=False)
class RadialProfile:
    """Samples of a radial function s -> f(s) on a uniform grid."""

    s_grid: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        self.s_grid = np.asarray(self.s_grid, dtype=float)
        self.values = np.asarray(self.values)
        _check_uniform_grid(self.s_grid, "radial")
        if self.values.shape != self.s_grid.shape:
            raise ValidationError("values and s_grid must have the same shape")

    @property
    def spacing(self) -> float:
        return float(self.s_grid[1] - self.s_grid[0])

    @classmethod
    def sample(cls, fn, s_max: float, n_points: int) -> "RadialProfile":
        s = np.linspace(0.0, s_max, n_points)
        return cls(s, np.asarray(fn(s)))


@dataclass(eq=False)
class SpectralProfile:
    """Samples of a spectral function lambda -> fh(lambda), complex valued.

    support_hint, when present, is the closed interval outside which the
    samples vanish (within 1e-14 of the peak magnitude); experiment
    families set it so their quadratures cover only the support.
    """

    lambda_grid: np.ndarray
    values: np.ndarray
    support_hint: tuple[float, float] | None = field(default=None)

    def __post_init__(self):
        self.lambda_grid = np.asarray(self.lambda_grid, dtype=float)
        self.values = np.asarray(self.values, dtype=complex)
        _check_uniform_grid(self.lambda_grid, "spectral")
        if self.values.shape != self.lambda_grid.shape:
            raise ValidationError("values and lambda_grid must have the same shape")
        if self.support_hint is not None:
            lo, hi = self.support_hint
            if not lo < hi:
                raise ValidationError("support_hint must be an interval (lo, hi)")
            outside = (self.lambda_grid < lo) | (self.lambda_grid > hi)
            peak = np.max(np.abs(self.values)) if self.values.size else 0.0
            if np.any(np.abs(self.values[outside]) > 1e-14 * max(peak, 1e-300)):
                raise ValidationError("values do not vanish outside support_hint")

    @property
    def spacing(self) -> float:
        return float(self.lambda_grid[1] - self.lambda_grid[0])

    def with_values(self, values: np.ndarray) -> "SpectralProfile":
        return SpectralProfile(self.lambda_grid, values, self.support_hint)


def write_profile_csv(profile, stream: io.TextIOBase, meta: str = "") -> None:
    """Two columns (grid, value) for real data; four (grid, re, im, abs)
    for complex.  One comment header line carries caller metadata."""
    if isinstance(profile, RadialProfile):
        grid, vals, kind = profile.s_grid, profile.values, "radial"
    else:
        grid, vals, kind = profile.lambda_grid, profile.values, "spectral"
    complex_vals = np.iscomplexobj(vals) and (kind == "spectral" or np.any(vals.imag != 0))
    stream.write(f"# drwave-profile kind={kind} points={grid.size} "
                 f"start={_FLOAT_FMT % grid[0]} stop={_FLOAT_FMT % grid[-1]} "
                 f"complex={int(bool(complex_vals))} {meta}\n".rstrip() + "\n")
    if complex_vals:
        stream.write("grid,re,im,abs\n")
        for g, v in zip(grid, vals):
            v = complex(v)
            stream.write(",".join(_FLOAT_FMT % x for x in (g, v.real, v.imag, abs(v))) + "\n")
    else:
        stream.write("grid,value\n")
        for g, v in zip(grid, np.real(vals)):
            stream.write(f"{_FLOAT_FMT % g},{_FLOAT_FMT % v}\n")


def read_profile_csv(stream: io.TextIOBase):
    """Inverse of write_profile_csv."""
    header = stream.readline()
    if not header.startswith("# drwave-profile"):
        raise ValidationError("not a drwave profile CSV")
    fields = dict(tok.split("=", 1) for tok in header[2:].split() if "=" in tok)
    kind = fields["kind"]
    stream.readline()  # column names
    rows = [line.strip().split(",") for line in stream if line.strip()]
    grid = np.array([float(r[0]) for r in rows])
    if int(fields.get("complex", "0")):
        vals = np.array([float(r[1]) + 1j * float(r[2]) for r in rows])
    else:
        vals = np.array([float(r[1]) for r in rows])
    if kind == "radial":
        return RadialProfile(grid, vals)
    return SpectralProfile(grid, vals.astype(complex))
