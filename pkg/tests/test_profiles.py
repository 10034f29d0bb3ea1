import io

import numpy as np
import pytest

from drwave.errors import ValidationError
from drwave.profiles import (
    RadialProfile,
    SpectralProfile,
    read_profile_csv,
    write_profile_csv,
)


def test_radial_profile_requires_uniform_grid():
    with pytest.raises(ValidationError):
        RadialProfile(np.array([0.0, 0.1, 0.3]), np.zeros(3))
    with pytest.raises(ValidationError):
        RadialProfile(np.array([0.0, 0.1, 0.05]), np.zeros(3))


def test_radial_profile_shape_mismatch():
    with pytest.raises(ValidationError):
        RadialProfile(np.linspace(0, 1, 5), np.zeros(4))


def test_spectral_profile_support_hint_enforced():
    lam = np.linspace(0.0, 10.0, 11)
    vals = np.zeros(11, dtype=complex)
    vals[3] = 1.0
    SpectralProfile(lam, vals, support_hint=(2.5, 3.5))  # fine
    with pytest.raises(ValidationError):
        SpectralProfile(lam, vals, support_hint=(5.0, 7.0))


def test_profile_sampling():
    prof = RadialProfile.sample(lambda s: np.exp(-s), 4.0, 41)
    assert prof.spacing == pytest.approx(0.1)
    assert prof.values[0] == 1.0


def test_csv_roundtrip_real():
    prof = RadialProfile(np.linspace(0.0, 2.0, 9), np.linspace(1.0, -0.3, 9))
    buf = io.StringIO()
    write_profile_csv(prof, buf, meta="m_v=2 m_z=1")
    buf.seek(0)
    back = read_profile_csv(buf)
    assert isinstance(back, RadialProfile)
    assert np.array_equal(back.s_grid, prof.s_grid)
    assert np.array_equal(back.values, prof.values)


def test_csv_roundtrip_complex():
    lam = np.linspace(0.0, 3.0, 7)
    vals = np.exp(1j * lam) * np.cos(lam)
    prof = SpectralProfile(lam, vals)
    buf = io.StringIO()
    write_profile_csv(prof, buf)
    buf.seek(0)
    text = buf.getvalue()
    assert text.splitlines()[1] == "grid,re,im,abs"
    buf.seek(0)
    back = read_profile_csv(buf)
    assert isinstance(back, SpectralProfile)
    assert np.array_equal(back.values, vals)


def test_csv_rejects_foreign_data():
    with pytest.raises(ValidationError):
        read_profile_csv(io.StringIO("s,value\n0,1\n"))
