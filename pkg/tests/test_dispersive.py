import math

import numpy as np
import pytest

from drwave.bumps import chi_lowpass, eta_dyadic
from drwave.dispersive import (
    PhaseKind,
    default_t_grid,
    littlewood_paley_split,
    maximal_function,
    maximal_refinement_increment,
    phase,
    phase_derivs,
    propagate,
    verify_phase_asymptotics,
)
from drwave.errors import DomainError, ResolutionError, ValidationError
from drwave.profiles import SpectralProfile
from drwave.transform import calibrate_inversion_constant, sft_inverse, sobolev_norm

ALL_KINDS = [
    PhaseKind.frac(1.5),
    PhaseKind.frac_shifted(1.5),
    PhaseKind.boussinesq(),
    PhaseKind.boussinesq_shifted(),
    PhaseKind.beam(),
    PhaseKind.beam_shifted(),
]


def _spectrum(lo=1.0, hi=6.0, n=2048, lam_max=8.0):
    from drwave.bumps import bump_unit

    lam = np.linspace(0.0, lam_max, n)
    vals = bump_unit(2.0 * (lam - lo) / (hi - lo) - 1.0)
    return SpectralProfile(lam, vals.astype(complex), support_hint=(lo, hi))


# ---------------------------------------------------------------------------
# phases
# ---------------------------------------------------------------------------

def test_phase_table_values(space21):
    assert phase(PhaseKind.frac_shifted(2.0), space21, 3.0) == 9.0
    assert phase(PhaseKind.frac(2.0), space21, 0.0) == 1.0  # Q^2/4 with Q = 2
    expected = math.sqrt(101.0) * math.sqrt(102.0)
    assert phase(PhaseKind.boussinesq(), space21, 10.0) == pytest.approx(expected, rel=1e-12)


def test_phase_derivs_closed_form(space21):
    assert phase_derivs(PhaseKind.frac_shifted(2.0), space21, 5.0) == (10.0, 2.0)


@pytest.mark.parametrize("kind", ALL_KINDS, ids=lambda k: k.name + str(k.a or ""))
def test_phase_derivs_match_finite_differences(kind, space21):
    for lam in (0.5, 2.0, 50.0):
        d1, d2 = phase_derivs(kind, space21, lam)
        h = 1e-3 * lam
        f = lambda x: phase(kind, space21, x)
        fd1 = (f(lam - 2 * h) - 8 * f(lam - h) + 8 * f(lam + h) - f(lam + 2 * h)) / (12 * h)
        fd2 = (-f(lam - 2 * h) + 16 * f(lam - h) - 30 * f(lam)
               + 16 * f(lam + h) - f(lam + 2 * h)) / (12 * h * h)
        assert d1 == pytest.approx(fd1, rel=1e-6)
        assert d2 == pytest.approx(fd2, rel=1e-6)


def test_phase_second_derivative_asymptote(space21):
    # psi''(lambda)/lambda^(a-2) -> a(a-1) for the fractional variant
    a = 1.5
    _, d2 = phase_derivs(PhaseKind.frac(a), space21, 1e3)
    assert d2 / 1e3 ** (a - 2.0) == pytest.approx(a * (a - 1.0), rel=1e-2)


def test_phase_derivs_rejects_nonpositive(space21):
    with pytest.raises(DomainError):
        phase_derivs(PhaseKind.beam(), space21, 0.0)


@pytest.mark.parametrize("kind", ALL_KINDS, ids=lambda k: k.name + str(k.a or ""))
def test_phase_asymptotics_pass(kind, space21):
    assert verify_phase_asymptotics(kind, space21).passed


def test_phase_asymptotics_classical_schrodinger(space21):
    rep = verify_phase_asymptotics(PhaseKind.frac(2.0), space21)
    assert rep.passed and rep.delta1 == 2.0 and rep.delta2 == 2.0
    rep_s = verify_phase_asymptotics(PhaseKind.frac_shifted(2.0), space21)
    assert rep_s.passed


def test_phase_asymptotics_generic_monomial(space21):
    good = PhaseKind.generic(3.0, 3.0, lambda x: np.asarray(x) ** 3)
    assert verify_phase_asymptotics(good, space21).passed
    bad = PhaseKind.generic(3.0, 2.0, lambda x: np.asarray(x) ** 3)
    assert not verify_phase_asymptotics(bad, space21).passed


def test_phase_selector_parsing():
    k = PhaseKind.from_selector("frac:1.5")
    assert k.name == "frac" and k.a == 1.5
    assert PhaseKind.from_selector("beam-shifted").delta1 == 4.0
    with pytest.raises(ValidationError):
        PhaseKind.from_selector("frac")
    with pytest.raises(ValidationError):
        PhaseKind.from_selector("heat")
    with pytest.raises(ValidationError):
        PhaseKind.frac(1.0)


# ---------------------------------------------------------------------------
# propagator and maximal function
# ---------------------------------------------------------------------------

def test_propagate_t_zero_is_inverse(space21):
    calibrate_inversion_constant(space21)
    fh = _spectrum()
    s = np.linspace(0.0, 4.0, 96)
    a = propagate(space21, fh, PhaseKind.frac(2.0), 0.0, s)
    b = sft_inverse(space21, fh, s)
    assert np.max(np.abs(a.values - b.values)) <= 1e-10 * np.max(np.abs(b.values))


def test_propagation_conserves_h0(space21):
    # the multiplier is unimodular: the propagated spectrum has the same
    # H^0 norm at the quadrature level
    fh = _spectrum()
    kind = PhaseKind.boussinesq()
    mult = np.exp(1j * 0.37 * phase(kind, space21, fh.lambda_grid))
    moved = fh.with_values(fh.values * mult)
    assert sobolev_norm(space21, moved, 0.0) == pytest.approx(
        sobolev_norm(space21, fh, 0.0), rel=1e-12
    )


def test_smooth_data_convergence(space21):
    # max_s |S_t f - f| decreases monotonically along t = 1e-1..1e-4
    calibrate_inversion_constant(space21)
    fh = _spectrum()
    kind = PhaseKind.frac(2.0)
    s = np.linspace(0.0, 3.0, 64)
    f0 = sft_inverse(space21, fh, s)
    sups = []
    for t in (1e-1, 1e-2, 1e-3, 1e-4):
        ft = propagate(space21, fh, kind, t, s)
        sups.append(float(np.max(np.abs(ft.values - f0.values))))
    assert all(a > b for a, b in zip(sups, sups[1:]))


def test_propagate_grid_resolution_error(space21):
    calibrate_inversion_constant(space21)
    lam = np.linspace(0.0, 64.0, 128)  # far too coarse for t = 1
    vals = np.exp(-((lam - 32.0) ** 2)).astype(complex)
    fh = SpectralProfile(lam, vals)
    with pytest.raises(ResolutionError):
        propagate(space21, fh, PhaseKind.frac(2.0), 0.9, np.linspace(0, 2, 16))


def test_maximal_zero_spectrum(space21):
    calibrate_inversion_constant(space21)
    fh = SpectralProfile(np.linspace(0, 4, 256), np.zeros(256, dtype=complex))
    t_grid = np.linspace(0.1, 0.5, 16)  # dt * psi_beam(4) < pi/4
    out = maximal_function(space21, fh, PhaseKind.beam(), t_grid,
                           np.linspace(0, 2, 32))
    assert np.all(out.values == 0)


def test_maximal_dominates_and_refines(space21):
    calibrate_inversion_constant(space21)
    fh = _spectrum()
    kind = PhaseKind.frac(2.0)
    s = np.linspace(0.0, 3.0, 48)
    t_grid = default_t_grid(space21, kind, 6.0, n_points=48)
    sup = maximal_function(space21, fh, kind, t_grid, s)
    scale = np.max(sup.values)
    # slack covers the node-set difference between the standalone propagate
    # quadrature and the shared kernel inside the maximal function
    for t in t_grid[::11]:
        prop = np.abs(propagate(space21, fh, kind, float(t), s).values)
        assert np.all(sup.values >= prop - 1e-8 * scale)
    finer = maximal_function(space21, fh, kind,
                             default_t_grid(space21, kind, 6.0, n_points=96), s)
    assert np.all(finer.values >= sup.values - 1e-12 * scale)
    inc = maximal_refinement_increment(space21, fh, kind, t_grid, s)
    assert 0.0 <= inc < 0.05 * scale


def test_maximal_t_grid_validation(space21):
    calibrate_inversion_constant(space21)
    fh = _spectrum()
    with pytest.raises(DomainError):
        maximal_function(space21, fh, PhaseKind.frac(2.0), np.array([0.5, 1.0]),
                         np.linspace(0, 1, 8))
    with pytest.raises(ResolutionError):
        maximal_function(space21, fh, PhaseKind.frac(2.0), np.array([1e-4, 0.9]),
                         np.linspace(0, 1, 8))


def test_default_t_grid_respects_rule(space21):
    kind = PhaseKind.frac_shifted(2.0)
    grid = default_t_grid(space21, kind, 16.0, n_points=32)
    assert np.max(np.diff(grid)) * phase(kind, space21, 16.0) <= math.pi / 4.0
    assert grid[0] > 0 and grid[-1] < 1


# ---------------------------------------------------------------------------
# frequency split
# ---------------------------------------------------------------------------

def test_split_low_supported_spectrum(space21):
    lam = np.linspace(0.0, 4.0, 257)
    vals = np.where(lam <= 0.5, 1.0 - lam, 0.0).astype(complex)
    low, high = littlewood_paley_split(SpectralProfile(lam, vals))
    assert np.all(high.values == 0)


def test_split_high_supported_spectrum(space21):
    lam = np.linspace(0.0, 10.0, 513)
    vals = np.where((lam >= 4) & (lam <= 8), 1.0, 0.0).astype(complex)
    low, high = littlewood_paley_split(SpectralProfile(lam, vals))
    assert np.all(low.values == 0)


def test_partition_of_unity():
    xi = np.geomspace(0.01, 100.0, 2000)
    total = chi_lowpass(xi) + (1.0 - chi_lowpass(xi))
    assert np.max(np.abs(total - 1.0)) < 1e-12
    # eta support inside {1/2 < |xi| < 2}
    assert np.all(eta_dyadic(np.array([0.49, 2.01, 0.1, 5.0])) == 0)
    assert np.all(eta_dyadic(np.array([0.7, 1.0, 1.8])) > 0)
    # telescoping: sum over k of eta(2^-k xi) reconstructs 1
    ks = np.arange(-12, 13)
    for x in (0.03, 1.0, 7.7, 60.0):
        assert np.sum(eta_dyadic(x / 2.0**ks)) == pytest.approx(1.0, abs=1e-12)


def test_split_exact_reconstruction(rng):
    lam = np.linspace(0.0, 12.0, 601)
    vals = rng.normal(size=601) + 1j * rng.normal(size=601)
    fh = SpectralProfile(lam, vals)
    low, high = littlewood_paley_split(fh)
    assert np.array_equal(low.values + high.values, fh.values)
