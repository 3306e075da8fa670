import numpy as np
import pytest

import quadspin.pulses as pl
from quadspin.drive import FourLevelDrive
from quadspin.pulses import SechPulse


def make_drive(B, chirp_ignored=None, omega0=30.0, g_s=10.0, g_g=12.0):
    return FourLevelDrive(delta=0.0, delta_s=g_s * B, delta_g=g_g * B,
                          omega0=omega0, u1=0.8, u2=0.6)


def test_envelope_fwhm():
    p = SechPulse(fwhm=100.0, chirp=50.0, peak_rabi=30.0)
    a0, _, _ = pl.sech_envelope(p, 0.0)
    ah, _, _ = pl.sech_envelope(p, 50.0)
    assert ah == pytest.approx(0.5 * a0, rel=1e-9)


def test_chirp_total_sweep():
    p = SechPulse(fwhm=100.0, chirp=60.0, peak_rabi=30.0)
    lo, hi = p.window
    _, _, d_lo = pl.sech_envelope(p, lo)
    _, _, d_hi = pl.sech_envelope(p, hi)
    assert d_hi - d_lo == pytest.approx(60.0, rel=1e-3)


def test_unchirped_pulse_fails_off_resonance_norm():
    # integration preserves the norm of the state regardless of parameters
    p = SechPulse(fwhm=120.0, chirp=40.0, peak_rabi=30.0)
    d = make_drive(B=1.0)
    init = np.zeros((4, 1), dtype=complex)
    init[0, 0] = 1.0
    traj = pl.integrate(d, p, init)
    assert abs(np.linalg.norm(traj.states[-1]) - 1.0) <= 1e-6


def test_zero_field_adiabatic_inversion():
    p = SechPulse(fwhm=120.0, chirp=60.0, peak_rabi=30.0)
    eff = pl.transfer_efficiency(make_drive(B=0.0), p)
    assert eff >= 0.99


def test_transfer_map_shape_and_range():
    p = SechPulse(fwhm=120.0, chirp=0.0, peak_rabi=30.0)
    B_grid = np.array([0.0, 2.0])
    chirp_grid = np.array([0.0, 60.0])
    grid = pl.transfer_map(10.0, 12.0, 0.8, 0.6, p, B_grid, chirp_grid)
    assert grid.shape == (2, 2)
    ok = grid[~np.isnan(grid)]
    assert np.all((ok >= -1e-9) & (ok <= 1.0 + 1e-9))


def test_pulse_validation():
    with pytest.raises(ValueError):
        SechPulse(fwhm=-1.0, chirp=0.0, peak_rabi=30.0)
    with pytest.raises(ValueError):
        SechPulse(fwhm=10.0, chirp=0.0, peak_rabi=30.0, truncation=1.0)
