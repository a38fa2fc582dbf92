import cmath

import numpy as np
import pytest

import pulsespec as ps
from conftest import drive, nearest_peak


def test_fourier_constant_row_dc():
    row = np.ones(11, dtype=complex)
    assert ps.fourier_over_theta(row, 0.1, 0.0) == pytest.approx(1.0, abs=1e-14)


def _const_row_error(n, omega):
    # quadrature error for a constant row against (1 - e^{-i omega}) / (i omega)
    row = np.ones(n + 1, dtype=complex)
    exact = (1.0 - np.exp(-1j * omega)) / (1j * omega)
    return abs(ps.fourier_over_theta(row, 1.0 / n, omega) - exact)


def test_fourier_oscillating_row_second_order():
    err = _const_row_error(100, 3.0)
    err_fine = _const_row_error(200, 3.0)
    assert err <= 2e-4
    assert err / err_fine >= 3.5      # halving dt gains ~4x


def test_fourier_decaying_rotating_row():
    # row sampled from the free correlator kernel itself
    dt = 0.01
    theta = np.arange(101) * dt
    z = 3j - 1.0
    row = np.exp(z * theta)
    omega = 2.0
    exact = (np.exp((z - 1j * omega) * 1.0) - 1.0) / (z - 1j * omega)
    approx = ps.fourier_over_theta(row, dt, omega)
    assert abs(approx - exact) <= 2e-5


def test_fourier_rejects_short_rows():
    with pytest.raises(ps.EmptyRow):
        ps.fourier_over_theta(np.ones(1, dtype=complex), 0.1, 0.0)


def test_zero_grids_give_zero_spectrum():
    p = drive(2)
    g = ps.make_time_grid(p, 5)
    traj = ps.propagate_trajectory(p, g)
    cg = ps.build_correlator_grids(p, g, traj)
    zero = [np.zeros_like(r) for r in cg.c1]
    cg_zero = ps.CorrelatorGrid(
        t_nodes=cg.t_nodes, c1=zero, c2=zero, c1_before=zero, c2_before=zero,
        pre_c1={i: (np.zeros_like(s), np.zeros_like(b))
                for i, (s, b) in cg.pre_c1.items()},
        pre_c2={i: (np.zeros_like(s), np.zeros_like(b))
                for i, (s, b) in cg.pre_c2.items()},
        dt=cg.dt, substeps_per_interval=cg.substeps_per_interval,
        n_pulses=cg.n_pulses)
    fg = ps.make_frequency_grid(p)
    s = ps.compute_numeric_spectrum(p, g, cg_zero, fg)
    assert np.all(s.p1 == 0.0)
    assert np.all(s.p2 == 0.0)
    assert np.all(s.q == 0.0)


def test_numeric_spectrum_structure(numeric8):
    s = numeric8
    assert s.meta["engine"] == "numeric"
    assert s.meta["substeps_per_interval"] == 20
    assert s.raw_p1 is not None and s.raw_p2 is not None
    assert np.allclose(s.p1, 2 * 0.5 * s.raw_p1.real, atol=1e-15)
    assert np.array_equal(s.q, s.p2 - s.p1)


def test_numeric_spectrum_peak_layout(numeric8):
    # stimulated-emission dip at the drive carrier, satellites further out
    peaks = ps.find_peaks(numeric8)
    central = nearest_peak(peaks, 0.0)
    assert abs(central[0]) < 1.0
    assert central[1] < 0.0
    assert any(12.0 < abs(pk[0]) < 18.0 for pk in peaks)


def test_grid_mismatch_between_grids():
    p = drive(2)
    g = ps.make_time_grid(p, 5)
    traj = ps.propagate_trajectory(p, g)
    cg = ps.build_correlator_grids(p, g, traj)
    g_other = ps.make_time_grid(p, 6)
    with pytest.raises(ps.GridMismatch):
        ps.compute_numeric_spectrum(p, g_other, cg, ps.make_frequency_grid(p))


def test_refinement_changes_little(numeric20):
    p = drive(20)
    fg = ps.make_frequency_grid(p)
    fine = ps.numeric_spectrum(p, fg, substeps=40)
    rel = np.linalg.norm(fine.q - numeric20.q) / np.linalg.norm(fine.q)
    assert rel <= 0.01


def test_sum_rule_against_closed_total(numeric20, closed20):
    total_numeric = (numeric20.raw_p1 + numeric20.raw_p2).real
    total_closed = closed20.raw_p3.real
    rel = np.linalg.norm(total_numeric - total_closed) / np.linalg.norm(total_closed)
    assert rel <= 0.05


def test_no_pulse_positive_single_peak(nopulse20):
    s = nopulse20
    assert np.all(s.q > 0.0)
    imax = int(np.argmax(s.q))
    assert s.omegas[imax] == pytest.approx(3.0, abs=0.1)
