"""Quadrature assembly of the numeric spectrum from correlator grids.

The double integral over (t, theta) is a trapezoidal rule on both axes
honoring the ragged theta ranges. At pulse crossings the integrands are
discontinuous; every interior crossing node takes the average of the two
one-sided limits carried by the correlator grid, the final theta node of
a row takes the left limit, and every interior pulse time combines the
post-pulse row with its pre-pulse companion at half weight each. This
keeps the composite rule second order in dt; sampling a single side of
each jump degrades it to first order.
"""
from __future__ import annotations

import numpy as np

from .core import (DriveParams, FrequencyGrid, GridMismatch, PulsespecError,
                   Spectrum, TimeGrid, build_meta, make_frequency_grid,
                   make_time_grid, validate_params)
from .correlators import CorrelatorGrid, build_correlator_grids
from .lindblad import propagate_trajectory


class EmptyRow(PulsespecError):
    pass


def fourier_over_theta(row: np.ndarray, dt: float, omega: float) -> complex:
    """Composite trapezoidal estimate of the row's Fourier integral.

    Evaluates integral of C(theta) * exp(-i*omega*theta) over the row's
    range [0, (len(row)-1)*dt] from uniformly spaced samples.
    """
    row = np.asarray(row)
    if row.size < 2:
        raise EmptyRow(f"need at least 2 samples, got {row.size}")
    thetas = np.arange(row.size) * dt
    weights = np.full(row.size, dt)
    weights[0] *= 0.5
    weights[-1] *= 0.5
    return complex(np.sum(row * np.exp(-1j * omega * thetas) * weights))


def _effective_row(stored: np.ndarray, before: np.ndarray, start: int,
                   n_sub: int, have_pulses: bool) -> np.ndarray:
    """Quadrature samples for one row: jump nodes get two-sided averages.

    The final node of a pulsed row always sits on a pulse instant; its
    integrand limit from inside the range is the pre-swap value, so the
    left limit is used there instead of an average.
    """
    last = stored.size - 1
    if not have_pulses or last == 0:
        return stored
    eff = stored.copy()
    js = np.arange(last + 1)
    cross = ((start + js) % n_sub == 0) & (js > 0)
    interior = cross & (js < last)
    eff[interior] = 0.5 * (stored[interior] + before[interior])
    if (start + last) % n_sub == 0:
        eff[last] = before[last]
    return eff


def compute_numeric_spectrum(p: DriveParams, g: TimeGrid, cg: CorrelatorGrid,
                             fg: FrequencyGrid) -> Spectrum:
    """Assemble the numeric spectrum from prebuilt correlator grids.

    Trapezoid over t of the per-row theta transforms. The summation is
    collapsed over t first (S[j] = sum_i of fully weighted samples), so
    the theta phase factors are evaluated once per frequency instead of
    once per row; the reduction order is fixed, making the output
    reproducible bit for bit.
    """
    validate_params(p)
    if cg.t_nodes.size != g.times.size:
        raise GridMismatch(
            f"correlator grid has {cg.t_nodes.size} nodes, time grid has "
            f"{g.times.size}")
    last = cg.t_nodes.size - 1
    n_sub = cg.substeps_per_interval
    have_pulses = cg.n_pulses >= 1
    dt = cg.dt
    s1 = np.zeros(last + 1, dtype=complex)
    s2 = np.zeros(last + 1, dtype=complex)
    for i in range(last):
        length = last - i
        w_theta = np.full(length + 1, dt)
        w_theta[0] *= 0.5
        w_theta[-1] *= 0.5
        wt = dt * (0.5 if i == 0 else 1.0)
        pulse_node = have_pulses and i > 0 and i % n_sub == 0
        w_post = (0.5 * wt if pulse_node else wt) * w_theta
        s1[:length + 1] += w_post * _effective_row(
            cg.c1[i], cg.c1_before[i], i, n_sub, have_pulses)
        s2[:length + 1] += w_post * _effective_row(
            cg.c2[i], cg.c2_before[i], i, n_sub, have_pulses)
        if pulse_node:
            w_pre = 0.5 * wt * w_theta
            stored, before = cg.pre_c1[i]
            s1[:length + 1] += w_pre * _effective_row(
                stored, before, i, n_sub, have_pulses)
            stored, before = cg.pre_c2[i]
            s2[:length + 1] += w_pre * _effective_row(
                stored, before, i, n_sub, have_pulses)
    # row `last` has an empty theta range and a vanishing integral
    phases = np.exp(-1j * np.outer(cg.t_nodes, fg.omegas))
    raw_p1 = s1 @ phases
    raw_p2 = s2 @ phases
    scale = 2.0 * p.amp * p.amp
    p1 = scale * raw_p1.real
    p2 = scale * raw_p2.real
    return Spectrum(omegas=fg.omegas.copy(), p1=p1, p2=p2, q=p2 - p1,
                    raw_p1=raw_p1, raw_p2=raw_p2, raw_p3=None,
                    meta=build_meta(p, fg, "numeric", grid=g))


def numeric_spectrum(p: DriveParams, fg: FrequencyGrid | None = None,
                     substeps: int | None = None) -> Spectrum:
    """Convenience pipeline: trajectory, correlator grids, then assembly."""
    g = make_time_grid(p, substeps)
    traj = propagate_trajectory(p, g)
    cg = build_correlator_grids(p, g, traj)
    if fg is None:
        fg = make_frequency_grid(p)
    return compute_numeric_spectrum(p, g, cg, fg)
