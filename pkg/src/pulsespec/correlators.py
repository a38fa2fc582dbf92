"""Two-time correlator grids built by re-propagating auxiliary matrices.

For every grid time t the two correlators

    C1(t, theta) = <sigma_+(t + theta) sigma_-(t)>
    C2(t, theta) = <sigma_-(t) sigma_+(t + theta)>

are obtained by initializing an auxiliary matrix from the physical state
at t and marching it forward in theta with the same exact free map and
pulse swaps as the state itself; the recorded value is the ge element.
The theta range of row i is [0, T - t_i] (same spacing dt), so the rows
are ragged and shrink with t.

Population components of the auxiliary matrices never feed the ge/eg
pair under either the free map or the swap, so each row march tracks
only that pair. On the physical trajectory the initial eg component is
zero, which makes every row a pure two-term recurrence.

Stored values follow the post-pulse convention: when t + theta lands
exactly on a pulse instant the recorded value is the one immediately
after the swap. The correlators are discontinuous there, and a
trapezoidal rule sampling only one side of each jump loses an order of
accuracy, so the grid also carries the data for the other side:

 * c1_before / c2_before hold the pre-swap one-sided limits, equal to
   the stored arrays away from crossings;
 * pre_c1 / pre_c2 hold, for every interior pulse time t = n*tau, a
   companion row started from the pre-pulse physical state (its theta=0
   entry is recorded before the swap, the swap is applied immediately
   after).

Downstream quadrature averages the two one-sided limits at every jump.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .core import DriveParams, GridMismatch, TimeGrid, validate_params
from .lindblad import AuxMatrix, DensityMatrix, apply_pi_pulse


@dataclass
class CorrelatorGrid:
    """Ragged correlator values C(t_i, theta_j) plus jump bookkeeping.

    c1[i][j] and c2[i][j] are the stored (post-pulse convention) values at
    theta_j = j*dt for j = 0..n_nodes-1-i. See the module docstring for
    the *_before and pre_* companions.
    """

    t_nodes: np.ndarray
    c1: list[np.ndarray]
    c2: list[np.ndarray]
    c1_before: list[np.ndarray]
    c2_before: list[np.ndarray]
    pre_c1: dict[int, tuple[np.ndarray, np.ndarray]]
    pre_c2: dict[int, tuple[np.ndarray, np.ndarray]]
    dt: float
    substeps_per_interval: int
    n_pulses: int


def init_rho_prime(rho_t: DensityMatrix) -> AuxMatrix:
    """Seed matrix whose propagated ge element is C1(t, theta)."""
    return AuxMatrix(ee=0.0j, eg=0.0j, gg=rho_t.eg, ge=rho_t.ee)


def init_rho_double_prime(rho_t: DensityMatrix) -> AuxMatrix:
    """Seed matrix whose propagated ge element is C2(t, theta)."""
    return AuxMatrix(ee=rho_t.eg, eg=0.0j, gg=0.0j, ge=rho_t.gg)


def _march_ge_row(ge0: complex, eg0: complex, start: int, length: int,
                  n_sub: int, n_pulses: int, r_ge: complex,
                  initial_pulse: bool) -> tuple[np.ndarray, np.ndarray]:
    """March the (ge, eg) pair over `length` sub-steps from node `start`.

    Returns (stored, before): stored follows the post-pulse convention,
    before holds the pre-swap limit at crossing nodes and the same values
    elsewhere. Crossings sit at absolute node indices that are multiples
    of n_sub with pulse number in 1..n_pulses; with n_pulses = 0 the two
    arrays are one and the same object. initial_pulse applies a swap
    right after recording the theta = 0 value (pre-pulse companion rows).

    Between crossings both components are geometric in the one-step
    factor, so each segment is filled with one cumulative product instead
    of a scalar loop.
    """
    stored = np.empty(length + 1, dtype=complex)
    before = stored if n_pulses == 0 else np.empty(length + 1, dtype=complex)
    ge = complex(ge0)
    eg = complex(eg0)
    stored[0] = ge
    before[0] = ge
    if initial_pulse:
        ge, eg = eg, ge
    r_eg = r_ge.conjugate()
    j = 0
    while j < length:
        boundary = ((start + j) // n_sub + 1) * n_sub - start
        j_next = min(length, boundary)
        k = j_next - j
        seg_ge = ge * np.cumprod(np.full(k, r_ge))
        seg_eg = eg * np.cumprod(np.full(k, r_eg))
        stored[j + 1:j_next + 1] = seg_ge
        if before is not stored:
            before[j + 1:j_next + 1] = seg_ge
        ge = seg_ge[-1]
        eg = seg_eg[-1]
        if j_next == boundary and 1 <= (start + j_next) // n_sub <= n_pulses:
            before[j_next] = ge
            ge, eg = eg, ge
            stored[j_next] = ge
        j = j_next
    return stored, before


def build_correlator_grids(p: DriveParams, g: TimeGrid,
                           traj: list[DensityMatrix]) -> CorrelatorGrid:
    """Build C1 and C2 rows for every node of the trajectory.

    traj must come from propagate_trajectory on the same grid (post-pulse
    node convention). Rows are independent of each other; each one is
    re-seeded from traj[i] and marched over its own theta range.
    """
    validate_params(p)
    n_nodes = g.n_nodes
    if len(traj) != n_nodes:
        raise GridMismatch(
            f"trajectory has {len(traj)} nodes, grid has {n_nodes}")
    last = n_nodes - 1
    n_sub = g.substeps_per_interval
    r_ge = cmath.exp((1j * p.delta - 0.5 * p.gamma) * g.dt)
    c1, c2, c1_before, c2_before = [], [], [], []
    pre_c1: dict[int, tuple[np.ndarray, np.ndarray]] = {}
    pre_c2: dict[int, tuple[np.ndarray, np.ndarray]] = {}
    for i in range(n_nodes):
        length = last - i
        a1 = init_rho_prime(traj[i])
        a2 = init_rho_double_prime(traj[i])
        s, b = _march_ge_row(a1.ge, a1.eg, i, length, n_sub, p.n_pulses,
                             r_ge, False)
        c1.append(s)
        c1_before.append(b)
        s, b = _march_ge_row(a2.ge, a2.eg, i, length, n_sub, p.n_pulses,
                             r_ge, False)
        c2.append(s)
        c2_before.append(b)
        if p.n_pulses >= 1 and 0 < i < last and i % n_sub == 0:
            pre_rho = apply_pi_pulse(traj[i])
            a1p = init_rho_prime(pre_rho)
            a2p = init_rho_double_prime(pre_rho)
            pre_c1[i] = _march_ge_row(a1p.ge, a1p.eg, i, length, n_sub,
                                      p.n_pulses, r_ge, True)
            pre_c2[i] = _march_ge_row(a2p.ge, a2p.eg, i, length, n_sub,
                                      p.n_pulses, r_ge, True)
    return CorrelatorGrid(t_nodes=g.times, c1=c1, c2=c2,
                          c1_before=c1_before, c2_before=c2_before,
                          pre_c1=pre_c1, pre_c2=pre_c2, dt=g.dt,
                          substeps_per_interval=n_sub, n_pulses=p.n_pulses)
