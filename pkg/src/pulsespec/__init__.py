"""Absorption spectra of a periodically pulsed two-level emitter.

Two independent engines compute the weak-probe absorption spectrum of a
spontaneously decaying two-level system driven by a train of
instantaneous pi pulses: direct propagation of the master equation with
two-time correlators, and closed-form long-time expressions. The
analysis layer compares the two and extracts peak structure.
"""
from .core import (DEFAULT_AMP, DEFAULT_GAMMA, ConflictingFreeTime,
                   DriveParams, FrequencyGrid, GridMismatch,
                   MissingFreeTime, NonPositiveGamma, NonPositiveTau,
                   PulsespecError, Spectrum, TimeGrid, build_meta,
                   default_substeps, make_frequency_grid, make_time_grid,
                   validate_params)
from .lindblad import (AuxMatrix, DensityMatrix, NegativeDt, apply_pi_pulse,
                       free_evolve, propagate_trajectory)
from .correlators import (CorrelatorGrid, build_correlator_grids,
                          init_rho_double_prime, init_rho_prime)
from .spectrum_numeric import (EmptyRow, compute_numeric_spectrum,
                               fourier_over_theta, numeric_spectrum)
from .closed_form import (GammaTriple, NegativeM, NegativeTheta,
                          OddPulseCount, OutOfRangeT, TooFewPulses,
                          closed_spectrum, f_analytic, gammas, p1_closed,
                          p3_closed, rho0, rho_gg_analytic)
from .analysis import (ZeroSpectrum, compare_spectra, find_peaks,
                       lorentzian_reference, positive_weight_fraction,
                       shape_l2_diff)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_AMP", "DEFAULT_GAMMA", "ConflictingFreeTime", "DriveParams",
    "FrequencyGrid", "GridMismatch", "MissingFreeTime", "NonPositiveGamma",
    "NonPositiveTau", "PulsespecError", "Spectrum", "TimeGrid", "build_meta",
    "default_substeps", "make_frequency_grid", "make_time_grid",
    "validate_params",
    "AuxMatrix", "DensityMatrix", "NegativeDt", "apply_pi_pulse",
    "free_evolve", "propagate_trajectory",
    "CorrelatorGrid", "build_correlator_grids", "init_rho_double_prime",
    "init_rho_prime",
    "EmptyRow", "compute_numeric_spectrum", "fourier_over_theta",
    "numeric_spectrum",
    "GammaTriple", "NegativeM", "NegativeTheta", "OddPulseCount",
    "OutOfRangeT", "TooFewPulses", "closed_spectrum", "f_analytic", "gammas",
    "p1_closed", "p3_closed", "rho0", "rho_gg_analytic",
    "ZeroSpectrum", "compare_spectra", "find_peaks", "lorentzian_reference",
    "positive_weight_fraction", "shape_l2_diff",
    "__version__",
]
