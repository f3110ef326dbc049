"""Stochastic logarithmic norms for linear Ito systems.

Tools for the one-sided growth rate nu_p^l of the l-th moment of
``dX = A X dt + sum_j B_j X dW_j``: two Monte Carlo estimators (a
white-noise formula and the limit definition as vanishing-step difference
quotients), closed-form upper and lower bounds, stability classifiers for
scalar and small structured systems, consistency checks (scaling law,
perturbed-spectrum inequality, deterministic limit), and an ensemble
Euler-Maruyama/Milstein simulator for moment trajectories with growth-rate
fits.  All Monte Carlo results are bit-reproducible for a given seed,
independent of worker count.
"""

from __future__ import annotations

from .matcore import (
    ComplexMatrix,
    DimensionError,
    EigenConvergenceError,
    MatrixLike,
    NonHermitianError,
    Spectrum,
    as_complex_matrix,
    check_p,
    hermitian_part,
    lambda_max_hermitian,
    lambda_max_hermitian_batch,
    matrix_norm,
    matrix_norm_batch,
    max_re_eigvals_batch,
    spectrum,
    vector_norm,
)
from .lognorm import mu, mu_batch, mu_limit_check, ols_intercept_weights
from .slognorm import (
    BOUND_APPLICABILITY,
    BoundsReport,
    McConfig,
    NuEstimate,
    PerturbedSpectrumCheck,
    ScalingCheck,
    SdeSystem,
    StabilityClass,
    bounds_report,
    classify,
    default_h_sequence,
    default_samples,
    expected_max_re_perturbed,
    iterated_integral_sampler,
    nu_definitional,
    nu_direct,
    scalar_stability,
    scaling_check,
    twobytwo_inf_ms_stable,
)
from .sdesim import (
    DIVERGENCE_THRESHOLD,
    MomentTrajectory,
    SimConfig,
    em_2x2_ms_stable,
    em_step,
    growth_rate,
    milstein_R,
    milstein_ms_stable,
    milstein_step,
    simulate_moments,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # core matrix layer
    "ComplexMatrix",
    "Spectrum",
    "MatrixLike",
    "DimensionError",
    "NonHermitianError",
    "EigenConvergenceError",
    "as_complex_matrix",
    "check_p",
    "hermitian_part",
    "lambda_max_hermitian",
    "lambda_max_hermitian_batch",
    "max_re_eigvals_batch",
    "spectrum",
    "matrix_norm",
    "matrix_norm_batch",
    "vector_norm",
    # classical logarithmic norm
    "mu",
    "mu_batch",
    "mu_limit_check",
    "ols_intercept_weights",
    # stochastic logarithmic norm
    "SdeSystem",
    "McConfig",
    "NuEstimate",
    "BoundsReport",
    "BOUND_APPLICABILITY",
    "StabilityClass",
    "PerturbedSpectrumCheck",
    "ScalingCheck",
    "default_samples",
    "default_h_sequence",
    "nu_direct",
    "nu_definitional",
    "iterated_integral_sampler",
    "bounds_report",
    "classify",
    "scalar_stability",
    "twobytwo_inf_ms_stable",
    "expected_max_re_perturbed",
    "scaling_check",
    # ensemble simulation
    "SimConfig",
    "MomentTrajectory",
    "DIVERGENCE_THRESHOLD",
    "em_step",
    "milstein_step",
    "simulate_moments",
    "growth_rate",
    "milstein_R",
    "milstein_ms_stable",
    "em_2x2_ms_stable",
]
