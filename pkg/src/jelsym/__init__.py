"""Jackknife empirical likelihood test for diagonal symmetry."""

from .chi2 import chi2_quantile, chi2_sf
from .distributions import (
    CovSpec,
    Laplace,
    Logistic,
    Mixture,
    MultivariateT,
    Normal,
    cholesky,
    draw_sample,
    spec_from_dict,
)
from .energy import (
    EnergySymmetryTest,
    PermutationTestResult,
    energy_statistic,
    permutation_symmetry_test,
)
from .exceptions import (
    ConfigError,
    ConvergenceError,
    DegenerateDataError,
    InputError,
    InsufficientDataError,
    NonOverlapError,
)
from .jel import JelSolution, log_likelihood_ratio, profile_lambda, solve_system, theta_bracket
from ._rng import RngStream
from .study import StudyConfig, covariance_check, null_calibration, run_study
from .symmetry import (
    DiagonalSymmetryTest,
    SplitPolicy,
    TestConfig,
    TestResult,
    jel_symmetry_test,
)
from .ustat import KernelMode, pseudo_values, u_statistic

__version__ = "0.1.0"
