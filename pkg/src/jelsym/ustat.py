"""Degree-2 U-statistics with the two energy kernels and their jackknife.

The jackknife uses per-row kernel sums, so all leave-one-out statistics
of an ``m``-point sample cost ``O(m^2)`` in total.
"""

import enum
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from ._validation import check_sample
from .exceptions import InputError


class KernelMode(enum.Enum):
    """``PLUS`` is ``||s + t||``, ``MINUS`` is ``||s - t||``."""

    PLUS = "plus"
    MINUS = "minus"


@dataclass(frozen=True)
class PseudoValues:
    """Jackknife pseudo-values of one sub-sample and their U-statistic."""

    values: np.ndarray
    u_stat: float

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def m(self):
        return self.values.shape[0]

    def __len__(self):
        return self.m


@dataclass(frozen=True)
class VarianceEstimate:
    """Mean squared deviation ``s_j`` of pseudo-values around theta.

    ``sigma_g_sq`` is ``s_j / 4``, the matching estimate of the variance of
    the first-order projection of the kernel.
    """

    s_j: float
    sigma_g_sq: float


def _mode(mode):
    if isinstance(mode, KernelMode):
        return mode
    try:
        return KernelMode(str(mode).lower())
    except ValueError:
        raise InputError(f"unknown kernel mode {mode!r}") from None


def evaluate_kernel(s, t, mode):
    """Evaluate the energy kernel on a single pair of points."""
    s = np.atleast_1d(np.asarray(s, dtype=float))
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if s.shape != t.shape or s.ndim != 1:
        raise InputError(f"dimension mismatch: {s.shape} vs {t.shape}")
    if not (np.all(np.isfinite(s)) and np.all(np.isfinite(t))):
        raise InputError("kernel arguments must be finite")
    if _mode(mode) is KernelMode.PLUS:
        return float(np.linalg.norm(s + t))
    return float(np.linalg.norm(s - t))


def kernel_matrix(X, mode):
    """Full ``(n, n)`` matrix of kernel values with a zero diagonal."""
    X = check_sample(X)
    if _mode(mode) is KernelMode.PLUS:
        K = cdist(X, -X)
        np.fill_diagonal(K, 0.0)
    else:
        K = cdist(X, X)
    return K


def _row_sums(X, mode):
    K = kernel_matrix(X, mode)
    r = K.sum(axis=1)
    return r, 0.5 * r.sum()


def u_statistic(X, mode):
    """Average of the kernel over all unordered pairs of rows of ``X``."""
    X = check_sample(X)
    n = X.shape[0]
    if n < 2:
        raise InputError(f"U-statistic of degree 2 needs n >= 2, got {n}")
    K = kernel_matrix(X, mode)
    iu = np.triu_indices(n, k=1)
    return float(K[iu].sum() / (n * (n - 1) / 2))


def pseudo_values(X, mode):
    """Jackknife pseudo-values ``m U - (m - 1) U^(-i)`` for each row.

    Parameters
    ----------
    X : array-like, shape (m, d)
        Sub-sample; 1-D input is treated as ``d = 1``.
    mode : KernelMode or {"plus", "minus"}

    Returns
    -------
    PseudoValues
    """
    X = check_sample(X)
    m = X.shape[0]
    if m < 3:
        raise InputError(f"pseudo-values need at least 3 observations, got {m}")
    r, total = _row_sums(X, mode)
    u = total / (m * (m - 1) / 2)
    u_loo = (total - r) / ((m - 1) * (m - 2) / 2)
    values = m * u - (m - 1) * u_loo
    return PseudoValues(values=values, u_stat=float(u))


def variance_estimate(pv, theta):
    values = getattr(pv, "values", pv)
    values = np.asarray(values, dtype=float)
    theta = float(theta)
    if not np.isfinite(theta):
        raise InputError("theta must be finite")
    s_j = float(np.mean((values - theta) ** 2))
    return VarianceEstimate(s_j=s_j, sigma_g_sq=s_j / 4.0)
