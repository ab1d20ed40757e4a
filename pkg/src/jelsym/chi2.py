"""Chi-square distribution with one degree of freedom."""

import math

from scipy.optimize import brentq

from .exceptions import InputError


def chi2_sf(x):
    """``P(chi2_1 > x)``, computed as ``erfc(sqrt(x / 2))``."""
    x = float(x)
    if math.isnan(x) or x < 0:
        raise InputError(f"chi2_sf needs x >= 0, got {x}")
    if math.isinf(x):
        return 0.0
    return math.erfc(math.sqrt(0.5 * x))


def chi2_quantile(p):
    """Inverse CDF of chi2_1, by bracketed root finding on ``chi2_sf``."""
    p = float(p)
    if not 0.0 < p < 1.0:
        raise InputError(f"chi2_quantile needs 0 < p < 1, got {p}")
    target = 1.0 - p
    hi = 1.0
    while chi2_sf(hi) > target:
        hi *= 2.0
    return brentq(lambda x: chi2_sf(x) - target, 0.0, hi, xtol=1e-15, rtol=1e-15, maxiter=500)
