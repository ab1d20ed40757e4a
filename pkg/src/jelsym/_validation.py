"""Input validation helpers built on :func:`sklearn.utils.check_array`."""

import numpy as np
from sklearn.utils import check_array

from .exceptions import InputError


def check_sample(X, min_samples=1, name="X"):
    """Return ``X`` as a C-contiguous float64 ``(n, d)`` array.

    1-D input is read as ``n`` univariate observations. NaN and inf are
    rejected.
    """
    arr = np.asarray(X)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    try:
        arr = check_array(
            arr,
            dtype=np.float64,
            order="C",
            copy=False,
            ensure_all_finite=True,
            ensure_min_samples=max(min_samples, 1),
            input_name=name,
        )
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    return arr


def check_vector(v, d, name="vector"):
    """Return ``v`` as a finite float vector of length ``d``."""
    arr = np.atleast_1d(np.asarray(v, dtype=float))
    if arr.ndim != 1 or arr.shape[0] != d:
        raise InputError(f"{name} must have length {d}, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InputError(f"{name} must be finite")
    return arr


def check_alpha(alpha):
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise InputError(f"alpha must lie in (0, 1), got {alpha}")
    return alpha


def as_values(pv):
    """Accept a :class:`PseudoValues` or any 1-D array-like of finite reals."""
    values = getattr(pv, "values", pv)
    arr = np.asarray(values, dtype=float).ravel()
    if arr.size == 0:
        raise InputError("empty pseudo-value vector")
    if not np.all(np.isfinite(arr)):
        raise InputError("pseudo-values must be finite")
    return arr
